/** Typed client for the review service.
 *
 * The bearer token lives in memory only (reviewer enters it each session);
 * it is never written to storage. All certification values shown in the UI
 * come straight from these payloads; nothing is recomputed client-side.
 */

import type {
  DecisionBody,
  ItemPackage,
  QueuePage,
  RecordSummary,
  SummaryReport,
} from './types.js';

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
  }
}

/** Network-level failure (service unreachable), distinct from HTTP errors. */
export class ApiUnreachable extends Error {}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  private token = '';

  constructor(
    readonly baseUrl: string = '',
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  setToken(token: string): void {
    this.token = token;
  }

  hasToken(): boolean {
    return this.token !== '';
  }

  clearToken(): void {
    this.token = '';
  }

  private async request<T>(path: string, init: RequestInit = {}): Promise<T> {
    const headers: Record<string, string> = {
      ...(init.headers as Record<string, string> | undefined),
    };
    if (this.token) {
      headers['Authorization'] = `Bearer ${this.token}`;
    }
    if (init.body) {
      headers['Content-Type'] = 'application/json';
    }
    let response: Response;
    try {
      response = await this.fetchFn(`${this.baseUrl}${path}`, { ...init, headers });
    } catch (err) {
      throw new ApiUnreachable(String(err));
    }
    if (!response.ok) {
      let code = 'error';
      let message = `HTTP ${response.status}`;
      try {
        const body = (await response.json()) as { code?: string; message?: string };
        code = body.code ?? code;
        message = body.message ?? message;
      } catch {
        // keep the generic message
      }
      throw new ApiError(response.status, code, message);
    }
    return (await response.json()) as T;
  }

  health(): Promise<{ status: string }> {
    return this.request('/api/health');
  }

  queue(status = 'yellow', page = 1, pageSize = 50): Promise<QueuePage> {
    return this.request(
      `/api/queue?status=${encodeURIComponent(status)}&page=${page}&page_size=${pageSize}`,
    );
  }

  item(id: string): Promise<ItemPackage> {
    return this.request(`/api/items/${encodeURIComponent(id)}`);
  }

  decide(id: string, body: DecisionBody): Promise<RecordSummary> {
    return this.request(`/api/items/${encodeURIComponent(id)}/decision`, {
      method: 'POST',
      body: JSON.stringify(body),
    });
  }

  summary(): Promise<SummaryReport> {
    return this.request('/api/reports/summary');
  }
}
