/** Paged table of records pending review. */

import { html, LitElement, nothing } from 'lit';
import type { TemplateResult } from 'lit';

import { ApiClient, ApiError, ApiUnreachable } from './api.js';
import { percent } from './format.js';
import type { QueuePage, RecordSummary } from './types.js';

export class QueueView extends LitElement {
  static properties = {
    api: { attribute: false },
    statusFilter: { type: String },
    page: { type: Number, state: true },
    data: { attribute: false, state: true },
    error: { type: String, state: true },
    loading: { type: Boolean, state: true },
  };

  api!: ApiClient;
  statusFilter = 'yellow';
  page = 1;
  pageSize = 50;
  data: QueuePage | null = null;
  error = '';
  loading = false;

  createRenderRoot() {
    return this; // light DOM: one page-level stylesheet, queryable in tests
  }

  connectedCallback(): void {
    super.connectedCallback();
    void this.refresh();
  }

  async refresh(): Promise<void> {
    if (!this.api) {
      return;
    }
    this.loading = true;
    this.error = '';
    try {
      this.data = await this.api.queue(this.statusFilter, this.page, this.pageSize);
      // A deletion on the last page can leave it empty; step back if so.
      if (this.data.items.length === 0 && this.page > 1) {
        this.page = Math.min(this.page - 1, this.data.pages);
        this.data = await this.api.queue(this.statusFilter, this.page, this.pageSize);
      }
    } catch (err) {
      if (err instanceof ApiError && err.status === 401) {
        this.dispatchEvent(new CustomEvent('auth-required', { bubbles: true }));
      } else if (err instanceof ApiUnreachable) {
        this.error = 'unreachable';
      } else {
        this.error = err instanceof Error ? err.message : String(err);
      }
    } finally {
      this.loading = false;
    }
  }

  private select(summary: RecordSummary): void {
    this.dispatchEvent(
      new CustomEvent('item-selected', { detail: summary.id, bubbles: true }),
    );
  }

  private turnPage(delta: number): void {
    const pages = this.data?.pages ?? 1;
    this.page = Math.min(Math.max(1, this.page + delta), pages);
    void this.refresh();
  }

  private renderRows(items: RecordSummary[]): TemplateResult[] {
    return items.map(
      (summary) => html`
        <tr class="queue-row" data-id=${summary.id} @click=${() => this.select(summary)}>
          <td><code>${summary.id}</code></td>
          <td>${summary.topic}</td>
          <td class="num">${percent(summary.confidence)}</td>
          <td class="num">${summary.flag_count || ''}</td>
          <td>${summary.created_at}</td>
        </tr>
      `,
    );
  }

  render() {
    if (this.error === 'unreachable') {
      return html`
        <div class="banner banner-error" data-role="unreachable">
          Review service unreachable.
          <button @click=${() => void this.refresh()}>Retry</button>
        </div>
      `;
    }
    const data = this.data;
    if (!data) {
      return html`<p class="muted">Loading queue…</p>`;
    }
    return html`
      <header class="queue-header">
        <h2>
          Review queue
          <span class="badge badge-count" data-role="queue-count">${data.total}</span>
        </h2>
        ${this.loading ? html`<span class="muted">refreshing…</span>` : nothing}
      </header>
      ${data.total === 0
        ? html`<p class="empty-state" data-role="empty">
            Nothing waiting for review. New yellow items will appear here.
          </p>`
        : html`
            <table class="queue-table">
              <thead>
                <tr>
                  <th>Item</th>
                  <th>Topic</th>
                  <th>Confidence</th>
                  <th>Flags</th>
                  <th>Created</th>
                </tr>
              </thead>
              <tbody>
                ${this.renderRows(data.items)}
              </tbody>
            </table>
            <footer class="pager">
              <button
                data-role="prev"
                ?disabled=${data.page <= 1}
                @click=${() => this.turnPage(-1)}
              >
                Previous
              </button>
              <span>page ${data.page} / ${data.pages}</span>
              <button
                data-role="next"
                ?disabled=${data.page >= data.pages}
                @click=${() => this.turnPage(1)}
              >
                Next
              </button>
            </footer>
          `}
    `;
  }
}

customElements.define('ic-queue', QueueView);

declare global {
  interface HTMLElementTagNameMap {
    'ic-queue': QueueView;
  }
}
