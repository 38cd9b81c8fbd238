/** Root shell: token gate, dashboard, queue and detail panes.
 *
 * State changes in the UI mirror successful API calls one-to-one; the shell
 * polls the queue and summary (default every 30 s) instead of holding a push
 * connection.
 */

import { html, LitElement, nothing } from 'lit';

import { ApiClient } from './api.js';
import './dashboard.js';
import type { Dashboard } from './dashboard.js';
import './detail-view.js';
import './queue-view.js';
import type { QueueView } from './queue-view.js';
import './token-gate.js';
import type { RecordSummary } from './types.js';

export class ReviewApp extends LitElement {
  static properties = {
    api: { attribute: false },
    apiBase: { type: String, attribute: 'api-base' },
    pollIntervalMs: { type: Number, attribute: 'poll-interval-ms' },
    authenticated: { type: Boolean, state: true },
    gateMessage: { type: String, state: true },
    selectedId: { type: String, state: true },
    toast: { type: String, state: true },
  };

  api: ApiClient = new ApiClient();
  apiBase = '';
  pollIntervalMs = 30_000;
  authenticated = false;
  gateMessage = '';
  selectedId = '';
  toast = '';

  private pollTimer: ReturnType<typeof setInterval> | null = null;
  private toastTimer: ReturnType<typeof setTimeout> | null = null;

  createRenderRoot() {
    return this;
  }

  connectedCallback(): void {
    super.connectedCallback();
    if (this.apiBase && this.api.baseUrl !== this.apiBase) {
      this.api = new ApiClient(this.apiBase);
    }
  }

  disconnectedCallback(): void {
    super.disconnectedCallback();
    this.stopPolling();
  }

  private startPolling(): void {
    this.stopPolling();
    if (this.pollIntervalMs > 0) {
      this.pollTimer = setInterval(() => this.refreshPanes(), this.pollIntervalMs);
    }
  }

  private stopPolling(): void {
    if (this.pollTimer !== null) {
      clearInterval(this.pollTimer);
      this.pollTimer = null;
    }
  }

  private refreshPanes(): void {
    void this.querySelector<QueueView>('ic-queue')?.refresh();
    void this.querySelector<Dashboard>('ic-dashboard')?.refresh();
  }

  private onToken(event: CustomEvent<string>): void {
    this.api.setToken(event.detail);
    this.authenticated = true;
    this.gateMessage = '';
    this.startPolling();
  }

  private onAuthRequired(): void {
    this.api.clearToken();
    this.authenticated = false;
    this.gateMessage = 'The token was rejected or has expired. Enter it again to continue.';
    this.selectedId = '';
    this.stopPolling();
  }

  private onItemSelected(event: CustomEvent<string>): void {
    this.selectedId = event.detail;
  }

  private showToast(message: string): void {
    this.toast = message;
    if (this.toastTimer !== null) {
      clearTimeout(this.toastTimer);
    }
    this.toastTimer = setTimeout(() => {
      this.toast = '';
    }, 4000);
  }

  private onDecisionComplete(event: CustomEvent<RecordSummary>): void {
    const summary = event.detail;
    this.showToast(`Recorded ${summary.status} for ${summary.id}.`);
    this.selectedId = '';
    this.refreshPanes();
  }

  render() {
    if (!this.authenticated) {
      return html`
        <ic-token-gate
          .message=${this.gateMessage}
          @token-submitted=${(e: CustomEvent<string>) => this.onToken(e)}
        ></ic-token-gate>
      `;
    }
    return html`
      <div
        class="app"
        @auth-required=${() => this.onAuthRequired()}
        @item-selected=${(e: CustomEvent<string>) => this.onItemSelected(e)}
        @decision-complete=${(e: CustomEvent<RecordSummary>) => this.onDecisionComplete(e)}
      >
        ${this.toast
          ? html`<div class="toast" data-role="toast">${this.toast}</div>`
          : nothing}
        <ic-dashboard .api=${this.api}></ic-dashboard>
        <main class="panes">
          <section class="pane pane-queue">
            <ic-queue .api=${this.api}></ic-queue>
          </section>
          <section class="pane pane-detail">
            ${this.selectedId
              ? html`<ic-detail .api=${this.api} item-id=${this.selectedId}></ic-detail>`
              : html`<p class="muted" data-role="no-selection">
                  Select an item from the queue to review its certificate.
                </p>`}
          </section>
        </main>
      </div>
    `;
  }
}

customElements.define('ic-app', ReviewApp);

declare global {
  interface HTMLElementTagNameMap {
    'ic-app': ReviewApp;
  }
}
