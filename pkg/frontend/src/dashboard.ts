/** Triage-summary dashboard fed by the aggregate report endpoint. */

import { html, LitElement } from 'lit';

import { ApiClient, ApiError, ApiUnreachable } from './api.js';
import type { SummaryReport } from './types.js';

export class Dashboard extends LitElement {
  static properties = {
    api: { attribute: false },
    report: { attribute: false, state: true },
    error: { type: String, state: true },
  };

  api!: ApiClient;
  report: SummaryReport | null = null;
  error = '';

  createRenderRoot() {
    return this;
  }

  connectedCallback(): void {
    super.connectedCallback();
    void this.refresh();
  }

  async refresh(): Promise<void> {
    if (!this.api) {
      return;
    }
    try {
      this.report = await this.api.summary();
      this.error = '';
    } catch (err) {
      if (err instanceof ApiError && err.status === 401) {
        this.dispatchEvent(new CustomEvent('auth-required', { bubbles: true }));
      } else if (err instanceof ApiUnreachable) {
        this.error = 'unreachable';
      } else {
        this.error = err instanceof Error ? err.message : String(err);
      }
    }
  }

  render() {
    if (this.error) {
      return html`<p class="muted">Summary unavailable.</p>`;
    }
    const report = this.report;
    if (!report) {
      return html`<p class="muted">Loading summary…</p>`;
    }
    const counts = report.triage_counts;
    const reviews = report.review_summary;
    return html`
      <div class="dashboard" data-role="dashboard">
        <div class="stat stat-green" data-role="count-green">
          <strong>${counts.green}</strong><span>auto-certified</span>
        </div>
        <div class="stat stat-yellow" data-role="count-yellow">
          <strong>${counts.yellow}</strong><span>review required</span>
        </div>
        <div class="stat stat-red" data-role="count-red">
          <strong>${counts.red}</strong><span>rejected</span>
        </div>
        <div class="stat">
          <strong>${reviews.approve_unchanged + reviews.approve_with_edits + reviews.reject}</strong>
          <span>reviews recorded</span>
        </div>
      </div>
    `;
  }
}

customElements.define('ic-dashboard', Dashboard);

declare global {
  interface HTMLElementTagNameMap {
    'ic-dashboard': Dashboard;
  }
}
