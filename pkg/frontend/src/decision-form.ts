/** Review decision form with optimistic-concurrency handling.
 *
 * Submits the reviewer's action together with the version of the record they
 * looked at; a 409 from the service means someone else decided first, and the
 * form offers a refresh instead of silently overwriting. 422 messages from
 * the service (not-reviewable, failed re-verification) are shown verbatim.
 */

import { html, LitElement, nothing } from 'lit';

import { ApiClient, ApiError, ApiUnreachable } from './api.js';
import type { CertificationRecord, ReviewActionValue } from './types.js';

export class DecisionForm extends LitElement {
  static properties = {
    api: { attribute: false },
    record: { attribute: false },
    reviewable: { type: Boolean },
    action: { type: String, state: true },
    errorMessage: { type: String, state: true },
    conflict: { type: Boolean, state: true },
    submitting: { type: Boolean, state: true },
  };

  api!: ApiClient;
  record!: CertificationRecord;
  reviewable = false;
  action: ReviewActionValue = 'approve_unchanged';
  errorMessage = '';
  conflict = false;
  submitting = false;

  createRenderRoot() {
    return this;
  }

  private field<T extends HTMLElement>(role: string): T {
    return this.querySelector(`[data-role="${role}"]`) as T;
  }

  private collectEdits(): Record<string, unknown> {
    const edits: Record<string, unknown> = {};
    const stem = this.field<HTMLTextAreaElement>('edit-stem').value;
    if (stem !== this.record.item.stem) {
      edits['stem'] = stem;
    }
    const options = this.record.item.options.map(
      (_, i) => this.field<HTMLInputElement>(`edit-option-${i}`).value,
    );
    if (options.some((text, i) => text !== this.record.item.options[i])) {
      edits['options'] = options;
    }
    return edits;
  }

  private async submit(event: Event): Promise<void> {
    event.preventDefault();
    this.errorMessage = '';
    this.conflict = false;
    const pseudonym = this.field<HTMLInputElement>('pseudonym').value.trim();
    if (!pseudonym) {
      this.errorMessage = 'A reviewer pseudonym is required.';
      return;
    }
    const body = {
      action: this.action,
      reviewer_pseudonym: pseudonym,
      expected_version: this.record.version,
      notes: this.field<HTMLTextAreaElement>('notes').value,
      edits: this.action === 'approve_with_edits' ? this.collectEdits() : null,
    };
    this.submitting = true;
    try {
      const summary = await this.api.decide(this.record.item.id, body);
      this.dispatchEvent(
        new CustomEvent('decision-complete', { detail: summary, bubbles: true }),
      );
    } catch (err) {
      if (err instanceof ApiError && err.status === 409) {
        this.conflict = true;
      } else if (err instanceof ApiError && err.status === 401) {
        this.dispatchEvent(new CustomEvent('auth-required', { bubbles: true }));
      } else if (err instanceof ApiError) {
        this.errorMessage = err.message;
      } else if (err instanceof ApiUnreachable) {
        this.errorMessage = 'Review service unreachable; decision not submitted.';
      } else {
        this.errorMessage = String(err);
      }
    } finally {
      this.submitting = false;
    }
  }

  private requestRefresh(): void {
    this.dispatchEvent(new CustomEvent('refresh-requested', { bubbles: true }));
  }

  render() {
    if (!this.reviewable) {
      return html`<p class="muted" data-role="read-only">
        This record is finalized; it can only be reopened by an operator override.
      </p>`;
    }
    const actions: [ReviewActionValue, string][] = [
      ['approve_unchanged', 'Approve unchanged'],
      ['approve_with_edits', 'Approve with edits'],
      ['reject', 'Reject'],
    ];
    return html`
      <form class="decision-form" @submit=${(e: Event) => void this.submit(e)}>
        <fieldset ?disabled=${this.submitting}>
          <legend>Decision</legend>
          <div class="action-row">
            ${actions.map(
              ([value, label]) => html`
                <label>
                  <input
                    type="radio"
                    name="action"
                    value=${value}
                    .checked=${this.action === value}
                    @change=${() => {
                      this.action = value;
                    }}
                  />
                  ${label}
                </label>
              `,
            )}
          </div>
          ${this.action === 'approve_with_edits'
            ? html`
                <label class="block">
                  Stem
                  <textarea data-role="edit-stem" rows="3" .value=${this.record.item.stem}>
                  </textarea>
                </label>
                ${this.record.item.options.map(
                  (option, i) => html`
                    <label class="block">
                      Option ${i + 1}
                      <input data-role="edit-option-${i}" .value=${option} />
                    </label>
                  `,
                )}
              `
            : nothing}
          <label class="block">
            Notes
            <textarea data-role="notes" rows="2"></textarea>
          </label>
          <label class="block">
            Reviewer pseudonym
            <input data-role="pseudonym" placeholder="e.g. sme-07" />
          </label>
          <button type="submit" data-role="submit">Submit decision</button>
        </fieldset>
      </form>
      ${this.conflict
        ? html`
            <div class="banner banner-conflict" data-role="conflict">
              Another reviewer decided this item first. Refresh to see the
              current state, then review again if it is still queued.
              <button data-role="refresh" @click=${() => this.requestRefresh()}>
                Refresh item
              </button>
            </div>
          `
        : nothing}
      ${this.errorMessage
        ? html`<div class="banner banner-error" data-role="decision-error">
            ${this.errorMessage}
          </div>`
        : nothing}
    `;
  }
}

customElements.define('ic-decision-form', DecisionForm);

declare global {
  interface HTMLElementTagNameMap {
    'ic-decision-form': DecisionForm;
  }
}
