/** Full metadata package for one item.
 *
 * Everything shown here is read from the certificate payload: the token
 * heatmap uses the verifier's leave-one-out weights (normalized per item so
 * the strongest cue is always at full intensity), the checklist mirrors the
 * rubric components, and the trace is the decision engine's own rule list.
 */

import { html, LitElement, nothing } from 'lit';
import type { TemplateResult } from 'lit';

import { ApiClient, ApiError, ApiUnreachable } from './api.js';
import './decision-form.js';
import { optionLetter, percent, shortHash } from './format.js';
import { cellBackground, heatmapCells } from './heatmap.js';
import type { ItemPackage } from './types.js';

export class DetailView extends LitElement {
  static properties = {
    api: { attribute: false },
    itemId: { type: String, attribute: 'item-id' },
    pkg: { attribute: false, state: true },
    error: { type: String, state: true },
  };

  api!: ApiClient;
  itemId = '';
  pkg: ItemPackage | null = null;
  error = '';

  createRenderRoot() {
    return this;
  }

  connectedCallback(): void {
    super.connectedCallback();
    void this.load();
  }

  updated(changed: Map<string, unknown>): void {
    if (changed.has('itemId')) {
      void this.load();
    }
  }

  async load(): Promise<void> {
    if (!this.api || !this.itemId) {
      return;
    }
    this.error = '';
    this.pkg = null;
    try {
      this.pkg = await this.api.item(this.itemId);
    } catch (err) {
      if (err instanceof ApiError && err.status === 404) {
        this.error = 'not-found';
      } else if (err instanceof ApiError && err.status === 401) {
        this.dispatchEvent(new CustomEvent('auth-required', { bubbles: true }));
      } else if (err instanceof ApiUnreachable) {
        this.error = 'unreachable';
      } else {
        this.error = err instanceof Error ? err.message : String(err);
      }
    }
  }

  private renderHeatmap(pkg: ItemPackage): TemplateResult {
    const attribution = pkg.record.alignment.attribution;
    const cells = heatmapCells(attribution.tokens);
    return html`
      <div class="heatmap" data-role="heatmap">
        ${cells.map(
          (cell) => html`
            <span
              class="heatmap-token"
              data-token=${cell.token}
              data-intensity=${cell.intensity.toFixed(6)}
              style="background:${cellBackground(cell.intensity)}"
              title="${cell.token}: ${cell.weight.toExponential(3)}"
            >
              ${cell.token}
            </span>
          `,
        )}
      </div>
      <p>
        Verdict:
        <span class="badge badge-${attribution.verdict}" data-role="verdict">
          ${attribution.verdict}
        </span>
        <span class="muted">
          lexicon mass ${percent(attribution.lexicon_mass_ratio)}
        </span>
      </p>
    `;
  }

  private renderLevels(pkg: ItemPackage): TemplateResult {
    const { item, alignment } = pkg.record;
    const declared = item.declared_level;
    const predicted = alignment.predicted_level;
    return html`
      <div class="levels">
        <span>
          Declared: <strong>${declared.framework}:${declared.name}</strong>
        </span>
        <span>
          Predicted: <strong>${predicted.framework}:${predicted.name}</strong>
          (${percent(alignment.confidence)})
        </span>
      </div>
      ${alignment.agreement
        ? nothing
        : html`
            <div class="banner banner-warn" data-role="level-mismatch">
              The verifier disagrees with the declared level: declared
              ${declared.name}, predicted ${predicted.name}.
            </div>
          `}
    `;
  }

  private renderRationale(pkg: ItemPackage): TemplateResult {
    const report = pkg.record.alignment.rationale_report;
    return html`
      <h3>Rationale</h3>
      <blockquote class="rationale">${pkg.record.item.rationale || '(empty)'}</blockquote>
      <ul class="checklist" data-role="rubric">
        ${Object.entries(report.components).map(
          ([name, result]) => html`
            <li data-criterion=${name} data-satisfied=${result.satisfied}>
              <span class="${result.satisfied ? 'check-yes' : 'check-no'}">
                ${result.satisfied ? '✓' : '✗'}
              </span>
              ${name.replaceAll('_', ' ')}
              <span class="muted">(${result.weight})</span>
            </li>
          `,
        )}
      </ul>
      <p>
        Completeness ${report.score} —
        ${report.complete ? 'complete' : html`<strong>incomplete</strong>`}
      </p>
    `;
  }

  private renderOptionList(pkg: ItemPackage): TemplateResult {
    const item = pkg.record.item;
    return html`
      <ol class="options" type="A">
        ${item.options.map(
          (option, i) => html`
            <li data-keyed=${i === item.correct_index}>
              ${option}
              ${i === item.correct_index
                ? html`<span class="badge badge-key" data-role="keyed-answer">
                    keyed answer ${optionLetter(i)}
                  </span>`
                : nothing}
            </li>
          `,
        )}
      </ol>
    `;
  }

  private renderFlags(pkg: ItemPackage): TemplateResult {
    const flags = pkg.record.governance.flags;
    if (flags.length === 0) {
      return html`<p class="muted">No bias flags.</p>`;
    }
    return html`
      <ul class="flags" data-role="flags">
        ${flags.map(
          (flag) => html`
            <li>
              <span class="badge badge-${flag.severity}">${flag.severity}</span>
              <code>${flag.matched_term}</code> — ${flag.category} in ${flag.location}
            </li>
          `,
        )}
      </ul>
    `;
  }

  private renderProvenance(pkg: ItemPackage): TemplateResult {
    const provenance = pkg.record.provenance;
    return html`
      <dl class="provenance" data-role="provenance">
        <dt>Model</dt>
        <dd>${provenance.model_id} @ ${provenance.model_version}</dd>
        <dt>Generated</dt>
        <dd>${provenance.generated_at}</dd>
        <dt>Prompt hash</dt>
        <dd><code>${shortHash(provenance.prompt_hash)}</code></dd>
        <dt>Course context</dt>
        <dd>${provenance.course_context || '—'}</dd>
      </dl>
    `;
  }

  private renderTrace(pkg: ItemPackage): TemplateResult {
    return html`
      <ol class="trace" data-role="trace">
        ${pkg.record.decision_trace.map(
          (ruleId) => html`
            <li>
              <code>${ruleId}</code>
              <span class="muted">${pkg.rule_catalogue[ruleId] ?? ''}</span>
            </li>
          `,
        )}
      </ol>
    `;
  }

  render() {
    if (this.error === 'not-found') {
      return html`<p class="banner banner-error" data-role="not-found">
        No record exists for <code>${this.itemId}</code>.
      </p>`;
    }
    if (this.error === 'unreachable') {
      return html`
        <div class="banner banner-error">
          Review service unreachable.
          <button @click=${() => void this.load()}>Retry</button>
        </div>
      `;
    }
    if (this.error) {
      return html`<p class="banner banner-error">${this.error}</p>`;
    }
    const pkg = this.pkg;
    if (!pkg) {
      return html`<p class="muted">Loading item…</p>`;
    }
    return html`
      <article class="detail">
        <header>
          <h2>
            <code>${pkg.record.item.id}</code>
            <span class="badge badge-${pkg.record.label}">${pkg.record.label}</span>
            <span class="muted">${pkg.record.status}</span>
          </h2>
          <p class="stem" data-role="stem">${pkg.record.item.stem}</p>
        </header>
        ${this.renderLevels(pkg)}
        <h3>Token attribution</h3>
        ${this.renderHeatmap(pkg)}
        <h3>Options</h3>
        ${this.renderOptionList(pkg)}
        ${this.renderRationale(pkg)}
        <h3>Governance</h3>
        ${this.renderFlags(pkg)}
        <h3>Provenance</h3>
        ${this.renderProvenance(pkg)}
        <h3>Decision trace</h3>
        ${this.renderTrace(pkg)}
        <h3>Review</h3>
        <ic-decision-form
          .api=${this.api}
          .record=${pkg.record}
          .reviewable=${pkg.reviewable}
          @refresh-requested=${() => void this.load()}
        ></ic-decision-form>
      </article>
    `;
  }
}

customElements.define('ic-detail', DetailView);

declare global {
  interface HTMLElementTagNameMap {
    'ic-detail': DetailView;
  }
}
