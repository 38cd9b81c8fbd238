/** Sign-in prompt for the API bearer token.
 *
 * The token is handed to the app via an event and held in memory only; it is
 * never written to local or session storage.
 */

import { html, LitElement, nothing } from 'lit';

export class TokenGate extends LitElement {
  static properties = {
    message: { type: String },
  };

  message = '';

  createRenderRoot() {
    return this;
  }

  private submit(event: Event): void {
    event.preventDefault();
    const input = this.querySelector<HTMLInputElement>('[data-role="token-input"]');
    const token = input?.value.trim() ?? '';
    if (token) {
      this.dispatchEvent(new CustomEvent('token-submitted', { detail: token, bubbles: true }));
    }
  }

  render() {
    return html`
      <form class="token-gate" data-role="token-gate" @submit=${(e: Event) => this.submit(e)}>
        <h2>Reviewer sign-in</h2>
        ${this.message
          ? html`<p class="banner banner-warn" data-role="gate-message">${this.message}</p>`
          : nothing}
        <label class="block">
          API token
          <input data-role="token-input" type="password" autocomplete="off" />
        </label>
        <button type="submit">Enter review queue</button>
        <p class="muted">The token stays in this tab's memory and is never stored.</p>
      </form>
    `;
  }
}

customElements.define('ic-token-gate', TokenGate);

declare global {
  interface HTMLElementTagNameMap {
    'ic-token-gate': TokenGate;
  }
}
