import { ApiClient } from '../src/api.js';
import { FIXTURE_TOKEN, FixtureServer } from './fixture-server.js';

export function makeClient(server: FixtureServer): ApiClient {
  const client = new ApiClient('', server.fetch);
  client.setToken(FIXTURE_TOKEN);
  return client;
}

/** Wait for a lit element (and its lit children) to settle. */
export async function settled(element: Element): Promise<void> {
  const anyElement = element as unknown as { updateComplete?: Promise<unknown> };
  await anyElement.updateComplete;
  // One macrotask so async loads kicked off in connectedCallback resolve.
  await new Promise((resolve) => setTimeout(resolve, 0));
  await anyElement.updateComplete;
  await new Promise((resolve) => setTimeout(resolve, 0));
  await anyElement.updateComplete;
}

export function mount<T extends HTMLElement>(element: T): T {
  document.body.appendChild(element);
  return element;
}

/** Poll until a selector matches (real-network loads outlast microtasks). */
export async function waitFor(
  root: Element,
  selector: string,
  timeoutMs = 10_000,
): Promise<Element> {
  const deadline = Date.now() + timeoutMs;
  for (;;) {
    const found = root.querySelector(selector);
    if (found) {
      return found;
    }
    if (Date.now() > deadline) {
      throw new Error(`timed out waiting for ${selector}`);
    }
    await new Promise((resolve) => setTimeout(resolve, 25));
  }
}

export function cleanup(): void {
  document.body.innerHTML = '';
}
