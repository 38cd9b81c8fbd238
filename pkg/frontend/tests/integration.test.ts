/** End-to-end: the UI components against the real review service.
 *
 * Spawns the Python backend over a small simulated corpus and runs the same
 * queue round-trip as the fixture tests, so any drift between the fixture
 * contract and the real service fails here. Skips when the backend cannot be
 * spawned (no Python in the environment).
 */

import { spawn, spawnSync } from 'node:child_process';
import type { ChildProcess } from 'node:child_process';
import { mkdtempSync, writeFileSync } from 'node:fs';
import { createServer } from 'node:net';
import { tmpdir } from 'node:os';
import { join } from 'node:path';

import { afterAll, beforeAll, describe, expect, it } from 'vitest';

import '../src/queue-view.js';
import '../src/detail-view.js';
import type { DetailView } from '../src/detail-view.js';
import type { QueueView } from '../src/queue-view.js';
import type { DecisionForm } from '../src/decision-form.js';
import { ApiClient } from '../src/api.js';
import { cleanup, mount, settled, waitFor } from './helpers.js';

const TOKEN = 'integration-token';
let base = '';

const hasBackend = spawnSync('python3', ['-c', 'import itemcert'], {
  encoding: 'utf-8',
}).status === 0;

let server: ChildProcess | null = null;

function freePort(): Promise<number> {
  return new Promise((resolve, reject) => {
    const probe = createServer();
    probe.once('error', reject);
    probe.listen(0, '127.0.0.1', () => {
      const address = probe.address();
      if (address === null || typeof address === 'string') {
        reject(new Error('no port'));
        return;
      }
      probe.close(() => resolve(address.port));
    });
  });
}

async function waitForHealth(): Promise<void> {
  for (let attempt = 0; attempt < 60; attempt++) {
    try {
      const response = await fetch(`${base}/api/health`);
      if (response.ok) {
        return;
      }
    } catch {
      // not up yet
    }
    await new Promise((resolve) => setTimeout(resolve, 500));
  }
  throw new Error('backend did not become healthy');
}

function makeClient(): ApiClient {
  const client = new ApiClient(base);
  client.setToken(TOKEN);
  return client;
}

describe.skipIf(!hasBackend)('against the real backend', () => {
  beforeAll(async () => {
    const workDir = mkdtempSync(join(tmpdir(), 'icui-'));
    const profile = join(workDir, 'profile.yaml');
    writeFileSync(
      profile,
      JSON.stringify({
        name: 'ui-int',
        total: 12,
        confidence_band_counts: { high: 2, medium: 8, low: 2 },
        planted_incomplete_rationales_in_high: 0,
        planted_major_flags_in_medium: 0,
        seed: 21,
      }),
    );
    const simulate = spawnSync(
      'python3',
      ['-m', 'itemcert.cli', 'simulate', '--profile', profile, '--out', workDir,
       '--fixed-clock'],
      { encoding: 'utf-8' },
    );
    expect(simulate.status, simulate.stderr).toBe(0);

    const port = await freePort();
    base = `http://127.0.0.1:${port}`;
    server = spawn(
      'python3',
      ['-m', 'itemcert.cli', 'serve', '--addr', `127.0.0.1:${port}`,
       '--certs', join(workDir, 'certifications.jsonl')],
      { env: { ...process.env, REVIEW_API_TOKEN: TOKEN }, stdio: 'ignore' },
    );
    await waitForHealth();
  }, 60_000);

  afterAll(() => {
    server?.kill();
    cleanup();
  });

  it('runs the queue round-trip', async () => {
    const queue = document.createElement('ic-queue') as QueueView;
    queue.api = makeClient();
    mount(queue);
    const countBadge = await waitFor(queue, '[data-role="queue-count"]');
    expect(Number(countBadge.textContent?.trim())).toBe(8);
    const firstId = queue.querySelector('.queue-row')!.getAttribute('data-id')!;

    const detail = document.createElement('ic-detail') as DetailView;
    detail.api = makeClient();
    detail.setAttribute('item-id', firstId);
    mount(detail);
    await waitFor(detail, '[data-role="heatmap"]');
    expect(detail.querySelector('[data-role="trace"]')!.textContent).toContain(
      'moderate_confidence',
    );

    const form = detail.querySelector('ic-decision-form') as DecisionForm;
    await waitFor(form, '[data-role="submit"]');
    form.querySelector<HTMLInputElement>('[data-role="pseudonym"]')!.value = 'sme-int';
    let decided = false;
    form.addEventListener('decision-complete', () => {
      decided = true;
    });
    form.querySelector<HTMLButtonElement>('[data-role="submit"]')!.click();
    const deadline = Date.now() + 10_000;
    while (!decided && Date.now() < deadline) {
      await new Promise((resolve) => setTimeout(resolve, 25));
    }
    expect(decided).toBe(true);

    await queue.refresh();
    await settled(queue);
    const after = Number(
      queue.querySelector('[data-role="queue-count"]')?.textContent?.trim(),
    );
    expect(after).toBe(7);

    // A second submission with the stale version must surface the 409 prompt.
    const other = document.createElement('ic-detail') as DetailView;
    other.api = makeClient();
    const secondId = queue.querySelector('.queue-row')!.getAttribute('data-id')!;
    other.setAttribute('item-id', secondId);
    mount(other);
    await waitFor(other, 'ic-decision-form [data-role="submit"]');
    const otherForm = other.querySelector('ic-decision-form') as DecisionForm;
    // Concurrent reviewer wins first, out of band.
    const rival = makeClient();
    const pkg = await rival.item(secondId);
    await rival.decide(secondId, {
      action: 'approve_unchanged',
      reviewer_pseudonym: 'sme-rival',
      expected_version: pkg.record.version,
      notes: '',
      edits: null,
    });
    otherForm.querySelector<HTMLInputElement>('[data-role="pseudonym"]')!.value = 'sme-int';
    otherForm.querySelector<HTMLButtonElement>('[data-role="submit"]')!.click();
    await waitFor(otherForm, '[data-role="conflict"]');
  }, 30_000);
});
