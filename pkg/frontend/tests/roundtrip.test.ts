// End-to-end round trip against a real service process: sketch a
// 7-point falling wedge with pointer events, upload the fixture series
// (which has that wedge planted at index 24), run a search, and check
// that the DOM shows exactly what the service ranked.

import { spawn, type ChildProcess } from 'node:child_process';
import { mkdtempSync, readFileSync } from 'node:fs';
import { tmpdir } from 'node:os';
import { join } from 'node:path';
import { afterAll, beforeAll, describe, expect, it } from 'vitest';
import { mountApp, type AppHandle } from '../src/app.js';
import type { MidResponse, SearchResponse } from '../src/types.js';

const PORT = 20000 + Math.floor(Math.random() * 20000);
const BASE = `http://127.0.0.1:${PORT}`;
// vitest runs with the package directory as cwd
const FIXTURE = join(process.cwd(), 'fixtures', 'planted_walk.csv');
const PLANTED_START = 24; // where the fixture generator embedded the wedge
const TOP_K = 5;

let server: ChildProcess;

async function waitForServer(timeoutMs = 20_000): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  let lastError: unknown = null;
  while (Date.now() < deadline) {
    try {
      const response = await fetch(`${BASE}/openapi.json`);
      if (response.ok) return;
    } catch (err) {
      lastError = err;
    }
    await new Promise((resolve) => setTimeout(resolve, 150));
  }
  throw new Error(`service did not come up on ${BASE}: ${lastError}`);
}

beforeAll(async () => {
  const dataDir = mkdtempSync(join(tmpdir(), 'patred-ui-'));
  server = spawn('patred', ['serve', '--port', String(PORT), '--data-dir', dataDir], {
    stdio: 'ignore',
  });
  await waitForServer();
});

afterAll(async () => {
  if (!server) return;
  server.kill('SIGTERM');
  await new Promise<void>((resolve) => {
    const fallback = setTimeout(() => {
      server.kill('SIGKILL');
      resolve();
    }, 3000);
    server.on('exit', () => {
      clearTimeout(fallback);
      resolve();
    });
  });
});

// The wedge vertices sit at uniform canvas x, so a 7-point resample of
// the drawn stroke lands exactly on them.
const WEDGE_HEIGHTS = [1.0, 0.25, 0.78, 0.2, 0.6, 0.16, 0.45];

function drawFallingWedge(canvas: HTMLCanvasElement): void {
  const vertices = WEDGE_HEIGHTS.map((h, i) => ({
    x: i * 100,
    y: Math.round((1 - h) * 300),
  }));
  const samples: { x: number; y: number }[] = [];
  for (let i = 0; i < vertices.length; i++) {
    const v = vertices[i]!;
    samples.push(v);
    const next = vertices[i + 1];
    if (!next) break;
    for (const t of [0.25, 0.5, 0.75]) {
      samples.push({
        x: Math.round(v.x + (next.x - v.x) * t),
        y: Math.round(v.y + (next.y - v.y) * t),
      });
    }
  }
  const event = (type: string, p: { x: number; y: number }) =>
    new MouseEvent(type, { clientX: p.x, clientY: p.y, bubbles: true });
  canvas.dispatchEvent(event('pointerdown', samples[0]!));
  for (const p of samples.slice(1)) {
    canvas.dispatchEvent(event('pointermove', p));
  }
  canvas.dispatchEvent(event('pointerup', samples[samples.length - 1]!));
}

describe('sketch round trip', () => {
  let root: HTMLElement;
  let handle: AppHandle;

  it('searches the planted fixture and mirrors the service ranking', async () => {
    document.body.innerHTML = '<div id="app"></div>';
    root = document.getElementById('app')!;
    handle = mountApp(root, { baseUrl: BASE });

    // Upload the fixture dataset through the UI.
    (root.querySelector('#csv-input') as HTMLTextAreaElement).value =
      readFileSync(FIXTURE, 'utf8');
    (root.querySelector('#upload-btn') as HTMLButtonElement).click();
    await handle.lastSearch;
    expect(handle.state.datasetId).not.toBeNull();
    expect(root.querySelector('#dataset-status')!.textContent).toContain('300 values');

    // Sketch the falling wedge and confirm the preview is the 7-point
    // normalized pattern that will be submitted.
    drawFallingWedge(root.querySelector('#sketch-pad') as HTMLCanvasElement);
    expect(handle.state.preview).toHaveLength(7);
    expect(handle.state.preview[0]!.y).toBeCloseTo(1, 6);
    expect(handle.state.preview[5]!.y).toBeCloseTo(0, 6);

    // Controls: grouping metric with heavy equidistant redundancy.
    const kind = root.querySelector('#kind') as HTMLSelectElement;
    kind.value = 'equidistant';
    kind.dispatchEvent(new Event('change', { bubbles: true }));
    const n = root.querySelector('#n-points') as HTMLSelectElement;
    n.value = '100';
    (root.querySelector('#top-k') as HTMLInputElement).value = String(TOP_K);

    (root.querySelector('#search-btn') as HTMLButtonElement).click();
    await handle.lastSearch;
    expect((root.querySelector('#error') as HTMLElement).hidden).toBe(true);
    expect(handle.lastResultId).not.toBeNull();

    // Independent read-back through the API: the stored result is the
    // single source of truth the DOM must agree with.
    const stored = (await (
      await fetch(`${BASE}/results/${handle.lastResultId}`)
    ).json()) as SearchResponse;
    expect(stored.matches).toHaveLength(TOP_K);
    const rank1 = stored.matches[0]!;
    expect(rank1.rank).toBe(1);

    const thumbs = Array.from(root.querySelectorAll<HTMLElement>('#matches .thumb'));
    expect(thumbs).toHaveLength(TOP_K);
    expect(thumbs[0]!.dataset.rank).toBe('1');
    expect(thumbs[0]!.dataset.start).toBe(String(rank1.start_index));
    expect(thumbs[0]!.textContent).toContain(`d=${rank1.distance.toFixed(4)}`);

    // The top match is the planted window (give or take one sample).
    expect(Math.abs(rank1.start_index - PLANTED_START)).toBeLessThanOrEqual(1);

    // Scatter: one reference plus one point per match, reference on the
    // horizontal axis.
    const circles = Array.from(root.querySelectorAll<SVGCircleElement>('#mid circle'));
    expect(circles).toHaveLength(TOP_K + 1);
    expect(circles[0]!.getAttribute('data-label')).toBe('P_o');
    expect(Number(circles[0]!.getAttribute('data-angle'))).toBe(0);
    expect(circles.slice(1).map((c) => c.getAttribute('data-label'))).toEqual(
      ['rank1', 'rank2', 'rank3', 'rank4', 'rank5'],
    );

    const mid = (await (
      await fetch(`${BASE}/results/${handle.lastResultId}/mid`)
    ).json()) as MidResponse;
    expect(mid.points).toHaveLength(TOP_K + 1);
    expect(mid.points[0]!.label).toBe('P_o');
    expect(mid.points[0]!.angle).toBe(0);

    // Clicking the rank-2 scatter point highlights the rank-2 thumbnail.
    circles[2]!.dispatchEvent(new MouseEvent('click'));
    const selected = root.querySelector<HTMLElement>('#matches .thumb.selected');
    expect(selected?.dataset.rank).toBe('2');
  });

  it('rejects pearson + arealine with the service explanation', async () => {
    // Reuses the mounted app from the previous test: same dataset and
    // sketch, incompatible metric/redundancy pick.
    const metric = root.querySelector('#metric') as HTMLSelectElement;
    metric.value = 'pearson';
    metric.dispatchEvent(new Event('change', { bubbles: true }));
    const kind = root.querySelector('#kind') as HTMLSelectElement;
    kind.value = 'arealine';
    kind.dispatchEvent(new Event('change', { bubbles: true }));

    // The client-side mirror warns before submission...
    const warning = root.querySelector('#capability-warning') as HTMLElement;
    expect(warning.hidden).toBe(false);

    // ...and the server answer lands verbatim in the error box.
    (root.querySelector('#search-btn') as HTMLButtonElement).click();
    await handle.lastSearch;
    const errorBox = root.querySelector('#error') as HTMLElement;
    expect(errorBox.hidden).toBe(false);
    expect(errorBox.textContent).toContain('same number of data points');
    expect(errorBox.textContent).toContain('same pairing order');
  });
});
