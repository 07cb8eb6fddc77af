// Application wiring: a sketch canvas on the left, search controls on
// the right, the ranked match strip and the polar comparison scatter
// below. All numbers rendered here are taken verbatim from service
// responses; the client only converts the sketch and draws.

import { ApiError, PatredClient } from './api.js';
import { capabilityWarning } from './capability.js';
import { midScatterSvg, previewSvg, thumbnailSvg } from './charts.js';
import { sketchToPattern } from './sketch.js';
import type {
  Match,
  MetricName,
  MidPoint,
  Point,
  RedundancyKindName,
  SearchRequestBody,
  SketchState,
} from './types.js';
import { ETA_CHOICES, METRICS, N_CHOICES, REDUNDANCY_KINDS } from './types.js';

export interface AppOptions {
  baseUrl: string;
  fetchFn?: (input: string, init?: RequestInit) => Promise<Response>;
}

export interface AppHandle {
  state: SketchState;
  client: PatredClient;
  root: HTMLElement;
  /** Resolves when the most recent search round trip settles. */
  lastSearch: Promise<void> | null;
  /** Replace the stroke programmatically (same path as pointer input). */
  setStroke(points: Point[]): void;
  lastResultId: number | null;
}

const CANVAS_WIDTH = 600;
const CANVAS_HEIGHT = 300;

function option(doc: Document, value: string, label?: string): HTMLOptionElement {
  const el = doc.createElement('option');
  el.value = value;
  el.textContent = label ?? value;
  return el;
}

function buildLayout(doc: Document, root: HTMLElement): void {
  root.innerHTML = `
    <div class="sketch-row">
      <div class="sketch-pane">
        <canvas id="sketch-pad" width="${CANVAS_WIDTH}" height="${CANVAS_HEIGHT}"></canvas>
        <div>
          <button id="clear-btn" type="button">Clear sketch</button>
          <span id="preview-status"></span>
        </div>
        <div id="preview"></div>
      </div>
      <div class="controls-pane">
        <label>Dataset CSV
          <textarea id="csv-input" rows="4" placeholder="t,value&#10;0,0.5&#10;..."></textarea>
        </label>
        <button id="upload-btn" type="button">Upload dataset</button>
        <span id="dataset-status">no dataset</span>
        <label>Metric <select id="metric"></select></label>
        <label>Redundancy <select id="kind"></select></label>
        <label>Added points N <select id="n-points"></select></label>
        <label>Noise width <select id="eta"></select></label>
        <label>Sketch points <input id="resample" type="number" min="2" value="7"></label>
        <label>Grid bins <input id="bins" type="number" min="2" value="16"></label>
        <label>Matches <input id="top-k" type="number" min="1" value="9"></label>
        <div id="capability-warning" class="warning" hidden></div>
        <button id="search-btn" type="button">Search</button>
        <div id="error" class="error" hidden></div>
      </div>
    </div>
    <div id="matches" class="match-strip"></div>
    <div id="mid" class="mid-pane"></div>
  `;
  const metricSelect = root.querySelector<HTMLSelectElement>('#metric')!;
  for (const m of METRICS) metricSelect.appendChild(option(doc, m));
  metricSelect.value = 'nmi';
  const kindSelect = root.querySelector<HTMLSelectElement>('#kind')!;
  for (const k of REDUNDANCY_KINDS) kindSelect.appendChild(option(doc, k));
  const nSelect = root.querySelector<HTMLSelectElement>('#n-points')!;
  for (const n of N_CHOICES) nSelect.appendChild(option(doc, String(n)));
  const etaSelect = root.querySelector<HTMLSelectElement>('#eta')!;
  for (const e of ETA_CHOICES) etaSelect.appendChild(option(doc, String(e)));
  etaSelect.value = '0.1';
}

export function mountApp(root: HTMLElement, options: AppOptions): AppHandle {
  const doc = root.ownerDocument;
  const client = new PatredClient(options.baseUrl, options.fetchFn);
  buildLayout(doc, root);

  const canvas = root.querySelector<HTMLCanvasElement>('#sketch-pad')!;
  const previewBox = root.querySelector<HTMLElement>('#preview')!;
  const previewStatus = root.querySelector<HTMLElement>('#preview-status')!;
  const csvInput = root.querySelector<HTMLTextAreaElement>('#csv-input')!;
  const uploadBtn = root.querySelector<HTMLButtonElement>('#upload-btn')!;
  const datasetStatus = root.querySelector<HTMLElement>('#dataset-status')!;
  const metricSelect = root.querySelector<HTMLSelectElement>('#metric')!;
  const kindSelect = root.querySelector<HTMLSelectElement>('#kind')!;
  const nSelect = root.querySelector<HTMLSelectElement>('#n-points')!;
  const etaSelect = root.querySelector<HTMLSelectElement>('#eta')!;
  const resampleInput = root.querySelector<HTMLInputElement>('#resample')!;
  const binsInput = root.querySelector<HTMLInputElement>('#bins')!;
  const topKInput = root.querySelector<HTMLInputElement>('#top-k')!;
  const warningBox = root.querySelector<HTMLElement>('#capability-warning')!;
  const searchBtn = root.querySelector<HTMLButtonElement>('#search-btn')!;
  const errorBox = root.querySelector<HTMLElement>('#error')!;
  const matchStrip = root.querySelector<HTMLElement>('#matches')!;
  const midPane = root.querySelector<HTMLElement>('#mid')!;

  const state: SketchState = {
    stroke: [],
    resampleCount: 7,
    preview: [],
    droppedSamples: 0,
    metric: 'nmi',
    redundancy: { kind: 'none', n_points: 0, copies: 3, shift: 0.05, eta: 0.1, seed: 0 },
    datasetId: null,
  };

  const handle: AppHandle = {
    state,
    client,
    root,
    lastSearch: null,
    lastResultId: null,
    setStroke(points: Point[]) {
      state.stroke = points.map((p) => ({ x: p.x, y: p.y }));
      refreshPreview();
    },
  };

  // --- sketch capture -----------------------------------------------------

  let drawing = false;

  function canvasPoint(event: MouseEvent): Point {
    const rect = canvas.getBoundingClientRect();
    const scaleX = rect.width ? canvas.width / rect.width : 1;
    const scaleY = rect.height ? canvas.height / rect.height : 1;
    return {
      x: (event.clientX - rect.left) * scaleX,
      y: (event.clientY - rect.top) * scaleY,
    };
  }

  let contextUnavailable = false;

  function context2d(): CanvasRenderingContext2D | null {
    if (contextUnavailable) return null;
    try {
      const ctx = canvas.getContext('2d');
      contextUnavailable = ctx === null;
      return ctx;
    } catch {
      contextUnavailable = true; // test environments have no raster backend
      return null;
    }
  }

  function redrawStroke(): void {
    const ctx = context2d();
    if (!ctx) return;
    ctx.clearRect(0, 0, canvas.width, canvas.height);
    if (state.stroke.length < 2) return;
    ctx.beginPath();
    ctx.strokeStyle = '#222';
    ctx.lineWidth = 2;
    ctx.lineJoin = 'round';
    const first = state.stroke[0]!;
    ctx.moveTo(first.x, first.y);
    for (const p of state.stroke.slice(1)) ctx.lineTo(p.x, p.y);
    ctx.stroke();
  }

  function refreshPreview(): void {
    state.resampleCount = Math.max(2, Number(resampleInput.value) || 7);
    previewBox.innerHTML = '';
    previewStatus.textContent = '';
    redrawStroke();
    if (state.stroke.length < 2) {
      state.preview = [];
      return;
    }
    try {
      const { pattern, dropped } = sketchToPattern(state.stroke, state.resampleCount);
      state.preview = pattern;
      state.droppedSamples = dropped;
      previewBox.appendChild(previewSvg(doc, pattern));
      previewStatus.textContent =
        dropped > 0 ? `dropped ${dropped} backtracking sample(s)` : '';
    } catch (err) {
      state.preview = [];
      previewStatus.textContent = String(err instanceof Error ? err.message : err);
    }
  }

  canvas.addEventListener('pointerdown', (event) => {
    drawing = true;
    state.stroke = [canvasPoint(event as MouseEvent)];
  });
  canvas.addEventListener('pointermove', (event) => {
    if (!drawing) return;
    state.stroke.push(canvasPoint(event as MouseEvent));
    redrawStroke();
  });
  const endStroke = () => {
    if (!drawing) return;
    drawing = false;
    refreshPreview();
  };
  canvas.addEventListener('pointerup', endStroke);
  canvas.addEventListener('pointerleave', endStroke);

  root.querySelector<HTMLButtonElement>('#clear-btn')!.addEventListener('click', () => {
    state.stroke = [];
    refreshPreview();
  });
  resampleInput.addEventListener('change', refreshPreview);

  // --- controls -----------------------------------------------------------

  function refreshWarning(): void {
    const warning = capabilityWarning(
      metricSelect.value as MetricName,
      kindSelect.value as RedundancyKindName,
    );
    if (warning) {
      warningBox.textContent = warning;
      warningBox.hidden = false;
    } else {
      warningBox.textContent = '';
      warningBox.hidden = true;
    }
  }
  metricSelect.addEventListener('change', refreshWarning);
  kindSelect.addEventListener('change', refreshWarning);

  uploadBtn.addEventListener('click', () => {
    errorBox.hidden = true;
    const upload = client
      .uploadDataset(csvInput.value)
      .then((created) => {
        state.datasetId = created.id;
        datasetStatus.textContent = `dataset ${created.id} (${created.length} values)`;
      })
      .catch((err) => showError(err));
    handle.lastSearch = upload;
  });

  function showError(err: unknown): void {
    const text = err instanceof ApiError ? err.detail : String(err);
    errorBox.textContent = text;
    errorBox.hidden = false;
  }

  // --- search round trip --------------------------------------------------

  function renderMatches(matches: Match[]): void {
    matchStrip.innerHTML = '';
    for (const match of matches) {
      const cell = doc.createElement('div');
      cell.className = 'thumb';
      cell.dataset.rank = String(match.rank);
      cell.dataset.start = String(match.start_index);
      cell.appendChild(thumbnailSvg(doc, match));
      matchStrip.appendChild(cell);
    }
  }

  function highlightRank(rank: number | null): void {
    for (const cell of Array.from(matchStrip.querySelectorAll<HTMLElement>('.thumb'))) {
      cell.classList.toggle('selected', cell.dataset.rank === String(rank));
    }
  }

  function renderMid(points: MidPoint[]): void {
    midPane.innerHTML = '';
    const { svg, circles } = midScatterSvg(doc, points);
    for (const circle of circles) {
      circle.addEventListener('click', () => {
        const label = circle.getAttribute('data-label') ?? '';
        const rankMatch = /^rank(\d+)$/.exec(label);
        highlightRank(rankMatch ? Number(rankMatch[1]) : null);
      });
    }
    midPane.appendChild(svg);
  }

  async function runSearch(): Promise<void> {
    errorBox.hidden = true;
    if (state.datasetId === null) {
      showError(new Error('upload a dataset first'));
      return;
    }
    if (state.preview.length < 2) {
      showError(new Error('sketch a pattern first'));
      return;
    }
    state.metric = metricSelect.value as MetricName;
    state.redundancy = {
      kind: kindSelect.value as RedundancyKindName,
      n_points: Number(nSelect.value),
      copies: 3,
      shift: 0.05,
      eta: Number(etaSelect.value),
      seed: 0,
    };
    const body: SearchRequestBody = {
      pattern_id: 0,
      dataset_id: state.datasetId,
      metric: state.metric,
      redundancy: state.redundancy,
      b: Math.max(2, Number(binsInput.value) || 16),
      stride: 1,
      top_k: Math.max(1, Number(topKInput.value) || 9),
    };
    searchBtn.disabled = true; // one in-flight search per session
    try {
      const created = await client.createPattern(state.preview);
      body.pattern_id = created.id;
      const result = await client.search(body);
      handle.lastResultId = result.result_id;
      renderMatches(result.matches);
      const mid = await client.mid(result.result_id);
      renderMid(mid.points);
    } catch (err) {
      showError(err);
    } finally {
      searchBtn.disabled = false;
    }
  }

  searchBtn.addEventListener('click', () => {
    if (searchBtn.disabled) return;
    handle.lastSearch = runSearch();
  });

  refreshWarning();
  return handle;
}
