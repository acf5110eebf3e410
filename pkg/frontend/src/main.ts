/** Viewer wiring: file loading, parameter panels, sampling, export. */

import {ApiError, MeshSampleApi, type ResultFormat} from './api';
import {downloadName, saveBlob, FORMAT_MIME} from './download';
import {parseObj, parseStl, sniffFormat} from './mesh_parse';
import {ViewerScene} from './scene';
import {csvLineCount, ViewerState, type PanelTab} from './state';

const api = new MeshSampleApi('');
const state = new ViewerState();

const canvas = document.getElementById('viewport') as HTMLCanvasElement;
const scene = new ViewerScene(canvas);

const el = <T extends HTMLElement>(id: string): T => {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
};

const statusLine = el<HTMLDivElement>('status');
const errorBanner = el<HTMLDivElement>('error-banner');
const countLabel = el<HTMLDivElement>('count-label');
const sampleButton = el<HTMLButtonElement>('sample-button');
const exportButtons = ['csv', 'json', 'rawf64'].map((f) => el<HTMLButtonElement>(`export-${f}`));

function setError(message: string | null): void {
  errorBanner.textContent = message ?? '';
  errorBanner.style.display = message ? 'block' : 'none';
}

function setValidation(message: string | null): void {
  const node = el<HTMLDivElement>('validation');
  node.textContent = message ?? '';
  node.style.display = message ? 'block' : 'none';
}

function refreshControls(): void {
  sampleButton.disabled = state.busy || state.sessionId === null;
  for (const button of exportButtons) button.disabled = !state.hasResult || state.busy;
  countLabel.textContent =
    state.lastCount === null
      ? ''
      : `${state.lastCount} particles in ${Math.round(state.lastElapsedMs ?? 0)} ms`;
}

function numberInput(id: string, apply: (value: number) => void): void {
  const input = el<HTMLInputElement>(id);
  input.addEventListener('change', () => {
    apply(Number(input.value));
    setValidation(state.validateActive());
  });
}

function readPanelBindings(): void {
  numberInput('surface-min-dist', (v) => (state.surface.minDist = v));
  numberInput('surface-density', (v) => (state.surface.density = v));
  numberInput('surface-trials', (v) => (state.surface.trials = v));
  el<HTMLSelectElement>('surface-norm').addEventListener('change', (event) => {
    state.surface.norm = (event.target as HTMLSelectElement).value as 'euclidean' | 'geodesic';
  });

  numberInput('volume-radius', (v) => (state.volume.radius = v));
  numberInput('volume-sdf-resolution', (v) => (state.volume.sdfResolution = v));
  numberInput('volume-trials', (v) => (state.volume.trials = v));
  numberInput('volume-density', (v) => (state.volume.density = Number.isFinite(v) && v > 0 ? v : null));
  numberInput('volume-margin', (v) => (state.volume.margin = v));
  el<HTMLSelectElement>('volume-mode').addEventListener('change', (event) => {
    state.volume.mode = (event.target as HTMLSelectElement).value as 'grid' | 'random';
  });
  el<HTMLInputElement>('volume-invert').addEventListener('change', (event) => {
    state.volume.invert = (event.target as HTMLInputElement).checked;
  });

  el<HTMLInputElement>('normalize').addEventListener('change', (event) => {
    state.transform.normalize = (event.target as HTMLInputElement).checked;
  });
  numberInput('scale-x', (v) => (state.transform.scale[0] = v));
  numberInput('scale-y', (v) => (state.transform.scale[1] = v));
  numberInput('scale-z', (v) => (state.transform.scale[2] = v));
  numberInput('seed', (v) => (state.seed = Math.trunc(v)));
  numberInput('display-radius', (v) => {
    state.displayRadius = v;
    scene.setDisplayRadius(v); // rendering only, no request
  });
}

function activateTab(tab: PanelTab): void {
  state.activeTab = tab;
  el<HTMLDivElement>('panel-surface').style.display = tab === 'surface' ? 'block' : 'none';
  el<HTMLDivElement>('panel-volume').style.display = tab === 'volume' ? 'block' : 'none';
  el<HTMLButtonElement>('tab-surface').classList.toggle('active', tab === 'surface');
  el<HTMLButtonElement>('tab-volume').classList.toggle('active', tab === 'volume');
  setValidation(state.validateActive());
}

async function loadFile(file: File): Promise<void> {
  setError(null);
  const format = sniffFormat(file.name);
  if (!format) {
    setError(`cannot tell OBJ from STL by the name ${file.name}`);
    return;
  }
  const bytes = await file.arrayBuffer();
  try {
    const parsed = format === 'obj' ? parseObj(new TextDecoder().decode(bytes)) : parseStl(bytes);
    const summary = await api.uploadMesh(
      bytes,
      format === 'obj' ? 'model/obj' : 'model/stl',
    );
    state.resetSession(summary.sessionId);
    scene.clearParticles();
    scene.setMesh(parsed);
    statusLine.textContent =
      `${summary.triangleCount} triangles, area ${summary.surfaceArea.toFixed(2)}`;
  } catch (err) {
    setError(err instanceof Error ? err.message : String(err));
    return;
  }
  refreshControls();
}

async function requestSampling(): Promise<void> {
  const validation = state.validateActive();
  setValidation(validation);
  if (validation !== null) return; // no round trip on invalid parameters
  if (!state.beginSampling()) return;
  refreshControls();
  setError(null);
  try {
    const summary = await api.sample(state.currentRequest());
    const payload = await api.resultJson(state.sessionId!);
    scene.setParticles(payload.positions, state.displayRadius);
    state.finishSampling(summary.particleCount, summary.elapsedMs);
  } catch (err) {
    state.failSampling();
    if (err instanceof ApiError && (err.status === 422 || err.status === 409)) {
      setValidation(err.message);
    } else {
      setError(err instanceof Error ? err.message : String(err));
    }
  }
  refreshControls();
}

async function exportCurrent(format: ResultFormat): Promise<void> {
  if (!state.hasResult || state.sessionId === null) return;
  try {
    const bytes = await api.resultBytes(state.sessionId, format);
    if (format === 'csv') {
      // sanity displayed in the status line: data rows + header
      const lines = csvLineCount(new TextDecoder().decode(bytes));
      statusLine.textContent = `exported ${lines} CSV lines`;
    }
    saveBlob(bytes, downloadName('particles', format), FORMAT_MIME[format]);
  } catch (err) {
    setError(err instanceof Error ? err.message : String(err));
  }
}

function main(): void {
  readPanelBindings();
  activateTab('surface');
  el<HTMLButtonElement>('tab-surface').addEventListener('click', () => activateTab('surface'));
  el<HTMLButtonElement>('tab-volume').addEventListener('click', () => activateTab('volume'));
  el<HTMLInputElement>('mesh-file').addEventListener('change', (event) => {
    const file = (event.target as HTMLInputElement).files?.[0];
    if (file) void loadFile(file);
  });
  sampleButton.addEventListener('click', () => void requestSampling());
  for (const format of ['csv', 'json', 'rawf64'] as ResultFormat[]) {
    el<HTMLButtonElement>(`export-${format}`).addEventListener('click', () => void exportCurrent(format));
  }
  const resize = () => {
    const rect = canvas.parentElement!.getBoundingClientRect();
    scene.resize(rect.width, rect.height);
  };
  window.addEventListener('resize', resize);
  resize();
  refreshControls();
  scene.renderLoop();
}

main();
