// Browser bootstrap: wires the parameter controls, the three views and
// the API client together. Everything rendered comes from service
// payloads; this file only moves them around.

import { ApiClient } from './api.js';
import { renderCompare } from './compare.js';
import { renderGuidance } from './guidance.js';
import { renderSolution } from './solution.js';
import { DEBOUNCE_MS, ExplorerState } from './state.js';
import { mount } from './vdom.js';

const SERVICE = (window as { SUMMIT_SERVICE_URL?: string }).SUMMIT_SERVICE_URL
  ?? 'http://127.0.0.1:8765';

function clientToken(): string {
  const key = 'summit-client-token';
  let token = localStorage.getItem(key);
  if (!token) {
    token = Math.random().toString(36).slice(2);
    localStorage.setItem(key, token);
  }
  return token;
}

function intInput(id: string): HTMLInputElement {
  return document.getElementById(id) as HTMLInputElement;
}

async function boot(): Promise<void> {
  const api = new ApiClient(SERVICE, clientToken());
  const meta = await api.meta();

  const guidanceEl = document.getElementById('guidance')!;
  const solutionEl = document.getElementById('solution')!;
  const compareEl = document.getElementById('compare')!;
  const statusEl = document.getElementById('status')!;

  const kInput = intInput('param-k');
  const lInput = intInput('param-l');
  const dInput = intInput('param-d');
  dInput.max = `${meta.m}`;
  lInput.max = `${meta.n}`;

  const state = new ExplorerState({
    summarize: (params, signal) => api.summarize(params, signal),
    compare: (current, signal) => api.compare(current, signal),
    guidance: (L, kmin, kmax, dmin, dmax, signal) =>
      api.guidance(L, kmin, kmax, dmin, dmax, signal),
    scheduler: {
      set: (fn, ms) => window.setTimeout(fn, ms),
      clear: id => window.clearTimeout(id),
    },
    debounceMs: DEBOUNCE_MS,
    onChange: render,
  });

  function render(): void {
    kInput.value = `${state.params.k}`;
    lInput.value = `${state.params.L}`;
    dInput.value = `${state.params.D}`;
    statusEl.textContent = state.error ?? '';
    mount(renderGuidance(state.guidance, state.hiddenSeries, {
      onToggle: D => state.toggleSeries(D),
      onPick: (k, D) => state.pickFromGuidance(k, D),
    }), guidanceEl);
    mount(renderSolution(state.solution, state.expandedClusters, {
      onToggle: i => state.toggleCluster(i),
    }, meta.attributes), solutionEl);
    mount(renderCompare(state.compare), compareEl);
  }

  const readParams = () => state.setParams({
    k: parseInt(kInput.value, 10),
    L: parseInt(lInput.value, 10),
    D: parseInt(dInput.value, 10),
  });
  for (const input of [kInput, lInput, dInput]) {
    input.addEventListener('change', readParams);
  }
  lInput.addEventListener('change', () => {
    void state.loadGuidance(1, Math.max(state.params.k * 2, 10), 0, meta.m);
  });

  document.getElementById('title')!.textContent =
    `summit: ${meta.n} groups over (${meta.attributes.join(', ')})`;

  render();
  state.setParams({ L: Math.min(8, meta.n) });
  void state.loadGuidance(1, Math.max(state.params.k * 2, 10), 0, meta.m);
}

void boot();
