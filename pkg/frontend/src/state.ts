// Explorer state: the current (k, L, D), the latest payloads, a debounce
// on parameter changes, and cancellation of superseded requests.
//
// Parameter edits wait DEBOUNCE_MS before hitting /summarize; a change
// that arrives while a request is in flight aborts it. Guidance is only
// refetched when L (or its ranges) changes.

import {
  ComparePayload,
  GuidancePayload,
  Params,
  SolutionPayload,
} from './api.js';

export const DEBOUNCE_MS = 250;

export interface Scheduler {
  set(fn: () => void, ms: number): number;
  clear(id: number): void;
}

export interface StateDeps {
  summarize(params: Params, signal: AbortSignal): Promise<SolutionPayload>;
  compare(current: Params, signal: AbortSignal): Promise<ComparePayload>;
  guidance(L: number, kmin: number, kmax: number, dmin: number, dmax: number,
           signal: AbortSignal): Promise<GuidancePayload>;
  scheduler: Scheduler;
  onChange(state: ExplorerState): void;
  debounceMs?: number;
}

export class ExplorerState {
  params: Params = { k: 4, L: 8, D: 1 };
  solution: SolutionPayload | null = null;
  compare: ComparePayload | null = null;
  guidance: GuidancePayload | null = null;
  hiddenSeries = new Set<number>();
  expandedClusters = new Set<number>();
  error: string | null = null;
  requestsStarted = 0;

  private timer: number | null = null;
  private inflight: AbortController | null = null;
  private guidanceInflight: AbortController | null = null;
  private lastGuidanceKey: string | null = null;

  constructor(private deps: StateDeps) {}

  private notify(): void {
    this.deps.onChange(this);
  }

  // ─── parameter edits ────────────────────────────────────────────

  setParams(patch: Partial<Params>): void {
    const before = this.params;
    this.params = { ...this.params, ...patch };
    if (this.params.L !== before.L) {
      this.lastGuidanceKey = null;  // guidance is per-L
    }
    if (this.timer !== null) {
      this.deps.scheduler.clear(this.timer);
    }
    const delay = this.deps.debounceMs ?? DEBOUNCE_MS;
    this.timer = this.deps.scheduler.set(() => {
      this.timer = null;
      void this.runSummarize();
    }, delay);
    this.notify();
  }

  pickFromGuidance(k: number, D: number): void {
    this.setParams({ k, D });
  }

  toggleSeries(D: number): void {
    if (this.hiddenSeries.has(D)) {
      this.hiddenSeries.delete(D);
    } else {
      this.hiddenSeries.add(D);
    }
    this.notify();
  }

  toggleCluster(index: number): void {
    if (this.expandedClusters.has(index)) {
      this.expandedClusters.delete(index);
    } else {
      this.expandedClusters.add(index);
    }
    this.notify();
  }

  // ─── requests ───────────────────────────────────────────────────

  async runSummarize(): Promise<void> {
    this.inflight?.abort();
    const controller = new AbortController();
    this.inflight = controller;
    this.requestsStarted += 1;
    const params = { ...this.params };
    try {
      // compare first: the service still holds the previous solution for
      // this client token; summarizing would overwrite it
      if (this.solution !== null) {
        const comparison = await this.deps.compare(params, controller.signal);
        if (controller.signal.aborted) return;
        this.compare = comparison;
        this.notify();
      }
      const solution = await this.deps.summarize(params, controller.signal);
      if (controller.signal.aborted) return;
      this.solution = solution;
      this.expandedClusters = new Set();
      this.error = null;
      this.notify();
    } catch (err) {
      if (controller.signal.aborted) return;
      this.error = err instanceof Error ? err.message : String(err);
      this.notify();
    }
  }

  async loadGuidance(kmin: number, kmax: number, dmin: number,
                     dmax: number): Promise<void> {
    const key = `${this.params.L}:${kmin}:${kmax}:${dmin}:${dmax}`;
    if (key === this.lastGuidanceKey) return;
    this.guidanceInflight?.abort();
    const controller = new AbortController();
    this.guidanceInflight = controller;
    try {
      const payload = await this.deps.guidance(
        this.params.L, kmin, kmax, dmin, dmax, controller.signal);
      if (controller.signal.aborted) return;
      this.guidance = payload;
      this.lastGuidanceKey = key;
      this.notify();
    } catch (err) {
      if (controller.signal.aborted) return;
      this.error = err instanceof Error ? err.message : String(err);
      this.notify();
    }
  }
}
