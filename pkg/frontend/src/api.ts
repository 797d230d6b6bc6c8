// Types mirroring the service JSON bodies, plus a small fetch client.
// The UI never recomputes any of these numbers; it only displays them.

export interface Params {
  k: number;
  L: number;
  D: number;
  algo?: string;
  seed?: number;
}

export interface MemberPayload {
  row: number;
  rank: number;
  values: string[];
  value: number;
}

export interface ClusterPayload {
  pattern: string[];
  avg: number;
  size: number;
  topL_count: number;
  members?: MemberPayload[];
}

export interface SolutionPayload {
  params: { k: number; L: number; D: number };
  objective: number;
  covered_count: number;
  trivial: boolean;
  clusters: ClusterPayload[];
}

export interface GuidancePoint {
  k: number;
  objective: number;
  retrievable: boolean;
}

export interface GuidanceSeries {
  D: number;
  points: GuidancePoint[];
}

export interface GuidancePayload {
  L: number;
  k_range: number[];
  d_range: number[];
  series: GuidanceSeries[];
}

export interface CompareSide {
  params: { k: number; L: number; D: number };
  clusters: ClusterPayload[];
}

export interface ComparePayload {
  old: CompareSide;
  new: CompareSide;
  M: number[][];
  p_a: number[];
  p_b: number[];
  total_cost: number;
}

export interface MetaPayload {
  attributes: string[];
  m: number;
  n: number;
  value_stats: { min: number; max: number; mean: number };
}

// ─── client ──────────────────────────────────────────────────────

export class ApiClient {
  constructor(private base: string, private token: string) {}

  private async request<T>(method: string, path: string, body?: unknown,
                           signal?: AbortSignal): Promise<T> {
    const resp = await fetch(this.base + path, {
      method,
      signal,
      headers: {
        'Content-Type': 'application/json',
        'X-Client-Token': this.token,
      },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const payload = await resp.json();
    if (!resp.ok) {
      throw new Error(payload.error ?? `${method} ${path}: HTTP ${resp.status}`);
    }
    return payload as T;
  }

  meta(): Promise<MetaPayload> {
    return this.request('GET', '/meta');
  }

  summarize(params: Params, signal?: AbortSignal): Promise<SolutionPayload> {
    return this.request('POST', '/summarize', params, signal);
  }

  guidance(L: number, kmin: number, kmax: number, dmin: number,
           dmax: number, signal?: AbortSignal): Promise<GuidancePayload> {
    const q = `L=${L}&kmin=${kmin}&kmax=${kmax}&dmin=${dmin}&dmax=${dmax}`;
    return this.request('GET', `/guidance?${q}`, undefined, signal);
  }

  compare(current: Params, signal?: AbortSignal): Promise<ComparePayload> {
    return this.request('POST', '/compare', { current }, signal);
  }
}
