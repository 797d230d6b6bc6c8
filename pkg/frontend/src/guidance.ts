// Guidance chart: objective vs k, one toggleable line per D.
// Clicking a point hands its (k, D) back so the controls can adopt it.

import { GuidancePayload } from './api.js';
import { h, VNode } from './vdom.js';

export interface GuidanceHandlers {
  onToggle(D: number): void;
  onPick(k: number, D: number): void;
}

const WIDTH = 560;
const HEIGHT = 260;
const PAD = 36;

const LINE_COLORS = ['#4c78a8', '#f58518', '#54a24b', '#e45756', '#72b7b2',
                     '#b279a2', '#9d755d', '#eeca3b'];

export function seriesColor(i: number): string {
  return LINE_COLORS[i % LINE_COLORS.length];
}

export function renderGuidance(payload: GuidancePayload | null,
                               hidden: Set<number>,
                               handlers: GuidanceHandlers): VNode {
  if (!payload || payload.series.length === 0) {
    return h('div', { class: 'guidance empty' },
             ['no guidance data for these ranges yet']);
  }

  const ks = payload.series.flatMap(s => s.points.map(p => p.k));
  const objs = payload.series.flatMap(s => s.points.map(p => p.objective));
  const kLo = Math.min(...ks);
  const kHi = Math.max(...ks);
  const oLo = Math.min(...objs);
  const oHi = Math.max(...objs);
  const x = (k: number) =>
    kHi === kLo ? WIDTH / 2 : PAD + ((k - kLo) / (kHi - kLo)) * (WIDTH - 2 * PAD);
  const y = (o: number) =>
    oHi === oLo ? HEIGHT / 2
                : HEIGHT - PAD - ((o - oLo) / (oHi - oLo)) * (HEIGHT - 2 * PAD);

  const chartParts: VNode[] = [
    h('line', { class: 'axis', x1: `${PAD}`, y1: `${HEIGHT - PAD}`,
                x2: `${WIDTH - PAD}`, y2: `${HEIGHT - PAD}` }),
    h('line', { class: 'axis', x1: `${PAD}`, y1: `${PAD}`,
                x2: `${PAD}`, y2: `${HEIGHT - PAD}` }),
  ];

  payload.series.forEach((series, idx) => {
    if (hidden.has(series.D)) return;
    const color = seriesColor(idx);
    const pts = series.points.map(p => `${x(p.k)},${y(p.objective)}`).join(' ');
    chartParts.push(h('polyline', {
      class: 'guidance-line',
      'data-d': `${series.D}`,
      points: pts,
      fill: 'none',
      stroke: color,
    }));
    for (const point of series.points) {
      chartParts.push(h('circle', {
        class: 'guidance-point',
        'data-d': `${series.D}`,
        'data-k': `${point.k}`,
        'data-objective': `${point.objective}`,
        cx: `${x(point.k)}`,
        cy: `${y(point.objective)}`,
        r: '4',
        fill: color,
      }, [
        // hover reveals the exact values straight from the payload
        h('title', {}, [`D=${series.D} k=${point.k} objective=${point.objective}`]),
      ], {
        click: () => handlers.onPick(point.k, series.D),
      }));
    }
  });

  const legend = h('ul', { class: 'legend' }, payload.series.map((series, idx) =>
    h('li', {
      class: `legend-item${hidden.has(series.D) ? ' off' : ''}`,
      'data-d': `${series.D}`,
      style: `color: ${seriesColor(idx)}`,
    }, [`D = ${series.D}`], {
      click: () => handlers.onToggle(series.D),
    })));

  return h('div', { class: 'guidance' }, [
    h('svg', { viewBox: `0 0 ${WIDTH} ${HEIGHT}`, class: 'guidance-chart' },
      chartParts),
    legend,
  ]);
}
