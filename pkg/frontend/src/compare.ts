// Band diagram between two successive solutions: old clusters on the
// left in their fixed order, new clusters on the right in the order the
// service optimized, bands sized by shared-tuple counts.

import { ComparePayload } from './api.js';
import { h, VNode } from './vdom.js';

const SLOT_H = 46;
const BOX_H = 34;
const MAX_BOX_W = 180;
const MIN_BOX_W = 26;
const GAP = 240;
const PAD = 16;

function label(pattern: string[]): string {
  return pattern.join(' | ');
}

export function renderCompare(payload: ComparePayload | null): VNode {
  if (!payload) {
    return h('div', { class: 'compare empty' },
             ['change a parameter to see how the clusters move']);
  }
  const mOld = payload.old.clusters.length;
  const nNew = payload.new.clusters.length;
  const maxSize = Math.max(
    1, ...payload.old.clusters.map(c => c.size),
    ...payload.new.clusters.map(c => c.size));
  const boxW = (size: number) =>
    MIN_BOX_W + (MAX_BOX_W - MIN_BOX_W) * (size / maxSize);
  const slotY = (slot: number) => PAD + slot * SLOT_H;
  const maxShared = Math.max(1, ...payload.M.flat());

  const leftX = PAD + MAX_BOX_W;   // right edge of old boxes
  const rightX = leftX + GAP;      // left edge of new boxes
  const height = 2 * PAD + SLOT_H * Math.max(mOld, nNew, 1);
  const width = rightX + MAX_BOX_W + PAD;

  const parts: VNode[] = [];

  // bands first so boxes draw over their ends
  for (let i = 0; i < mOld; i++) {
    for (let j = 0; j < nNew; j++) {
      const shared = payload.M[i][j];
      if (!shared) continue;
      const y0 = slotY(payload.p_a[i]) + BOX_H / 2;
      const y1 = slotY(payload.p_b[j]) + BOX_H / 2;
      const cp = GAP * 0.4;
      const thickness = 2 + 10 * (shared / maxShared);
      parts.push(h('path', {
        class: 'band',
        'data-old': `${i}`,
        'data-new': `${j}`,
        'data-shared': `${shared}`,
        d: `M${leftX},${y0} C${leftX + cp},${y0} ${rightX - cp},${y1} ` +
           `${rightX},${y1}`,
        fill: 'none',
        stroke: '#88a',
        'stroke-opacity': '0.55',
        'stroke-width': `${thickness}`,
      }, [
        h('title', {}, [`${shared} shared tuples`]),
      ]));
    }
  }

  const box = (side: 'old' | 'new', index: number, slot: number,
               xRightEdge: number | null): VNode[] => {
    const cluster = payload[side].clusters[index];
    const w = boxW(cluster.size);
    const x = xRightEdge !== null ? xRightEdge - w : rightX;
    const y = slotY(slot);
    const toplW = cluster.size ? w * (cluster.topL_count / cluster.size) : 0;
    return [
      h('g', {
        class: `box ${side}`,
        'data-index': `${index}`,
        'data-slot': `${slot}`,
      }, [
        h('rect', { class: 'cov', x: `${x}`, y: `${y}`, width: `${w}`,
                    height: `${BOX_H}`,
                    fill: side === 'old' ? '#9ccc9c' : '#e8d27a' }, [
          h('title', {}, [
            `${label(cluster.pattern)}: ${cluster.size} tuples, ` +
            `${cluster.topL_count} in top-L, avg ${cluster.avg}`]),
        ]),
        // darker strip for the top-L fraction
        h('rect', { class: 'topl', x: `${x}`, y: `${y}`, width: `${toplW}`,
                    height: `${BOX_H}`, fill: 'rgba(0,0,0,0.28)' }),
        h('text', {
          class: 'box-label',
          x: `${side === 'old' ? x - 6 : x + w + 6}`,
          y: `${y + BOX_H / 2 + 4}`,
          'text-anchor': side === 'old' ? 'end' : 'start',
        }, [label(cluster.pattern)]),
      ]),
    ];
  };

  for (let i = 0; i < mOld; i++) parts.push(...box('old', i, payload.p_a[i], leftX));
  for (let j = 0; j < nNew; j++) parts.push(...box('new', j, payload.p_b[j], null));

  return h('div', { class: 'compare' }, [
    h('div', { class: 'compare-cost', 'data-value': `${payload.total_cost}` },
      [`crossing cost: ${payload.total_cost}`]),
    h('svg', { viewBox: `0 0 ${width} ${height}`, class: 'compare-chart' },
      parts),
  ]);
}
