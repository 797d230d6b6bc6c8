// Two-layer solution table: cluster rows expand into their member
// tuples with global ranks; top-L members are visually distinguished.

import { SolutionPayload } from './api.js';
import { h, VNode } from './vdom.js';

export interface SolutionHandlers {
  onToggle(clusterIndex: number): void;
}

export function renderSolution(payload: SolutionPayload | null,
                               expanded: Set<number>,
                               handlers: SolutionHandlers,
                               attributes: string[]): VNode {
  if (!payload) {
    return h('div', { class: 'solution empty' }, ['run a summarization first']);
  }
  const L = payload.params.L;
  const header = h('tr', {}, [
    h('th', {}, ['']),
    ...attributes.map(a => h('th', {}, [a])),
    h('th', {}, ['avg val']),
    h('th', {}, ['size']),
    h('th', {}, ['top-L']),
    h('th', {}, ['rank']),
  ]);

  const rows: VNode[] = [header];
  payload.clusters.forEach((cluster, i) => {
    const open = expanded.has(i);
    rows.push(h('tr', { class: 'cluster-row', 'data-index': `${i}` }, [
      h('td', { class: 'expander' }, [open ? '▼' : '▶'],
        { click: () => handlers.onToggle(i) }),
      ...cluster.pattern.map(slot => h('td', { class: 'slot' }, [slot])),
      h('td', { class: 'avg', 'data-value': `${cluster.avg}` },
        [`${cluster.avg}`]),
      h('td', { class: 'size' }, [`${cluster.size}`]),
      h('td', { class: 'topl-badge', 'data-value': `${cluster.topL_count}` },
        [`${cluster.topL_count}`]),
      h('td', {}, ['']),
    ]));
    if (open) {
      for (const member of cluster.members ?? []) {
        rows.push(h('tr', {
          class: `member-row${member.rank <= L ? ' topl' : ''}`,
          'data-rank': `${member.rank}`,
        }, [
          h('td', {}, ['']),
          ...member.values.map(v => h('td', { class: 'slot' }, [v])),
          h('td', { class: 'value', 'data-value': `${member.value}` },
            [`${member.value}`]),
          h('td', {}, ['']),
          h('td', {}, ['']),
          h('td', { class: 'rank' }, [`#${member.rank}`]),
        ]));
      }
    }
  });

  return h('div', { class: 'solution' }, [
    h('div', {
      class: 'objective',
      'data-value': `${payload.objective}`,
    }, [`objective: ${payload.objective} over ${payload.covered_count} rows`]),
    h('table', { class: 'solution-table' }, rows),
  ]);
}
