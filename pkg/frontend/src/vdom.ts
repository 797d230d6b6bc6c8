// Minimal virtual-node tree. View functions return VNodes so tests can
// inspect structure, attributes and handlers without a DOM; the browser
// entry point materializes them with mount().

export type Child = VNode | string;

export interface VNode {
  tag: string;
  attrs: Record<string, string>;
  children: Child[];
  on: Record<string, (arg?: unknown) => void>;
}

export function h(tag: string, attrs: Record<string, string> = {},
                  children: Child[] = [],
                  on: Record<string, (arg?: unknown) => void> = {}): VNode {
  return { tag, attrs, children, on };
}

// ─── tree queries (used by tests and interactions) ───────────────

export function findAll(root: VNode, pred: (n: VNode) => boolean): VNode[] {
  const out: VNode[] = [];
  const walk = (node: VNode) => {
    if (pred(node)) out.push(node);
    for (const child of node.children) {
      if (typeof child !== 'string') walk(child);
    }
  };
  walk(root);
  return out;
}

export function byClass(root: VNode, cls: string): VNode[] {
  return findAll(root, n => (n.attrs.class ?? '').split(' ').includes(cls));
}

export function textOf(node: Child): string {
  if (typeof node === 'string') return node;
  return node.children.map(textOf).join('');
}

// ─── DOM materialization (browser only) ──────────────────────────

const SVG_NS = 'http://www.w3.org/2000/svg';
const SVG_TAGS = new Set([
  'svg', 'g', 'rect', 'circle', 'line', 'polyline', 'path', 'text', 'title',
]);

export function toElement(node: Child, doc: Document): Node {
  if (typeof node === 'string') return doc.createTextNode(node);
  const el = SVG_TAGS.has(node.tag)
    ? doc.createElementNS(SVG_NS, node.tag)
    : doc.createElement(node.tag);
  for (const [key, val] of Object.entries(node.attrs)) {
    el.setAttribute(key, val);
  }
  for (const [event, handler] of Object.entries(node.on)) {
    el.addEventListener(event, () => handler());
  }
  for (const child of node.children) {
    el.appendChild(toElement(child, doc));
  }
  return el;
}

export function mount(node: VNode, parent: Element): void {
  parent.replaceChildren(toElement(node, parent.ownerDocument));
}
