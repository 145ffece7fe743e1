/**
 * Shared-content graph panel: deterministic force layout rendered to SVG,
 * a stats line (components, average degree), and per-edge evidence lists.
 * No randomness: nodes start on a circle and relax with fixed iterations,
 * so the same payload always renders the same picture.
 */

import type { GraphEdge, GraphEdgeEvidence, GraphPayload } from "./api.js";
import { escapeHtml } from "./render.js";

export interface LayoutPoint {
  x: number;
  y: number;
}

export function layoutGraph(
  graph: GraphPayload,
  width = 640,
  height = 420,
  iterations = 120,
): Map<string, LayoutPoint> {
  const nodes = graph.nodes.slice().sort();
  const positions = new Map<string, LayoutPoint>();
  const cx = width / 2;
  const cy = height / 2;
  const radius = Math.min(width, height) / 2 - 40;
  nodes.forEach((node, i) => {
    const angle = (2 * Math.PI * i) / Math.max(1, nodes.length);
    positions.set(node, {
      x: cx + radius * Math.cos(angle),
      y: cy + radius * Math.sin(angle),
    });
  });
  if (nodes.length < 3) return positions;

  const ideal = Math.max(60, radius / Math.sqrt(nodes.length));
  for (let step = 0; step < iterations; step++) {
    const force = new Map<string, LayoutPoint>(
      nodes.map((n) => [n, { x: 0, y: 0 }]),
    );
    // pairwise repulsion
    for (let i = 0; i < nodes.length; i++) {
      for (let j = i + 1; j < nodes.length; j++) {
        const a = positions.get(nodes[i]!)!;
        const b = positions.get(nodes[j]!)!;
        let dx = a.x - b.x;
        let dy = a.y - b.y;
        const dist = Math.max(1, Math.hypot(dx, dy));
        const push = (ideal * ideal) / dist / dist;
        dx = (dx / dist) * push * 8;
        dy = (dy / dist) * push * 8;
        const fa = force.get(nodes[i]!)!;
        const fb = force.get(nodes[j]!)!;
        fa.x += dx;
        fa.y += dy;
        fb.x -= dx;
        fb.y -= dy;
      }
    }
    // spring attraction along edges
    for (const edge of graph.edges) {
      const a = positions.get(edge.a);
      const b = positions.get(edge.b);
      if (!a || !b) continue;
      const dx = b.x - a.x;
      const dy = b.y - a.y;
      const dist = Math.max(1, Math.hypot(dx, dy));
      const pull = (dist - ideal) / dist / 12;
      const fa = force.get(edge.a)!;
      const fb = force.get(edge.b)!;
      fa.x += dx * pull;
      fa.y += dy * pull;
      fb.x -= dx * pull;
      fb.y -= dy * pull;
    }
    const cooling = 1 - step / iterations;
    for (const node of nodes) {
      const p = positions.get(node)!;
      const f = force.get(node)!;
      p.x = Math.min(width - 20, Math.max(20, p.x + f.x * cooling));
      p.y = Math.min(height - 20, Math.max(20, p.y + f.y * cooling));
    }
  }
  return positions;
}

export function edgeEvidence(
  graph: GraphPayload,
  a: string,
  b: string,
): GraphEdgeEvidence[] {
  const [lo, hi] = a < b ? [a, b] : [b, a];
  const edge = graph.edges.find((e) => e.a === lo && e.b === hi);
  return edge ? edge.evidence : [];
}

function edgeKey(edge: GraphEdge): string {
  return `${edge.a}|${edge.b}`;
}

export function renderGraphSvg(
  graph: GraphPayload,
  selected: [string, string] | null = null,
  width = 640,
  height = 420,
): string {
  const positions = layoutGraph(graph, width, height);
  const selectedKey = selected
    ? [...selected].sort().join("|")
    : null;
  const lines = graph.edges
    .map((edge) => {
      const a = positions.get(edge.a);
      const b = positions.get(edge.b);
      if (!a || !b) return "";
      const cls = edgeKey(edge) === selectedKey ? "edge selected" : "edge";
      return (
        `<line class="${cls}" data-action="select-edge" ` +
        `data-a="${escapeHtml(edge.a)}" data-b="${escapeHtml(edge.b)}" ` +
        `x1="${a.x.toFixed(1)}" y1="${a.y.toFixed(1)}" ` +
        `x2="${b.x.toFixed(1)}" y2="${b.y.toFixed(1)}">` +
        `<title>${escapeHtml(edge.a)} / ${escapeHtml(edge.b)} ` +
        `(${edge.evidence.length} hits)</title></line>`
      );
    })
    .join("\n");
  const circles = graph.nodes
    .slice()
    .sort()
    .map((node) => {
      const p = positions.get(node)!;
      return (
        `<g class="node" data-domain="${escapeHtml(node)}">` +
        `<circle cx="${p.x.toFixed(1)}" cy="${p.y.toFixed(1)}" r="9"/>` +
        `<text x="${(p.x + 12).toFixed(1)}" y="${(p.y + 4).toFixed(1)}">` +
        `${escapeHtml(node)}</text></g>`
      );
    })
    .join("\n");
  return (
    `<svg viewBox="0 0 ${width} ${height}" class="content-graph" ` +
    `xmlns="http://www.w3.org/2000/svg">\n${lines}\n${circles}\n</svg>`
  );
}

export function renderGraphStats(graph: GraphPayload): string {
  const degree = graph.average_degree.toFixed(2);
  return (
    `<div class="graph-stats">${graph.nodes.length} nodes · ` +
    `${graph.edges.length} edges · ${graph.components} component(s) · ` +
    `average degree ${degree}</div>`
  );
}

function renderEvidenceList(
  graph: GraphPayload,
  selected: [string, string],
): string {
  const evidence = edgeEvidence(graph, selected[0], selected[1]);
  if (!evidence.length) return "";
  const rows = evidence
    .map(
      (e) =>
        `<li><span class="origin">${escapeHtml(e.origin_site)}</span> → ` +
        `<a href="${escapeHtml(e.hit_url)}" rel="noreferrer">` +
        `${escapeHtml(e.hit_url)}</a> <code>${escapeHtml(e.query_id)}</code></li>`,
    )
    .join("");
  return (
    `<div class="edge-evidence"><h4>${escapeHtml(selected[0])} / ` +
    `${escapeHtml(selected[1])}</h4><ul>${rows}</ul></div>`
  );
}

export function renderGraphPanel(
  graph: GraphPayload,
  selected: [string, string] | null = null,
): string {
  if (!graph.nodes.length) {
    return `<div class="empty-state">No confirmed clones yet; the graph appears with the first confirmation.</div>`;
  }
  const evidence = selected ? renderEvidenceList(graph, selected) : "";
  return renderGraphStats(graph) + renderGraphSvg(graph, selected) + evidence;
}
