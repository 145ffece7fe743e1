import assert from "node:assert/strict";
import { test } from "node:test";
import { edgeEvidence, layoutGraph, renderGraphPanel, renderGraphSvg, renderGraphStats, } from "../src/graphview.js";
import { loadFixture } from "./helpers.js";
const graph = loadFixture("graph.json");
const emptyGraph = loadFixture("empty_graph.json");
function countMatches(html, re) {
    return (html.match(re) ?? []).length;
}
test("svg renders one circle per node and one line per edge", () => {
    const svg = renderGraphSvg(graph);
    assert.equal(countMatches(svg, /<circle /g), graph.nodes.length);
    assert.equal(countMatches(svg, /<line /g), graph.edges.length);
    for (const node of graph.nodes) {
        assert.ok(svg.includes(node));
    }
});
test("stats line shows components and average degree 2E/V", () => {
    const html = renderGraphStats(graph);
    assert.ok(html.includes(`${graph.components} component(s)`));
    const expected = (2 * graph.edges.length) / graph.nodes.length;
    assert.equal(graph.average_degree, expected);
    assert.ok(html.includes(`average degree ${expected.toFixed(2)}`));
});
test("layout is deterministic and stays in bounds", () => {
    const a = layoutGraph(graph, 640, 420);
    const b = layoutGraph(graph, 640, 420);
    assert.deepEqual([...a.entries()], [...b.entries()]);
    for (const point of a.values()) {
        assert.ok(point.x >= 0 && point.x <= 640);
        assert.ok(point.y >= 0 && point.y <= 420);
    }
});
test("edge click evidence matches the export payload", () => {
    const edge = graph.edges[0];
    const evidence = edgeEvidence(graph, edge.a, edge.b);
    assert.deepEqual(evidence, edge.evidence);
    // order of endpoints must not matter
    assert.deepEqual(edgeEvidence(graph, edge.b, edge.a), edge.evidence);
    const panel = renderGraphPanel(graph, [edge.a, edge.b]);
    assert.match(panel, /edge-evidence/);
    assert.ok(panel.includes(edge.evidence[0].hit_url));
    assert.ok(panel.includes(edge.evidence[0].query_id));
});
test("selected edge is highlighted", () => {
    const edge = graph.edges[0];
    const svg = renderGraphSvg(graph, [edge.a, edge.b]);
    assert.match(svg, /class="edge selected"/);
});
test("empty graph renders the placeholder", () => {
    const html = renderGraphPanel(emptyGraph);
    assert.match(html, /empty-state/);
    assert.ok(!html.includes("<svg"));
});
test("unknown edge lookup returns empty evidence", () => {
    assert.deepEqual(edgeEvidence(graph, "nobody.test", "nothing.test"), []);
});
