"""Shared-content graph over confirmed clone domains.

An undirected edge joins two confirmed clones when one's archive queries
returned the other among the results; the directional hits are kept as edge
evidence. Everything here is a pure function of the run state, so a graph
rebuilt from a replayed event log exports byte-identical documents.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from xml.sax.saxutils import escape, quoteattr

from .errors import EmptyGraph
from .models import Verdict


@dataclass
class ContentGraph:
    nodes: set[str] = field(default_factory=set)
    edges: set[tuple[str, str]] = field(default_factory=set)
    edge_evidence: dict[tuple[str, str], list[tuple[str, str, str]]] = field(
        default_factory=dict
    )  # edge -> [(query_id, origin_site, hit_url)]
    built_from_run: str = ""


def build_graph(state) -> ContentGraph:
    """Nodes are ConfirmedClone domains; hits between two of them make edges."""
    confirmed = {
        d for d, c in state.candidates.items()
        if c.verdict is Verdict.CONFIRMED_CLONE
    }
    if not confirmed:
        raise EmptyGraph("run has no confirmed clones")
    graph = ContentGraph(nodes=set(confirmed), built_from_run=state.run_id)
    for hit in state.hit_ledger:
        query = state.queries.get(hit.query_id)
        if query is None:
            continue
        origin, target = query.origin_site, hit.domain
        if origin == target:
            continue
        if origin not in confirmed or target not in confirmed:
            continue
        edge = (origin, target) if origin < target else (target, origin)
        graph.edges.add(edge)
        graph.edge_evidence.setdefault(edge, []).append(
            (hit.query_id, origin, hit.url)
        )
    return graph


def connected_components(graph: ContentGraph) -> list[set[str]]:
    """Partition of the nodes, largest component first, then lexicographic."""
    adjacency: dict[str, set[str]] = {n: set() for n in graph.nodes}
    for a, b in graph.edges:
        adjacency[a].add(b)
        adjacency[b].add(a)
    seen: set[str] = set()
    components: list[set[str]] = []
    for start in sorted(graph.nodes):
        if start in seen:
            continue
        component = {start}
        stack = [start]
        while stack:
            node = stack.pop()
            for neighbor in adjacency[node]:
                if neighbor not in component:
                    component.add(neighbor)
                    stack.append(neighbor)
        seen |= component
        components.append(component)
    components.sort(key=lambda c: (-len(c), min(c)))
    return components


def average_degree(graph: ContentGraph) -> float:
    """Exactly 2*|E| / |V|."""
    if not graph.nodes:
        raise EmptyGraph("average degree of an empty graph")
    return 2 * len(graph.edges) / len(graph.nodes)


def degrees(graph: ContentGraph) -> dict[str, int]:
    out = {n: 0 for n in graph.nodes}
    for a, b in graph.edges:
        out[a] += 1
        out[b] += 1
    return out


# -- exports ---------------------------------------------------------------


def export_graph(graph: ContentGraph, fmt: str) -> bytes:
    fmt = fmt.lower()
    if fmt == "dot":
        return _export_dot(graph)
    if fmt == "graphml":
        return _export_graphml(graph)
    if fmt == "json":
        return _export_json(graph)
    raise ValueError(f"unknown export format {fmt!r}")


def _export_dot(graph: ContentGraph) -> bytes:
    lines = ["graph shared_content {"]
    for node in sorted(graph.nodes):
        lines.append(f'  "{node}";')
    for a, b in sorted(graph.edges):
        count = len(graph.edge_evidence.get((a, b), ()))
        lines.append(f'  "{a}" -- "{b}" [label="{count}"];')
    lines.append("}")
    return ("\n".join(lines) + "\n").encode("utf-8")


def _export_graphml(graph: ContentGraph) -> bytes:
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        '<graphml xmlns="http://graphml.graphdrawing.org/xmlns"',
        '         xmlns:xsi="http://www.w3.org/2001/XMLSchema-instance"',
        '         xsi:schemaLocation="http://graphml.graphdrawing.org/xmlns'
        ' http://graphml.graphdrawing.org/xmlns/1.0/graphml.xsd">',
        '  <key id="evidence" for="edge" attr.name="evidence_count" attr.type="int"/>',
        '  <graph id="shared_content" edgedefault="undirected">',
    ]
    for node in sorted(graph.nodes):
        lines.append(f"    <node id={quoteattr(node)}/>")
    for i, (a, b) in enumerate(sorted(graph.edges)):
        count = len(graph.edge_evidence.get((a, b), ()))
        lines.append(
            f'    <edge id="e{i}" source={quoteattr(a)} target={quoteattr(b)}>'
            f'<data key="evidence">{escape(str(count))}</data></edge>'
        )
    lines.append("  </graph>")
    lines.append("</graphml>")
    return ("\n".join(lines) + "\n").encode("utf-8")


def _export_json(graph: ContentGraph) -> bytes:
    payload = {
        "built_from_run": graph.built_from_run,
        "nodes": sorted(graph.nodes),
        "edges": [
            {
                "a": a,
                "b": b,
                "evidence": [
                    {"query_id": q, "origin_site": o, "hit_url": u}
                    for q, o, u in sorted(graph.edge_evidence.get((a, b), ()))
                ],
            }
            for a, b in sorted(graph.edges)
        ],
    }
    return (json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False) + "\n").encode(
        "utf-8"
    )


def import_graph_json(blob: bytes) -> ContentGraph:
    """Inverse of the JSON export; round-trips losslessly."""
    data = json.loads(blob.decode("utf-8"))
    graph = ContentGraph(
        nodes=set(data["nodes"]), built_from_run=data.get("built_from_run", "")
    )
    for edge in data["edges"]:
        pair = (edge["a"], edge["b"])
        graph.edges.add(pair)
        graph.edge_evidence[pair] = [
            (e["query_id"], e["origin_site"], e["hit_url"]) for e in edge["evidence"]
        ]
    return graph
