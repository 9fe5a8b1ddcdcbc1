"""Text formats for graphs and odds vectors.

Undirected (".ug"): a `vertices N` header, then one `u v` line per
conventional undirected edge; repeated lines make parallel edges, `u u`
makes a loop.  Bipartite (".bg"): header `bits N checks M`, then one
`bit check` line per bipartite edge.  `#` starts a comment anywhere,
blank lines are skipped.  Odds files carry one positive decimal per
line.
"""

from __future__ import annotations

import os

import numpy as np

from .errors import GraphFormatError
from .generators import generate, generator_names
from .graphs import (
    BipartiteEdge,
    BipartiteGraph,
    UndirectedGraph,
    build_undirected,
    to_bipartite,
)


def _payload_lines(text: str) -> list[tuple[int, list[str]]]:
    out = []
    for i, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append((i, line.split()))
    return out


def parse_ug(text: str) -> UndirectedGraph:
    lines = _payload_lines(text)
    if not lines or lines[0][1][0] != "vertices" or len(lines[0][1]) != 2:
        raise GraphFormatError("expected header line 'vertices N'")
    try:
        n = int(lines[0][1][1])
    except ValueError:
        raise GraphFormatError(f"bad vertex count {lines[0][1][1]!r}") from None
    pairs = []
    for lineno, parts in lines[1:]:
        if len(parts) != 2:
            raise GraphFormatError(f"line {lineno}: expected 'u v'")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphFormatError(f"line {lineno}: vertex indices must be integers") from None
        pairs.append((u, v))
    try:
        return build_undirected(pairs, vertex_count=n)
    except ValueError as exc:
        raise GraphFormatError(str(exc)) from None


def format_ug(g: UndirectedGraph) -> str:
    lines = [f"vertices {g.vertex_count}"]
    lines.extend(f"{u} {v}" for u, v in g.pair_list())
    return "\n".join(lines) + "\n"


def parse_bg(text: str) -> BipartiteGraph:
    lines = _payload_lines(text)
    head = lines[0][1] if lines else []
    if len(head) != 4 or head[0] != "bits" or head[2] != "checks":
        raise GraphFormatError("expected header line 'bits N checks M'")
    try:
        n_bits, n_checks = int(head[1]), int(head[3])
    except ValueError:
        raise GraphFormatError("bit and check counts must be integers") from None
    edges = []
    for lineno, parts in lines[1:]:
        if len(parts) != 2:
            raise GraphFormatError(f"line {lineno}: expected 'bit check'")
        try:
            bit, check = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphFormatError(f"line {lineno}: indices must be integers") from None
        edges.append(BipartiteEdge(id=len(edges), bit=bit, check=check))
    try:
        return BipartiteGraph(bits=n_bits, checks=n_checks, edges=tuple(edges))
    except ValueError as exc:
        raise GraphFormatError(str(exc)) from None


def format_bg(b: BipartiteGraph) -> str:
    lines = [f"bits {b.bits} checks {b.checks}"]
    lines.extend(f"{e.bit} {e.check}" for e in b.edges)
    return "\n".join(lines) + "\n"


def read_graph(path: str) -> UndirectedGraph | BipartiteGraph:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    if path.endswith(".bg"):
        return parse_bg(text)
    return parse_ug(text)


def write_graph(g, path: str) -> None:
    text = format_bg(g) if isinstance(g, BipartiteGraph) else format_ug(g)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def load_undirected(spec: str) -> UndirectedGraph:
    """Resolve a generator name or a .ug/.bg path to an undirected graph."""
    if spec in generator_names() or not os.path.exists(spec):
        g = generate(spec)
        return g
    g = read_graph(spec)
    if isinstance(g, BipartiteGraph):
        from .graphs import to_undirected

        return to_undirected(g)
    return g


def load_bipartite(spec: str) -> BipartiteGraph:
    """Resolve a generator name or a .ug/.bg path to a bipartite graph."""
    if spec in generator_names() or not os.path.exists(spec):
        return to_bipartite(generate(spec))
    g = read_graph(spec)
    return g if isinstance(g, BipartiteGraph) else to_bipartite(g)


def parse_odds(text: str, inline: bool = False) -> np.ndarray:
    """Positive odds values, one per line, or comma separated when inline."""
    if inline:
        items = [p.strip() for p in text.split(",") if p.strip()]
    else:
        items = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
        items = [it for it in items if it]
    try:
        vals = np.array([float(it) for it in items], dtype=float)
    except ValueError:
        raise GraphFormatError("odds entries must be decimal numbers") from None
    if vals.size == 0:
        raise GraphFormatError("no odds values found")
    if np.any(vals <= 0) or not np.all(np.isfinite(vals)):
        raise GraphFormatError("odds values must be positive and finite")
    return vals


def read_odds(path: str) -> np.ndarray:
    with open(path, encoding="utf-8") as fh:
        return parse_odds(fh.read())
