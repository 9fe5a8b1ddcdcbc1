"""Core graph types and conversions.

An undirected graph is stored as a set of directed edges together with a
fixed-point-free conjugation pairing each edge with its reversal.  A
bipartite graph whose check nodes all have degree 2 carries the same
information: each check ties an edge to its conjugate.  The flow graph is
the directed graph of non-backtracking continuations between edges; its
adjacency structure drives everything in :mod:`spaflow.spectral`.
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass
from functools import cached_property
from math import gcd

from .errors import (
    CheckDegreeError,
    GraphError,
    InvalidIndexError,
    NotStronglyConnectedError,
)


@dataclass(frozen=True)
class Edge:
    """A directed edge; ``conjugate`` is the id of its reversal."""

    id: int
    source: int
    terminus: int
    conjugate: int


@dataclass(frozen=True)
class UndirectedGraph:
    """Directed edges closed under a fixed-point-free reversing conjugation.

    Multigraphs are allowed: parallel edges are distinct edge pairs with the
    same endpoints.  Edge ids run 0..2m-1 in construction order.
    """

    vertex_count: int
    edges: tuple[Edge, ...]

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple(self.edges))
        if self.vertex_count < 0:
            raise GraphError("vertex_count must be nonnegative")
        for pos, e in enumerate(self.edges):
            if e.id != pos:
                raise GraphError(f"edge ids must be sequential, got {e.id} at {pos}")
            if not (0 <= e.source < self.vertex_count):
                raise GraphError(f"edge {e.id}: source {e.source} out of range")
            if not (0 <= e.terminus < self.vertex_count):
                raise GraphError(f"edge {e.id}: terminus {e.terminus} out of range")
            if not (0 <= e.conjugate < len(self.edges)):
                raise GraphError(f"edge {e.id}: conjugate {e.conjugate} out of range")
        for e in self.edges:
            f = self.edges[e.conjugate]
            if f.conjugate != e.id or f.id == e.id:
                raise GraphError(f"conjugation is not a fixed-point-free involution at edge {e.id}")
            if f.source != e.terminus or f.terminus != e.source:
                raise GraphError(f"conjugate of edge {e.id} must reverse it")

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def conj(self, e: int) -> int:
        return self.edges[e].conjugate

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        d = [0] * self.vertex_count
        for e in self.edges:
            d[e.source] += 1
        return tuple(d)

    def degree(self, v: int) -> int:
        return self.degrees[v]

    @cached_property
    def out_edges(self) -> tuple[tuple[int, ...], ...]:
        """Edge ids grouped by source vertex, ascending within each group."""
        by_source: list[list[int]] = [[] for _ in range(self.vertex_count)]
        for e in self.edges:
            by_source[e.source].append(e.id)
        return tuple(tuple(g) for g in by_source)

    def pair_list(self) -> list[tuple[int, int]]:
        """One (source, terminus) pair per conjugate edge pair, in id order."""
        return [(e.source, e.terminus) for e in self.edges if e.id < e.conjugate]


@dataclass(frozen=True)
class BipartiteEdge:
    id: int
    bit: int
    check: int


@dataclass(frozen=True)
class BipartiteGraph:
    """Bits on the left, checks on the right, edges in id order."""

    bits: int
    checks: int
    edges: tuple[BipartiteEdge, ...]

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple(self.edges))
        if self.bits < 0 or self.checks < 0:
            raise GraphError("bit and check counts must be nonnegative")
        for pos, e in enumerate(self.edges):
            if e.id != pos:
                raise GraphError(f"edge ids must be sequential, got {e.id} at {pos}")
            if not (0 <= e.bit < self.bits):
                raise GraphError(f"edge {e.id}: bit {e.bit} out of range")
            if not (0 <= e.check < self.checks):
                raise GraphError(f"edge {e.id}: check {e.check} out of range")

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @cached_property
    def bit_degrees(self) -> tuple[int, ...]:
        d = [0] * self.bits
        for e in self.edges:
            d[e.bit] += 1
        return tuple(d)

    @cached_property
    def check_degrees(self) -> tuple[int, ...]:
        d = [0] * self.checks
        for e in self.edges:
            d[e.check] += 1
        return tuple(d)

    @cached_property
    def edges_by_bit(self) -> tuple[tuple[int, ...], ...]:
        by_bit: list[list[int]] = [[] for _ in range(self.bits)]
        for e in self.edges:
            by_bit[e.bit].append(e.id)
        return tuple(tuple(g) for g in by_bit)

    @cached_property
    def edges_by_check(self) -> tuple[tuple[int, ...], ...]:
        by_check: list[list[int]] = [[] for _ in range(self.checks)]
        for e in self.edges:
            by_check[e.check].append(e.id)
        return tuple(tuple(g) for g in by_check)

    def conjugate_by_check(self) -> tuple[int, ...]:
        """For degree-2 checks, map each edge to the other edge at its check."""
        conj = [-1] * self.edge_count
        for check, group in enumerate(self.edges_by_check):
            if len(group) != 2:
                raise CheckDegreeError(
                    f"check {check} has degree {len(group)}, need exactly 2"
                )
            a, b = group
            conj[a], conj[b] = b, a
        return tuple(conj)


@dataclass(frozen=True)
class FlowGraph:
    """Directed graph on edge ids: an arc (e, f) means f continues e without
    backtracking, i.e. f starts where e ends and f is not the conjugate of e."""

    vertex_count: int
    arcs: tuple[tuple[int, int], ...]

    @cached_property
    def out_neighbors(self) -> tuple[tuple[int, ...], ...]:
        out: list[list[int]] = [[] for _ in range(self.vertex_count)]
        for u, v in self.arcs:
            out[u].append(v)
        return tuple(tuple(g) for g in out)

    @cached_property
    def in_neighbors(self) -> tuple[tuple[int, ...], ...]:
        inn: list[list[int]] = [[] for _ in range(self.vertex_count)]
        for u, v in self.arcs:
            inn[v].append(u)
        return tuple(tuple(g) for g in inn)

    def out_degree(self, v: int) -> int:
        return len(self.out_neighbors[v])


@dataclass(frozen=True)
class ValidationReport:
    """Which hypotheses of the convergence theory a bipartite graph meets."""

    connected: bool
    all_checks_degree2: bool
    min_bit_degree: int
    max_bit_degree: int
    has_degree_ge3_bit: bool
    spa_theory_applicable: bool

    def failures(self) -> list[str]:
        out = []
        if not self.connected:
            out.append("graph is not connected")
        if not self.all_checks_degree2:
            out.append("not every check node has degree 2")
        if self.min_bit_degree < 2:
            out.append(f"minimum bit degree is {self.min_bit_degree}, need >= 2")
        if not self.has_degree_ge3_bit:
            out.append("no bit node has degree >= 3")
        return out


def build_undirected(
    pairs, vertex_count: int | None = None
) -> UndirectedGraph:
    """Build an undirected graph from (u, v) pairs.

    Each pair becomes a conjugate edge pair (2i: u->v, 2i+1: v->u).  Repeated
    pairs create parallel edges.  ``vertex_count`` defaults to 1 + the largest
    endpoint mentioned.
    """
    pairs = list(pairs)
    if vertex_count is None:
        vertex_count = 1 + max((max(u, v) for u, v in pairs), default=-1)
    edges = []
    for i, (u, v) in enumerate(pairs):
        edges.append(Edge(2 * i, u, v, 2 * i + 1))
        edges.append(Edge(2 * i + 1, v, u, 2 * i))
    return UndirectedGraph(vertex_count, tuple(edges))


def reorder_edges(g: UndirectedGraph, order) -> UndirectedGraph:
    """Relabel edges so old edge ``order[p]`` gets new id ``p``.

    The vertex set and incidence are untouched; only edge ids move.  Useful
    for presenting the flow adjacency in a chosen block layout.
    """
    order = list(order)
    if sorted(order) != list(range(g.edge_count)):
        raise GraphError("order must be a permutation of all edge ids")
    new_id = {old: new for new, old in enumerate(order)}
    edges = tuple(
        Edge(p, g.edges[old].source, g.edges[old].terminus, new_id[g.edges[old].conjugate])
        for p, old in enumerate(order)
    )
    return UndirectedGraph(g.vertex_count, edges)


def forward_edge_order(g: UndirectedGraph) -> list[int]:
    """Edge ids listing one member of each conjugate pair, then all conjugates.

    For a graph built from pairs this yields the ordering (1, 2, ..., m,
    conj 1, ..., conj m).
    """
    firsts = [e.id for e in g.edges if e.id < e.conjugate]
    return firsts + [g.conj(e) for e in firsts]


def to_bipartite(g: UndirectedGraph) -> BipartiteGraph:
    """Place a degree-2 check on each undirected edge.

    Bits are the vertices of ``g``; each conjugate edge pair becomes one
    check.  Bipartite edge ids equal the undirected edge ids, so matrices
    built from either object line up.
    """
    pair_min = sorted(e.id for e in g.edges if e.id < e.conjugate)
    check_of_pair = {m: k for k, m in enumerate(pair_min)}
    edges = tuple(
        BipartiteEdge(e.id, e.source, check_of_pair[min(e.id, e.conjugate)])
        for e in g.edges
    )
    return BipartiteGraph(g.vertex_count, len(pair_min), edges)


def to_undirected(b: BipartiteGraph) -> BipartiteGraph | UndirectedGraph:
    """Remove degree-2 checks, pairing the two edges at each check.

    Inverse of :func:`to_bipartite` up to check relabeling; edge ids are
    preserved.  Raises :class:`CheckDegreeError` if any check degree is not 2.
    """
    conj = b.conjugate_by_check()
    edges = tuple(
        Edge(e.id, e.bit, b.edges[conj[e.id]].bit, conj[e.id]) for e in b.edges
    )
    return UndirectedGraph(b.bits, edges)


def flow_graph(g: UndirectedGraph) -> FlowGraph:
    """Non-backtracking continuation graph on the edges of ``g``."""
    arcs = []
    for e in g.edges:
        for f in g.out_edges[e.terminus]:
            if f != e.conjugate:
                arcs.append((e.id, f))
    return FlowGraph(g.edge_count, tuple(arcs))


def validate(b: BipartiteGraph) -> ValidationReport:
    """Check the hypotheses used by the spectral convergence analysis."""
    checks_ok = all(d == 2 for d in b.check_degrees)
    if b.bits:
        min_deg = min(b.bit_degrees)
        max_deg = max(b.bit_degrees)
    else:
        min_deg = max_deg = 0
    connected = _bipartite_connected(b)
    applicable = connected and checks_ok and min_deg >= 2 and max_deg >= 3
    return ValidationReport(
        connected=connected,
        all_checks_degree2=checks_ok,
        min_bit_degree=min_deg,
        max_bit_degree=max_deg,
        has_degree_ge3_bit=max_deg >= 3,
        spa_theory_applicable=applicable,
    )


def _bipartite_connected(b: BipartiteGraph) -> bool:
    total = b.bits + b.checks
    if total <= 1:
        return True
    # nodes 0..bits-1 are bits, bits..bits+checks-1 are checks
    adj: list[list[int]] = [[] for _ in range(total)]
    for e in b.edges:
        adj[e.bit].append(b.bits + e.check)
        adj[b.bits + e.check].append(e.bit)
    seen = [False] * total
    queue = deque([0])
    seen[0] = True
    count = 1
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if not seen[v]:
                seen[v] = True
                count += 1
                queue.append(v)
    return count == total


def _reachable_all(n: int, neighbors) -> bool:
    seen = [False] * n
    seen[0] = True
    queue = deque([0])
    count = 1
    while queue:
        u = queue.popleft()
        for v in neighbors[u]:
            if not seen[v]:
                seen[v] = True
                count += 1
                queue.append(v)
    return count == n


def is_strongly_connected(fg: FlowGraph) -> bool:
    """True when every flow vertex reaches every other along arcs."""
    if fg.vertex_count == 0:
        return True
    return _reachable_all(fg.vertex_count, fg.out_neighbors) and _reachable_all(
        fg.vertex_count, fg.in_neighbors
    )


def _bfs_levels(fg: FlowGraph) -> list[int]:
    levels = [-1] * fg.vertex_count
    levels[0] = 0
    queue = deque([0])
    while queue:
        u = queue.popleft()
        for v in fg.out_neighbors[u]:
            if levels[v] < 0:
                levels[v] = levels[u] + 1
                queue.append(v)
    return levels


def imprimitivity_index(fg: FlowGraph) -> int:
    """gcd of all directed cycle lengths of a strongly connected flow graph.

    Computed from one breadth-first search: every arc (u, v) closes a walk of
    length level(u) + 1 - level(v) against the tree, and the gcd of those
    defects over all arcs equals the cycle-length gcd.
    """
    if not is_strongly_connected(fg):
        raise NotStronglyConnectedError("imprimitivity index needs a strongly connected flow graph")
    levels = _bfs_levels(fg)
    h = 0
    for u, v in fg.arcs:
        h = gcd(h, levels[u] + 1 - levels[v])
    return h if h > 0 else 1


def cyclic_partition(fg: FlowGraph, h: int) -> tuple[tuple[int, ...], ...]:
    """Split flow vertices into h classes E_1..E_h so arcs step downward.

    Every arc goes from E_{i+1} to E_i, wrapping from E_1 to E_h.  The
    partition is canonicalized so flow vertex 0 lies in E_1.  Raises
    :class:`InvalidIndexError` when h does not divide all cycle lengths.
    """
    if h < 1:
        raise InvalidIndexError(f"index must be positive, got {h}")
    if not is_strongly_connected(fg):
        raise NotStronglyConnectedError("cyclic partition needs a strongly connected flow graph")
    levels = _bfs_levels(fg)
    classes = [(-levels[v]) % h for v in range(fg.vertex_count)]
    for u, v in fg.arcs:
        if (classes[u] - 1) % h != classes[v]:
            raise InvalidIndexError(f"{h} does not divide all cycle lengths")
    out: list[list[int]] = [[] for _ in range(h)]
    for v in range(fg.vertex_count):
        out[classes[v]].append(v)
    return tuple(tuple(c) for c in out)


def _min_rotation(seq: tuple[int, ...]) -> tuple[int, ...]:
    return min(seq[i:] + seq[:i] for i in range(len(seq)))


def enumerate_admissible_cycles(g: UndirectedGraph, max_len: int) -> Counter:
    """Multiset of closed non-backtracking cycle lengths, up to rotation.

    A cycle is a closed edge sequence where consecutive edges never undo each
    other, including across the wrap-around.  Cycles that differ only by the
    starting edge are identified, so a triangle contributes two 3-cycles, one
    per orientation.
    """
    seen: set[tuple[int, ...]] = set()
    edges = g.edges

    def extend(path: list[int]):
        last = edges[path[-1]]
        first = edges[path[0]]
        if last.terminus == first.source and first.id != last.conjugate:
            seen.add(_min_rotation(tuple(path)))
        if len(path) == max_len:
            return
        for f in g.out_edges[last.terminus]:
            if f != last.conjugate:
                path.append(f)
                extend(path)
                path.pop()

    for e in range(g.edge_count):
        extend([e])
    return Counter(len(c) for c in seen)


def directed_cycle_lengths(fg: FlowGraph, max_len: int) -> Counter:
    """Multiset of directed cycle lengths of ``fg``, up to rotation.

    Companion to :func:`enumerate_admissible_cycles`: the two multisets agree
    because cycles in the flow graph correspond length-for-length to
    completely admissible cycles in the underlying graph.
    """
    seen: set[tuple[int, ...]] = set()

    def extend(path: list[int]):
        if path[0] in fg.out_neighbors[path[-1]]:
            seen.add(_min_rotation(tuple(path)))
        if len(path) == max_len:
            return
        for v in fg.out_neighbors[path[-1]]:
            path.append(v)
            extend(path)
            path.pop()

    for v in range(fg.vertex_count):
        extend([v])
    return Counter(len(c) for c in seen)
