"""Named graph fixtures and parameterized families.

Every generator returns an :class:`~spaflow.graphs.UndirectedGraph` with
edges in construction order (pair i becomes edges 2i and 2i+1).  Fixture
edge lists for the hand-drawn graphs are fixed here once and validated by
structural properties in the test suite, not by visual fidelity.
"""

from __future__ import annotations

import re

from .errors import UnknownGeneratorError
from .graphs import UndirectedGraph, build_undirected, forward_edge_order, reorder_edges


def complete(n: int) -> UndirectedGraph:
    """Complete simple graph on n vertices."""
    return build_undirected(
        [(i, j) for i in range(n) for j in range(i + 1, n)], vertex_count=n
    )


def dipole(m: int) -> UndirectedGraph:
    """Two vertices joined by m parallel edges."""
    return build_undirected([(0, 1)] * m, vertex_count=2)


def triangle() -> UndirectedGraph:
    return complete(3)


def petersen() -> UndirectedGraph:
    """Outer 5-cycle 0..4, inner pentagram 5..9, spokes i -- i+5."""
    pairs = []
    for i in range(5):
        pairs.append((i, (i + 1) % 5))
    for i in range(5):
        pairs.append((i, i + 5))
    for i in range(5):
        pairs.append((5 + i, 5 + (i + 2) % 5))
    return build_undirected(pairs, vertex_count=10)


def tree6() -> UndirectedGraph:
    """A 6-vertex tree; its flow graph is not strongly connected."""
    return build_undirected([(0, 2), (1, 2), (2, 3), (3, 4), (3, 5)], vertex_count=6)


def example_5_2() -> UndirectedGraph:
    """Three vertices: a doubled edge 0--1 plus the path 0--2--1.

    The flow graph is primitive; its growth rate is the positive root of
    x^3 - x^2 - 2.
    """
    return build_undirected([(0, 1), (0, 1), (0, 2), (2, 1)], vertex_count=3)


def example_5_3() -> UndirectedGraph:
    """Eleven vertices, two of them degree-6 hubs, with an apex gadget on top.

    Hubs 0 and 1 are joined by four length-2 paths (through 7, 8, 9, 10) and
    both attach to the spine vertex 2.  The apex 3 reaches the rest through
    three connectors: 4 down to hub 0, 5 down to hub 1, and 6 down to the
    spine.  Built as a counterexample to "higher degree means more influence":
    the degree-3 apex carries a smaller influence weight than the degree-2
    vertices at the bottom (c[3] < c[7]).
    """
    pairs = [
        (3, 4), (3, 6), (3, 5),
        (4, 0), (6, 2), (5, 1),
        (2, 0), (2, 1),
        (7, 0), (7, 1),
        (8, 0), (8, 1),
        (9, 0), (9, 1),
        (10, 0), (10, 1),
    ]
    return build_undirected(pairs, vertex_count=11)


def fig5_a() -> UndirectedGraph:
    """Two degree-3 vertices joined by three length-2 paths; index 4."""
    return ts53_girth8()


def fig5_b() -> UndirectedGraph:
    """Center vertex on two triangles sharing only the center; index 3."""
    return build_undirected(
        [(1, 2), (3, 4), (0, 1), (0, 2), (0, 3), (0, 4)], vertex_count=5
    )


def fig5_c() -> UndirectedGraph:
    """Two degree-3 vertices joined by three length-3 paths; index 6."""
    pairs = [(0, 1), (0, 2), (0, 3), (1, 4), (2, 5), (3, 6), (7, 4), (7, 5), (7, 6)]
    return build_undirected(pairs, vertex_count=8)


def ts53_girth8() -> UndirectedGraph:
    """Core of the (5, 3) trapping set whose bipartite form has girth 8.

    Vertex 0 on top, 4 on the bottom, middles 1..3; all cycles have length
    divisible by 4.
    """
    return build_undirected(
        [(0, 1), (0, 2), (0, 3), (4, 1), (4, 2), (4, 3)], vertex_count=5
    )


def ts53_girth8_block_order() -> UndirectedGraph:
    """Same graph with edges ordered so the flow adjacency is block-cyclic.

    Order: the three top-down edges, their conjugates, the three bottom-up
    edges, their conjugates.  The four groups are the cyclic classes.
    """
    g = ts53_girth8()
    return reorder_edges(g, [0, 2, 4, 1, 3, 5, 6, 8, 10, 7, 9, 11])


def ts53_girth6() -> UndirectedGraph:
    """Core of the (5, 3) trapping set with bipartite girth 6.

    A triangle 0-1-2 with a path 1-3-4-2 closing a 4-cycle; the mixed cycle
    lengths make the flow graph primitive.
    """
    return build_undirected(
        [(0, 1), (0, 2), (1, 2), (1, 3), (2, 4), (3, 4)], vertex_count=5
    )


def ts62() -> UndirectedGraph:
    """Core of the (6, 2) trapping set: a 3 x 2 grid."""
    return build_undirected(
        [(0, 1), (1, 2), (0, 3), (1, 4), (2, 5), (3, 4), (4, 5)], vertex_count=6
    )


def cover2_dipole3() -> UndirectedGraph:
    """Connected 2-cover of dipole(3): doubled edges 0--1 and 2--3 plus a
    4-cycle through all fibers."""
    return build_undirected(
        [(0, 1), (0, 1), (0, 3), (1, 2), (2, 3), (2, 3)], vertex_count=4
    )


def cover3_girth4() -> UndirectedGraph:
    """The girth-4 connected 3-cover of dipole(3); isomorphic to K_{3,3}."""
    pairs = [(0, 1), (0, 3), (0, 5), (1, 2), (1, 4), (2, 3), (2, 5), (3, 4), (4, 5)]
    return build_undirected(pairs, vertex_count=6)


def cover3_two2cycles() -> UndirectedGraph:
    """Connected 3-cover of dipole(3) with two doubled edges."""
    pairs = [(0, 1), (0, 1), (0, 3), (1, 2), (2, 3), (2, 5), (3, 4), (4, 5), (4, 5)]
    return build_undirected(pairs, vertex_count=6)


def cover3_three2cycles() -> UndirectedGraph:
    """Connected 3-cover of dipole(3) with three doubled edges."""
    pairs = [(0, 1), (0, 1), (0, 5), (1, 2), (2, 3), (2, 3), (3, 4), (4, 5), (4, 5)]
    return build_undirected(pairs, vertex_count=6)


_NAMED = {
    "triangle": triangle,
    "petersen": petersen,
    "tree6": tree6,
    "example_5_2": example_5_2,
    "example_5_3": example_5_3,
    "fig5_a": fig5_a,
    "fig5_b": fig5_b,
    "fig5_c": fig5_c,
    "ts53_girth8": ts53_girth8,
    "ts53_girth8_block_order": ts53_girth8_block_order,
    "ts53_girth6": ts53_girth6,
    "ts62": ts62,
    "cover2_dipole3": cover2_dipole3,
    "cover3_girth4": cover3_girth4,
    "cover3_two2cycles": cover3_two2cycles,
    "cover3_three2cycles": cover3_three2cycles,
}


def generator_names() -> list[str]:
    """All fixed fixture names (families like k4 / dipole5 are matched by pattern)."""
    return sorted(_NAMED)


def generate(name: str) -> UndirectedGraph:
    """Look up a fixture by name.

    Fixed names are listed by :func:`generator_names`; ``kN`` or ``completeN``
    gives the complete graph and ``dipoleN`` the N-fold dipole.
    """
    if name in _NAMED:
        return _NAMED[name]()
    m = re.fullmatch(r"(?:k|complete)(\d+)", name)
    if m:
        return complete(int(m.group(1)))
    m = re.fullmatch(r"dipole(\d+)", name)
    if m:
        return dipole(int(m.group(1)))
    raise UnknownGeneratorError(f"unknown generator {name!r}")
