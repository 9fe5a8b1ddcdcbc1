"""Graph containers, conversions, and walk machinery."""

import numpy as np
import pytest

import spaflow as sf
from spaflow.errors import GraphError


def norm_pairs(g):
    return sorted(tuple(sorted(p)) for p in g.pair_list())


def test_build_undirected_conjugate_pairing():
    g = sf.build_undirected([(0, 1), (1, 2), (0, 2)])
    assert g.vertex_count == 3
    assert g.edge_count == 6
    for e in g.edges:
        assert g.conj(g.conj(e.id)) == e.id
        assert g.edges[e.conjugate].source == e.terminus
        assert g.edges[e.conjugate].terminus == e.source
    # pair p occupies ids 2p (forward) and 2p+1 (reverse)
    assert g.edges[0].conjugate == 1
    assert g.edges[4].conjugate == 5


def test_build_undirected_infers_vertex_count_and_keeps_multiplicity():
    g = sf.build_undirected([(0, 1), (0, 1), (1, 3)])
    assert g.vertex_count == 4
    assert sorted(g.pair_list()) == [(0, 1), (0, 1), (1, 3)]
    assert g.degrees == (2, 3, 0, 1)


def test_build_undirected_rejects_out_of_range_ids():
    with pytest.raises(GraphError):
        sf.build_undirected([(0, 5)], vertex_count=3)


def test_to_bipartite_puts_degree2_check_on_each_pair():
    g = sf.generate("k4")
    b = sf.to_bipartite(g)
    assert b.bits == g.vertex_count
    assert b.checks == len(g.pair_list())
    assert all(d == 2 for d in b.check_degrees)
    assert tuple(b.bit_degrees) == g.degrees
    # the two arcs of a check are conjugate and point at its two endpoints
    conj = b.conjugate_by_check()
    for c in range(b.checks):
        e, f = b.edges_by_check[c]
        assert conj[e] == f and conj[f] == e
        assert {b.edges[e].bit, b.edges[f].bit} == set(g.pair_list()[c])


def test_to_undirected_round_trip():
    g = sf.generate("ts62")
    back = sf.to_undirected(sf.to_bipartite(g))
    assert sorted(back.pair_list()) == sorted(g.pair_list())
    assert back.vertex_count == g.vertex_count


def test_reorder_edges_relabels_without_touching_incidence():
    g = sf.generate("ts53_girth8")
    order = sf.forward_edge_order(g)
    h = sf.reorder_edges(g, order)
    assert sorted(h.pair_list()) == sorted(g.pair_list())
    # forward block first, conjugates second, pairing preserved
    m = g.edge_count // 2
    for p in range(m):
        assert h.conj(p) == p + m
    with pytest.raises(GraphError):
        sf.reorder_edges(g, [0, 0, 1])


def test_flow_graph_arcs_are_nonbacktracking_continuations():
    g = sf.generate("example_5_2")
    fg = sf.flow_graph(g)
    expected = set()
    for e in g.edges:
        for f in g.out_edges[e.terminus]:
            if f != e.conjugate:
                expected.add((e.id, f))
    assert set(fg.arcs) == expected
    for e, fs in enumerate(fg.out_neighbors):
        assert all((e, f) in expected for f in fs)


def test_flow_adjacency_rows_index_the_receiving_edge(struct):
    # K[e, f] = 1 exactly when the flow graph has the arc f -> e
    for name in ["example_5_2", "ts53_girth6", "k4"]:
        g = sf.generate(name)
        fg = sf.flow_graph(g)
        a = np.zeros((g.edge_count, g.edge_count), dtype=int)
        for e, f in fg.arcs:
            a[e, f] = 1
        assert np.array_equal(struct(name).flow_adjacency, a.T)


def test_strong_connectivity():
    # a single cycle splits into two one-way orientation loops
    assert not sf.is_strongly_connected(sf.flow_graph(sf.generate("triangle")))
    for name in ["k4", "dipole3", "ts53_girth8", "petersen"]:
        assert sf.is_strongly_connected(sf.flow_graph(sf.generate(name)))


@pytest.mark.parametrize(
    "name,h",
    [
        ("k4", 1),
        ("petersen", 1),
        ("ts53_girth6", 1),
        ("dipole3", 2),
        ("ts62", 2),
        ("ts53_girth8", 4),
    ],
)
def test_imprimitivity_index(name, h):
    assert sf.imprimitivity_index(sf.flow_graph(sf.generate(name))) == h


def test_cyclic_partition_classes_advance_in_order():
    g = sf.generate("ts53_girth8")
    fg = sf.flow_graph(g)
    h = sf.imprimitivity_index(fg)
    part = sf.cyclic_partition(fg, h)
    assert h == 4
    assert sorted(e for cls in part for e in cls) == list(range(g.edge_count))
    assert [len(cls) for cls in part] == [3, 3, 3, 3]
    cls_of = {}
    for j, cls in enumerate(part):
        for e in cls:
            cls_of[e] = j
    # classes are ordered so messages feed class j from class j+1: every
    # continuation arc e -> f drops the class index by one
    for e, f in fg.arcs:
        assert cls_of[f] == (cls_of[e] - 1) % h


def test_cycle_lengths_match_between_walk_styles():
    # closed non-backtracking walks in the graph vs directed cycles of its
    # continuation graph, counted with multiplicity
    for name in ["k4", "dipole3", "ts53_girth6", "example_5_2"]:
        g = sf.generate(name)
        adm = sf.enumerate_admissible_cycles(g, 8)
        direct = sf.directed_cycle_lengths(sf.flow_graph(g), 8)
        assert adm == direct


def test_cycle_length_gcd_equals_imprimitivity_index():
    import math

    for name in ["k4", "dipole3", "ts53_girth8", "ts62", "fig5_b"]:
        g = sf.generate(name)
        fg = sf.flow_graph(g)
        lengths = list(sf.directed_cycle_lengths(fg, 12))
        assert math.gcd(*lengths) == sf.imprimitivity_index(fg)


def test_validate_flags():
    ok = sf.validate(sf.to_bipartite(sf.generate("k4")))
    assert ok.spa_theory_applicable and not ok.failures()

    tree = sf.validate(sf.to_bipartite(sf.generate("tree6")))
    assert not tree.spa_theory_applicable
    assert tree.min_bit_degree == 1

    tri = sf.validate(sf.to_bipartite(sf.generate("triangle")))
    assert not tri.spa_theory_applicable
    assert not tri.has_degree_ge3_bit

    two_parts = sf.build_undirected([(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
    rep = sf.validate(sf.to_bipartite(two_parts))
    assert not rep.connected
