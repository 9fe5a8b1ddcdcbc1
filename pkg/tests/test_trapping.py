"""Leaf augmentation, core classification, and the equivalence check."""

from fractions import Fraction

import numpy as np
import pytest

import spaflow as sf
from spaflow.decoder import estimates, init_messages, spa_step
from spaflow.errors import ValidationError
from spaflow.graphs import BipartiteEdge, BipartiteGraph
from spaflow.trapping import (
    CoreKind,
    augment,
    classify,
    effective_input,
    genuine_leaf_mask,
    log_effective_input,
    run_trapset_trials,
    strip,
    verify_trapset_theorem,
)

from conftest import bipartite, summary


def with_pendant_checks(core, bits):
    """Hang a degree-1 check on each listed bit of a core bipartite graph."""
    edges = list(core.edges)
    checks = core.checks
    for b in bits:
        edges.append(BipartiteEdge(len(edges), b, checks))
        checks += 1
    return BipartiteGraph(core.bits, checks, tuple(edges))


# --- classification -------------------------------------------------------


def test_classify_recognizes_analysis_ready_cores():
    core = bipartite("ts53_girth8")
    sub = with_pendant_checks(core, [1, 2, 3])
    info = classify(sub)
    assert info.a == 5
    assert info.b == 3
    assert info.core_kind is CoreKind.SPA_APPLICABLE
    assert sorted(tuple(sorted(p)) for p in info.core.pair_list()) == sorted(
        tuple(sorted(p)) for p in sf.to_undirected(core).pair_list()
    )


def test_classify_recognizes_plain_cycles():
    core = bipartite("triangle")
    sub = with_pendant_checks(core, [0])
    info = classify(sub)
    assert info.a == 3
    assert info.b == 1
    assert info.core_kind is CoreKind.CYCLE


def test_classify_rejects_heavy_checks():
    pairs = [(b, 0) for b in range(3)] + [(0, 1), (1, 2)]
    sub = BipartiteGraph(3, 3, tuple(BipartiteEdge(i, b, c) for i, (b, c) in enumerate(pairs)))
    info = classify(sub)
    assert info.core_kind is CoreKind.OTHER


def test_ts62_core_is_analysis_ready():
    sub = with_pendant_checks(bipartite("ts62"), [0, 2])
    info = classify(sub)
    assert info.a == 6
    assert info.b == 2
    assert info.core_kind is CoreKind.SPA_APPLICABLE


# --- augmentation structure -----------------------------------------------


def test_augment_block_structure():
    base = bipartite("ts53_girth6")
    aug = augment(base)
    n = base.bits
    assert len(aug.leaf_edges) == n
    assert len(aug.return_edges) == n
    assert len(aug.core_edges) == base.edge_count
    assert aug.augmented.bits == base.bits + n
    assert aug.augmented.checks == base.checks + n

    k = sf.build_structural(aug.augmented).flow_adjacency
    leaf = np.array(aug.leaf_edges)
    ret = np.array(aug.return_edges)
    core = np.array(aug.core_edges)
    # leaves only feed, returns only drain
    assert np.all(k[leaf, :] == 0)
    assert np.all(k[:, ret] == 0)
    # the core block is exactly the base flow matrix
    base_k = sf.build_structural(base).flow_adjacency
    assert np.array_equal(k[np.ix_(core, core)], base_k)


def test_augment_subset_and_strip_round_trip():
    base = bipartite("ts53_girth8")
    aug = augment(base, bits=[1, 3])
    assert aug.augmented_bits == (1, 3)
    back = strip(aug)
    assert back.bits == base.bits and back.checks == base.checks
    assert [(e.bit, e.check) for e in back.edges] == [(e.bit, e.check) for e in base.edges]


def test_augment_requires_an_analysis_ready_base():
    with pytest.raises(ValidationError):
        augment(bipartite("tree6"))


def test_assemble_log_input_layout():
    base = bipartite("ts53_girth8")
    aug = augment(base, bits=[0, 4])
    lu = np.arange(5.0)
    lup = 10.0 + np.arange(5.0)
    full = aug.assemble_log_input(lu, lup)
    np.testing.assert_array_equal(full, [0.0, 1.0, 2.0, 3.0, 4.0, 10.0, 14.0])
    with pytest.raises(ValueError):
        aug.assemble_log_input(lu[:3], lup)


# --- the equivalence itself -----------------------------------------------


def test_neutral_leaves_do_not_disturb_core_messages():
    # u' = 1 on every leaf must reproduce the bare-core estimates exactly;
    # checked in rational arithmetic so equality is literal
    base = bipartite("ts53_girth8")
    aug = augment(base)
    u_core = [Fraction(2, 3), Fraction(5, 2), Fraction(1, 4), Fraction(7, 5), Fraction(3, 8)]
    u_full = list(u_core) + [Fraction(1)] * base.bits

    m_core = init_messages(base)
    m_full = init_messages(aug.augmented)
    for _ in range(8):
        m_core = spa_step(base, u_core, m_core)
        m_full = spa_step(aug.augmented, u_full, m_full)
        est_core = estimates(base, u_core, m_core)
        est_full = estimates(aug.augmented, u_full, m_full)
        assert est_full[: base.bits] == est_core


def test_effective_input_combines_streams():
    u = np.array([2.0, 0.5])
    up = np.array([3.0, 1.0])
    rho = 1.5
    np.testing.assert_allclose(effective_input(u, up, rho), up * u**rho)
    np.testing.assert_allclose(
        log_effective_input(np.log(u), np.log(up), rho),
        np.log(up) + rho * np.log(u),
    )


def test_verify_trapset_theorem_on_fixed_inputs():
    base = bipartite("ts53_girth6")
    rng = np.random.default_rng(23)
    checked = 0
    for _ in range(40):
        u = np.exp(rng.uniform(np.log(0.1), np.log(10), base.bits))
        up = np.exp(rng.uniform(np.log(0.1), np.log(10), base.bits))
        report = verify_trapset_theorem(base, u, up)
        if report.match is None:
            continue
        checked += 1
        assert report.match
    assert checked >= 30


def test_run_trapset_trials_all_genuine():
    stats = run_trapset_trials(bipartite("ts53_girth8"), 60, seed=4)
    assert stats.trials == 60
    assert stats.agreement >= 0.95
    assert len(stats.rows) == 60
    trial, verdict, status, match = stats.rows[0]
    assert isinstance(verdict, str) and isinstance(status, str)


def test_run_trapset_trials_with_leaf_mask():
    base = bipartite("ts53_girth8")
    mask = genuine_leaf_mask(base)
    np.testing.assert_array_equal(mask, [False, True, True, True, False])
    stats = run_trapset_trials(base, 40, seed=5, genuine=mask)
    assert stats.agreement >= 0.95


def test_genuine_leaf_mask_degree_threshold():
    base = bipartite("ts53_girth8")
    np.testing.assert_array_equal(
        genuine_leaf_mask(base, max_ambient_degree=4), [True] * 5
    )
    with pytest.raises(ValueError):
        run_trapset_trials(base, 0, seed=1)
