"""Message passing: exact small-case behavior, termination, batch paths."""

import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

import spaflow as sf
from spaflow.decoder import (
    DecodeStatus,
    estimates,
    init_messages,
    local_sum_run,
    log_message_trajectory,
    spa_log_run,
    spa_log_run_batch,
    spa_run,
    spa_step,
    transform_s,
)
from spaflow.errors import NumericEscapeError
from spaflow.graphs import BipartiteEdge, BipartiteGraph

from conftest import bipartite


# --- the s transform ------------------------------------------------------


def test_transform_s_special_values():
    assert transform_s(0) == 1.0
    assert transform_s(1) == 0.0
    assert transform_s(float("inf")) == -1.0
    assert transform_s(Fraction(3, 7)) == Fraction(2, 5)
    with pytest.raises(ValueError):
        transform_s(-0.25)


@given(st.floats(min_value=0.0, max_value=1.0))
def test_transform_s_is_an_involution_below_one(x):
    # s maps [0, 1] onto itself; odds above 1 go negative, outside the
    # guarded domain, so the double application is only defined here
    assert transform_s(transform_s(x)) == pytest.approx(x, rel=1e-12, abs=1e-15)


@given(st.fractions(min_value=0, max_value=1))
def test_transform_s_involution_exact_on_rationals(q):
    assert transform_s(transform_s(q)) == q


@given(st.floats(min_value=1.0, max_value=1e8, exclude_min=True))
def test_transform_s_goes_negative_above_one(x):
    v = transform_s(x)
    assert -1.0 <= v < 0.0
    with pytest.raises(ValueError):
        transform_s(v)


# --- exact message algebra ------------------------------------------------


def frac_u(b):
    primes = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31]
    return [Fraction(primes[l % len(primes)], primes[(l + 3) % len(primes)]) for l in range(b.bits)]


def test_check_step_is_conjugate_swap():
    # with degree-2 checks, s(s(x)) = x makes the outgoing check message the
    # incoming message from the paired edge, exactly
    b = bipartite("ts53_girth8")
    conj = b.conjugate_by_check()
    u = frac_u(b)
    m = init_messages(b)
    for _ in range(4):
        m = spa_step(b, u, m)
        for e in range(b.edge_count):
            assert m.y[e] == m.x[conj[e]]


def test_messages_are_monomials_with_integer_exponents():
    # the iteration must agree exactly with u ** A where A follows the
    # independent integer recursion A <- Lam + K A
    for name in ["example_5_2", "ts53_girth8", "k4"]:
        b = bipartite(name)
        u = frac_u(b)
        m = init_messages(b)
        for t in range(1, 7):
            m = spa_step(b, u, m)
            a = local_sum_run(b, t).a
            for e in range(b.edge_count):
                expected = Fraction(1)
                for l in range(b.bits):
                    expected *= u[l] ** int(a[e, l])
                assert m.x[e] == expected


def test_estimates_multiply_all_incident_messages():
    b = bipartite("example_5_2")
    u = frac_u(b)
    m = init_messages(b)
    m = spa_step(b, u, m)
    m = spa_step(b, u, m)
    est = estimates(b, u, m)
    for l in range(b.bits):
        expected = u[l]
        for f in b.edges_by_bit[l]:
            expected *= m.y[f]
        assert est[l] == expected


def test_local_sum_run_matches_matrix_closed_form():
    # A(t) = (sum_{i<t} K^i) Lam, in exact integer arithmetic out to t = 20
    for name in ["example_5_2", "ts53_girth8", "dipole3"]:
        b = bipartite(name)
        m = sf.build_structural(b)
        k = m.flow_adjacency.astype(object)
        lam = m.bit_incidence.astype(object)
        acc = np.zeros_like(lam)
        power = np.eye(k.shape[0], dtype=object)
        for t in range(1, 21):
            acc = acc + power @ lam
            power = power @ k
            got = local_sum_run(b, t).a
            assert np.array_equal(np.asarray(got, dtype=object), acc)


def test_log_trajectory_matches_exponent_matrix():
    b = bipartite("ts53_girth8")
    rng = np.random.default_rng(5)
    log_u = tuple(rng.uniform(-2, 2, b.bits))
    traj = log_message_trajectory(b, log_u, 8)
    lu = np.asarray(log_u)
    for t in range(1, 9):
        want = local_sum_run(b, t).a.astype(float) @ lu
        np.testing.assert_allclose(traj[t - 1], want, rtol=1e-9, atol=1e-12)


# --- termination and status ----------------------------------------------


def test_uniform_evidence_converges_both_ways():
    b = bipartite("ts53_girth8")
    low = spa_run(b, [0.01] * b.bits, eps=1e-8)
    assert low.status is DecodeStatus.CONVERGED
    assert low.codeword == (0,) * b.bits
    high = spa_run(b, [100.0] * b.bits, eps=1e-8)
    assert high.status is DecodeStatus.CONVERGED
    assert high.codeword == (1,) * b.bits
    assert low.iterations == high.iterations


def test_split_evidence_keeps_iterating():
    # the classic stuck case: one strong vote each way on the 3-fold dipole
    b = bipartite("dipole3")
    out = spa_run(b, [2.0, 0.6], eps=1e-8, max_iter=500)
    assert out.status is DecodeStatus.MAX_ITERATIONS
    assert out.codeword is None
    assert out.iterations == 500


def test_oscillation_eventually_escapes_float_range():
    b = bipartite("dipole3")
    out = spa_run(b, [2.0, 0.6], eps=1e-8, max_iter=3000)
    assert out.status is DecodeStatus.NUMERIC_ESCAPE
    assert out.iterations < 3000


def test_negating_log_input_complements_the_decision():
    b = bipartite("ts53_girth6")
    rng = np.random.default_rng(11)
    logs = rng.normal(0.0, 1.5, size=(40, b.bits))
    pos = spa_log_run_batch(b, logs, eps=1e-8, max_iter=300)
    neg = spa_log_run_batch(b, -logs, eps=1e-8, max_iter=300)
    for i in range(40):
        assert pos.status[i] is neg.status[i]
        assert pos.iterations[i] == neg.iterations[i]
        if pos.status[i] is DecodeStatus.CONVERGED:
            assert np.array_equal(pos.words[i], 1 - neg.words[i])


def test_batch_rows_match_scalar_runs():
    b = bipartite("ts53_girth8")
    rng = np.random.default_rng(3)
    logs = rng.normal(0.0, 2.0, size=(30, b.bits))
    batch = spa_log_run_batch(b, logs, eps=1e-6, max_iter=400)
    for i in range(30):
        one = spa_log_run(b, logs[i], eps=1e-6, max_iter=400)
        got = batch.outcome(i)
        assert got.status is one.status
        assert got.iterations == one.iterations
        assert got.codeword == one.codeword
        np.testing.assert_allclose(
            got.final_log_estimates, one.final_log_estimates, rtol=1e-12, atol=1e-12
        )


def test_input_validation():
    b = bipartite("ts53_girth8")
    with pytest.raises(ValueError):
        spa_run(b, [0.5] * (b.bits - 1), eps=1e-4)
    with pytest.raises(ValueError):
        spa_run(b, [0.5, -1.0, 0.5, 0.5, 0.5], eps=1e-4)
    with pytest.raises(ValueError):
        spa_run(b, [0.5] * b.bits, eps=1.5)
    with pytest.raises(ValueError):
        spa_log_run_batch(b, np.zeros((2, b.bits)), eps=0.0)


def test_float_overflow_in_exact_step_raises():
    b = bipartite("dipole3")
    m = init_messages(b)
    u = [1e300, 1e-300]
    with pytest.raises(NumericEscapeError):
        for _ in range(50):
            m = spa_step(b, u, m)


# --- general check degrees (fallback path) --------------------------------


def heavy_check_graph():
    # 3 bits, 2 checks, both checks touch every bit: degree-3 checks
    pairs = [(b, c) for c in range(2) for b in range(3)]
    edges = tuple(BipartiteEdge(i, b, c) for i, (b, c) in enumerate(pairs))
    return BipartiteGraph(3, 2, edges)


def test_fallback_decode_agrees_with_reference_loop():
    b = heavy_check_graph()
    u = [0.3, 0.4, 0.2]
    eps = 1e-6
    out = spa_log_run(b, np.log(u), eps=eps, max_iter=100)

    m = init_messages(b)
    ref_iters = None
    for t in range(1, 101):
        m = spa_step(b, u, m)
        est = estimates(b, u, m)
        if all(v < eps for v in est) or all(v > 1 / eps for v in est):
            ref_iters = t
            break
    assert out.status is DecodeStatus.CONVERGED
    assert out.codeword == (0, 0, 0)
    assert out.iterations == ref_iters
    ref_m = init_messages(b)
    for _ in range(out.iterations):
        ref_m = spa_step(b, u, ref_m)
    np.testing.assert_allclose(
        np.exp(out.final_log_estimates),
        np.asarray(estimates(b, u, ref_m), dtype=float),
        rtol=1e-9,
    )
