"""Sum-product decoding over the repetition-style codes cut out by
degree-2 check nodes.

Messages live on edges as odds ratios p(1)/p(0).  One iteration sends
bit-to-check messages x, check-to-bit messages y, and per-bit estimates;
for a degree-2 check the check step reduces to swapping each message with
its conjugate, which is why every message stays a monomial in the input
odds.  :func:`local_sum_run` tracks those integer exponents directly.

Production decoding runs in the log-odds domain (:func:`spa_log_run`),
where the iteration is plain addition and never overflows at realistic
iteration counts; the reference odds-domain :func:`spa_step` accepts exact
`fractions.Fraction` inputs for the algebraic tests.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import CheckDegreeError, NumericEscapeError
from .graphs import BipartiteGraph
from .spectral import build_structural

_LOG_CLAMP = 700.0  # |log| bound keeping exp() inside float range


def transform_s(x):
    """The check-node transform s(x) = (1 - x) / (1 + x).

    Maps odds to the difference domain: s(0) = 1, s(1) = 0, s(inf) = -1.
    Applying it twice returns the argument.  Rejects negative input; exact
    on Fraction arguments.
    """
    if x == math.inf:
        return -1.0
    if x < 0:
        raise ValueError(f"transform_s needs a nonnegative argument, got {x!r}")
    return (1 - x) / (1 + x)


class DecodeStatus(enum.Enum):
    CONVERGED = "Converged"
    MAX_ITERATIONS = "MaxIterations"
    NUMERIC_ESCAPE = "NumericEscape"


@dataclass(frozen=True)
class DecodeOutcome:
    status: DecodeStatus
    codeword: tuple[int, ...] | None  # set only when converged
    iterations: int
    final_log_estimates: np.ndarray


@dataclass(frozen=True)
class MessageState:
    """Edge messages after t iterations; y is all ones at t = 0."""

    x: tuple
    y: tuple
    t: int


def init_messages(b: BipartiteGraph) -> MessageState:
    ones = (1,) * b.edge_count
    return MessageState(x=ones, y=ones, t=0)


def _bad_float(v) -> bool:
    return isinstance(v, float) and not math.isfinite(v)


def _s_raw(x):
    # internal: same map without the domain guard, used on products that
    # legitimately land in [-1, 1]
    return (1 - x) / (1 + x)


def spa_step(b: BipartiteGraph, u, m: MessageState) -> MessageState:
    """One full odds-domain iteration: bit step, check step, t + 1.

    Works for any check degrees.  With float inputs an overflow to inf/nan
    raises :class:`NumericEscapeError`; Fraction inputs stay exact.
    """
    if len(u) != b.bits:
        raise ValueError(f"input length {len(u)} != bit count {b.bits}")
    x = [None] * b.edge_count
    for e in b.edges:
        v = u[e.bit]
        for f in b.edges_by_bit[e.bit]:
            if f != e.id:
                v = v * m.y[f]
        if _bad_float(v):
            raise NumericEscapeError(f"bit-to-check message overflowed at edge {e.id}")
        x[e.id] = v
    y = [None] * b.edge_count
    for e in b.edges:
        p = 1
        for f in b.edges_by_check[e.check]:
            if f != e.id:
                p = p * _s_raw(x[f])
        try:
            v = _s_raw(p)
        except ZeroDivisionError:
            # float rounding can push the product to exactly -1
            raise NumericEscapeError(
                f"check-to-bit message overflowed at edge {e.id}"
            ) from None
        if _bad_float(v):
            raise NumericEscapeError(f"check-to-bit message overflowed at edge {e.id}")
        y[e.id] = v
    return MessageState(x=tuple(x), y=tuple(y), t=m.t + 1)


def estimates(b: BipartiteGraph, u, m: MessageState) -> list:
    """Per-bit estimates u_l times the product of incident y messages."""
    out = []
    for bit in range(b.bits):
        v = u[bit]
        for f in b.edges_by_bit[bit]:
            v = v * m.y[f]
        out.append(v)
    return out


@lru_cache(maxsize=128)
def _edge_index(b: BipartiteGraph):
    """Arrays for the vectorized log-domain iteration, cached per graph."""
    bit_of = np.array([e.bit for e in b.edges], dtype=np.int64)
    order = np.argsort(bit_of, kind="stable")
    sorted_bits = bit_of[order]
    nonempty, starts = np.unique(sorted_bits, return_index=True)
    degree2 = all(d == 2 for d in b.check_degrees)
    conj = (
        np.array(b.conjugate_by_check(), dtype=np.int64) if degree2 else None
    )
    return bit_of, order, starts, nonempty, conj


def _bit_sums(ly: np.ndarray, b: BipartiteGraph) -> np.ndarray:
    """Row-wise sums of ly grouped by bit; shape (rows, bits)."""
    bit_of, order, starts, nonempty, _ = _edge_index(b)
    s = np.zeros((ly.shape[0], b.bits))
    if order.size:
        s[:, nonempty] = np.add.reduceat(ly[:, order], starts, axis=1)
    return s


@dataclass(frozen=True)
class BatchOutcome:
    """Vectorized decode results, one row per input vector."""

    status: np.ndarray  # object array of DecodeStatus
    words: np.ndarray  # parity of the final estimates
    iterations: np.ndarray
    final_log_estimates: np.ndarray

    def outcome(self, i: int) -> DecodeOutcome:
        st = self.status[i]
        word = tuple(int(w) for w in self.words[i]) if st is DecodeStatus.CONVERGED else None
        return DecodeOutcome(
            status=st,
            codeword=word,
            iterations=int(self.iterations[i]),
            final_log_estimates=self.final_log_estimates[i],
        )


def spa_log_run_batch(
    b: BipartiteGraph, log_u: np.ndarray, eps: float, max_iter: int = 200
) -> BatchOutcome:
    """Decode many log-odds inputs at once on a degree-2-check graph.

    Termination mirrors the scalar runner: a row stops when all its
    estimates sit below log(eps) or all sit above -log(eps).  Estimates at
    exactly zero never terminate a row.  Rows are retired as they finish,
    so oscillating inputs cost max_iter sweeps only for themselves.
    """
    if not (0 < eps < 1):
        raise ValueError(f"eps must lie in (0, 1), got {eps}")
    if max_iter < 1:
        raise ValueError("max_iter must be at least 1")
    bit_of, _, _, _, conj = _edge_index(b)
    if conj is None:
        raise CheckDegreeError("batch decoding needs every check to have degree 2")
    log_u = np.atleast_2d(np.asarray(log_u, dtype=float))
    if log_u.shape[1] != b.bits:
        raise ValueError(f"input width {log_u.shape[1]} != bit count {b.bits}")
    n_rows = log_u.shape[0]
    log_eps = math.log(eps)

    status = np.full(n_rows, DecodeStatus.MAX_ITERATIONS, dtype=object)
    words = np.zeros((n_rows, b.bits), dtype=np.int8)
    iterations = np.full(n_rows, max_iter, dtype=np.int64)
    final = np.zeros((n_rows, b.bits))

    active = np.arange(n_rows)
    lu = log_u.copy()
    ly = np.zeros((n_rows, b.edge_count))
    lhat = lu.copy()
    t = 0
    # messages on oscillating rows grow without bound until the escape
    # check retires them, so float overflow here is expected, not a bug
    with np.errstate(over="ignore", invalid="ignore"):
        while active.size and t < max_iter:
            t += 1
            sums = _bit_sums(ly, b)
            lx = lu[:, bit_of] + sums[:, bit_of] - ly
            ly = lx[:, conj]
            lhat = lu + _bit_sums(ly, b)
            zero = np.all(lhat < log_eps, axis=1)
            one = np.all(lhat > -log_eps, axis=1)
            escaped = ~np.all(np.isfinite(ly), axis=1)
            done = zero | one | escaped
            if np.any(done):
                idx = active[done]
                status[idx] = DecodeStatus.CONVERGED
                if np.any(escaped):
                    status[active[escaped]] = DecodeStatus.NUMERIC_ESCAPE
                words[idx] = (lhat[done] > 0).astype(np.int8)
                iterations[idx] = t
                final[idx] = lhat[done]
                keep = ~done
                active, lu, ly, lhat = active[keep], lu[keep], ly[keep], lhat[keep]
    if active.size:
        final[active] = lhat
        words[active] = (lhat > 0).astype(np.int8)
    return BatchOutcome(
        status=status, words=words, iterations=iterations, final_log_estimates=final
    )


def _log_s_clamped(lx: np.ndarray) -> np.ndarray:
    # odds from clamped log-odds; the transform then stays inside floats
    return _s_raw(np.exp(np.clip(lx, -_LOG_CLAMP, _LOG_CLAMP)))


def spa_log_run(
    b: BipartiteGraph, log_u, eps: float, max_iter: int = 200
) -> DecodeOutcome:
    """Log-domain decode of one input vector.

    Degree-2-check graphs use the vectorized path where the check step is a
    conjugate swap.  Other degrees fall back to a per-check product of
    s-transformed messages with |log| clamped at 700.
    """
    log_u = np.asarray(log_u, dtype=float)
    _, _, _, _, conj = _edge_index(b)
    if conj is not None:
        return spa_log_run_batch(b, log_u[None, :], eps, max_iter).outcome(0)
    if not (0 < eps < 1):
        raise ValueError(f"eps must lie in (0, 1), got {eps}")
    if log_u.shape != (b.bits,):
        raise ValueError(f"input shape {log_u.shape} != ({b.bits},)")
    log_eps = math.log(eps)
    bit_of = np.array([e.bit for e in b.edges], dtype=np.int64)
    ly = np.zeros(b.edge_count)
    lhat = log_u.copy()
    for t in range(1, max_iter + 1):
        sums = _bit_sums(ly[None, :], b)[0]
        lx = log_u[bit_of] + sums[bit_of] - ly
        sx = _log_s_clamped(lx)
        for check, group in enumerate(b.edges_by_check):
            for e in group:
                p = 1.0
                for f in group:
                    if f != e:
                        p *= sx[f]
                # saturated messages make p land on -1 exactly; treat as +clamp
                if p == -1.0:
                    ly[e] = _LOG_CLAMP
                    continue
                y = _s_raw(p)
                ly[e] = np.clip(
                    math.log(y) if y > 0 else -math.inf, -_LOG_CLAMP, _LOG_CLAMP
                )
        lhat = log_u + _bit_sums(ly[None, :], b)[0]
        if np.all(lhat < log_eps) or np.all(lhat > -log_eps):
            return DecodeOutcome(
                status=DecodeStatus.CONVERGED,
                codeword=tuple(int(v > 0) for v in lhat),
                iterations=t,
                final_log_estimates=lhat,
            )
    return DecodeOutcome(
        status=DecodeStatus.MAX_ITERATIONS,
        codeword=None,
        iterations=max_iter,
        final_log_estimates=lhat,
    )


def spa_run(b: BipartiteGraph, u, eps: float, max_iter: int = 200) -> DecodeOutcome:
    """Decode odds input u; all internal arithmetic is log-domain."""
    u = np.asarray(u, dtype=float)
    if np.any(u <= 0) or not np.all(np.isfinite(u)):
        raise ValueError("odds input must be positive and finite")
    return spa_log_run(b, np.log(u), eps, max_iter)


def log_message_trajectory(
    b: BipartiteGraph, log_u, t_max: int
) -> list[np.ndarray]:
    """Bit-to-check log messages after 1..t_max iterations (degree-2 checks).

    Returned list entry t-1 holds log x at iteration t; used to compare the
    iteration against its exponent-matrix closed form.
    """
    bit_of, _, _, _, conj = _edge_index(b)
    if conj is None:
        raise CheckDegreeError("message trajectories need degree-2 checks")
    log_u = np.asarray(log_u, dtype=float)
    ly = np.zeros((1, b.edge_count))
    lu = log_u[None, :]
    out = []
    for _ in range(t_max):
        sums = _bit_sums(ly, b)
        lx = lu[:, bit_of] + sums[:, bit_of] - ly
        ly = lx[:, conj]
        out.append(lx[0].copy())
    return out


@dataclass(frozen=True)
class ExponentMatrix:
    """Integer exponents a_e of each input odds in each edge message.

    Row e of ``a`` gives the exponent vector of x_e at iteration t, so
    log x_e = a_e . log u exactly.  Entries are exact integers; beyond
    iteration 30 they are Python ints to dodge fixed-width overflow.
    """

    a: np.ndarray
    t: int


def local_sum_run(b: BipartiteGraph, t: int) -> ExponentMatrix:
    """Iterate the exponent recursion A <- Lam + K A from A = 0, t times."""
    if t < 0:
        raise ValueError("iteration count must be nonnegative")
    m = build_structural(b)
    dtype = object if t > 30 else np.int64
    lam = m.bit_incidence.astype(dtype)
    k = m.flow_adjacency.astype(dtype)
    a = np.zeros((b.edge_count, b.bits), dtype=dtype)
    for _ in range(t):
        a = lam + k @ a
    return ExponentMatrix(a=a, t=t)
