"""Monte Carlo channel simulation for the decoder.

BPSK over AWGN with per-symbol SNR: bit 0 maps to +1, bit 1 to -1, and
sigma^2 = 10^(-snr_db/10) / 2 under unit symbol energy.  The received
value y gives log odds -2y/sigma^2.  The transmitted word defaults to
all-zero; decoder symmetry (negating the log odds flips the outcome) is a
test, not an assumption.

The graphs here encode exactly two words (all-zero and all-one when
connected), so per-symbol SNR understates the energy cost per information
bit by a factor of n.  run_trials accepts snr_unit="bit" to read the grid
as energy per information bit: the per-symbol value is then
snr - 10 log10(n_bits), which is where these small graphs show measurable
error rates on a conventional-looking dB axis.

Every cell of the (epsilon, snr) grid draws its noise up front from a
generator seeded with (seed, eps index, snr index), so records never
depend on execution order or thread count, and graphs with equal bit
counts at the same cell see identical noise (paired comparison).
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass

import numpy as np

from .decoder import DecodeStatus, spa_log_run_batch
from .errors import ValidationError
from .generators import generate
from .graphs import BipartiteGraph, UndirectedGraph, to_bipartite, validate


@dataclass(frozen=True)
class ChannelConfig:
    """AWGN channel at a given per-symbol SNR, with all-zero default word."""

    snr_db: float
    seed: int
    transmitted: tuple[int, ...] | None = None

    @property
    def sigma(self) -> float:
        return math.sqrt(10 ** (-self.snr_db / 10) / 2)


def awgn_odds(cfg: ChannelConfig, n_bits: int) -> np.ndarray:
    """One channel realization as a log-odds vector; fixed seed, fixed draw."""
    word = np.zeros(n_bits, dtype=np.int8) if cfg.transmitted is None else np.array(cfg.transmitted, dtype=np.int8)
    if word.shape != (n_bits,):
        raise ValueError(f"transmitted word length {word.shape} != {n_bits}")
    sigma = cfg.sigma
    rng = np.random.default_rng(cfg.seed)
    y = (1.0 - 2.0 * word) + rng.normal(0.0, sigma, n_bits)
    return -2.0 * y / sigma**2


@dataclass(frozen=True)
class SimRecord:
    """Aggregated decode results for one (graph, epsilon, snr) cell."""

    graph: str
    epsilon: float
    snr_db: float
    trials: int
    word_errors: int
    nonconvergences: int
    avg_iterations: float

    @property
    def wer(self) -> float:
        return self.word_errors / self.trials

    @property
    def ncr(self) -> float:
        return self.nonconvergences / self.trials

    @property
    def failure_rate(self) -> float:
        # a decode that never returns the sent word, by wrong output or by
        # running out of iterations; the quantity performance curves track
        return (self.word_errors + self.nonconvergences) / self.trials


def _as_bipartite(graph) -> tuple[str, BipartiteGraph]:
    if isinstance(graph, str):
        return graph, to_bipartite(generate(graph))
    if isinstance(graph, UndirectedGraph):
        return "graph", to_bipartite(graph)
    if isinstance(graph, BipartiteGraph):
        return "graph", graph
    raise TypeError(f"cannot interpret {type(graph).__name__} as a graph")


def run_trials(
    graph,
    eps_list,
    snr_grid,
    trials: int,
    seed: int,
    graph_id: str | None = None,
    max_iter: int = 200,
    transmitted=None,
    snr_unit: str = "symbol",
) -> list[SimRecord]:
    """Decode `trials` noisy words per (epsilon, snr) cell.

    Word errors are decodes that converged away from the transmitted word;
    nonconvergences are decodes that ran out (numeric escapes count there
    too, none are expected in log domain).  With snr_unit="bit" the grid is
    energy per information bit; records keep the grid values either way.
    """
    if snr_unit not in ("symbol", "bit"):
        raise ValidationError(f"unknown snr unit {snr_unit!r}")
    name, b = _as_bipartite(graph)
    if graph_id is not None:
        name = graph_id
    report = validate(b)
    if not report.spa_theory_applicable:
        raise ValidationError("graph outside scope: " + "; ".join(report.failures()))
    if trials < 1:
        raise ValidationError("trial count must be positive")
    eps_list = list(eps_list)
    snr_grid = list(snr_grid)
    if not eps_list or not snr_grid:
        raise ValidationError("need at least one epsilon and one snr value")
    word = (
        np.zeros(b.bits, dtype=np.int8)
        if transmitted is None
        else np.array(transmitted, dtype=np.int8)
    )
    if word.shape != (b.bits,):
        raise ValidationError("transmitted word length does not match bit count")
    symbols = 1.0 - 2.0 * word
    shift = 10.0 * math.log10(b.bits) if snr_unit == "bit" else 0.0
    records = []
    for ei, eps in enumerate(eps_list):
        for si, snr in enumerate(snr_grid):
            sigma = ChannelConfig(snr_db=snr - shift, seed=0).sigma
            rng = np.random.default_rng((seed, ei, si))
            y = symbols[None, :] + rng.normal(0.0, sigma, (trials, b.bits))
            log_u = -2.0 * y / sigma**2
            batch = spa_log_run_batch(b, log_u, eps, max_iter)
            converged = np.array(
                [s is DecodeStatus.CONVERGED for s in batch.status], dtype=bool
            )
            wrong = np.any(batch.words != word[None, :], axis=1)
            records.append(
                SimRecord(
                    graph=name,
                    epsilon=float(eps),
                    snr_db=float(snr),
                    trials=trials,
                    word_errors=int(np.sum(converged & wrong)),
                    nonconvergences=int(np.sum(~converged)),
                    avg_iterations=float(np.mean(batch.iterations)),
                )
            )
    return records


def _fmt(x: float) -> str:
    return "%.12g" % x


_CSV_HEADER = "graph,epsilon,snr_db,trials,wer,ncr,avg_iters"


def summarize(records) -> str:
    """Render records as CSV, one row per cell, rates as fractions."""
    lines = [_CSV_HEADER]
    for r in records:
        lines.append(
            ",".join(
                [
                    r.graph,
                    _fmt(r.epsilon),
                    _fmt(r.snr_db),
                    str(r.trials),
                    _fmt(r.wer),
                    _fmt(r.ncr),
                    _fmt(r.avg_iterations),
                ]
            )
        )
    return "\n".join(lines) + "\n"


def read_records(text: str) -> list[SimRecord]:
    """Parse CSV produced by :func:`summarize` back into records."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != _CSV_HEADER:
        raise ValueError("missing or unexpected CSV header")
    out = []
    for ln in lines[1:]:
        parts = ln.split(",")
        if len(parts) != 7:
            raise ValueError(f"bad CSV row: {ln!r}")
        graph, eps, snr, trials, wer, ncr, avg = parts
        n = int(trials)
        out.append(
            SimRecord(
                graph=graph,
                epsilon=float(eps),
                snr_db=float(snr),
                trials=n,
                word_errors=round(float(wer) * n),
                nonconvergences=round(float(ncr) * n),
                avg_iterations=float(avg),
            )
        )
    return out


def _curve(records, epsilon: float, metric: str):
    pts = sorted(
        (r.snr_db, getattr(r, metric))
        for r in records
        if r.epsilon == epsilon
    )
    snr = np.array([p[0] for p in pts])
    rate = np.array([p[1] for p in pts])
    keep = rate > 0
    return snr[keep], rate[keep]


def horizontal_gap(
    records_a,
    records_b,
    epsilon: float,
    metric: str = "failure_rate",
    levels: int = 25,
) -> float:
    """Average dB offset between two rate curves at matched error rates.

    Positive when curve b sits to the right of (needs more SNR than)
    curve a.  Rates are interpolated linearly in log10, inverted over the
    overlapping rate range.
    """
    snr_a, rate_a = _curve(records_a, epsilon, metric)
    snr_b, rate_b = _curve(records_b, epsilon, metric)
    if len(snr_a) < 2 or len(snr_b) < 2:
        raise ValueError("need at least two positive-rate points per curve")
    la, lb = np.log10(rate_a), np.log10(rate_b)
    lo = max(la.min(), lb.min())
    hi = min(la.max(), lb.max())
    if not lo < hi:
        raise ValueError("curves do not overlap in rate")
    grid = np.linspace(lo, hi, levels)

    def invert(levels_, lrate, snr):
        # log-rate decreases along snr; flip for np.interp
        return np.interp(levels_, lrate[::-1], snr[::-1])

    return float(np.mean(invert(grid, lb, snr_b) - invert(grid, la, snr_a)))


def plot_svg(records, path: str, metric: str = "failure_rate") -> None:
    """Write one SVG with a log-rate curve per (graph, epsilon)."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(7, 5))
    keys = sorted({(r.graph, r.epsilon) for r in records})
    for graph, eps in keys:
        sub = [r for r in records if r.graph == graph and r.epsilon == eps]
        sub.sort(key=lambda r: r.snr_db)
        snr = [r.snr_db for r in sub]
        rate = [getattr(r, metric) for r in sub]
        ax.plot(snr, rate, marker="o", label=f"{graph} eps={eps:g}")
    ax.set_yscale("log")
    ax.set_xlabel("SNR (dB)")
    ax.set_ylabel(metric.replace("_", " "))
    ax.grid(True, which="both", alpha=0.3)
    ax.legend(fontsize=8)
    buf = io.BytesIO()
    fig.savefig(buf, format="svg")
    plt.close(fig)
    with open(path, "wb") as fh:
        fh.write(buf.getvalue())
