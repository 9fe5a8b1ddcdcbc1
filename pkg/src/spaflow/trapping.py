"""Trapping-set cores and leaf augmentation.

A trapping subgraph is handed over as a bipartite graph whose checks have
degree 1 or 2.  :func:`classify` strips the degree-1 checks and reports
the core.  :func:`augment` attaches one leaf bit through a fresh degree-2
check to each core bit; running the decoder on the augmented graph feeds
ambient messages into the core through the leaf inputs.

The leaf input u' enters every core message one iteration later than the
core input u.  Message growth is geometric with ratio rho per iteration,
so the delayed factor is worth 1/rho of the prompt one in the limit; with
a primitive core the augmented decoder behaves exactly like the core
decoder on the combined input u'_i * u_i**rho (:func:`effective_input`).
When the core is imprimitive the late stream also lags one cyclic class
behind, which the predictor handles through its delayed-input channel.
:func:`verify_trapset_theorem` checks the equivalence on concrete inputs
and :func:`run_trapset_trials` measures it over random ones.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .decoder import DecodeOutcome, DecodeStatus, spa_log_run, spa_log_run_batch
from .errors import ValidationError
from .graphs import (
    BipartiteEdge,
    BipartiteGraph,
    UndirectedGraph,
    to_undirected,
    validate,
)
from .spectral import Prediction, SpectralSummary, Verdict, build_structural, perron, predict_log


class CoreKind(enum.Enum):
    CYCLE = "Cycle"
    SPA_APPLICABLE = "SpaApplicable"
    OTHER = "Other"


@dataclass(frozen=True)
class TrappingSetInfo:
    """Shape report for a trapping subgraph.

    ``a`` counts bit nodes, ``b`` the degree-1 checks.  ``core`` is the
    undirected graph left after dropping the degree-1 checks; None when a
    check of degree above 2 blocks the conversion.
    """

    a: int
    b: int
    core: UndirectedGraph | None
    core_kind: CoreKind
    note: str = ""


def classify(sub: BipartiteGraph) -> TrappingSetInfo:
    degs = sub.check_degrees
    a = sub.bits
    b = sum(1 for d in degs if d == 1)
    heavy = [c for c, d in enumerate(degs) if d > 2]
    if heavy:
        return TrappingSetInfo(
            a=a,
            b=b,
            core=None,
            core_kind=CoreKind.OTHER,
            note=f"checks of degree above 2: {heavy}",
        )
    keep = [c for c, d in enumerate(degs) if d == 2]
    remap = {c: i for i, c in enumerate(keep)}
    kept_edges = [e for e in sub.edges if degs[e.check] == 2]
    core_bip = BipartiteGraph(
        bits=a,
        checks=len(keep),
        edges=tuple(
            BipartiteEdge(id=i, bit=e.bit, check=remap[e.check])
            for i, e in enumerate(kept_edges)
        ),
    )
    core = to_undirected(core_bip)
    report = validate(core_bip)
    if report.connected and all(d == 2 for d in core_bip.bit_degrees):
        kind = CoreKind.CYCLE
        note = "every core node has degree 2"
    elif report.spa_theory_applicable:
        kind = CoreKind.SPA_APPLICABLE
        note = ""
    else:
        kind = CoreKind.OTHER
        note = "; ".join(report.failures())
    return TrappingSetInfo(a=a, b=b, core=core, core_kind=kind, note=note)


@dataclass(frozen=True)
class AugmentedGraph:
    """A core graph with a leaf bit hung off each augmented bit.

    Edge order of ``augmented``: first the leaf-side edges (one per
    augmented bit, messages leave the leaf), then every edge of ``base``
    in its own order, then the return edges into the leaves.  With that
    order the flow matrix is block lower triangular: zero rows for the
    leaf-side edges and zero columns for the return edges.
    """

    base: BipartiteGraph
    augmented: BipartiteGraph
    augmented_bits: tuple[int, ...]  # base bits carrying a leaf
    leaf_bits: tuple[int, ...]  # new bit index per entry of augmented_bits
    leaf_edges: tuple[int, ...]  # E_1 in the augmented edge order
    core_edges: tuple[int, ...]  # E
    return_edges: tuple[int, ...]  # E_2

    def assemble_log_input(self, log_u, log_u_prime) -> np.ndarray:
        """Full log-odds vector over the augmented bits.

        ``log_u`` runs over base bits, ``log_u_prime`` as well; only the
        augmented bits' entries of ``log_u_prime`` are consumed.
        """
        log_u = np.asarray(log_u, dtype=float)
        log_u_prime = np.asarray(log_u_prime, dtype=float)
        if log_u.shape[-1] != self.base.bits or log_u_prime.shape[-1] != self.base.bits:
            raise ValueError("inputs must have one entry per base bit")
        idx = np.array(self.augmented_bits, dtype=np.int64)
        return np.concatenate([log_u, log_u_prime[..., idx]], axis=-1)


def augment(base: BipartiteGraph, bits=None) -> AugmentedGraph:
    """Attach a leaf bit via a new degree-2 check to each listed base bit.

    ``bits`` defaults to every bit.  Raises ValidationError when the base
    graph does not support the spectral analysis the construction exists
    for.
    """
    report = validate(base)
    if not report.spa_theory_applicable:
        raise ValidationError(
            "base graph outside scope: " + "; ".join(report.failures())
        )
    if bits is None:
        bits = range(base.bits)
    aug_bits = tuple(dict.fromkeys(int(i) for i in bits))
    for i in aug_bits:
        if not (0 <= i < base.bits):
            raise ValidationError(f"bit index {i} out of range")
    n = len(aug_bits)
    n_core = base.edge_count
    edges = []
    for pos in range(n):
        edges.append(
            BipartiteEdge(id=pos, bit=base.bits + pos, check=base.checks + pos)
        )
    for e in base.edges:
        edges.append(BipartiteEdge(id=n + e.id, bit=e.bit, check=e.check))
    for pos, bit in enumerate(aug_bits):
        edges.append(
            BipartiteEdge(id=n + n_core + pos, bit=bit, check=base.checks + pos)
        )
    augmented = BipartiteGraph(
        bits=base.bits + n, checks=base.checks + n, edges=tuple(edges)
    )
    return AugmentedGraph(
        base=base,
        augmented=augmented,
        augmented_bits=aug_bits,
        leaf_bits=tuple(range(base.bits, base.bits + n)),
        leaf_edges=tuple(range(n)),
        core_edges=tuple(range(n, n + n_core)),
        return_edges=tuple(range(n + n_core, n + n_core + n)),
    )


def strip(a: AugmentedGraph) -> BipartiteGraph:
    """Rebuild the base graph from the augmented one; exact inverse."""
    n = len(a.augmented_bits)
    core = [a.augmented.edges[i] for i in a.core_edges]
    return BipartiteGraph(
        bits=a.base.bits,
        checks=a.base.checks,
        edges=tuple(
            BipartiteEdge(id=e.id - n, bit=e.bit, check=e.check) for e in core
        ),
    )


def effective_input(u, u_prime, rho: float) -> np.ndarray:
    """Combined core input u'_i * u_i**rho seen by the augmented decoder."""
    u = np.asarray(u, dtype=float)
    u_prime = np.asarray(u_prime, dtype=float)
    if np.any(u <= 0) or np.any(u_prime <= 0):
        raise ValueError("odds inputs must be positive")
    return u_prime * u**rho


def log_effective_input(log_u, log_u_prime, rho: float) -> np.ndarray:
    return np.asarray(log_u_prime, dtype=float) + rho * np.asarray(log_u, dtype=float)


@dataclass(frozen=True)
class TrapsetReport:
    """One augmented decode against the core predictor."""

    prediction: Prediction
    outcome: DecodeOutcome
    match: bool | None  # None when the predictor refuses to call it
    margin: float


def _agrees(p: Prediction, status: DecodeStatus, word) -> bool | None:
    if p.verdict is Verdict.BOUNDARY:
        return None
    if p.verdict is Verdict.NONCONVERGENT:
        return status is DecodeStatus.MAX_ITERATIONS
    if status is not DecodeStatus.CONVERGED:
        return False
    want = 0 if p.verdict is Verdict.ZERO else 1
    return all(w == want for w in word)


def verify_trapset_theorem(
    base: BipartiteGraph,
    u,
    u_prime,
    eps: float = 1e-8,
    max_iter: int = 500,
    summary: SpectralSummary | None = None,
) -> TrapsetReport:
    """Decode the augmented graph and compare with the core predictor.

    The predictor runs on the base graph with the effective input; the
    decoder runs on the fully augmented graph with u on the core bits and
    u' on the leaves.
    """
    if summary is None:
        summary = perron(build_structural(base))
    log_u = np.log(np.asarray(u, dtype=float))
    log_up = np.log(np.asarray(u_prime, dtype=float))
    pred = predict_log(summary, log_u, log_u_delayed=log_up)
    aug = augment(base)
    outcome = spa_log_run(
        aug.augmented, aug.assemble_log_input(log_u, log_up), eps, max_iter
    )
    return TrapsetReport(
        prediction=pred,
        outcome=outcome,
        match=_agrees(pred, outcome.status, outcome.codeword),
        margin=pred.margin,
    )


@dataclass(frozen=True)
class TrialStats:
    """Aggregate of randomized theorem checks."""

    trials: int
    matches: int
    rows: tuple[tuple[int, str, str, bool], ...]  # trial, verdict, status, match

    @property
    def agreement(self) -> float:
        return self.matches / self.trials if self.trials else 1.0


def run_trapset_trials(
    base: BipartiteGraph,
    n_trials: int,
    seed: int,
    genuine=None,
    margin: float = 0.05,
    eps: float = 1e-8,
    max_iter: int = 500,
) -> TrialStats:
    """Randomized agreement estimate for the augmentation equivalence.

    Draws log-odds uniformly on [log 0.1, log 10] per bit for u and for u'
    on the genuine leaves (others stay at 1), keeps pairs whose predicted
    margin reaches ``margin``, and batch decodes the keepers.  ``genuine``
    is a boolean mask over base bits; default all genuine.
    """
    if n_trials < 1:
        raise ValueError("need at least one trial")
    summary = perron(build_structural(base))
    aug = augment(base)
    if genuine is None:
        genuine_mask = np.ones(base.bits, dtype=bool)
    else:
        genuine_mask = np.asarray(genuine, dtype=bool)
        if genuine_mask.shape != (base.bits,):
            raise ValueError("genuine mask must have one flag per base bit")
    rng = np.random.default_rng(seed)
    lo, hi = np.log(0.1), np.log(10.0)
    kept_u: list[np.ndarray] = []
    kept_up: list[np.ndarray] = []
    preds: list[Prediction] = []
    attempts = 0
    while len(preds) < n_trials:
        attempts += 1
        if attempts > 1000 * n_trials:
            raise ValueError("margin filter rejected nearly all inputs")
        log_u = rng.uniform(lo, hi, base.bits)
        log_up = np.where(genuine_mask, rng.uniform(lo, hi, base.bits), 0.0)
        pred = predict_log(summary, log_u, log_u_delayed=log_up)
        if pred.verdict is Verdict.BOUNDARY or pred.margin < margin:
            continue
        kept_u.append(log_u)
        kept_up.append(log_up)
        preds.append(pred)
    inputs = np.stack(
        [aug.assemble_log_input(lu, lup) for lu, lup in zip(kept_u, kept_up)]
    )
    batch = spa_log_run_batch(aug.augmented, inputs, eps, max_iter)
    rows = []
    matches = 0
    for i, pred in enumerate(preds):
        out = batch.outcome(i)
        ok = _agrees(pred, out.status, out.codeword)
        matches += bool(ok)
        rows.append((i, pred.verdict.value, out.status.value, bool(ok)))
    return TrialStats(trials=n_trials, matches=matches, rows=tuple(rows))


def genuine_leaf_mask(base: BipartiteGraph, max_ambient_degree: int = 3) -> np.ndarray:
    """Leaves that stand in for real ambient checks.

    In an ambient code of the given bit degree, a core bit already at full
    degree has no room for another check, so its leaf goes neutral (u'=1).
    """
    return np.array([d < max_ambient_degree for d in base.bit_degrees], dtype=bool)
