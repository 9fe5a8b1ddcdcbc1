"""Command-line front end.

Subcommands: gen, analyze, decode, predict, spectrum, simulate, verify.
Graph arguments accept a generator name or a .ug/.bg path.  Exit codes:
0 success, 1 verification mismatch, 2 invalid input or out-of-scope
graph.  All numbers print with 12 significant digits.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from .decoder import DecodeStatus, spa_log_run
from .errors import SpaflowError
from .generators import generator_names
from .graph_io import (
    format_ug,
    load_bipartite,
    load_undirected,
    parse_odds,
    read_odds,
)
from .graphs import flow_graph, is_strongly_connected, to_bipartite, validate
from .graphs import directed_cycle_lengths, enumerate_admissible_cycles
from .sim import plot_svg, run_trials, summarize
from .spectral import build_structural, full_spectrum, perron, predict_log
from .trapping import run_trapset_trials
from . import __version__


def _fmt(x: float) -> str:
    return "%.12g" % x


def _odds_arg(value: str) -> np.ndarray:
    if os.path.exists(value):
        return read_odds(value)
    return parse_odds(value, inline=True)


def _cmd_gen(args) -> int:
    g = load_undirected(args.name)
    text = format_ug(g)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_analyze(args) -> int:
    g = load_undirected(args.graph)
    b = to_bipartite(g)
    report = validate(b)
    if not report.spa_theory_applicable:
        for reason in report.failures():
            print(f"hypothesis failure: {reason}", file=sys.stderr)
        return 2
    m = build_structural(b)
    s = perron(m)
    k = np.asarray(m.flow_adjacency, dtype=float)
    res_z = float(np.max(np.abs(k @ s.z - s.rho * s.z)))
    res_y = float(np.max(np.abs(s.y_star @ k - s.rho * s.y_star)))
    fields = [
        ("graph", args.graph),
        ("edges", str(m.edge_count)),
        ("bits", str(m.bit_count)),
        ("strongly_connected", "1"),
        ("rho", _fmt(s.rho)),
        ("h", str(s.h)),
        ("partition_sizes", ";".join(str(len(p)) for p in s.partition)),
        ("c", ";".join(_fmt(v) for v in s.c)),
        ("residual_right", _fmt(res_z)),
        ("residual_left", _fmt(res_y)),
    ]
    if args.format == "csv":
        print(",".join(k_ for k_, _ in fields))
        print(",".join(v for _, v in fields))
    else:
        for key, val in fields:
            print(f"{key}: {val}")
    return 0


def _status_word(outcome) -> str:
    if outcome.status is DecodeStatus.CONVERGED:
        word = "".join(str(w) for w in outcome.codeword)
        return f"CONVERGED {word} iters={outcome.iterations}"
    name = outcome.status.value.upper()
    return f"{name} iters={outcome.iterations}"


def _cmd_decode(args) -> int:
    b = load_bipartite(args.graph)
    u = _odds_arg(args.u)
    if u.shape[0] != b.bits:
        raise SpaflowError(f"odds length {u.shape[0]} != bit count {b.bits}")
    outcome = spa_log_run(b, np.log(u), args.eps, args.max_iter)
    print(_status_word(outcome))
    return 0


def _cmd_predict(args) -> int:
    b = load_bipartite(args.graph)
    u = _odds_arg(args.u)
    if u.shape[0] != b.bits:
        raise SpaflowError(f"odds length {u.shape[0]} != bit count {b.bits}")
    s = perron(build_structural(b))
    pred = predict_log(s, np.log(u), tol=args.tol)
    logus = ";".join(_fmt(v) for v in pred.exponents)
    print(f"{pred.verdict.value.upper()} margin={_fmt(pred.margin)} logU={logus}")
    return 0


def _cmd_spectrum(args) -> int:
    b = load_bipartite(args.graph)
    spec = full_spectrum(build_structural(b))
    vals = sorted(spec.values, key=lambda v: (round(v.real, 9), round(v.imag, 9)))
    for v in vals:
        print(f"{_fmt(v.real)} {_fmt(v.imag)}")
    return 0


def _parse_grid(text: str) -> list[float]:
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise SpaflowError(f"grid must be start:step:stop, got {text!r}")
        start, step, stop = (float(p) for p in parts)
        if step <= 0:
            raise SpaflowError("grid step must be positive")
        n = int(round((stop - start) / step))
        return [start + i * step for i in range(n + 1) if start + i * step <= stop + 1e-9]
    return [float(p) for p in text.split(",") if p.strip()]


def _cmd_simulate(args) -> int:
    eps_list = [float(p) for p in args.eps.split(",") if p.strip()]
    snr_grid = _parse_grid(args.snr)
    records = run_trials(
        args.graph,
        eps_list,
        snr_grid,
        trials=args.trials,
        seed=args.seed,
        max_iter=args.max_iter,
        snr_unit=args.snr_unit,
    )
    csv_text = summarize(records)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(csv_text)
    else:
        sys.stdout.write(csv_text)
    if args.svg:
        plot_svg(records, args.svg)
    return 0


def _cmd_verify(args) -> int:
    if args.kind == "cycles":
        g = load_undirected(args.graph)
        ours = enumerate_admissible_cycles(g, args.maxlen)
        flows = directed_cycle_lengths(flow_graph(g), args.maxlen)
        lengths = sorted(set(ours) | set(flows))
        print("length,admissible,directed")
        ok = True
        for n in lengths:
            a, d = ours.get(n, 0), flows.get(n, 0)
            ok &= a == d
            print(f"{n},{a},{d}")
        print(f"agreement={'1' if ok else '0'}", file=sys.stderr)
        return 0 if ok else 1
    if args.kind == "trapset":
        b = load_bipartite(args.graph)
        if args.genuine is None:
            mask = None
        else:
            degrees = np.array(b.bit_degrees)
            order = np.argsort(degrees, kind="stable")
            mask = np.zeros(b.bits, dtype=bool)
            mask[order[: args.genuine]] = True
        stats = run_trapset_trials(
            b,
            args.trials,
            seed=args.seed,
            genuine=mask,
            margin=args.margin,
            eps=args.eps,
            max_iter=args.max_iter,
        )
        print("trial,predicted,decoded,match")
        for trial, pred, status, ok in stats.rows:
            print(f"{trial},{pred},{status},{int(ok)}")
        print(f"agreement={_fmt(stats.agreement)}", file=sys.stderr)
        return 0 if stats.agreement >= 0.99 else 1
    if args.kind == "predictor":
        b = load_bipartite(args.graph)
        report = validate(b)
        if not report.spa_theory_applicable:
            raise SpaflowError("graph outside scope: " + "; ".join(report.failures()))
        s = perron(build_structural(b))
        rng = np.random.default_rng(args.seed)
        lo, hi = np.log(0.1), np.log(10.0)
        print("trial,predicted,decoded,match")
        matches = 0
        kept = 0
        attempts = 0
        while kept < args.trials:
            attempts += 1
            if attempts > 1000 * args.trials:
                raise SpaflowError("margin filter rejected nearly all inputs")
            log_u = rng.uniform(lo, hi, b.bits)
            pred = predict_log(s, log_u)
            if pred.margin < args.margin:
                continue
            outcome = spa_log_run(b, log_u, args.eps, args.max_iter)
            want = pred.verdict.value
            got = outcome.status.value
            if outcome.status is DecodeStatus.CONVERGED:
                ok = (want == "Zero" and all(w == 0 for w in outcome.codeword)) or (
                    want == "One" and all(w == 1 for w in outcome.codeword)
                )
            else:
                ok = want == "NonConvergent" and outcome.status is DecodeStatus.MAX_ITERATIONS
            print(f"{kept},{want},{got},{int(ok)}")
            matches += ok
            kept += 1
        agreement = matches / args.trials
        print(f"agreement={_fmt(agreement)}", file=sys.stderr)
        return 0 if agreement >= 0.99 else 1
    raise SpaflowError(f"unknown verify kind {args.kind!r}")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="spaflow",
        description="Decoder convergence analysis on degree-2-check graphs.",
    )
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("gen", help="write a named graph as .ug text")
    sp.add_argument("name", help="generator name, e.g. " + ", ".join(sorted(generator_names())[:4]) + ", ...")
    sp.add_argument("-o", "--out", help="output path (default stdout)")
    sp.set_defaults(func=_cmd_gen)

    sp = sub.add_parser("analyze", help="spectral report for a graph")
    sp.add_argument("graph")
    sp.add_argument("--format", choices=("text", "csv"), default="text")
    sp.set_defaults(func=_cmd_analyze)

    sp = sub.add_parser("decode", help="run the decoder on one odds vector")
    sp.add_argument("graph")
    sp.add_argument("-u", required=True, help="odds: comma separated or a file path")
    sp.add_argument("--eps", type=float, default=1e-8)
    sp.add_argument("--max-iter", type=int, default=200)
    sp.set_defaults(func=_cmd_decode)

    sp = sub.add_parser("predict", help="spectral verdict for one odds vector")
    sp.add_argument("graph")
    sp.add_argument("-u", required=True)
    sp.add_argument("--tol", type=float, default=1e-9)
    sp.set_defaults(func=_cmd_predict)

    sp = sub.add_parser("spectrum", help="all flow eigenvalues, one 're im' per line")
    sp.add_argument("graph")
    sp.set_defaults(func=_cmd_spectrum)

    sp = sub.add_parser("simulate", help="Monte Carlo decoding over an (eps, snr) grid")
    sp.add_argument("--graph", required=True)
    sp.add_argument("--eps", default="1e-2,1e-4,1e-8")
    sp.add_argument("--snr", default="0:1:8", help="start:step:stop or comma list, dB")
    sp.add_argument("--trials", type=int, default=10000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--max-iter", type=int, default=200)
    sp.add_argument(
        "--snr-unit",
        choices=("symbol", "bit"),
        default="symbol",
        dest="snr_unit",
        help="read the grid as per-symbol or per-information-bit SNR",
    )
    sp.add_argument("-o", "--out", help="CSV path (default stdout)")
    sp.add_argument("--svg", help="also draw curves to this SVG file")
    sp.set_defaults(func=_cmd_simulate)

    sp = sub.add_parser("verify", help="run a cross-module consistency suite")
    sp.add_argument("kind", choices=("cycles", "trapset", "predictor"))
    sp.add_argument("--graph", required=True)
    sp.add_argument("--maxlen", type=int, default=12, help="cycles: length cap")
    sp.add_argument("--genuine", type=int, default=None, help="trapset: leaf count carrying input")
    sp.add_argument("--trials", type=int, default=200)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--margin", type=float, default=0.05)
    sp.add_argument("--eps", type=float, default=1e-8)
    sp.add_argument("--max-iter", type=int, default=500)
    sp.set_defaults(func=_cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SpaflowError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
