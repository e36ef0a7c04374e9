"""Command-line front end: every reproduced number as a JSON or CSV table.

Each command builds a report ``{"command", "summary", "rows"}``. JSON is the
canonical format; CSV flattens it to one line per row with the summary
fields appended as trailing columns.

Exit codes: 0 success, 1 output I/O failure, 2 usage or validation error,
3 numerical or certification failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from fractions import Fraction

import numpy as np

from . import classical, protocols
from .errors import CertificationError, DomainError, NumericalError
from .games import draw_instance, gyni_success, is_prime, lgyni_success, require_prime

EXIT_IO, EXIT_USAGE, EXIT_NUMERIC = 1, 2, 3


def _exact(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def cmd_bipartite(args) -> dict:
    rows = []
    for x in (0, 1):
        for y in (0, 1):
            a, b = protocols.run_bipartite(x, y)
            rows.append({"x": x, "y": y, "s": x ^ y, "a": a, "b": b,
                         "win": bool(a == y and b == x)})
    gyni = classical.enumerate_bipartite_max("gyni")
    lgyni = classical.enumerate_bipartite_max("lgyni")
    behavior = protocols.bipartite_behavior()
    summary = {
        "classical_gyni": float(gyni),
        "classical_gyni_exact": _exact(gyni),
        "classical_lgyni": float(lgyni),
        "classical_lgyni_exact": _exact(lgyni),
        "quantum_gyni": gyni_success(behavior),
        "quantum_lgyni": lgyni_success(behavior),
        "one_way_decomposable": classical.decompose_one_way(behavior) is not None,
    }
    return {"command": "bipartite", "summary": summary, "rows": rows}


def cmd_nparty(args) -> dict:
    n = require_prime(args.n)
    result = protocols.nparty_result(n)
    omega = np.exp(2j * np.pi / n)
    rows = []
    for rec in result.records:
        inst = rec.instance
        answers, amps = protocols.run_nparty(inst)
        winner = answers.index(True)
        rows.append({
            "n": inst.slope, "m": inst.offset,
            "x": " ".join(str(v) for v in inst.inputs),
            "winner": winner,
            "p_win": rec.win_probability,
            "phase_error": float(abs(amps[winner] - omega ** inst.offset)),
        })
    center = classical.nparty_classical_max_center(n, certify=False)
    edges = classical.nparty_classical_max_edges(n, certify=False)
    summary = {
        "N": n,
        "quantum": result.success_probability,
        "classical_center": float(center),
        "classical_center_exact": _exact(center),
        "k_max": classical.k_max(n),
        "classical_edges": float(edges),
        "classical_edges_exact": _exact(edges),
        "edge_advantage": edges > center,
    }
    if n <= classical.ENUMERATION_CAP:
        found, _ = classical.enumerate_nparty_max(n, "center")
        summary["classical_center_enumerated"] = float(found)
        summary["classical_center_enumerated_exact"] = _exact(found)
        summary["center_certified"] = found == center
    if args.strategy_samples:
        rep = classical.sample_strategies(n, "center", args.strategy_samples, args.seed)
        summary["classical_center_sampled_max"] = float(rep.max_success)
        summary["strategy_samples"] = args.strategy_samples
    if args.samples:
        rng = np.random.default_rng(args.seed)
        wins = 0
        for _ in range(args.samples):
            inst = draw_instance(n, rng)
            probs = protocols.fock.measure_location(protocols.nparty_final_state(inst)).probabilities
            idx = int(rng.choice(probs.size, p=probs / probs.sum()))
            wins += inst.slope == idx - 1
        summary["sampled_runs"] = args.samples
        summary["sampled_win_rate"] = wins / args.samples
    if args.samples or args.strategy_samples:
        summary["seed"] = args.seed
    return {"command": "nparty", "summary": summary, "rows": rows}


def cmd_geometry(args) -> dict:
    rows = []
    for n in args.n_list:
        rep = classical.geometry_report(n)
        rows.append({
            "N": n,
            "k_max": rep.k_max,
            "classical_center": 1 / n,
            "classical_edges": float(rep.classical_success),
            "classical_edges_exact": _exact(rep.classical_success),
            "edge_advantage": rep.k_max >= 2,
            "asymptote_gap": rep.asymptote_gap,
        })
    summary = {"one_over_pi": 1 / math.pi,
               "minimal_advantage_prime": classical.minimal_advantage_prime()}
    return {"command": "geometry", "summary": summary, "rows": rows}


def cmd_noise(args) -> dict:
    n = require_prime(args.n)
    spec0 = protocols.NoiseSpec(args.kind, 0.0)
    p_noise = spec0.p_noise(n)
    raw = (1 - 1 / n) / (1 - p_noise)
    lam_c = protocols.noise_threshold(n, p_noise)
    bound = float(protocols.classical_bound(n))
    rows = []
    for lam in args.lambda_grid:
        p_s = protocols.run_noisy(n, protocols.NoiseSpec(args.kind, lam))
        formula = protocols.predicted_success(lam, p_noise)
        rows.append({
            "lambda": lam,
            "p_s": p_s,
            "p_s_formula": formula,
            "abs_error": abs(p_s - formula),
            "beats_classical": p_s > bound,
            "at_lambda_c": abs(lam - lam_c) <= 1e-12,
        })
    summary = {"N": n, "kind": args.kind, "p_noise": p_noise, "lambda_c": lam_c,
               "lambda_c_clamped": raw > 1.0, "classical_bound": bound}
    return {"command": "noise", "summary": summary, "rows": rows}


# ---------------------------------------------------------------------------
# rendering


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2) + "\n"
    summary = report["summary"]
    rows = report["rows"] or [{}]
    fields = list(rows[0]) + [k for k in summary if k not in rows[0]]
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({**summary, **row})
    return buf.getvalue()


def _parse_n_list(text: str) -> list:
    """``"2,3,5"`` or ``"lo:hi"`` (every prime in the inclusive range)."""
    try:
        if ":" in text:
            lo, hi = (int(v) for v in text.split(":"))
            values = [n for n in range(lo, hi + 1) if is_prime(n)]
        else:
            values = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"cannot parse N list {text!r}") from None
    if not values:
        raise argparse.ArgumentTypeError(f"N list {text!r} is empty")
    return values


def _parse_grid(text: str) -> list:
    """``"start:stop:count"`` (inclusive linspace) or a comma list."""
    try:
        if ":" in text:
            start, stop, count = text.split(":")
            values = np.linspace(float(start), float(stop), int(count)).tolist()
        else:
            values = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"cannot parse lambda grid {text!r}") from None
    if not values or any(not 0.0 <= v <= 1.0 for v in values):
        raise argparse.ArgumentTypeError("lambda grid values must lie in [0, 1]")
    return values


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--out", default="-", help="output path ('-' for stdout)")
    common.add_argument("--seed", type=int, default=0,
                        help="seed for the sampling demonstrations")

    parser = argparse.ArgumentParser(prog="twoway", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bipartite", parents=[common],
                       help="two-party protocol truth table and classical bounds")
    p.set_defaults(func=cmd_bipartite)

    p = sub.add_parser("nparty", parents=[common], help="N-party polygon game")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--samples", type=int, default=0,
                   help="also sample this many seeded protocol runs")
    p.add_argument("--strategy-samples", type=int, default=0,
                   help="also search this many random classical strategies")
    p.set_defaults(func=cmd_nparty)

    p = sub.add_parser("geometry", parents=[common], help="edge-routing k_max table")
    p.add_argument("--n-list", type=_parse_n_list, default=_parse_n_list("2:101"))
    p.set_defaults(func=cmd_geometry)

    p = sub.add_parser("noise", parents=[common], help="noisy success versus lambda")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--kind", choices=("white", "loss"), required=True)
    p.add_argument("--lambda-grid", type=_parse_grid, default=_parse_grid("0:1:21"))
    p.set_defaults(func=cmd_noise)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "samples", 0) < 0 or getattr(args, "strategy_samples", 0) < 0:
        parser.error("sample counts must be non-negative")
    try:
        text = render(args.func(args), args.format)
    except DomainError as exc:
        print(f"twoway: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NumericalError, CertificationError) as exc:
        print(f"twoway: numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    if args.out == "-":
        sys.stdout.write(text)
        return 0
    try:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        print(f"twoway: cannot write {args.out}: {exc.strerror}", file=sys.stderr)
        return EXIT_IO
    return 0


if __name__ == "__main__":
    sys.exit(main())
