"""Command-line interface: solve, verify, simulate, sweep.

Exit codes: 0 success (or equilibrium), 1 verification failed, 2 invalid input.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import asdict
from fractions import Fraction

from . import equilibrium, simulator, sweep
from .combinatorics import to_rational
from .exact import expected_outcomes
from .model import GameConfig

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INVALID = 2


class InvalidInput(ValueError):
    pass


def rational_json(value) -> dict:
    if isinstance(value, float) and math.isinf(value):
        return {"exact": "inf", "approx": None}
    value = Fraction(value)
    return {"exact": str(value), "approx": float(value)}


def _rational_arg(text: str) -> Fraction:
    try:
        return to_rational(text)
    except (ValueError, TypeError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def solution_dict(sol: equilibrium.EquilibriumSolution) -> dict:
    out = {
        "n": sol.n,
        "k": sol.k,
        "tau": sol.tau,
        "a": rational_json(sol.a),
        "p": rational_json(sol.p),
        "z_star": rational_json(sol.z_star),
        "b_star": rational_json(sol.b_star),
        "a_max": rational_json(sol.a_max),
        "terms": {name: rational_json(v) for name, v in sol.terms.items()},
        "feasible": sol.feasible,
    }
    return out


def report_dict(rep: equilibrium.VerificationReport) -> dict:
    cfg = rep.cfg
    return {
        "n": cfg.n,
        "k": cfg.k,
        "tau": rep.tau,
        "a": rational_json(cfg.a),
        "b": rational_json(cfg.b),
        "z": rational_json(cfg.z),
        "p": rational_json(rep.p),
        "agent_contribute_eu": rational_json(rep.agent_contribute_eu),
        "agent_defect_eu": rational_json(rep.agent_defect_eu),
        "agent_ok": rep.agent_ok,
        "distributor_cutoff_eus": {str(c): rational_json(v) for c, v in rep.distributor_cutoff_eus.items()},
        "per_fund_decisions": {str(x): g for x, g in rep.per_fund_decisions.items()},
        "distributor_ok": rep.distributor_ok,
        "verdict": rep.verdict,
        "witnesses": list(rep.witnesses),
    }


def _flatten(d: dict, prefix: str = "", approx: bool = False) -> dict:
    out = {}
    for key, value in d.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict) and set(value) == {"exact", "approx"}:
            shown = value["exact"]
            if approx and "/" in shown:
                shown = f"{shown} (~{value['approx']:.6g})"
            out[name] = shown
        elif isinstance(value, dict):
            out.update(_flatten(value, name + ".", approx))
        elif isinstance(value, list):
            out[name] = "; ".join(map(str, value))
        else:
            out[name] = value
    return out


def render(d: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(d, indent=2) + "\n"
    flat = _flatten(d)
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=list(flat), lineterminator="\n")
        writer.writeheader()
        writer.writerow(flat)
        return buf.getvalue()
    flat = _flatten(d, approx=True)
    return "".join(f"{key}: {value}\n" for key, value in flat.items())


def _config(args) -> GameConfig:
    try:
        return GameConfig(args.n, args.k, args.a, args.b, args.z)
    except ValueError as exc:
        raise InvalidInput(str(exc)) from None


def cmd_solve(args) -> int:
    sol = equilibrium.solve(args.n, args.k, args.a, args.tau)
    sys.stdout.write(render(solution_dict(sol), args.format))
    return EXIT_OK


def cmd_verify(args) -> int:
    cfg = _config(args)
    p = args.p
    if p is None:
        p = equilibrium.mixing_probability(cfg.n, cfg.k, args.tau)
    rep = equilibrium.verify(cfg, args.tau, p)
    sys.stdout.write(render(report_dict(rep), args.format))
    return EXIT_OK if rep.is_equilibrium else EXIT_FAILED


def cmd_simulate(args) -> int:
    cfg = _config(args)
    p = args.p
    if p is None:
        p = equilibrium.mixing_probability(cfg.n, cfg.k, args.tau)
    cutoff = args.tau if args.cutoff is None else args.cutoff
    report = simulator.simulate(cfg, p, args.tau, cutoff, args.trials, args.seed, args.workers)
    if args.format == "json":
        out = asdict(report)
        if args.exact:
            exact = expected_outcomes(cfg.n, cfg.k, cfg.a, cfg.b, cfg.z, p, args.tau, cutoff)
            out["exact"] = {key: rational_json(v) for key, v in exact.items()}
        sys.stdout.write(json.dumps(out, sort_keys=True) + "\n")
    else:
        flat = {key: value for key, value in asdict(report).items() if key != "standard_errors"}
        flat.update({f"se.{key}": v for key, v in report.standard_errors.items()})
        if args.format == "csv":
            buf = io.StringIO()
            writer = csv.DictWriter(buf, fieldnames=list(flat), lineterminator="\n")
            writer.writeheader()
            writer.writerow(flat)
            sys.stdout.write(buf.getvalue())
        else:
            sys.stdout.write("".join(f"{key}: {value}\n" for key, value in flat.items()))
    return EXIT_OK


def cmd_sweep(args) -> int:
    try:
        with open(args.spec, encoding="utf-8") as fh:
            spec = sweep.parse_spec(fh.read())
    except OSError as exc:
        raise InvalidInput(f"cannot read sweep spec: {exc}") from None
    text = sweep.to_csv(sweep.run(spec), spec.mode)
    if args.out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pubgood",
        description="Exact equilibria, verification and simulation for the public-good game with a distributor.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def game_args(p, payoffs=True):
        p.add_argument("--n", type=int, required=True, help="number of agents")
        p.add_argument("--k", type=int, required=True, help="number of audited agents")
        p.add_argument("--a", type=_rational_arg, required=True, help="marginal per capita return, e.g. 1/2")
        p.add_argument("--tau", type=int, required=True, help="common expectation of the fund")
        if payoffs:
            p.add_argument("--b", type=_rational_arg, required=True, help="punishment per complaint")
            p.add_argument("--z", type=_rational_arg, required=True, help="free-riding penalty")

    p = sub.add_parser("solve", help="equilibrium p, z*, b*, a_max for (n, k, a, tau)")
    game_args(p, payoffs=False)
    p.add_argument("--format", choices=("json", "csv", "text"), default="json")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="best-response audit of a symmetric profile")
    game_args(p)
    p.add_argument("--p", type=_rational_arg, default=None, help="contribution probability (default (tau-k)/(n-k))")
    p.add_argument("--format", choices=("json", "csv", "text"), default="json")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("simulate", help="Monte Carlo estimate of expected outcomes")
    game_args(p)
    p.add_argument("--p", type=_rational_arg, default=None, help="contribution probability (default (tau-k)/(n-k))")
    p.add_argument("--cutoff", type=int, default=None, help="distributor cutoff (default tau)")
    p.add_argument("--trials", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1, help="worker processes; output does not depend on it")
    p.add_argument("--exact", action="store_true", help="include exact expected values (json only)")
    p.add_argument("--format", choices=("json", "csv", "text"), default="json")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sweep", help="run a parameter sweep from a spec file, write CSV")
    p.add_argument("--spec", required=True, help="sweep spec file (key = v1, v2, ... lines)")
    p.add_argument("--out", default=None, help="output CSV path (default stdout)")
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InvalidInput, ValueError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
