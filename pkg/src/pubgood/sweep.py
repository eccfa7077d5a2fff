"""Parameter sweeps over (n, k, tau, a[, b, z]) with fixed-column CSV output.

Spec files are flat ``key = v1, v2, ...`` lines; ``#`` starts a comment.
Integer keys accept ``lo..hi`` ranges. ``tau`` also accepts the tokens ``k``
and ``n``; in verify mode ``b`` and ``z`` accept ``bstar``/``zstar`` with an
optional ``+q``/``-q`` rational offset. Combinations violating 1 <= k < n or
k <= tau <= n are skipped.
"""
from __future__ import annotations

import csv
import io
import itertools
import re
from dataclasses import dataclass
from fractions import Fraction

from .combinatorics import to_rational
from .equilibrium import solve, verify
from .model import GameConfig

SOLVE_COLUMNS = ("n", "k", "tau", "a", "p", "z_star", "b_star", "a_max", "feasible")
VERIFY_COLUMNS = ("n", "k", "tau", "a", "b", "z", "p", "agent_ok", "distributor_ok", "verdict", "witnesses")

_RELATIVE = re.compile(r"^(bstar|zstar)\s*(?:([+-])\s*(\S+))?$")


class SweepError(ValueError):
    pass


@dataclass(frozen=True)
class SweepSpec:
    mode: str
    n: tuple[int, ...]
    k: tuple[int, ...]
    tau: tuple[int | str, ...]
    a: tuple[Fraction, ...]
    b: tuple[Fraction | str, ...] = ()
    z: tuple[Fraction | str, ...] = ()
    p: tuple[Fraction, ...] = ()


def _ints(values: list[str], key: str) -> tuple[int, ...]:
    out = []
    for v in values:
        if ".." in v:
            lo, hi = v.split("..", 1)
            try:
                out.extend(range(int(lo), int(hi) + 1))
            except ValueError:
                raise SweepError(f"{key}: bad range {v!r}") from None
        else:
            try:
                out.append(int(v))
            except ValueError:
                raise SweepError(f"{key}: not an integer: {v!r}") from None
    return tuple(out)


def _rationals(values: list[str], key: str, relative: bool = False) -> tuple:
    out = []
    for v in values:
        if relative and _RELATIVE.match(v):
            m = _RELATIVE.match(v)
            if m.group(3) is not None:
                try:
                    to_rational(m.group(3))
                except ValueError:
                    raise SweepError(f"{key}: bad offset in {v!r}") from None
            out.append(v.replace(" ", ""))
            continue
        try:
            out.append(to_rational(v))
        except ValueError:
            raise SweepError(f"{key}: not a rational: {v!r}") from None
    return tuple(out)


def parse_spec(text: str) -> SweepSpec:
    raw: dict[str, list[str]] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise SweepError(f"line {lineno}: expected 'key = values'")
        key, _, rest = line.partition("=")
        key = key.strip().lower()
        if key in raw:
            raise SweepError(f"line {lineno}: duplicate key {key!r}")
        raw[key] = [v.strip() for v in rest.split(",") if v.strip()]

    unknown = set(raw) - {"mode", "n", "k", "tau", "a", "b", "z", "p"}
    if unknown:
        raise SweepError(f"unknown keys: {', '.join(sorted(unknown))}")
    mode = (raw.pop("mode", ["solve"]) or [""])[0]
    if mode not in ("solve", "verify"):
        raise SweepError(f"mode must be 'solve' or 'verify', got {mode!r}")
    required = ["n", "k", "tau", "a"] + (["b", "z"] if mode == "verify" else [])
    for key in required:
        if not raw.get(key):
            raise SweepError(f"empty or missing range for {key!r}")

    taus = []
    for v in raw["tau"]:
        taus.extend([v] if v in ("k", "n") else _ints([v], "tau"))
    return SweepSpec(
        mode=mode,
        n=_ints(raw["n"], "n"),
        k=_ints(raw["k"], "k"),
        tau=tuple(taus),
        a=_rationals(raw["a"], "a"),
        b=_rationals(raw.get("b", []), "b", relative=True),
        z=_rationals(raw.get("z", []), "z", relative=True),
        p=_rationals(raw.get("p", []), "p"),
    )


def _resolve(value, star: Fraction) -> Fraction:
    if isinstance(value, Fraction):
        return value
    m = _RELATIVE.match(value)
    if m.group(2) is None:
        return star
    offset = to_rational(m.group(3))
    return star + offset if m.group(2) == "+" else star - offset


def _combos(spec: SweepSpec):
    for n, k, tau, a in itertools.product(spec.n, spec.k, spec.tau, spec.a):
        t = {"k": k, "n": n}.get(tau, tau)
        if 1 <= k < n and k <= t <= n and 0 < a < 1:
            yield n, k, t, a


def run(spec: SweepSpec) -> list[dict[str, str]]:
    rows = []
    for n, k, tau, a in _combos(spec):
        sol = solve(n, k, a, tau)
        if spec.mode == "solve":
            rows.append(
                {
                    "n": str(n),
                    "k": str(k),
                    "tau": str(tau),
                    "a": str(a),
                    "p": str(sol.p),
                    "z_star": str(sol.z_star),
                    "b_star": str(sol.b_star),
                    "a_max": str(sol.a_max) if isinstance(sol.a_max, Fraction) else "inf",
                    "feasible": str(sol.feasible).lower(),
                }
            )
            continue
        for b_raw, z_raw, p in itertools.product(spec.b, spec.z, spec.p or (None,)):
            b, z = _resolve(b_raw, sol.b_star), _resolve(z_raw, sol.z_star)
            if b < 0 or z < 0:
                continue
            report = verify(GameConfig(n, k, a, b, z), tau, sol.p if p is None else p)
            rows.append(
                {
                    "n": str(n),
                    "k": str(k),
                    "tau": str(tau),
                    "a": str(a),
                    "b": str(b),
                    "z": str(z),
                    "p": str(report.p),
                    "agent_ok": str(report.agent_ok).lower(),
                    "distributor_ok": str(report.distributor_ok).lower(),
                    "verdict": report.verdict,
                    "witnesses": "; ".join(report.witnesses),
                }
            )
    if not rows:
        raise SweepError("sweep is empty: no parameter combination satisfies 1 <= k < n, k <= tau <= n")
    return rows


def to_csv(rows: list[dict[str, str]], mode: str) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=SOLVE_COLUMNS if mode == "solve" else VERIFY_COLUMNS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()
