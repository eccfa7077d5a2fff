"""Full-enumeration oracles for the exact engine.

Every contribution profile and every audit set is played through
:func:`pubgood.model.play_round` and weighted by its exact probability. Slow
(2^n * C(n, k) plays) and used only to check :mod:`pubgood.exact`.
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache

from .combinatorics import binom, to_rational
from .model import (
    AuditOutcome,
    ContributionProfile,
    CutoffStrategy,
    ExpectationProfile,
    GameConfig,
    play_round,
)

MAX_N = 12


def _guard(n: int) -> None:
    if n > MAX_N:
        raise ValueError(f"brute-force enumeration is limited to n <= {MAX_N}, got n={n}")


def _by_count(rows, size):
    # every play with the same contributor count carries the same probability
    sums = [Fraction(0)] * (size + 1)
    for j, payoff in rows:
        sums[j] += payoff
    return tuple(sums)


@lru_cache(maxsize=None)
def _agent_table(n, k, a, z, tau, cutoff, action):
    """Summed payoff of agent 0 over all plays, keyed by the others' contributor count."""
    cfg = GameConfig(n, k, a, Fraction(0), z)
    strat = CutoffStrategy(cutoff)
    exps = ExpectationProfile.uniform(n, tau)
    audits = [AuditOutcome(frozenset(s)) for s in itertools.combinations(range(n), k)]
    rows = []
    for others in itertools.product((0, 1), repeat=n - 1):
        profile = ContributionProfile((action,) + others)
        for audit in audits:
            out = play_round(cfg, profile, audit, strat, exps)
            rows.append((sum(others), out.agent_payoffs[0]))
    return _by_count(rows, n - 1)


@lru_cache(maxsize=None)
def _distributor_table(n, k, a, b, tau, cutoff):
    cfg = GameConfig(n, k, a, b, Fraction(0))
    strat = CutoffStrategy(cutoff)
    exps = ExpectationProfile.uniform(n, tau)
    audits = [AuditOutcome(frozenset(s)) for s in itertools.combinations(range(n), k)]
    rows = []
    for actions in itertools.product((0, 1), repeat=n):
        profile = ContributionProfile(actions)
        for audit in audits:
            rows.append((sum(actions), play_round(cfg, profile, audit, strat, exps).distributor_payoff))
    return _by_count(rows, n)


def eu_agent_brute(action: int, n: int, k: int, a, z, p, tau: int, cutoff: int | None = None) -> Fraction:
    """Expected payoff of agent 0 playing ``action`` (1 contribute, 0 defect)."""
    _guard(n)
    a, z, p = to_rational(a), to_rational(z), to_rational(p)
    c = tau if cutoff is None else cutoff
    audit_weight = Fraction(1, binom(n, k))
    total = Fraction(0)
    for j, payoff in enumerate(_agent_table(n, k, a, z, tau, c, action)):
        total += p**j * (1 - p) ** (n - 1 - j) * payoff
    return total * audit_weight


def eu_agent_contribute_brute(n, k, a, z, p, tau, cutoff=None) -> Fraction:
    return eu_agent_brute(1, n, k, a, z, p, tau, cutoff)


def eu_agent_defect_brute(n, k, a, z, p, tau, cutoff=None) -> Fraction:
    return eu_agent_brute(0, n, k, a, z, p, tau, cutoff)


def eu_distributor_brute(n: int, k: int, a, b, p, tau: int, cutoff: int) -> Fraction:
    _guard(n)
    a, b, p = to_rational(a), to_rational(b), to_rational(p)
    audit_weight = Fraction(1, binom(n, k))
    total = Fraction(0)
    for j, payoff in enumerate(_distributor_table(n, k, a, b, tau, cutoff)):
        total += p**j * (1 - p) ** (n - j) * payoff
    return total * audit_weight


def fund_distribution_brute(n: int, k: int, p) -> dict[int, Fraction]:
    _guard(n)
    p = to_rational(p)
    mass: dict[int, Fraction] = {}
    audit_weight = Fraction(1, binom(n, k))
    for actions in itertools.product((0, 1), repeat=n):
        j = sum(actions)
        w = p**j * (1 - p) ** (n - j) * audit_weight
        for audit in itertools.combinations(range(n), k):
            x = j + sum(1 for i in audit if actions[i] == 0)
            mass[x] = mass.get(x, Fraction(0)) + w
    return mass
