"""Exact expected values over the random fund.

The agent and distributor utilities are evaluated as the nested binomial x
hypergeometric sums, term by term, with no algebraic shortcuts. The closed
forms (mean fund k + p(n-k), the threshold tau(1-a)/n, ...) live in tests and in
:mod:`pubgood.equilibrium` as cross-checks, never as substitutes.

Notation: ``j`` counts voluntary contributors, ``k_s`` counts audits that land
on non-contributors (each adds one forced unit), so the fund is X = j + k_s.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .combinatorics import _binomial_pmf, _hypergeom, to_rational

__all__ = [
    "FundDistribution",
    "expected_fund",
    "expected_fund_oracle",
    "fund_distribution",
    "eu_agent_contribute",
    "eu_agent_defect",
    "eu_distributor",
    "expected_outcomes",
]


def _span(lo: int, hi: int) -> range:
    """Inclusive summation range; empty when lo > hi."""
    return range(lo, hi + 1)


def _check(n: int, k: int, p, tau: int | None = None, cutoff: int | None = None) -> Fraction:
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"n must be a positive integer, got {n!r}")
    if not isinstance(k, int) or not 1 <= k <= n:
        raise ValueError(f"k must satisfy 1 <= k <= n, got k={k!r}, n={n}")
    p = to_rational(p)
    if not 0 <= p <= 1:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    if tau is not None and not k <= tau <= n:
        raise ValueError(f"tau must satisfy k <= tau <= n, got tau={tau}")
    if cutoff is not None and not 0 <= cutoff <= n:
        raise ValueError(f"cutoff must lie in 0..n, got {cutoff}")
    return p


@dataclass(frozen=True)
class FundDistribution:
    n: int
    k: int
    p: Fraction
    mass: dict[int, Fraction]

    def total(self) -> Fraction:
        return sum(self.mass.values(), Fraction(0))

    def mean(self) -> Fraction:
        return sum((x * m for x, m in self.mass.items()), Fraction(0))

    def tail(self, c: int) -> Fraction:
        """Pr(X >= c)."""
        return sum((m for x, m in self.mass.items() if x >= c), Fraction(0))

    def realizable(self) -> list[int]:
        return [x for x, m in sorted(self.mass.items()) if m > 0]


def expected_fund(n: int, k: int, p) -> Fraction:
    p = _check(n, k, p)
    return k + p * (n - k)


def expected_fund_oracle(n: int, k: int, p) -> Fraction:
    """Raw double sum of (j + k_s) over the binomial x hypergeometric law."""
    p = _check(n, k, p)
    total = Fraction(0)
    for j in _span(0, n):
        w = _binomial_pmf(j, n, p)
        for k_s in _span(0, k):
            total += (j + k_s) * w * _hypergeom(k_s, j, n, k)
    return total


def fund_distribution(n: int, k: int, p) -> FundDistribution:
    p = _check(n, k, p)
    mass = {x: Fraction(0) for x in _span(k, n)}
    for j in _span(0, n):
        w = _binomial_pmf(j, n, p)
        if w == 0:
            continue
        for x in _span(k, n):
            mass[x] += w * _hypergeom(x - j, j, n, k)
    return FundDistribution(n, k, p, mass)


def _audited_branch(n, k, p, c, win, lose) -> Fraction:
    """Agent i is audited and ends up contributing either way: X = 1 + j + k_s,
    where the other k-1 audits fall among the n-1 other agents."""
    pj = lambda j: _binomial_pmf(j, n - 1, p)  # noqa: E731
    h = lambda k_s, j: _hypergeom(k_s, j, n - 1, k - 1)  # noqa: E731
    total = Fraction(0)
    for j in _span(c - 1, n - 1):
        total += pj(j) * win
    for j in _span(c - k, c - 2):
        reach = sum((h(k_s, j) for k_s in _span(c - 1 - j, k - 1)), Fraction(0))
        total += pj(j) * reach * win
    for j in _span(c - k, c - 2):
        short = sum((h(k_s, j) for k_s in _span(0, c - 2 - j)), Fraction(0))
        total += pj(j) * short * lose
    for j in _span(0, c - k - 1):
        total += pj(j) * lose
    return total


def eu_agent_contribute(n: int, k: int, a, z, p, tau: int, cutoff: int | None = None) -> Fraction:
    """Expected payoff of one agent who contributes while the other n-1 agents
    contribute with probability p and the distributor plays cutoff ``tau``
    (or ``cutoff`` when given)."""
    c = tau if cutoff is None else cutoff
    p = _check(n, k, p, tau, c)
    a, z = to_rational(a), to_rational(z)
    provided = c * a
    audited = _audited_branch(n, k, p, c, -1 + provided, Fraction(-1))
    eu = Fraction(k, n) * audited
    if k == n:
        return eu

    # unaudited: all k audits among the n-1 others, X = 1 + j + k_s
    pj = lambda j: _binomial_pmf(j, n - 1, p)  # noqa: E731
    h = lambda k_s, j: _hypergeom(k_s, j, n - 1, k)  # noqa: E731
    rest = Fraction(0)
    for j in _span(c - 1, n - 1):
        rest += pj(j) * (-1 + provided)
    for j in _span(c - k - 1, c - 2):
        reach = sum((h(k_s, j) for k_s in _span(c - 1 - j, k)), Fraction(0))
        rest += pj(j) * reach * (-1 + provided)
    for j in _span(c - k - 1, c - 2):
        short = sum((h(k_s, j) for k_s in _span(0, c - 2 - j)), Fraction(0))
        rest += pj(j) * short * (-1)
    for j in _span(0, c - k - 2):
        rest += pj(j) * (-1)
    return eu + (1 - Fraction(k, n)) * rest


def eu_agent_defect(n: int, k: int, a, z, p, tau: int, cutoff: int | None = None) -> Fraction:
    """Expected payoff of one free-riding agent; same setting as
    :func:`eu_agent_contribute`."""
    c = tau if cutoff is None else cutoff
    p = _check(n, k, p, tau, c)
    a, z = to_rational(a), to_rational(z)
    provided = c * a
    audited = _audited_branch(n, k, p, c, -1 + provided - z, -1 - z)
    eu = Fraction(k, n) * audited
    if k == n:
        return eu

    # unaudited free-rider adds nothing: X = j + k_s
    pj = lambda j: _binomial_pmf(j, n - 1, p)  # noqa: E731
    h = lambda k_s, j: _hypergeom(k_s, j, n - 1, k)  # noqa: E731
    rest = Fraction(0)
    for j in _span(c, n - 1):
        rest += pj(j) * provided
    for j in _span(c - k, c - 1):
        reach = sum((h(k_s, j) for k_s in _span(c - j, k)), Fraction(0))
        rest += pj(j) * reach * provided
    for j in _span(c - k, c - 1):
        short = sum((h(k_s, j) for k_s in _span(0, c - 1 - j)), Fraction(0))
        rest += pj(j) * short * 0
    for j in _span(0, c - k - 1):
        rest += pj(j) * 0
    return eu + (1 - Fraction(k, n)) * rest


def eu_distributor(n: int, k: int, a, b, p, tau: int, cutoff: int) -> Fraction:
    """Distributor's expected payoff from cutoff ``cutoff`` when every agent
    plays (p, tau).

    With symmetric expectations either all n agents complain (provision below
    tau) or none do.
    """
    c = cutoff
    p = _check(n, k, p, tau, c)
    a, b = to_rational(a), to_rational(b)
    pj = lambda j: _binomial_pmf(j, n, p)  # noqa: E731
    h = lambda k_s, j: _hypergeom(k_s, j, n, k)  # noqa: E731
    complaint = n * b if c < tau else Fraction(0)

    total = Fraction(0)
    for j in _span(c, n):
        total += pj(j) * sum(
            (h(k_s, j) * (c * a + j + k_s - c - complaint) for k_s in _span(0, k)), Fraction(0)
        )
    for j in _span(0, c - 1):
        total += pj(j) * sum(
            (h(k_s, j) * (c * a + j + k_s - c - complaint) for k_s in _span(c - j, k)), Fraction(0)
        )
    for j in _span(0, c - 1):
        total += pj(j) * sum(
            (h(k_s, j) * (j + k_s - n * b) for k_s in _span(0, c - j - 1)), Fraction(0)
        )
    return total


def expected_outcomes(n: int, k: int, a, b, z, p, tau: int, cutoff: int) -> dict[str, Fraction]:
    """Exact counterparts of every mean the simulator reports."""
    p = _check(n, k, p, tau, cutoff)
    dist = fund_distribution(n, k, p)
    reach = dist.tail(cutoff)
    contrib = eu_agent_contribute(n, k, a, z, p, tau, cutoff)
    defect = eu_agent_defect(n, k, a, z, p, tau, cutoff)
    # provision g is either cutoff (no complaints iff cutoff >= tau) or 0 (always complaints)
    complaint_rate = 1 - reach if cutoff >= tau else Fraction(1)
    return {
        "mean_fund": expected_fund(n, k, p),
        "mean_provision": cutoff * reach,
        "mean_agent_payoff_contributors": contrib,
        "mean_agent_payoff_defectors": defect,
        "mean_agent_payoff": p * contrib + (1 - p) * defect,
        "mean_distributor_payoff": eu_distributor(n, k, a, b, p, tau, cutoff),
        "complaint_rate": complaint_rate,
    }
