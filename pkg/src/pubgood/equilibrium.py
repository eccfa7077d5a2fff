"""Symmetric mixed-strategy equilibrium: solver and best-response verifier.

All agents contribute with probability p = (tau-k)/(n-k) and expect tau units;
the distributor provides tau units when the fund reaches tau and embezzles
everything otherwise. The free-riding penalty z* makes agents indifferent, and
the complaint punishment must clear b* for the distributor to honour tau.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction

from .combinatorics import _binomial_pmf, _hypergeom, to_rational
from .exact import (
    _span,
    eu_agent_contribute,
    eu_agent_defect,
    eu_distributor,
    expected_fund,
    fund_distribution,
)
from .model import GameConfig

EQUILIBRIUM = "equilibrium"
NOT_EQUILIBRIUM = "not_equilibrium"


@dataclass(frozen=True)
class EquilibriumSolution:
    n: int
    k: int
    a: Fraction
    tau: int
    p: Fraction
    z_star: Fraction
    b_star: Fraction
    a_max: Fraction | float  # math.inf when the z* >= 0 constraint never binds
    terms: dict[str, Fraction]
    feasible: bool
    # pure-profile corner cases only
    z_threshold: Fraction | None = None
    pure_check: "VerificationReport | None" = None


@dataclass(frozen=True)
class VerificationReport:
    cfg: GameConfig
    tau: int
    p: Fraction
    agent_contribute_eu: Fraction
    agent_defect_eu: Fraction
    agent_ok: bool
    distributor_cutoff_eus: dict[int, Fraction]
    per_fund_decisions: dict[int, int]
    distributor_ok: bool
    verdict: str
    witnesses: list[str] = field(default_factory=list)

    @property
    def is_equilibrium(self) -> bool:
        return self.verdict == EQUILIBRIUM


def _check_game(n: int, k: int, tau: int) -> None:
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"n must be a positive integer, got {n!r}")
    if not isinstance(k, int) or k < 1:
        raise ValueError(f"k must be >= 1, got {k!r}")
    if k >= n:
        raise ValueError(f"k must be < n (got k={k}, n={n}): no agent is left with a free choice")
    if not k <= tau <= n:
        raise ValueError(f"tau must satisfy k <= tau <= n, got tau={tau}")


def mixing_probability(n: int, k: int, tau: int) -> Fraction:
    _check_game(n, k, tau)
    return Fraction(tau - k, n - k)


def agent_terms(n: int, k: int, tau: int, p) -> dict[str, Fraction]:
    """A, B, C: the pieces of the indifference condition.

    A + B - C is the probability that the other n-1 agents (with all k audits
    among them) bring the fund to exactly tau - 1, i.e. that agent i is pivotal.
    """
    p = to_rational(p)
    pj = lambda j: _binomial_pmf(j, n - 1, p)  # noqa: E731
    h = lambda k_s, j: _hypergeom(k_s, j, n - 1, k)  # noqa: E731
    A = pj(tau - 1)
    B = sum(
        (pj(j) * sum((h(k_s, j) for k_s in _span(tau - 1 - j, k)), Fraction(0))
         for j in _span(tau - k - 1, tau - 2)),
        Fraction(0),
    )
    C = sum(
        (pj(j) * sum((h(k_s, j) for k_s in _span(tau - j, k)), Fraction(0))
         for j in _span(tau - k, tau - 1)),
        Fraction(0),
    )
    return {"A": A, "B": B, "C": C}


def distributor_terms(n: int, k: int, tau: int, p) -> dict[str, Fraction]:
    """D, E, F: D + E is Pr(X >= tau) split by whether volunteers alone reach
    tau; F is Pr(X < tau)."""
    p = to_rational(p)
    pj = lambda j: _binomial_pmf(j, n, p)  # noqa: E731
    h = lambda k_s, j: _hypergeom(k_s, j, n, k)  # noqa: E731
    D = sum((pj(j) for j in _span(tau, n)), Fraction(0))
    E = sum(
        (pj(j) * sum((h(k_s, j) for k_s in _span(tau - j, k)), Fraction(0)) for j in _span(0, tau - 1)),
        Fraction(0),
    )
    F = sum(
        (pj(j) * sum((h(k_s, j) for k_s in _span(0, tau - j - 1)), Fraction(0)) for j in _span(0, tau - 1)),
        Fraction(0),
    )
    return {"D": D, "E": E, "F": F}


def indifference_penalty(n: int, k: int, a, tau: int, p) -> Fraction:
    """Penalty z at which contributing and free-riding pay the same, for any p."""
    _check_game(n, k, tau)
    a = to_rational(a)
    t = agent_terms(n, k, tau, p)
    return Fraction(n - k, k) * (1 - t["A"] * tau * a - t["B"] * tau * a + t["C"] * tau * a)


def z_star(n: int, k: int, a, tau: int) -> Fraction:
    return indifference_penalty(n, k, a, tau, mixing_probability(n, k, tau))


def a_max(n: int, k: int, tau: int) -> Fraction | float:
    """Largest a keeping z* >= 0; ``math.inf`` if the bound never binds."""
    t = agent_terms(n, k, tau, mixing_probability(n, k, tau))
    pivotal = t["A"] + t["B"] - t["C"]
    if pivotal <= 0:
        return math.inf
    return 1 / (tau * pivotal)


def distributor_cutoff_value(n: int, k: int, a, b, tau: int, p) -> Fraction:
    """Expected payoff of cutoff tau in the rewritten form
    k + (n-k)p + (D + E)(tau a - tau) - n b F."""
    a, b, p = to_rational(a), to_rational(b), to_rational(p)
    t = distributor_terms(n, k, tau, p)
    return expected_fund(n, k, p) + (t["D"] + t["E"]) * (tau * a - tau) - n * b * t["F"]


def b_star(n: int, k: int, a, tau: int) -> Fraction:
    _check_game(n, k, tau)
    a = to_rational(a)
    t = distributor_terms(n, k, tau, mixing_probability(n, k, tau))
    reach = 1 - t["F"]
    if reach == 0:
        raise ZeroDivisionError("Pr(X >= tau) = 0: the cutoff is never reached")
    ratio = (tau - tau * a) * (t["D"] + t["E"]) / (n * reach)
    simple = tau * (1 - a) / n
    if ratio != simple:
        raise ArithmeticError(f"threshold forms disagree: {ratio} != {simple}")
    return ratio


def solve(n: int, k: int, a, tau: int) -> EquilibriumSolution:
    _check_game(n, k, tau)
    a = to_rational(a)
    if not 0 < a < 1:
        raise ValueError(f"a must satisfy 0 < a < 1, got {a}")
    p = mixing_probability(n, k, tau)
    terms = {**agent_terms(n, k, tau, p), **distributor_terms(n, k, tau, p)}
    z = z_star(n, k, a, tau)
    return EquilibriumSolution(
        n=n,
        k=k,
        a=a,
        tau=tau,
        p=p,
        z_star=z,
        b_star=b_star(n, k, a, tau),
        a_max=a_max(n, k, tau),
        terms=terms,
        feasible=z >= 0 and 0 <= p <= 1,
    )


def _best_provision(cfg: GameConfig, tau: int, x: int, prescribed: int) -> tuple[int, dict[int, Fraction]]:
    n, a, b = cfg.n, cfg.a, cfg.b
    values = {g: x - g + a * g - (n * b if g < tau else 0) for g in range(x + 1)}
    top = max(values.values())
    if values[prescribed] == top:
        return prescribed, values
    return min(g for g, v in values.items() if v == top), values


def verify(cfg: GameConfig, tau: int, p=None) -> VerificationReport:
    """Check that ((p, tau), ..., (p, tau); <tau>) is a mutual best response.

    Agents: exact indifference for 0 < p < 1, weak preference for the pure
    action at p in {0, 1}. Distributor: no cutoff in 0..n beats <tau> ex ante,
    and at every reachable fund the prescribed provision is a best reply.
    """
    n, k = cfg.n, cfg.k
    if not k <= tau <= n:
        raise ValueError(f"tau must satisfy k <= tau <= n, got tau={tau}")
    if p is None:
        p = mixing_probability(n, k, tau)
    p = to_rational(p)
    if not 0 <= p <= 1:
        raise ValueError(f"p must lie in [0, 1], got {p}")

    witnesses = []
    contribute = eu_agent_contribute(n, k, cfg.a, cfg.z, p, tau)
    defect = eu_agent_defect(n, k, cfg.a, cfg.z, p, tau)
    if p == 1:
        agent_ok = contribute >= defect
    elif p == 0:
        agent_ok = defect >= contribute
    else:
        agent_ok = contribute == defect
    if not agent_ok:
        if defect > contribute:
            witnesses.append(f"agent: defecting improves payoff ({defect} > {contribute})")
        else:
            witnesses.append(f"agent: contributing improves payoff ({contribute} > {defect})")

    cutoff_eus = {c: eu_distributor(n, k, cfg.a, cfg.b, p, tau, c) for c in range(n + 1)}
    prescribed_eu = cutoff_eus[tau]
    ex_ante_ok = True
    for c, value in cutoff_eus.items():
        if value > prescribed_eu:
            ex_ante_ok = False
            witnesses.append(f"distributor: cutoff {c} improves payoff ({value} > {prescribed_eu})")

    decisions = {}
    per_fund_ok = True
    for x in fund_distribution(n, k, p).realizable():
        prescribed = tau if x >= tau else 0
        best, values = _best_provision(cfg, tau, x, prescribed)
        decisions[x] = best
        if best != prescribed:
            per_fund_ok = False
            witnesses.append(
                f"distributor: at fund {x}, providing {best} instead of {prescribed} improves payoff "
                f"({values[best]} > {values[prescribed]})"
            )

    distributor_ok = ex_ante_ok and per_fund_ok
    return VerificationReport(
        cfg=cfg,
        tau=tau,
        p=p,
        agent_contribute_eu=contribute,
        agent_defect_eu=defect,
        agent_ok=agent_ok,
        distributor_cutoff_eus=cutoff_eus,
        per_fund_decisions=decisions,
        distributor_ok=distributor_ok,
        verdict=EQUILIBRIUM if agent_ok and distributor_ok else NOT_EQUILIBRIUM,
        witnesses=witnesses,
    )


def free_riding_case(n: int, k: int, a) -> EquilibriumSolution:
    """Nobody volunteers (tau = k, p = 0).

    Free-riding is weakly optimal for any z up to z*(p=0) = (n-k)/k; the report
    in ``pure_check`` is the verifier run at that boundary and b = b*.
    """
    sol = solve(n, k, a, k)
    check = verify(GameConfig(n, k, sol.a, sol.b_star, sol.z_star), k, Fraction(0))
    return replace(sol, z_threshold=sol.z_star, pure_check=check)


def efficient_case(n: int, k: int, a) -> EquilibriumSolution:
    """Everyone contributes (tau = n, p = 1), checked with no free-riding penalty.

    Contributing stays weakly optimal for z >= max(z*(p=1), 0), reported as
    ``z_threshold``. ``pure_check.agent_ok`` is the empirical condition na >= 1:
    with z = 0 each agent is pivotal and contributing must beat the chance of
    escaping the audit.
    """
    sol = solve(n, k, a, n)
    check = verify(GameConfig(n, k, sol.a, sol.b_star, Fraction(0)), n, Fraction(1))
    return replace(sol, z_threshold=max(sol.z_star, Fraction(0)), pure_check=check)

