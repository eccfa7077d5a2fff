"""Game primitives and the realized-play kernel.

One play: agents choose t_i, Nature audits k agents, the distributor sees the
fund X and provides g, agents complain when g falls short of their expectation.
Agent indices are 0-based.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .combinatorics import to_rational


@dataclass(frozen=True)
class GameConfig:
    n: int
    k: int
    a: Fraction
    b: Fraction = Fraction(0)
    z: Fraction = Fraction(0)

    def __post_init__(self):
        for name in ("a", "b", "z"):
            object.__setattr__(self, name, to_rational(getattr(self, name)))
        if not isinstance(self.n, int) or self.n < 1:
            raise ValueError(f"n must be a positive integer, got {self.n!r}")
        if not isinstance(self.k, int) or not 1 <= self.k <= self.n:
            raise ValueError(f"k must satisfy 1 <= k <= n, got k={self.k!r}, n={self.n}")
        if not 0 < self.a < 1:
            raise ValueError(f"a must satisfy 0 < a < 1, got {self.a}")
        if self.b < 0:
            raise ValueError(f"b must be >= 0, got {self.b}")
        if self.z < 0:
            raise ValueError(f"z must be >= 0, got {self.z}")


@dataclass(frozen=True)
class ContributionProfile:
    actions: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "actions", tuple(int(t) for t in self.actions))
        if any(t not in (0, 1) for t in self.actions):
            raise ValueError("actions must be 0 or 1")

    @property
    def contributors(self) -> int:
        return sum(self.actions)


@dataclass(frozen=True)
class AuditOutcome:
    audited: frozenset[int]

    def __post_init__(self):
        object.__setattr__(self, "audited", frozenset(self.audited))


@dataclass(frozen=True)
class ExpectationProfile:
    taus: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "taus", tuple(self.taus))

    @classmethod
    def uniform(cls, n: int, tau: int) -> "ExpectationProfile":
        return cls((tau,) * n)


@dataclass(frozen=True)
class CutoffStrategy:
    """Provide ``cutoff`` units when the fund reaches it, otherwise nothing."""

    cutoff: int

    def provision(self, fund: int) -> int:
        return self.cutoff if fund >= self.cutoff else 0


@dataclass(frozen=True)
class PayoffVector:
    agent_payoffs: tuple[Fraction, ...]
    distributor_payoff: Fraction
    fund: int
    provided: int
    complaints: int
    complainers: frozenset[int] = field(default_factory=frozenset)


def _check_audit(audit: AuditOutcome, n: int, k: int | None = None) -> None:
    if any(not 0 <= i < n for i in audit.audited):
        raise ValueError(f"audited indices must lie in 0..{n - 1}")
    if k is not None and len(audit.audited) != k:
        raise ValueError(f"exactly k={k} agents must be audited, got {len(audit.audited)}")


def fund_size(profile: ContributionProfile, audit: AuditOutcome) -> int:
    """Voluntary contributions plus one forced unit per audited free-rider.

    Penalties never enter the fund.
    """
    _check_audit(audit, len(profile.actions))
    forced = sum(1 for i in audit.audited if profile.actions[i] == 0)
    return profile.contributors + forced


def play_round(
    cfg: GameConfig,
    profile: ContributionProfile,
    audit: AuditOutcome,
    strat: CutoffStrategy,
    exps: ExpectationProfile,
) -> PayoffVector:
    n = cfg.n
    if len(profile.actions) != n:
        raise ValueError(f"profile has {len(profile.actions)} actions, expected n={n}")
    if len(exps.taus) != n:
        raise ValueError(f"expectation profile has {len(exps.taus)} entries, expected n={n}")
    if any(not cfg.k <= t <= n for t in exps.taus):
        raise ValueError(f"expectations must lie in {{k..n}} = {{{cfg.k}..{n}}}")
    if not 0 <= strat.cutoff <= n:
        raise ValueError(f"cutoff must lie in 0..{n}")
    _check_audit(audit, n, cfg.k)

    x = fund_size(profile, audit)
    g = strat.provision(x)
    benefit = cfg.a * g
    paid = benefit - 1
    caught = paid - cfg.z
    payoffs = tuple(
        paid if t == 1 else caught if i in audit.audited else benefit
        for i, t in enumerate(profile.actions)
    )
    # stage 4 dominant action: complain iff expectation exceeds provision
    complainers = frozenset(i for i, tau in enumerate(exps.taus) if tau > g)
    dist = x - g + benefit - len(complainers) * cfg.b
    return PayoffVector(
        agent_payoffs=payoffs,
        distributor_payoff=dist,
        fund=x,
        provided=g,
        complaints=len(complainers),
        complainers=complainers,
    )


def profile_from_contributors(n: int, contributors: Sequence[int]) -> ContributionProfile:
    members = set(contributors)
    return ContributionProfile(tuple(1 if i in members else 0 for i in range(n)))
