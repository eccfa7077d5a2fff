"""Public-good provision with a self-interested distributor.

Exact expected utilities, the symmetric mixed-strategy equilibrium and its
verifier, and a seeded Monte Carlo simulator of realized play.
"""
from .combinatorics import binom, binomial_pmf, hypergeom_pmf, to_rational
from .equilibrium import (
    EquilibriumSolution,
    VerificationReport,
    a_max,
    b_star,
    efficient_case,
    free_riding_case,
    mixing_probability,
    solve,
    verify,
    z_star,
)
from .exact import (
    FundDistribution,
    eu_agent_contribute,
    eu_agent_defect,
    eu_distributor,
    expected_fund,
    expected_fund_oracle,
    expected_outcomes,
    fund_distribution,
)
from .model import (
    AuditOutcome,
    ContributionProfile,
    CutoffStrategy,
    ExpectationProfile,
    GameConfig,
    PayoffVector,
    fund_size,
    play_round,
)
from .simulator import SimulationReport, simulate

__version__ = "0.1.0"
