import itertools
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from pubgood.model import (
    AuditOutcome,
    ContributionProfile,
    CutoffStrategy,
    ExpectationProfile,
    GameConfig,
    fund_size,
    play_round,
    profile_from_contributors,
)


def test_fund_size_examples():
    audit = AuditOutcome({0})
    assert fund_size(ContributionProfile((1, 1, 1)), audit) == 3
    assert fund_size(ContributionProfile((0, 0, 0)), AuditOutcome({2})) == 1
    assert fund_size(profile_from_contributors(3, [1]), AuditOutcome({1})) == 1


def test_play_round_full_contribution():
    cfg = GameConfig(3, 1, F(3, 4), F(1, 2), 0)
    out = play_round(cfg, ContributionProfile((1, 1, 1)), AuditOutcome({0}), CutoffStrategy(3), ExpectationProfile.uniform(3, 3))
    assert (out.fund, out.provided, out.complaints) == (3, 3, 0)
    assert out.agent_payoffs == (F(5, 4),) * 3
    assert out.distributor_payoff == F(9, 4)


def test_play_round_full_embezzlement():
    cfg = GameConfig(3, 1, F(3, 4), F(1, 2), 0)
    out = play_round(cfg, ContributionProfile((1, 1, 1)), AuditOutcome({0}), CutoffStrategy(0), ExpectationProfile.uniform(3, 3))
    assert out.provided == 0
    assert out.agent_payoffs == (F(-1),) * 3
    assert out.complaints == 3
    assert out.distributor_payoff == F(3, 2)


def test_play_round_audited_free_rider():
    cfg = GameConfig(3, 1, F(3, 4), 0, F(1, 4))
    out = play_round(cfg, ContributionProfile((0, 0, 0)), AuditOutcome({0}), CutoffStrategy(1), ExpectationProfile.uniform(3, 1))
    assert (out.fund, out.provided, out.complaints) == (1, 1, 0)
    assert out.agent_payoffs == (F(-1, 2), F(3, 4), F(3, 4))
    assert out.distributor_payoff == F(3, 4)


@pytest.mark.parametrize(
    "kwargs",
    [dict(n=3, k=0, a=F(1, 2)), dict(n=3, k=4, a=F(1, 2)), dict(n=3, k=1, a=F(1)), dict(n=3, k=1, a=F(0)),
     dict(n=3, k=1, a=F(1, 2), b=-1), dict(n=3, k=1, a=F(1, 2), z=-1), dict(n=0, k=0, a=F(1, 2))],
)
def test_game_config_rejects(kwargs):
    with pytest.raises(ValueError):
        GameConfig(**kwargs)


def test_play_round_rejects_inconsistent_inputs():
    cfg = GameConfig(3, 1, F(1, 2))
    good = (ContributionProfile((1, 0, 0)), AuditOutcome({1}), CutoffStrategy(2), ExpectationProfile.uniform(3, 2))
    play_round(cfg, *good)
    with pytest.raises(ValueError):  # expectation below k
        play_round(cfg, *good[:3], ExpectationProfile((0, 2, 2)))
    with pytest.raises(ValueError):  # wrong audit size
        play_round(cfg, good[0], AuditOutcome({0, 1}), *good[2:])
    with pytest.raises(ValueError):  # index out of range
        play_round(cfg, good[0], AuditOutcome({3}), *good[2:])
    with pytest.raises(ValueError):
        play_round(cfg, ContributionProfile((1, 0)), *good[1:])
    with pytest.raises(ValueError):
        ContributionProfile((2, 0, 0))


@st.composite
def plays(draw):
    n = draw(st.integers(1, 8))
    k = draw(st.integers(1, n))
    cfg = GameConfig(
        n,
        k,
        draw(st.fractions(min_value=F(1, 100), max_value=F(99, 100), max_denominator=100)),
        draw(st.fractions(min_value=0, max_value=5, max_denominator=20)),
        draw(st.fractions(min_value=0, max_value=5, max_denominator=20)),
    )
    actions = tuple(draw(st.lists(st.integers(0, 1), min_size=n, max_size=n)))
    audited = draw(st.sets(st.integers(0, n - 1), min_size=k, max_size=k))
    taus = tuple(draw(st.lists(st.integers(k, n), min_size=n, max_size=n)))
    cutoff = draw(st.integers(0, n))
    return cfg, ContributionProfile(actions), AuditOutcome(audited), CutoffStrategy(cutoff), ExpectationProfile(taus)


@given(plays())
def test_realized_play_invariants(play):
    cfg, profile, audit, strat, exps = play
    out = play_round(cfg, profile, audit, strat, exps)
    assert cfg.k <= out.fund <= cfg.n
    assert 0 <= out.provided <= out.fund
    assert out.complaints == sum(1 for t in exps.taus if t > out.provided)
    # distributor keeps what is not provided, enjoys a*g, loses b per complaint
    assert out.distributor_payoff + out.provided * (1 - cfg.a) - out.fund + out.complaints * cfg.b == 0
    caught = sum(1 for i in audit.audited if profile.actions[i] == 0)
    volunteers = profile.contributors
    assert sum(out.agent_payoffs) == cfg.n * cfg.a * out.provided - volunteers - caught * (1 + cfg.z)


@given(plays())
def test_complaints_non_increasing_in_provision(play):
    cfg, _, _, _, exps = play
    counts = [sum(1 for t in exps.taus if t > g) for g in range(cfg.n + 1)]
    assert all(x >= y for x, y in zip(counts, counts[1:]))


def test_cutoff_gain_is_independent_of_fund():
    # under common tau and X >= tau: <tau> minus <0> equals n b - tau (1 - a)
    a, b = F(2, 5), F(1, 3)
    for n in range(1, 8):
        for k in range(1, n + 1):
            cfg = GameConfig(n, k, a, b, 0)
            for tau in range(k, n + 1):
                exps = ExpectationProfile.uniform(n, tau)
                for actions in itertools.product((0, 1), repeat=n):
                    profile = ContributionProfile(actions)
                    audit = AuditOutcome(range(k))
                    if fund_size(profile, audit) < tau:
                        continue
                    gain = (
                        play_round(cfg, profile, audit, CutoffStrategy(tau), exps).distributor_payoff
                        - play_round(cfg, profile, audit, CutoffStrategy(0), exps).distributor_payoff
                    )
                    assert gain == n * b - tau * (1 - a)
