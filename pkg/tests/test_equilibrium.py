import math
from fractions import Fraction as F

import pytest

from conftest import small_games
from pubgood.brute import eu_agent_contribute_brute, eu_agent_defect_brute, eu_distributor_brute
from pubgood.equilibrium import (
    EQUILIBRIUM,
    NOT_EQUILIBRIUM,
    a_max,
    agent_terms,
    b_star,
    efficient_case,
    free_riding_case,
    indifference_penalty,
    mixing_probability,
    solve,
    verify,
    z_star,
)
from pubgood.exact import eu_agent_contribute, eu_agent_defect, fund_distribution
from pubgood.model import GameConfig


def _a_grid(n, k, tau):
    bound = a_max(n, k, tau)
    third = F(9, 10) if bound == math.inf else min(bound, F(9, 10))
    return sorted({F(1, 5), F(1, 2), third})


@pytest.mark.parametrize("n,k,tau,expected", [(3, 1, 2, F(1, 2)), (10, 2, 2, 0), (10, 2, 10, 1)])
def test_mixing_probability(n, k, tau, expected):
    assert mixing_probability(n, k, tau) == expected


def test_mixing_probability_rejects_degenerate():
    with pytest.raises(ValueError, match="k must be < n"):
        mixing_probability(3, 3, 3)
    with pytest.raises(ValueError):
        mixing_probability(5, 2, 1)


def test_mixing_probability_increasing_in_tau():
    for n in range(2, 12):
        for k in range(1, n):
            ps = [mixing_probability(n, k, tau) for tau in range(k, n + 1)]
            assert all(x < y for x, y in zip(ps, ps[1:]))


@pytest.mark.parametrize("a", [F(1, 4), F(1, 2), F(3, 4)])
def test_z_star_closed_forms(a):
    assert z_star(3, 1, a, 2) == 2 - 2 * a
    for n in range(2, 8):
        for k in range(1, n):
            assert z_star(n, k, a, k) == F(n - k, k)
            assert z_star(n, k, a, n) == F(n - k, k) * (1 - n * a)


def test_pivotal_probability_interpretation():
    # A + B - C = Pr(others' fund, all k audits among them, equals tau - 1)
    from itertools import combinations, product

    for n, k, tau in small_games(6, strict=True):
        p = mixing_probability(n, k, tau)
        t = agent_terms(n, k, tau, p)
        others = n - 1
        audits = list(combinations(range(others), k))
        prob = F(0)
        for actions in product((0, 1), repeat=others):
            j = sum(actions)
            w = p**j * (1 - p) ** (others - j) / len(audits)
            for audit in audits:
                if j + sum(1 for i in audit if actions[i] == 0) == tau - 1:
                    prob += w
        assert t["A"] + t["B"] - t["C"] == prob


def test_a_max():
    assert a_max(3, 1, 2) == 1
    assert a_max(4, 1, 4) == F(1, 4)
    for n in range(2, 8):
        for k in range(1, n):
            assert a_max(n, k, k) == math.inf


@pytest.mark.parametrize("a", [F(1, 4), F(1, 2), F(3, 4)])
def test_b_star_closed_forms(a):
    assert b_star(3, 1, a, 2) == F(2, 3) * (1 - a)
    for n in range(2, 8):
        for k in range(1, n):
            assert b_star(n, k, a, n) == 1 - a
            assert b_star(n, k, a, k) == F(k, n) * (1 - a)


def test_b_star_is_brute_force_indifference_point():
    # at b = b*, the distributor is exactly indifferent between <tau> and <0>
    for n, k, tau in small_games(5, strict=True):
        a = F(1, 3)
        p = mixing_probability(n, k, tau)
        b = b_star(n, k, a, tau)
        assert eu_distributor_brute(n, k, a, b, p, tau, tau) == eu_distributor_brute(n, k, a, b, p, tau, 0)


def test_solve_examples():
    s = solve(3, 1, F(1, 2), 2)
    assert (s.p, s.z_star, s.b_star, s.feasible) == (F(1, 2), 1, F(1, 3), True)
    s = solve(3, 1, F(1, 2), 1)
    assert (s.p, s.z_star, s.b_star, s.feasible) == (0, 2, F(1, 6), True)
    s = solve(3, 1, F(1, 2), 3)
    assert (s.p, s.z_star, s.feasible) == (1, -1, False)
    assert s.terms["D"] + s.terms["E"] == 1 - s.terms["F"]


def test_solve_rejects():
    with pytest.raises(ValueError):
        solve(3, 1, F(1), 2)
    with pytest.raises(ValueError):
        solve(3, 3, F(1, 2), 3)


def test_indifference_grid():
    for n, k, tau in small_games(7, strict=True):
        for a in _a_grid(n, k, tau):
            z = z_star(n, k, a, tau)
            p = mixing_probability(n, k, tau)
            assert eu_agent_contribute(n, k, a, z, p, tau) == eu_agent_defect(n, k, a, z, p, tau)


def test_indifference_holds_for_any_p():
    for n, k, tau in small_games(5, strict=True):
        for p in (F(1, 5), F(2, 3)):
            z = indifference_penalty(n, k, F(1, 3), tau, p)
            if z < 0:
                continue
            assert eu_agent_contribute_brute(n, k, F(1, 3), z, p, tau) == eu_agent_defect_brute(n, k, F(1, 3), z, p, tau)


def test_threshold_equivalence_grid():
    for n, k, tau in small_games(7, strict=True):
        for a in _a_grid(n, k, tau):
            assert b_star(n, k, a, tau) == tau * (1 - a) / n


def test_soundness_and_sharpness():
    for n, k, tau in small_games(7, strict=True):
        for a in _a_grid(n, k, tau):
            sol = solve(n, k, a, tau)
            if not sol.feasible:
                continue
            ok = verify(GameConfig(n, k, a, sol.b_star, sol.z_star), tau, sol.p)
            assert ok.verdict == EQUILIBRIUM, (n, k, tau, a, ok.witnesses)
            bad = verify(GameConfig(n, k, a, sol.b_star - F(1, 1000), sol.z_star), tau, sol.p)
            assert bad.verdict == NOT_EQUILIBRIUM
            assert bad.agent_ok and not bad.distributor_ok
            assert any(w.startswith("distributor: cutoff 0") for w in bad.witnesses)


def test_per_fund_argmax_structure():
    # best provision is 0 or exactly tau; interior amounts never strictly win
    for n, k, tau in small_games(7, strict=True):
        for a in (F(1, 5), F(4, 5)):
            for b in (F(0), b_star(n, k, a, tau), F(2)):
                cfg = GameConfig(n, k, a, b, 0)
                for x in range(k, n + 1):
                    values = {g: x - g + a * g - (n * b if g < tau else 0) for g in range(x + 1)}
                    top = max(values.values())
                    winners = {g for g, v in values.items() if v == top}
                    assert winners <= {0, tau}
                rep = verify(cfg, tau)
                for x, g in rep.per_fund_decisions.items():
                    assert g in (0, tau)


@pytest.mark.parametrize(
    "b,verdict,witness",
    [(F(1, 2), EQUILIBRIUM, None), (F(1, 5), NOT_EQUILIBRIUM, "distributor: cutoff 0 improves payoff")],
)
def test_verify_examples(b, verdict, witness):
    rep = verify(GameConfig(3, 1, F(1, 2), b, 1), 2, F(1, 2))
    assert rep.verdict == verdict
    if witness:
        assert any(w.startswith(witness) for w in rep.witnesses)


def test_verify_efficient_example():
    rep = verify(GameConfig(3, 1, F(1, 2), 1, 0), 3, 1)
    assert rep.verdict == EQUILIBRIUM
    assert rep.agent_contribute_eu == F(1, 2)
    assert rep.agent_defect_eu == F(1, 6)


def test_verify_mixed_requires_exact_indifference():
    rep = verify(GameConfig(3, 1, F(1, 2), F(1, 2), F(101, 100)), 2, F(1, 2))
    assert not rep.agent_ok
    assert rep.witnesses[0].startswith("agent: contributing")


def test_verify_rejects():
    with pytest.raises(ValueError):
        verify(GameConfig(3, 1, F(1, 2)), 0)
    with pytest.raises(ValueError):
        verify(GameConfig(3, 1, F(1, 2)), 2, F(2))


@pytest.mark.parametrize("n,k,threshold,b", [(3, 1, 2, F(1, 6)), (10, 5, 1, F(1, 4)), (100, 1, 99, F(1, 200))])
def test_free_riding_case(n, k, threshold, b):
    sol = free_riding_case(n, k, F(1, 2))
    assert sol.p == 0
    assert sol.z_threshold == threshold
    assert sol.b_star == b
    assert sol.pure_check.verdict == EQUILIBRIUM


@pytest.mark.parametrize("n,k,a,b,passes", [(3, 1, F(1, 2), F(1, 2), True), (3, 1, F(1, 4), F(3, 4), False), (10, 2, F(9, 10), F(1, 10), True)])
def test_efficient_case(n, k, a, b, passes):
    sol = efficient_case(n, k, a)
    assert sol.p == 1
    assert sol.b_star == b
    assert sol.pure_check.cfg.z == 0
    assert sol.pure_check.is_equilibrium is passes
    assert sol.pure_check.distributor_ok
    if not passes:
        assert sol.pure_check.witnesses[0].startswith("agent: defecting")


def test_realizable_funds_used_by_verifier():
    rep = verify(GameConfig(4, 1, F(1, 2), F(1, 2), F(3)), 1, F(0))
    assert list(rep.per_fund_decisions) == fund_distribution(4, 1, F(0)).realizable() == [1]
