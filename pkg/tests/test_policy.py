import math

import numpy as np
import pytest

from ai_energy_game import build_instance
from ai_energy_game.developer import Zone, best_response, response_thresholds
from ai_energy_game.oracle import GridSpec, oracle_policy_optimum
from ai_energy_game.policy import (
    Classification,
    Scenario,
    classify_regime,
    counterfactual_sweep,
    decoupled_cost_reduction,
    optimal_capacity,
    policy_welfare,
    prop1_margins,
    required_cost_reduction,
    solve,
)

A, B, C, D = (build_instance(n) for n in "ABCD")


def test_policy_welfare_at_corners():
    assert policy_welfare(0.0, B) == 0.0
    p = A.replace(d0=50)
    expected = p.eta * (p.theta - p.c_r * p.k) - p.xi * (1 - p.b) * p.d0 - p.cost.g * p.k**p.cost.mu
    assert policy_welfare(p.k, p) == pytest.approx(expected)


def test_policy_welfare_in_coupling_zone():
    p = B.replace(d0=20)
    th = response_thresholds(p)
    y = 0.5 * (th.y1 + th.y2)
    share = (y / p.k) ** (1 / (1 + p.alpha))
    expected = (
        p.eta * (p.theta * (y / p.k) ** (p.lam / (1 + p.alpha)) - p.c_r * y)
        - p.xi * (1 - p.b * share) * p.d0
        - p.cost.g * y**p.cost.mu
    )
    assert policy_welfare(y, p) == pytest.approx(expected, rel=1e-12)


def test_instance_a_trap():
    eq = solve(A, d0=50)
    assert eq.x_star == 1.0
    assert eq.y_star < 0.01 * A.k
    assert not eq.carbon_free


def test_cheap_capacity_gives_full_coverage():
    p = B.replace(g=0.5)
    assert prop1_margins(p).prop1_b
    eq = optimal_capacity(p)
    assert eq.y_star == pytest.approx(p.k)
    assert eq.emissions == 0.0


@pytest.mark.parametrize("name,d0", [("A", 50.0), ("B", 20.0), ("B", 60.0), ("C", 40.0), ("D", 10.0)])
def test_optimum_dominates_dense_grid(name, d0):
    p = build_instance(name, d0=d0)
    eq = optimal_capacity(p)
    ws = policy_welfare(np.linspace(0, p.k, 10_000), p)
    assert eq.welfare >= ws.max() - 1e-9 * abs(ws.max())
    assert eq.x_star == best_response(eq.y_star, p).x_star
    assert 0 <= eq.y_star <= p.k


@pytest.mark.parametrize("d0", [20.0, 60.0])
def test_optimum_matches_nested_oracle(d0):
    p = B.replace(d0=d0)
    grid = GridSpec(n_x=2_001, n_y=4_001)
    y_ref, _, w_ref = oracle_policy_optimum(p, grid)
    eq = optimal_capacity(p)
    assert abs(eq.y_star - y_ref) <= p.k / (grid.n_y - 1)
    assert eq.welfare >= w_ref - 1e-9 * abs(w_ref)
    if d0 == 60.0:
        assert eq.emissions > 0


def test_free_capacity_goes_to_k():
    p = B.replace(g=0.0)
    y_ref, _, _ = oracle_policy_optimum(p, GridSpec(n_x=1_001, n_y=1_001))
    assert y_ref == pytest.approx(p.k)
    assert optimal_capacity(p).y_star == pytest.approx(p.k)


def test_condition_report():
    a, b = prop1_margins(A), prop1_margins(B)
    assert a.decoupling_threshold == pytest.approx(0.057, abs=1e-3)
    assert b.decoupling_threshold == pytest.approx(0.117, abs=1e-3)
    assert b.marginal_cost_k == pytest.approx(66.2, abs=0.1)
    assert b.marginal_benefit == pytest.approx(18.45, abs=0.05)
    assert not b.prop1_b and b.prop1_b_margin < 0
    assert not prop1_margins(D).prop1_a and prop1_margins(D).prop2_i


def test_classifications():
    rep = classify_regime(A)
    assert rep.classification is Classification.TRAP_ABOVE and rep.d_bar == 0.0
    rep = classify_regime(B)
    assert rep.classification is Classification.TRAP_ABOVE
    assert rep.d_bar == pytest.approx(41.925, abs=0.5)
    assert classify_regime(C).classification is Classification.PATHWAY_ABOVE
    rep = classify_regime(D)
    assert rep.classification is Classification.ALWAYS_CARBON_INTENSIVE and math.isinf(rep.d_bar)


def test_cheap_instance_is_always_carbon_free():
    rep = classify_regime(B.replace(g=0.5))
    assert rep.classification is Classification.ALWAYS_CARBON_FREE


def test_trap_monotone_and_capacity_frozen_beyond_threshold():
    d0s = np.linspace(0, 120, 25)
    eqs = [solve(B, d0=d) for d in d0s]
    flags = [not eq.carbon_free for eq in eqs]
    assert flags == sorted(flags)
    trapped = [eq.y_star for eq in eqs if not eq.carbon_free]
    assert np.allclose(trapped, trapped[0], rtol=1e-7)


def test_pathway_monotone():
    flags = [solve(C, d0=d).carbon_free for d in np.linspace(0, 120, 25)]
    assert flags == sorted(flags)


@pytest.mark.parametrize("name", ["A", "B"])
def test_required_reduction_matches_analytic_form(name):
    p = build_instance(name)
    assert required_cost_reduction(p) == pytest.approx(decoupled_cost_reduction(p), abs=1e-4)


def test_required_reduction_zero_when_already_net_zero():
    assert required_cost_reduction(B.replace(g=0.5)) == 0.0


def test_counterfactual_rows_and_validation():
    rows = counterfactual_sweep(C, [Scenario("base", d0=351.7), Scenario("small", {"k": 0.775}, d0=351.7)])
    assert rows[1].params.k == pytest.approx(0.775 * C.k)
    assert rows[0].required_reduction > rows[1].required_reduction
    with pytest.raises(ValueError):
        counterfactual_sweep(C, [Scenario("bad", {"alpha": 2.0})])


def test_zone_labels_on_equilibria():
    assert solve(B, d0=20).zone is Zone.COUPLING
    assert solve(D, d0=10).x_star == 1.0
