import math

import pytest

from ai_energy_game import build_instance
from ai_energy_game.calibration import (
    REGISTRY,
    derive_eta,
    fit_alpha,
    fit_mu,
    fit_power_law,
    format_params,
    load_energy_cross_section,
    load_investment_series,
    load_projects,
    mean_variance_cost,
    mu_from_ratios,
    parse_assignments,
    read_params,
    run_calibration,
    scaled_energy_demand,
    write_params,
)


def test_power_law_fits():
    series = load_investment_series()
    assert fit_power_law(series["US"].pairs())[0] == pytest.approx(3.83, abs=0.01)
    assert fit_power_law(series["EU"].pairs())[0] == pytest.approx(2.15, abs=0.01)
    slope, level = fit_power_law([(1.0, 3.0), (1 / math.e, 3.0 * math.exp(-2))])
    assert slope == pytest.approx(2.0, abs=1e-12) and level == pytest.approx(3.0)


def test_power_law_scale_equivariance():
    pairs = load_investment_series()["China"].pairs()
    s0, l0 = fit_power_law(pairs)
    s1, l1 = fit_power_law([(x, 7 * w) for x, w in pairs])
    assert s1 == pytest.approx(s0) and l1 == pytest.approx(7 * l0)


def test_power_law_rejects_bad_input():
    with pytest.raises(ValueError):
        fit_power_law([(0.5, 1.0)])
    with pytest.raises(ValueError):
        fit_power_law([(0.5, 1.0), (0.5, 2.0)])
    with pytest.raises(ValueError):
        fit_power_law([(0.5, -1.0), (0.6, 2.0)])


def test_alpha():
    rows = load_energy_cross_section()
    assert fit_alpha(rows) == pytest.approx(1.467, abs=0.005)
    assert fit_alpha(rows[::-1]) == pytest.approx(fit_alpha(rows), rel=1e-12)
    synthetic = [(m, 50.0 * (m / 100) ** 2) for m in (30.0, 50.0, 80.0)]
    assert fit_alpha(synthetic) == pytest.approx(1.0, abs=1e-12)


def test_mean_variance_cost():
    assert mean_variance_cost(79.27, 93.90) == pytest.approx(0.088, abs=1e-3)
    assert mean_variance_cost(87.80, 150.0) == pytest.approx(0.151, abs=1e-3)
    assert mean_variance_cost(120.0, 120.0) == pytest.approx(0.12)
    with pytest.raises(ValueError):
        mean_variance_cost(2.0, 1.0)


def test_mu():
    assert mu_from_ratios(1.94, 1.25) == pytest.approx(1.337, abs=1e-3)
    assert mu_from_ratios(math.e, math.e) == pytest.approx(2.0)
    with pytest.raises(ValueError):
        mu_from_ratios(2.0, 1.0)
    with pytest.raises(ValueError):
        mu_from_ratios(-1.0, 1.0)
    assert fit_mu(load_projects()) == pytest.approx(1.34, abs=0.01)


def test_eta():
    assert derive_eta(25_600, 109.08 + 15.23 + 19.42) == pytest.approx(178, abs=1)
    assert derive_eta(5.0, 5.0) == 1.0
    assert derive_eta(10.0, 5.0) == 2.0
    with pytest.raises(ZeroDivisionError):
        derive_eta(1.0, 0.0)


def test_registry_instances():
    a = build_instance("A")
    assert (a.theta, a.lam, a.k, a.c_r, a.c_f, a.cost.g, a.cost.mu) == (109.08, 3.83, 177.51, 0.05, 0.088, 15.83, 1.34)
    assert a.e_f == pytest.approx(0.367e-3) and a.xi == pytest.approx(225.0)
    c, d = build_instance("C"), build_instance("D")
    assert scaled_energy_demand(63.51, 52.5, 70.0, 1.467) == pytest.approx(c.k, abs=0.1)
    assert d.replace(theta=c.theta) == c
    with pytest.raises(KeyError):
        build_instance("E")


def test_full_pipeline():
    rep = run_calibration()
    for region, lam in zip(("US", "China", "EU"), (3.83, 3.19, 2.15)):
        assert rep.lam[region] == pytest.approx(lam, abs=0.01)
    for region, cf in zip(("US", "China", "EU"), (0.088, 0.151, 0.193)):
        assert rep.c_f[region] == pytest.approx(cf, abs=1e-3)
    assert rep.alpha == pytest.approx(1.467, abs=0.005)
    assert rep.mu == pytest.approx(1.34, abs=0.01)
    assert rep.eta == pytest.approx(178, abs=1)
    assert rep.k_eu == pytest.approx(129.14, abs=0.1)


@pytest.mark.parametrize("name", sorted(REGISTRY))
def test_parameter_file_round_trip(tmp_path, name):
    p = build_instance(name, d0=12.5).replace(phi_slope=0.25)
    path = tmp_path / "p.txt"
    write_params(p, path)
    assert read_params(path) == p


def test_parameter_file_parsing():
    text = "# comment\ntheta = 2.0  # trailing\nlam = 3\n\n"
    assert parse_assignments(text.splitlines()) == {"theta": 2.0, "lambda": 3.0}
    with pytest.raises(ValueError):
        parse_assignments(["nonsense"])
    with pytest.raises(ValueError):
        parse_assignments(["gamma = 1"])
    assert format_params(build_instance("A")).count("\n") == 14
