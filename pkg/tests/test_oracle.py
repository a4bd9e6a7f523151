import numpy as np
import pytest

from ai_energy_game import build_instance
from ai_energy_game.developer import best_response, f_threshold
from ai_energy_game.oracle import GridSpec, audit, oracle_best_response, random_instance

A, C = build_instance("A"), build_instance("C")


def test_oracle_named_points():
    assert abs(oracle_best_response(0.0, C) - f_threshold(C.c_f, C)) <= 5e-5
    assert oracle_best_response(A.k, A) == 1.0
    assert oracle_best_response(10.0, A.replace(theta=0.0)) == 0.0


def test_grid_spec_validation():
    with pytest.raises(ValueError):
        GridSpec(n_x=2)


def test_random_instances_respect_regime():
    rng = np.random.default_rng(0)
    assert all(random_instance(rng, True).market_led for _ in range(50))
    assert not any(random_instance(rng, False).market_led for _ in range(50))


def test_small_audit_passes_and_is_reproducible():
    first = audit(n_per_regime=10, seed=3, policy=True)
    second = audit(n_per_regime=10, seed=3, policy=True)
    assert first.passed and first.checks == 20 * 5 + 20
    assert first.failures == second.failures and first.checks == second.checks


def test_empty_audit_is_vacuous():
    rep = audit(n_per_regime=0)
    assert rep.passed and rep.checks == 0


def test_corrupted_solver_is_caught():
    def broken(y, p):
        # drop the coupling candidate's exponent: a typical transcription slip
        return min(best_response(y, p).x_star * 0.9 + 0.05, 1.0)

    rep = audit(n_per_regime=5, seed=1, best_response_fn=broken)
    assert not rep.passed
