# Brute-force check of the closed-form solvers on random instances.
from ai_energy_game.developer import best_response
from ai_energy_game.oracle import audit

rep = audit(n_per_regime=20, seed=1, policy=True)
print(f"{rep.checks} checks, {len(rep.failures)} failures")

# A solver that rounds capability to one decimal does not get past the oracle.
rough = audit(n_per_regime=5, seed=1, best_response_fn=lambda y, p: round(best_response(y, p).x_star, 1))
print(f"rounded solver: {len(rough.failures)} of {rough.checks} checks fail")
