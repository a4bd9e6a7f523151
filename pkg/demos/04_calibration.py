# Re-derive the calibrated parameters from the bundled data tables.
from ai_energy_game.calibration import REGISTRY, load_investment_series, run_calibration

rep = run_calibration()
for region, series in load_investment_series().items():
    print(f"{region:6s} years {series.years}  lambda = {rep.lam[region]:.4f}  level = {rep.theta_fit[region]:.2f}")
print(f"alpha = {rep.alpha:.4f}")
print("c_f   =", {r: round(v, 4) for r, v in rep.c_f.items()})
print(f"mu    = {rep.mu:.4f}  (average-cost form)")
print(f"eta   = {rep.eta:.2f}")
print(f"k for the EU at the target capability = {rep.k_eu:.2f} TWh")

# The registry keeps the rounded published values.
for name, row in REGISTRY.items():
    print(name, row)
