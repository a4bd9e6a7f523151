# Equilibrium outcomes as baseline climate damage d0 grows, for all four
# case-study instances.  The trap/pathway thresholds come out of a bisection
# on the equilibrium emission predicate.
import numpy as np

from ai_energy_game import build_instance, classify_regime, solve
from ai_energy_game.policy import coupling_onset

for name in "ABCD":
    p = build_instance(name)
    rep = classify_regime(p)
    print(f"\nInstance {name}: {rep.regime.value}, {rep.classification.value}, d_bar = {rep.d_bar:.3f}")
    print("     d0      x*        y*     demand    beta   emissions  zone")
    for d0 in np.linspace(0, 60, 7):
        eq = solve(p, d0=d0)
        print(
            f"  {d0:5.1f}  {eq.x_star:.4f}  {eq.y_star:8.3f}  {eq.demand:8.3f}  {eq.beta:.4f}  {eq.emissions:.6f}  {eq.zone.value}"
        )

# B couples demand to capacity on a middle band of d0, before the trap sets in.
B = build_instance("B")
print("\nB: capability switches on at d0 = %.2f, trap from d0 = %.2f" % (coupling_onset(B), classify_regime(B).d_bar))
