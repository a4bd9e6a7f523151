# If better AI also makes renewables cheaper to integrate, V(y) becomes
# phi(x) V(y) with phi(x) = 1 - s x.  The trap for Instance B sets in earlier,
# but with more renewable capacity in place once it does.
from ai_energy_game import build_instance, classify_regime
from ai_energy_game.extensions import phi_classification, phi_equilibrium

B = build_instance("B")
print("base trap onset:", round(classify_regime(B).d_bar, 3))
for s in (0.0, 5 / 9.83, 7 / 9.83):
    rep = phi_classification(B, s)
    eq = phi_equilibrium(B.replace(d0=60), s)
    print(f"s = {s:.3f}: trap from d0 = {rep.d_bar:7.3f}; at d0 = 60 y* = {eq.y_star:7.2f}, emissions = {eq.emissions:.5f}")
