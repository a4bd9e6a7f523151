# How much capability does a developer build for a given amount of
# dedicated renewable capacity y?  Two regimes, two shapes.
import numpy as np

from ai_energy_game import best_response, build_instance, response_thresholds

# Instance B: willingness to pay grows faster than energy needs (market-led).
B = build_instance("B")
th = response_thresholds(B)
print("B switch points: y1 = %.3f TWh, y2 = %.3f TWh (k = %.2f)" % (th.y1, th.y2, B.k))

for y in np.linspace(0, B.k, 12):
    br = best_response(y, B)
    print(f"  y={y:7.2f}  x*={br.x_star:.4f}  profit={br.profit:8.3f}  {br.zone.value}")

# Instance C: energy needs outpace value (resource-led).  Capability is
# pinned by unit costs outside the coupling band [y_lo, y_hi].
C = build_instance("C")
th = response_thresholds(C)
print("\nC band: y_lo = %.3f, y_hi = %.3f; f(c_f) = %.4f, f(c_r) = %.4f" % (th.y_lo, th.y_hi, th.f_cf, th.f_cr))
for y in np.linspace(0, C.k, 12):
    br = best_response(y, C)
    print(f"  y={y:7.2f}  x*={br.x_star:.4f}  {br.zone.value}")
