# Two developers choose capability, then price.  Which market structure
# emerges across (theta, lambda)?
import numpy as np

from ai_energy_game import build_instance
from ai_energy_game.duopoly import duopoly_equilibrium, duopoly_policy, monopoly_coverage, region_map

A = build_instance("A", d0=50)
print("price-setting monopoly reproduces the base model: coverage %.4f%%" % (100 * monopoly_coverage(A)))

out = duopoly_equilibrium(10.0, 30.0, A.replace(theta=57.5, lam=2.5))
print("one profile:", out.region.value, "x =", (round(out.x1, 3), round(out.x2, 3)), "prices", (round(out.p1, 2), round(out.p2, 2)))

thetas = np.linspace(10, 200, 6)
lams = np.linspace(2.5, 5.0, 4)
short = {"MonopolyCollapse": "M", "PartialCarbonFree": "P", "DualTrap": "D"}
for title, caps in (("capacities fixed at (10, 30)", (10.0, 30.0)), ("planner chooses capacities", None)):
    cells = region_map(A, thetas, lams, capacities=caps, n_capacity=10, rounds=1)
    print(f"\n{title}; rows theta, columns lambda {np.round(lams, 2)}")
    for i, t in enumerate(thetas):
        print(f"  {t:6.1f}  " + " ".join(short[c.region.value] for c in cells[i * len(lams) : (i + 1) * len(lams)]))

y1, y2, out = duopoly_policy(A)
print(f"\nplanner at Instance A: y = ({y1:.4f}, {y2:.4f}), {out.region.value}, coverage {out.coverage_share:.4%}")
