# How cheap must renewables get before the equilibrium is frontier AI on
# fully renewable power?  And how does that change with the energy needed
# to reach the frontier (k)?
from ai_energy_game import build_instance, required_cost_reduction
from ai_energy_game.policy import Scenario, counterfactual_sweep, decoupled_cost_reduction, prop1_margins

for name in "AB":
    p = build_instance(name)
    cond = prop1_margins(p)
    print(
        f"{name}: cut needed {required_cost_reduction(p):.2%} (closed form {decoupled_cost_reduction(p):.2%}); "
        f"theta/k = {cond.theta_over_k:.3f} vs decoupling threshold {cond.decoupling_threshold:.3f} USD/kWh"
    )

scenarios = [
    Scenario("nominal", d0=351.7),
    Scenario("k -22.5%", {"k": 0.775}, d0=351.7),
    Scenario("k -30%", {"k": 0.70}, d0=351.7),
]
print("\nInstance C at d0 = 351.7")
for row in counterfactual_sweep(build_instance("C"), scenarios):
    print(f"  {row.scenario.label:10s} k={row.params.k:7.2f}  cut needed {row.required_reduction:.2%}")

row = counterfactual_sweep(build_instance("B"), [Scenario("k +18%", {"k": 1.18}, d0=351.7)])[0]
print(f"\nInstance B, k +18%, d0 = 351.7: cut needed {row.required_reduction:.2%}")
