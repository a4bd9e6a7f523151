"""Two-stage game between a welfare-maximizing policymaker choosing renewable
capacity and a profit-maximizing AI developer choosing capability."""

from .calibration import build_instance
from .duopoly import Region, duopoly_equilibrium, duopoly_policy
from .developer import Regime, Zone, best_response, response_thresholds, scaling_regime
from .extensions import phi_equilibrium
from .model import CostSpec, ModelParams, evaluate
from .policy import (
    Equilibrium,
    classify_regime,
    optimal_capacity,
    required_cost_reduction,
    solve,
)

__all__ = [
    "CostSpec",
    "Equilibrium",
    "ModelParams",
    "Regime",
    "Region",
    "Zone",
    "best_response",
    "build_instance",
    "classify_regime",
    "duopoly_equilibrium",
    "duopoly_policy",
    "evaluate",
    "optimal_capacity",
    "phi_equilibrium",
    "required_cost_reduction",
    "response_thresholds",
    "scaling_regime",
    "solve",
]
