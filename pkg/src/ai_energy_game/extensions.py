"""AI-enabled renewable cost reduction: ``V`` scaled by ``phi(x) = 1 - s x``.

The duopoly extension lives in :mod:`ai_energy_game.duopoly`.
"""

from __future__ import annotations

from typing import Optional

from .policy import Equilibrium, RegimeReport, classify_regime, optimal_capacity, required_cost_reduction


def with_phi(p, slope: float):
    if not 0 <= slope < 1:
        raise ValueError(f"phi slope must lie in [0, 1), got {slope}")
    return p.replace(phi_slope=slope)


def phi_equilibrium(p, slope: Optional[float] = None, **solver_kwargs) -> Equilibrium:
    """Policy optimum with the investment cost multiplied by ``phi(x*)``.

    ``slope`` overrides the one stored in ``p.cost``.
    """
    if slope is not None:
        p = with_phi(p, slope)
    return optimal_capacity(p, **solver_kwargs)


def phi_classification(p, slope: float, **solver_kwargs) -> RegimeReport:
    return classify_regime(with_phi(p, slope), **solver_kwargs)


def phi_cost_reduction(p, slope: float, **solver_kwargs) -> Optional[float]:
    """Extra cut in ``g`` still needed once capability lowers costs by ``phi``."""
    return required_cost_reduction(with_phi(p, slope), **solver_kwargs)


def phi_threshold_scale(slope: float) -> float:
    """Factor applied to the net-zero cost thresholds on ``g``: ``1 / phi(1)``."""
    if not 0 <= slope < 1:
        raise ValueError(f"phi slope must lie in [0, 1), got {slope}")
    return 1.0 / (1.0 - slope)
