"""Policymaker's capacity choice, equilibrium classification and counterfactuals."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .developer import Regime, Zone, _ZONES, respond, response_thresholds, scaling_regime
from .model import ModelParams, energy_demand, renewable_share, welfare_at, emissions, damages
from .optimize import bisect_threshold, golden_max

CARBON_FREE_TOL = 1e-12  # Gt
D0_CEILING = 1e4  # Gt
D0_TOL = 0.01  # Gt


@dataclass(frozen=True)
class Equilibrium:
    y_star: float
    x_star: float
    demand: float
    beta: float
    emissions: float
    damages: float
    welfare: float
    zone: Zone
    regime: Regime
    d0: float

    @property
    def carbon_free(self) -> bool:
        return self.emissions <= CARBON_FREE_TOL


class Classification(str, enum.Enum):
    ALWAYS_CARBON_FREE = "AlwaysCarbonFree"
    TRAP_ABOVE = "TrapAbove"
    ALWAYS_CARBON_INTENSIVE = "AlwaysCarbonIntensive"
    PATHWAY_ABOVE = "PathwayAbove"


@dataclass(frozen=True)
class ConditionReport:
    """Closed-form net-zero conditions with their slack (positive = satisfied)."""

    theta_over_k: float
    decoupling_threshold: float  # (1+alpha) c_f / lam, in USD/kWh
    prop1_a: bool
    prop1_a_margin: float
    marginal_cost_k: float
    marginal_benefit: float
    prop1_b: bool
    prop1_b_margin: float
    prop2_i: bool


@dataclass(frozen=True)
class RegimeReport:
    regime: Regime
    conditions: ConditionReport
    classification: Classification
    d_bar: float
    # True when d_bar came from the d0 bisection rather than a closed-form corner
    numeric: bool = False

    @property
    def prop1_a(self) -> bool:
        return self.conditions.prop1_a

    @property
    def prop1_b(self) -> bool:
        return self.conditions.prop1_b

    @property
    def prop2_i(self) -> bool:
        return self.conditions.prop2_i


def policy_welfare(y, p: ModelParams):
    """Welfare at capacity ``y`` with the developer's best response plugged in."""
    x, _, _ = respond(y, p)
    out = welfare_at(x, np.minimum(np.atleast_1d(np.asarray(y, dtype=float)), p.k), p)
    return out if np.ndim(y) else float(out[0])


def make_equilibrium(y: float, p: ModelParams) -> Equilibrium:
    x, _, zone = respond(y, p)
    x = float(x[0])
    return Equilibrium(
        y_star=float(y),
        x_star=x,
        demand=float(energy_demand(x, p)),
        beta=float(renewable_share(x, y, p)),
        emissions=float(emissions(x, y, p)),
        damages=float(damages(x, y, p)),
        welfare=float(welfare_at(x, y, p)),
        zone=_ZONES[int(zone[0])],
        regime=scaling_regime(p),
        d0=p.d0,
    )


def _pick(candidates: list[tuple[float, float]]) -> tuple[float, float]:
    """Largest welfare; near-ties go to the larger capacity."""
    best = max(w for _, w in candidates)
    tol = 1e-12 * (abs(best) + 1.0)
    return max((c for c in candidates if c[1] >= best - tol), key=lambda c: c[0])


def optimal_capacity(p: ModelParams, n_scan: int = 2000, tol: float = 1e-10) -> Equilibrium:
    """Welfare-maximizing renewable capacity on ``[0, k]``.

    The interval is split at the best-response switch points.  Each piece is
    scanned on ``n_scan`` points and the best scan point is refined by
    golden-section search; piece optima, breakpoints and both endpoints are
    then compared.
    """
    edges = [0.0, *response_thresholds(p).breakpoints(p.k), p.k]
    candidates = [(y, policy_welfare(y, p)) for y in edges]
    for a, b in zip(edges[:-1], edges[1:]):
        ys = np.linspace(a, b, n_scan)
        ws = policy_welfare(ys, p)
        i = int(np.argmax(ws))
        candidates.append((float(ys[i]), float(ws[i])))
        lo, hi = ys[max(i - 1, 0)], ys[min(i + 1, n_scan - 1)]
        candidates.append(golden_max(lambda y: policy_welfare(y, p), lo, hi, tol * p.k))
    y_star, _ = _pick(candidates)
    return make_equilibrium(y_star, p)


def solve(p: ModelParams, d0: Optional[float] = None, **kwargs) -> Equilibrium:
    if d0 is not None:
        p = p.replace(d0=d0)
    return optimal_capacity(p, **kwargs)


def prop1_margins(p: ModelParams) -> ConditionReport:
    """Evaluate the closed-form corner conditions of both regimes.

    The marginal investment cost at ``k`` includes ``phi(1)`` when a
    capability multiplier is configured.
    """
    threshold = (1 + p.alpha) * p.c_f / p.lam
    cap = max(threshold * p.k, p.c_r * p.k)
    marginal_cost = float(p.cost.phi(1.0) * p.cost.marginal(p.k))
    benefit = p.eta * (p.c_f - p.c_r) + (1 - p.b) * p.e_f * p.xi
    return ConditionReport(
        theta_over_k=p.theta / p.k,
        decoupling_threshold=threshold,
        prop1_a=p.theta <= cap,
        prop1_a_margin=cap - p.theta,
        marginal_cost_k=marginal_cost,
        marginal_benefit=benefit,
        prop1_b=marginal_cost <= benefit,
        prop1_b_margin=benefit - marginal_cost,
        prop2_i=p.theta > threshold * p.k and marginal_cost > benefit,
    )


def d0_threshold(
    p: ModelParams,
    predicate: Callable[[Equilibrium], bool],
    lo: float = 0.0,
    hi: float = D0_CEILING,
    tol: float = D0_TOL,
    **solver_kwargs,
) -> float:
    """Smallest ``d0`` at which a monotone equilibrium predicate turns true.

    Returns ``lo`` if it already holds there and ``inf`` if it never holds
    up to ``hi``.
    """

    def holds(d0):
        return predicate(solve(p, d0=d0, **solver_kwargs))

    if holds(lo):
        return lo
    if not holds(hi):
        return math.inf
    return bisect_threshold(holds, lo, hi, tol)


def classify_regime(p: ModelParams, **solver_kwargs) -> RegimeReport:
    """Trap / pathway classification with the matching ``d0`` threshold."""
    regime = scaling_regime(p)
    cond = prop1_margins(p)
    if regime is Regime.MARKET_LED:
        if cond.prop1_a or cond.prop1_b:
            return RegimeReport(regime, cond, Classification.ALWAYS_CARBON_FREE, math.inf)
        d_bar = d0_threshold(p, lambda eq: not eq.carbon_free, **solver_kwargs)
        cls = Classification.TRAP_ABOVE if math.isfinite(d_bar) else Classification.ALWAYS_CARBON_FREE
        return RegimeReport(regime, cond, cls, d_bar, numeric=True)
    if cond.prop2_i:
        return RegimeReport(regime, cond, Classification.ALWAYS_CARBON_INTENSIVE, math.inf)
    d_bar = d0_threshold(p, lambda eq: eq.carbon_free, **solver_kwargs)
    cls = Classification.PATHWAY_ABOVE if math.isfinite(d_bar) else Classification.ALWAYS_CARBON_INTENSIVE
    return RegimeReport(regime, cond, cls, d_bar, numeric=True)


def coupling_onset(p: ModelParams, **solver_kwargs) -> float:
    """Smallest ``d0`` at which the equilibrium capability becomes positive."""
    return d0_threshold(p, lambda eq: eq.x_star > 0, **solver_kwargs)


def is_net_zero_frontier(eq: Equilibrium, p: ModelParams) -> bool:
    return eq.x_star == 1.0 and eq.y_star >= p.k * (1 - 1e-9)


def required_cost_reduction(p: ModelParams, tol: float = 1e-4, **solver_kwargs) -> Optional[float]:
    """Smallest fractional cut in ``g`` that yields frontier capability at ``y* = k``.

    Returns ``None`` when even an almost complete cut does not get there.
    """

    def reached(rho):
        q = p.replace(g=p.cost.g * (1 - rho))
        return is_net_zero_frontier(optimal_capacity(q, **solver_kwargs), q)

    if reached(0.0):
        return 0.0
    top = 1 - 1e-9
    if not reached(top):
        return None
    return bisect_threshold(reached, 0.0, top, tol)


def decoupled_cost_reduction(p: ModelParams) -> float:
    """Cost cut that makes full coverage worthwhile with the frontier already chosen."""
    cond = prop1_margins(p)
    return 1 - cond.marginal_benefit / cond.marginal_cost_k


@dataclass(frozen=True)
class Scenario:
    label: str
    factors: dict = field(default_factory=dict)
    d0: Optional[float] = None


@dataclass(frozen=True)
class ScenarioResult:
    scenario: Scenario
    params: ModelParams
    equilibrium: Equilibrium
    required_reduction: Optional[float]


def counterfactual_sweep(p: ModelParams, scenarios: Sequence[Scenario], **solver_kwargs) -> list[ScenarioResult]:
    """Re-solve the game for each multiplicatively scaled variant of ``p``."""
    allowed = {"k", "theta", "g", "c_f", "d0"}
    rows = []
    for sc in scenarios:
        unknown = set(sc.factors) - allowed
        if unknown:
            raise ValueError(f"cannot scale {sorted(unknown)}; allowed: {sorted(allowed)}")
        q = p if sc.d0 is None else p.replace(d0=sc.d0)
        q = q.scaled(**sc.factors)
        rows.append(
            ScenarioResult(
                scenario=sc,
                params=q,
                equilibrium=optimal_capacity(q, **solver_kwargs),
                required_reduction=required_cost_reduction(q, **solver_kwargs),
            )
        )
    return rows
