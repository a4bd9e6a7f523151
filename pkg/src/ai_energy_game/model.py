"""Model primitives for the policymaker / AI-developer game.

Canonical units throughout: billion USD, TWh, Gt CO2e.  Note that 1 billion
USD per TWh equals 1 USD per kWh.

All evaluation functions accept scalars or numpy arrays and broadcast.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import Optional

import numpy as np

# relative tolerance for "demand equals capacity" branch decisions
REL_TOL = 1e-9


class DomainError(ValueError):
    """Raised when a capability or capacity lies outside its admissible range."""


@dataclass(frozen=True)
class CostSpec:
    """Renewable investment cost ``V(y) = g * y**mu``.

    ``phi_slope`` enables the capability-dependent multiplier
    ``phi(x) = 1 - phi_slope * x``; ``None`` means ``phi == 1``.
    """

    g: float
    mu: float
    phi_slope: Optional[float] = None

    def __post_init__(self):
        if not self.g >= 0:
            raise ValueError(f"cost coefficient g must be >= 0, got {self.g}")
        if not self.mu > 1:
            raise ValueError(f"cost exponent mu must exceed 1, got {self.mu}")
        if self.phi_slope is not None and not 0 <= self.phi_slope < 1:
            raise ValueError(f"phi slope must lie in [0, 1), got {self.phi_slope}")

    def investment(self, y):
        return self.g * np.asarray(y, dtype=float) ** self.mu

    def marginal(self, y):
        return self.g * self.mu * np.asarray(y, dtype=float) ** (self.mu - 1)

    def phi(self, x):
        x = np.asarray(x, dtype=float)
        if self.phi_slope is None:
            return np.ones_like(x)
        return 1.0 - self.phi_slope * x


@dataclass(frozen=True)
class ModelParams:
    """All primitives of one game instance, in canonical units.

    ``lam`` is the willingness-to-pay elasticity (``lambda`` in parameter
    files).  ``e_f`` is in Gt CO2e per TWh and ``xi`` in billion USD per Gt.
    """

    theta: float
    lam: float
    k: float
    alpha: float
    c_r: float
    c_f: float
    e_f: float
    b: float
    eta: float
    xi: float
    cost: CostSpec
    d0: float = 0.0

    def __post_init__(self):
        checks = [
            (self.theta >= 0, "theta must be >= 0"),
            (self.lam > 0, "lambda must be > 0"),
            (self.k > 0, "k must be > 0"),
            (self.alpha >= 0, "alpha must be >= 0"),
            (0 < self.c_r < self.c_f, "need 0 < c_r < c_f"),
            (self.e_f > 0, "e_f must be > 0"),
            (0 < self.b < 1, "b must lie in (0, 1)"),
            (self.eta > 1, "eta must exceed 1"),
            (self.xi > 0, "xi must be > 0"),
            (self.d0 >= 0, "d0 must be >= 0"),
        ]
        for ok, msg in checks:
            if not ok:
                raise ValueError(msg)

    @property
    def market_led(self) -> bool:
        return self.lam >= 1 + self.alpha

    def replace(self, **changes) -> "ModelParams":
        """Return a copy with fields changed.

        Cost fields (``g``, ``mu``, ``phi_slope``) may be given directly.
        """
        cost_changes = {key: changes.pop(key) for key in ("g", "mu", "phi_slope") if key in changes}
        if cost_changes:
            changes["cost"] = dataclasses.replace(changes.get("cost", self.cost), **cost_changes)
        return dataclasses.replace(self, **changes)

    def scaled(self, **factors) -> "ModelParams":
        """Return a copy with named parameters multiplied by the given factors."""
        values = {}
        for key, factor in factors.items():
            current = getattr(self.cost, key) if key in ("g", "mu") else getattr(self, key)
            values[key] = current * factor
        return self.replace(**values)


@dataclass(frozen=True)
class Evaluation:
    x: float
    y: float
    demand: float
    beta: float
    profit: float
    emissions: float
    damages: float
    welfare: float


def _check_x(x):
    x = np.asarray(x, dtype=float)
    if np.any(~(x >= 0)) or np.any(x > 1):
        raise DomainError("capability must lie in [0, 1]")
    return x


def _check_y(y, p: ModelParams):
    y = np.asarray(y, dtype=float)
    if np.any(~(y >= 0)) or np.any(y > p.k * (1 + REL_TOL)):
        raise DomainError(f"capacity must lie in [0, k={p.k}]")
    return y


def energy_demand(x, p: ModelParams):
    """Energy needed for capability ``x``: ``k * x**(1 + alpha)``."""
    x = _check_x(x)
    return p.k * x ** (1 + p.alpha)


def fossil_energy(demand, y):
    """Energy drawn from the grid once renewables are used up.

    Demand within ``REL_TOL`` of the capacity is treated as fully covered.
    """
    demand = np.asarray(demand, dtype=float)
    y = np.asarray(y, dtype=float)
    covered = demand <= y * (1 + REL_TOL) + 1e-300
    return np.where(covered, 0.0, demand - y)


def renewable_share(x, y, p: ModelParams):
    """Share of the developer's demand met by renewables (1 at zero demand)."""
    y = _check_y(y, p)
    demand = energy_demand(x, p)
    fossil = fossil_energy(demand, y)
    with np.errstate(divide="ignore", invalid="ignore"):
        share = np.where(demand > 0, 1.0 - fossil / np.where(demand > 0, demand, 1.0), 1.0)
    return share


def developer_profit(x, y, p: ModelParams):
    """Market value minus the energy bill, renewables used first."""
    y = _check_y(y, p)
    x = _check_x(x)
    demand = p.k * x ** (1 + p.alpha)
    fossil = fossil_energy(demand, y)
    return p.theta * x**p.lam - p.c_r * (demand - fossil) - p.c_f * fossil


def emissions(x, y, p: ModelParams):
    y = _check_y(y, p)
    return p.e_f * fossil_energy(energy_demand(x, p), y)


def damages(x, y, p: ModelParams):
    """Adaptation-adjusted damage stock ``(1 - b x)(d0 + E)``."""
    x = _check_x(x)
    return (1.0 - p.b * x) * (p.d0 + emissions(x, y, p))


def welfare_at(x, y, p: ModelParams):
    """Social welfare at a given capability/capacity pair.

    The investment cost is multiplied by ``phi(x)`` when the cost spec
    carries a capability multiplier.
    """
    x = _check_x(x)
    y = _check_y(y, p)
    return (
        p.eta * developer_profit(x, y, p)
        - p.xi * damages(x, y, p)
        - p.cost.phi(x) * p.cost.investment(y)
    )


def evaluate(x: float, y: float, p: ModelParams) -> Evaluation:
    """Evaluate every model quantity at one ``(x, y)`` point."""
    return Evaluation(
        x=float(x),
        y=float(y),
        demand=float(energy_demand(x, p)),
        beta=float(renewable_share(x, y, p)),
        profit=float(developer_profit(x, y, p)),
        emissions=float(emissions(x, y, p)),
        damages=float(damages(x, y, p)),
        welfare=float(welfare_at(x, y, p)),
    )
