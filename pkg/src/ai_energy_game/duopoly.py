"""Two developers competing in capability, then price.

Consumers have valuation ``theta' * x**lam`` with ``theta'`` uniform on
``[0, theta_tilde]``; setting ``theta_tilde = 4 * theta`` makes a lone
price-setting developer earn exactly ``theta * x**lam``, so the monopoly
case coincides with the base model.

Capability equilibria are found by enumerating all pure Nash equilibria on
a capability grid.  How the planner's welfare aggregates two firms is not
pinned down by the base model; here profits and emissions are summed, the
adaptation factor uses the better model ``max(x1, x2)``, and one convex
cost ``V(y1 + y2)`` is paid for total capacity.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .developer import respond
from .model import ModelParams, fossil_energy


class Region(str, enum.Enum):
    MONOPOLY_COLLAPSE = "MonopolyCollapse"
    DUAL_TRAP = "DualTrap"
    PARTIAL_CARBON_FREE = "PartialCarbonFree"


@dataclass(frozen=True)
class DuopolyState:
    x1: float
    x2: float
    y1: float
    y2: float
    p1: float
    p2: float
    theta_tilde: float


@dataclass(frozen=True)
class DuopolyOutcome:
    x1: float
    x2: float
    y1: float
    y2: float
    p1: float
    p2: float
    profit1: float
    profit2: float
    emissions1: float
    emissions2: float
    region: Region
    coverage_share: float
    cycling: bool = False

    @property
    def emissions(self) -> float:
        return self.emissions1 + self.emissions2


def duopoly_prices(x1: float, x2: float, theta_tilde: float, lam: float) -> tuple[float, float]:
    """Equilibrium prices of the high (``x1``) and low (``x2``) capability firms."""
    if not 0 <= x2 <= x1 <= 1:
        raise ValueError("need 0 <= x2 <= x1 <= 1")
    if x1 == 0:
        raise ValueError("the leading developer must have positive capability")
    a, b = x1**lam, x2**lam
    denom = 4 * a - b
    return 2 * a * (a - b) * theta_tilde / denom, b * (a - b) * theta_tilde / denom


def _demands(x1, x2, p1, p2, theta_tilde, lam):
    """Market shares with ``x1 >= x2``; valuations beyond the support are clipped."""
    a, b = x1**lam, x2**lam

    def clip(t):
        return min(max(t, 0.0), theta_tilde)

    if a == b:
        # identical products: the cheaper one takes everyone who buys
        if p1 == p2:
            share = 1 - clip(p1 / a) / theta_tilde if a > 0 else 0.0
            return share / 2, share / 2
        lo = min(p1, p2)
        share = 1 - clip(lo / a) / theta_tilde if a > 0 else 0.0
        return (share, 0.0) if p1 < p2 else (0.0, share)
    cut_hi = (p1 - p2) / (a - b)
    cut_lo = p2 / b if b > 0 else math.inf
    if cut_hi >= cut_lo:
        return 1 - clip(cut_hi) / theta_tilde, (clip(cut_hi) - clip(cut_lo)) / theta_tilde
    return 1 - clip(p1 / a) / theta_tilde, 0.0


def energy_cost(x, y, p: ModelParams):
    """Energy bill ``C(x, y)``: renewables first, grid for the rest."""
    demand = p.k * np.asarray(x, dtype=float) ** (1 + p.alpha)
    fossil = fossil_energy(demand, y)
    return p.c_r * (demand - fossil) + p.c_f * fossil


def duopoly_profits(state: DuopolyState, p: ModelParams) -> tuple[float, float]:
    """Profits at arbitrary prices; firm 1 is the higher-capability one."""
    if state.x1 < state.x2:
        raise ValueError("label firms so that x1 >= x2")
    d1, d2 = _demands(state.x1, state.x2, state.p1, state.p2, state.theta_tilde, p.lam)
    return (
        state.p1 * d1 - float(energy_cost(state.x1, state.y1, p)),
        state.p2 * d2 - float(energy_cost(state.x2, state.y2, p)),
    )


def _revenue_matrix(xs, lam, theta_tilde):
    """Equilibrium price-stage revenue of a firm at ``xs[i]`` facing ``xs[j]``."""
    v = xs**lam
    own, other = v[:, None], v[None, :]
    hi = np.maximum(own, other)
    lo = np.minimum(own, other)
    with np.errstate(divide="ignore", invalid="ignore"):
        denom = (4 * hi - lo) ** 2
        lead = 4 * hi**2 * (hi - lo) * theta_tilde / denom
        follow = hi * lo * (hi - lo) * theta_tilde / denom
    rev = np.where(own > other, lead, follow)
    rev = np.where(own == other, 0.0, rev)
    return np.nan_to_num(rev)


def _capability_grid(n: int, y1: float, y2: float, p: ModelParams):
    coupling = [(min(y, p.k) / p.k) ** (1 / (1 + p.alpha)) for y in (y1, y2)]
    return np.unique(np.concatenate([np.linspace(0.0, 1.0, n), coupling]))


def _monopoly(y1: float, y2: float, p: ModelParams, cycling: bool) -> DuopolyOutcome:
    y = max(y1, y2)
    x, profit, _ = respond(min(y, p.k), p)
    x = float(x[0])
    fossil = float(fossil_energy(p.k * x ** (1 + p.alpha), y))
    demand = p.k * x ** (1 + p.alpha)
    return DuopolyOutcome(
        x1=x,
        x2=0.0,
        y1=y,
        y2=min(y1, y2),
        p1=2 * p.theta * x**p.lam,
        p2=0.0,
        profit1=float(profit[0]),
        profit2=0.0,
        emissions1=p.e_f * fossil,
        emissions2=0.0,
        region=Region.MONOPOLY_COLLAPSE,
        coverage_share=1.0 - fossil / demand if demand > 0 else 1.0,
        cycling=cycling,
    )


def _best_response_iteration(U1, U2, start, max_sweeps=500):
    """Alternate best responses from ``start``; ``None`` when it does not settle."""
    i, j = start
    for _ in range(max_sweeps):
        i_new = int(np.argmax(U1[:, j]))
        j_new = int(np.argmax(U2[:, i_new]))
        if (i_new, j_new) == (i, j):
            return i, j
        i, j = i_new, j_new
    return None


def duopoly_equilibrium(y1: float, y2: float, p: ModelParams, grid: int = 401) -> DuopolyOutcome:
    """Pure-strategy capability equilibrium given each firm's renewable capacity.

    All pure equilibria on the capability grid are enumerated; the one with
    the largest joint profit is kept, ties to larger total capability.
    Without a pure equilibrium the market collapses to the firm with more
    capacity acting as a monopolist.
    """
    if y1 < 0 or y2 < 0:
        raise ValueError("capacities must be nonnegative")
    theta_tilde = 4 * p.theta
    xs = _capability_grid(grid, y1, y2, p)
    R = _revenue_matrix(xs, p.lam, theta_tilde)
    C1 = energy_cost(xs, y1, p)
    C2 = energy_cost(xs, y2, p)
    # U[i, j]: payoff of a firm choosing xs[i] against a rival at xs[j]
    U1 = R - C1[:, None]
    U2 = R - C2[:, None]
    tol = 1e-12 * (theta_tilde + p.c_f * p.k)
    best1 = U1 >= U1.max(axis=0, keepdims=True) - tol  # firm 1 at i, rival j
    best2 = U2 >= U2.max(axis=0, keepdims=True) - tol  # firm 2 at j, rival i
    ne = best1 & best2.T
    if not ne.any():
        found = _best_response_iteration(U1, U2, (len(xs) - 1, len(xs) - 1))
        if found is None:
            return _monopoly(y1, y2, p, cycling=True)
        ne = np.zeros_like(ne)
        ne[found] = True
    ii, jj = np.nonzero(ne)
    joint = U1[ii, jj] + U2[jj, ii]
    total = xs[ii] + xs[jj]
    order = np.lexsort((-total, -joint))
    i, j = int(ii[order[0]]), int(jj[order[0]])
    xa, xb, ya, yb = xs[i], xs[j], y1, y2
    if xa < xb:
        xa, xb, ya, yb = xb, xa, yb, ya
    if xb == 0:
        return _monopoly(ya, yb, p, cycling=False) if xa > 0 else _inactive(ya, yb)
    pa, pb = duopoly_prices(xa, xb, theta_tilde, p.lam)
    state = DuopolyState(xa, xb, ya, yb, pa, pb, theta_tilde)
    pia, pib = duopoly_profits(state, p)
    da, db = p.k * xa ** (1 + p.alpha), p.k * xb ** (1 + p.alpha)
    fa, fb = float(fossil_energy(da, ya)), float(fossil_energy(db, yb))
    region = Region.PARTIAL_CARBON_FREE if fa == 0 or fb == 0 else Region.DUAL_TRAP
    return DuopolyOutcome(
        x1=float(xa),
        x2=float(xb),
        y1=float(ya),
        y2=float(yb),
        p1=pa,
        p2=pb,
        profit1=pia,
        profit2=pib,
        emissions1=p.e_f * fa,
        emissions2=p.e_f * fb,
        region=region,
        coverage_share=0.5 * ((1 - fa / da) + (1 - fb / db)),
    )


def _inactive(y1, y2) -> DuopolyOutcome:
    return DuopolyOutcome(0.0, 0.0, y1, y2, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, Region.MONOPOLY_COLLAPSE, 1.0)


def duopoly_welfare(outcome: DuopolyOutcome, p: ModelParams) -> float:
    x_best = max(outcome.x1, outcome.x2)
    return (
        p.eta * (outcome.profit1 + outcome.profit2)
        - p.xi * (1 - p.b * x_best) * (p.d0 + outcome.emissions)
        - float(p.cost.phi(x_best)) * float(p.cost.investment(outcome.y1 + outcome.y2))
    )


def duopoly_policy(
    p: ModelParams,
    grid: int = 401,
    n_capacity: int = 25,
    rounds: int = 4,
    y_max: Optional[float] = None,
) -> tuple[float, float, DuopolyOutcome]:
    """Planner's capacity pair ``(y1, y2)`` with the capability game nested inside.

    Searches ``y1 >= y2`` (the firms are symmetric ex ante) on a coarse grid
    dense near zero, then zooms in around the best cell.  Each firm's
    capacity is capped at ``y_max`` (default ``k``).
    """
    top = p.k if y_max is None else y_max

    def value(y1, y2):
        out = duopoly_equilibrium(y1, y2, p, grid)
        return duopoly_welfare(out, p), out

    u = np.linspace(0.0, 1.0, n_capacity)
    axis = top * u**3
    best = None
    for y1 in axis:
        for y2 in axis[axis <= y1]:
            w, out = value(y1, y2)
            if best is None or w > best[0]:
                best = (w, y1, y2, out)
    lo1, hi1, lo2, hi2 = _cell(axis, best[1]) + _cell(axis, best[2])
    for _ in range(rounds):
        for y1 in np.linspace(lo1, hi1, 9):
            for y2 in np.linspace(lo2, hi2, 9):
                if y2 > y1:
                    continue
                w, out = value(y1, y2)
                if w > best[0]:
                    best = (w, y1, y2, out)
        span1, span2 = (hi1 - lo1) / 4, (hi2 - lo2) / 4
        lo1, hi1 = max(best[1] - span1, 0.0), min(best[1] + span1, top)
        lo2, hi2 = max(best[2] - span2, 0.0), min(best[2] + span2, top)
    return float(best[1]), float(best[2]), best[3]


def _cell(axis, v):
    i = int(np.searchsorted(axis, v))
    return float(axis[max(i - 1, 0)]), float(axis[min(i + 1, len(axis) - 1)])


def monopoly_coverage(p: ModelParams) -> float:
    """Renewable share of demand at the single-developer equilibrium."""
    from .policy import optimal_capacity

    return optimal_capacity(p).beta


@dataclass(frozen=True)
class MapCell:
    theta: float
    lam: float
    region: Region
    x1: float
    x2: float
    y1: float
    y2: float
    coverage_share: float


def map_cell(p: ModelParams, theta: float, lam: float, capacities=None, grid: int = 201, **policy_kwargs) -> MapCell:
    """One cell of the region map.

    With ``capacities=(y1, y2)`` the capability game is solved at those
    capacities; otherwise the planner chooses them.
    """
    q = p.replace(theta=theta, lam=lam)
    if capacities is None:
        y1, y2, out = duopoly_policy(q, grid=grid, **policy_kwargs)
    else:
        out = duopoly_equilibrium(*capacities, q, grid=grid)
    return MapCell(theta, lam, out.region, out.x1, out.x2, out.y1, out.y2, out.coverage_share)


def region_map(p: ModelParams, thetas, lams, capacities=None, grid: int = 201, **policy_kwargs) -> list[MapCell]:
    return [map_cell(p, t, l, capacities, grid, **policy_kwargs) for t in thetas for l in lams]


def dual_trap_onset(
    p: ModelParams, hi: float = 200.0, tol: float = 0.5, grid: int = 201, **policy_kwargs
) -> float:
    """Smallest ``d0`` at which the planner's duopoly outcome is a dual trap.

    Bisection assumes the region switches once on ``[0, hi]``; returns
    ``inf`` when no dual trap occurs at ``hi``.
    """
    from .optimize import bisect_threshold

    def trapped(d0):
        return duopoly_policy(p.replace(d0=d0), grid=grid, **policy_kwargs)[2].region is Region.DUAL_TRAP

    if trapped(0.0):
        return 0.0
    if not trapped(hi):
        return math.inf
    return bisect_threshold(trapped, 0.0, hi, tol)
