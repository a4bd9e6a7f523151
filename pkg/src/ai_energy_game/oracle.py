"""Brute-force grid references for the closed-form solvers.

Profit and welfare are re-derived here directly from the share formula
rather than imported, so the oracle does not share code paths with the
solvers it checks.  Exact candidate points are injected into the grids so
agreement at kinks is exact rather than grid-limited.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .model import CostSpec, ModelParams


@dataclass(frozen=True)
class GridSpec:
    n_x: int = 20_001
    n_y: int = 4_001

    def __post_init__(self):
        if self.n_x < 3 or self.n_y < 3:
            raise ValueError("grids need at least 3 points")


def _profit(x, y, p: ModelParams):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    demand = p.k * x ** (1 + p.alpha)
    with np.errstate(divide="ignore", invalid="ignore"):
        beta = np.where(demand > 0, np.minimum(y / np.where(demand > 0, demand, 1.0), 1.0), 1.0)
    return p.theta * x**p.lam - (beta * p.c_r + (1 - beta) * p.c_f) * demand, beta, demand


def _welfare(x, y, p: ModelParams):
    profit, beta, demand = _profit(x, y, p)
    emitted = p.e_f * (1 - beta) * demand
    phi = 1.0 if p.cost.phi_slope is None else 1.0 - p.cost.phi_slope * np.asarray(x)
    return p.eta * profit - p.xi * (1 - p.b * np.asarray(x)) * (p.d0 + emitted) - phi * p.cost.g * np.asarray(y) ** p.cost.mu


def _stationary_points(p: ModelParams) -> list[float]:
    if p.lam >= 1 + p.alpha or p.theta <= 0:
        return []
    return [min((p.theta * p.lam / ((p.alpha + 1) * c * p.k)) ** (1 / (1 + p.alpha - p.lam)), 1.0) for c in (p.c_f, p.c_r)]


def _argmax_larger(values, xs):
    """Index of the maximum along axis 0, exact ties to the larger ``xs``."""
    tied = values == values.max(axis=0)
    return np.where(tied, xs, -np.inf).argmax(axis=0)


def oracle_best_response(y: float, p: ModelParams, grid: GridSpec = GridSpec()) -> float:
    """Grid argmax of developer profit at capacity ``y``."""
    xs = np.concatenate(
        [np.linspace(0.0, 1.0, grid.n_x), [(min(y, p.k) / p.k) ** (1 / (1 + p.alpha))], _stationary_points(p)]
    )
    xs = np.unique(xs)
    values, _, _ = _profit(xs, y, p)
    return float(xs[_argmax_larger(values, xs)])


def _responses_on_grid(ys, p: ModelParams, n_x: int, chunk: int = 256):
    """Oracle best response for every capacity in ``ys``."""
    base = np.unique(np.concatenate([np.linspace(0.0, 1.0, n_x), _stationary_points(p)]))
    out = np.empty(len(ys))
    for start in range(0, len(ys), chunk):
        yc = ys[start : start + chunk]
        coupling = (yc / p.k) ** (1 / (1 + p.alpha))
        X = np.vstack([np.broadcast_to(base[:, None], (base.size, yc.size)), coupling[None, :]])
        values, _, _ = _profit(X, yc[None, :], p)
        idx = _argmax_larger(values, X)
        out[start : start + chunk] = X[idx, np.arange(yc.size)]
    return out


def _breakpoints_closed_form(p: ModelParams) -> list[float]:
    from .developer import market_led_thresholds_closed_form

    if p.lam < 1 + p.alpha:
        f = _stationary_points(p)
        if not f:
            return []
        gap = 1 + p.alpha - p.lam
        values = [p.k * (p.theta * p.lam / ((p.alpha + 1) * c * p.k)) ** ((1 + p.alpha) / gap) for c in (p.c_f, p.c_r)]
    elif p.lam > 1 + p.alpha:
        y1, y2, _ = market_led_thresholds_closed_form(p)
        values = [y1, y2]
    else:
        values = []
    return [v for v in values if 0 < v < p.k]


def oracle_policy_optimum(p: ModelParams, grid: GridSpec = GridSpec()) -> tuple[float, float, float]:
    """Nested grid search: ``(y*, x*(y*), W(y*))``."""
    ys = np.unique(np.concatenate([np.linspace(0.0, p.k, grid.n_y), _breakpoints_closed_form(p)]))
    xs = _responses_on_grid(ys, p, grid.n_x)
    ws = _welfare(xs, ys, p)
    i = int(_argmax_larger(ws[:, None], ys[:, None])[0])
    return float(ys[i]), float(xs[i]), float(ws[i])


# -- randomized audit -----------------------------------------------------------------

# Ranges spanned by the case-study instances; draws are log-uniform within x/÷3.
_RANGES = {
    "theta": (15.23, 109.08),
    "k": (63.51, 177.51),
    "alpha": (1.467, 1.467),
    "c_r": (0.048, 0.065),
    "c_f": (0.088, 0.193),
    "g": (9.83, 15.83),
    "e_f": (0.187e-3, 0.614e-3),
    "eta": (178.0, 178.0),
    "xi": (225.0, 225.0),
}


def random_instance(rng: np.random.Generator, market_led: bool) -> ModelParams:
    """Log-uniform draw around the calibrated ranges in the requested regime."""
    while True:
        v = {key: math.exp(rng.uniform(math.log(lo / 3), math.log(hi * 3))) for key, (lo, hi) in _RANGES.items()}
        if not v["c_r"] < v["c_f"] or v["eta"] <= 1:
            continue
        one_plus = 1 + v["alpha"]
        # regime is imposed through lambda relative to 1 + alpha
        lam = one_plus * (rng.uniform(1.0, 3.0) if market_led else rng.uniform(0.3, 0.98))
        b = rng.uniform(0.05, 0.45)
        return ModelParams(
            theta=v["theta"],
            lam=lam,
            k=v["k"],
            alpha=v["alpha"],
            c_r=v["c_r"],
            c_f=v["c_f"],
            e_f=v["e_f"],
            b=b,
            eta=v["eta"],
            xi=v["xi"],
            cost=CostSpec(g=v["g"], mu=rng.uniform(1.1, 2.0)),
            d0=rng.uniform(0.0, 100.0),
        )


@dataclass
class AuditReport:
    n_instances: int
    failures: list = field(default_factory=list)
    checks: int = 0

    @property
    def passed(self) -> bool:
        return not self.failures


def audit(
    n_per_regime: int = 200,
    seed: int = 0,
    y_points: int = 5,
    best_response_fn: Optional[Callable[[float, ModelParams], float]] = None,
    policy: bool = False,
    grid: GridSpec = GridSpec(),
    policy_grid: GridSpec = GridSpec(n_x=1_001, n_y=4_001),
) -> AuditReport:
    """Compare solvers against the grid oracle on seeded random instances.

    ``best_response_fn`` defaults to the closed-form solver; passing another
    callable lets a deliberately broken solver be audited.
    """
    from .developer import best_response
    from .policy import optimal_capacity

    if best_response_fn is None:
        best_response_fn = lambda y, p: best_response(y, p).x_star  # noqa: E731
    rng = np.random.default_rng(seed)
    report = AuditReport(n_instances=2 * n_per_regime)
    step_x = 1.0 / (grid.n_x - 1)
    for market_led in (True, False):
        for i in range(n_per_regime):
            p = random_instance(rng, market_led)
            for y in rng.uniform(0, p.k, y_points):
                x_fast = best_response_fn(y, p)
                x_ref = oracle_best_response(y, p, grid)
                pi_fast = float(_profit(x_fast, y, p)[0])
                pi_ref = float(_profit(x_ref, y, p)[0])
                report.checks += 1
                scale = max(abs(pi_ref), 1e-12)
                if abs(x_fast - x_ref) > step_x or abs(pi_fast - pi_ref) > 1e-8 * scale:
                    report.failures.append(("best_response", market_led, i, float(y), x_fast, x_ref))
            if policy:
                eq = optimal_capacity(p)
                y_ref, _, w_ref = oracle_policy_optimum(p, policy_grid)
                step_y = p.k / (policy_grid.n_y - 1)
                report.checks += 1
                dominated = eq.welfare >= w_ref - 1e-9 * abs(w_ref)
                if not dominated or abs(eq.y_star - y_ref) > step_y:
                    report.failures.append(("policy", market_led, i, eq.y_star, y_ref, eq.welfare, w_ref))
    return report
