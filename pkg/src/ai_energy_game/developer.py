"""Developer best response ``x*(y)`` and its switch points in ``y``.

The optimum of the piecewise profit always lies in a small candidate set:
the endpoints 0 and 1, the coupling point that exactly exhausts renewable
capacity, and (under resource-led scaling) the stationary points of the
fossil-priced and renewable-priced profit pieces.  ``best_response``
evaluates the exact profit at those candidates and keeps the best one,
breaking ties toward larger capability.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.optimize import brentq

from .model import REL_TOL, DomainError, ModelParams, _check_y, developer_profit, fossil_energy

THRESHOLD_TOL = 1e-10  # absolute, in units of y/k


class Regime(str, enum.Enum):
    MARKET_LED = "MarketLed"
    RESOURCE_LED = "ResourceLed"


class Zone(str, enum.Enum):
    INACTIVE = "Inactive"
    COUPLING = "Coupling"
    DECOUPLING_FOSSIL = "DecouplingFossil"
    DECOUPLING_RENEWABLE = "DecouplingRenewable"


_ZONES = list(Zone)


@dataclass(frozen=True)
class ResponseThresholds:
    """Switch points of ``x*(y)``.

    Market-led: ``y1`` (capability leaves 0) and ``y2`` (jump to the frontier);
    ``inf`` means the switch never happens on ``[0, k]``.  Resource-led:
    ``y_lo = k f(c_f)**(1+alpha)`` and ``y_hi = k f(c_r)**(1+alpha)``, uncapped.
    """

    regime: Regime
    theta_bar: float
    y1: Optional[float] = None
    y2: Optional[float] = None
    y_lo: Optional[float] = None
    y_hi: Optional[float] = None
    f_cf: Optional[float] = None
    f_cr: Optional[float] = None

    def breakpoints(self, k: float) -> list[float]:
        """Switch points that fall strictly inside ``(0, k)``, sorted."""
        if self.regime is Regime.MARKET_LED:
            values = (self.y1, self.y2)
        else:
            values = (self.y_lo, self.y_hi)
        return sorted({v for v in values if v is not None and 0 < v < k})


@dataclass(frozen=True)
class BestResponse:
    y: float
    x_star: float
    profit: float
    zone: Zone
    candidates: list = field(default_factory=list)
    thresholds: Optional[ResponseThresholds] = None


def scaling_regime(p: ModelParams) -> Regime:
    return Regime.MARKET_LED if p.lam >= 1 + p.alpha else Regime.RESOURCE_LED


def f_threshold(c: float, p: ModelParams) -> float:
    """Stationary capability of ``theta x^lam - c k x^(1+alpha)`` (uncapped)."""
    gap = 1 + p.alpha - p.lam
    if gap <= 0:
        raise DomainError("f(c) is only defined under resource-led scaling")
    if c <= 0:
        raise DomainError("unit cost must be positive")
    return (p.theta * p.lam / ((p.alpha + 1) * c * p.k)) ** (1.0 / gap)


def _coupling_profit(xc, y, p: ModelParams):
    # demand equals y exactly on the coupling candidate
    return p.theta * xc**p.lam - p.c_r * y


def _candidates(y, p: ModelParams):
    """Candidate capabilities and their profits, one row per capacity.

    Candidates that do not apply at a given capacity carry profit ``-inf``;
    the coupling point is always the last column.
    """
    y = np.atleast_1d(_check_y(y, p)).astype(float)
    y = np.minimum(y, p.k)
    n = y.size
    xc = (y / p.k) ** (1.0 / (1.0 + p.alpha))

    cols_x = [np.zeros(n), np.ones(n)]
    cols_p = [np.zeros(n), developer_profit(1.0, y, p)]
    if scaling_regime(p) is Regime.RESOURCE_LED:
        xf = min(f_threshold(p.c_f, p), 1.0)
        xr = min(f_threshold(p.c_r, p), 1.0)
        over = fossil_energy(p.k * xf ** (1 + p.alpha), y) > 0
        under = fossil_energy(p.k * xr ** (1 + p.alpha), y) == 0
        cols_x += [np.full(n, xf), np.full(n, xr)]
        cols_p += [
            np.where(over, developer_profit(xf, y, p), -np.inf),
            np.where(under, developer_profit(xr, y, p), -np.inf),
        ]
    cols_x.append(xc)
    cols_p.append(_coupling_profit(xc, y, p))

    return y, np.column_stack(cols_x), np.column_stack(cols_p)


def respond(y, p: ModelParams):
    """Vectorized best response.

    Returns ``(x_star, profit, zone_index)`` arrays for an array of
    capacities; ``zone_index`` indexes ``list(Zone)``.
    """
    y, X, P = _candidates(y, p)
    n = y.size
    best = P.max(axis=1, keepdims=True)
    # ties relative to the winning profit, so near-zero profits compare exactly
    tied = P >= best - 1e-12 * np.abs(best)
    x_tied = np.where(tied, X, -1.0)
    x_star = x_tied.max(axis=1)
    # first column achieving the chosen x: fixed candidates win over coupling
    col = np.argmax(tied & (X == x_star[:, None]), axis=1)
    profit = P[np.arange(n), col]

    coupling_col = X.shape[1] - 1
    renewable = fossil_energy(p.k * x_star ** (1 + p.alpha), y) == 0
    zone = np.where(
        renewable,
        _ZONES.index(Zone.DECOUPLING_RENEWABLE),
        _ZONES.index(Zone.DECOUPLING_FOSSIL),
    )
    zone = np.where(col == coupling_col, _ZONES.index(Zone.COUPLING), zone)
    zone = np.where(x_star == 0, _ZONES.index(Zone.INACTIVE), zone)
    return x_star, profit, zone


def best_response(y: float, p: ModelParams, with_thresholds: bool = False) -> BestResponse:
    """Developer's profit-maximizing capability at renewable capacity ``y``."""
    y = float(y)
    x_star, profit, zone = respond(y, p)
    _, X, P = _candidates(y, p)
    candidates = [(float(x), float(v)) for x, v in zip(X[0], P[0]) if v > -np.inf]
    return BestResponse(
        y=y,
        x_star=float(x_star[0]),
        profit=float(profit[0]),
        zone=_ZONES[int(zone[0])],
        candidates=candidates,
        thresholds=response_thresholds(p) if with_thresholds else None,
    )


def _bisect_switch(pred, lo: float, hi: float, tol: float) -> float:
    """Smallest y in (lo, hi] with ``pred`` true, given pred(lo) false, pred(hi) true."""
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if pred(mid):
            hi = mid
        else:
            lo = mid
    return hi


def response_thresholds(p: ModelParams) -> ResponseThresholds:
    """Locate the switch points of the best response."""
    regime = scaling_regime(p)
    theta_bar = (p.alpha + 1) * p.c_f * p.k / p.lam
    if regime is Regime.RESOURCE_LED:
        f_cf = f_threshold(p.c_f, p)
        f_cr = f_threshold(p.c_r, p)
        return ResponseThresholds(
            regime=regime,
            theta_bar=theta_bar,
            y_lo=p.k * f_cf ** (1 + p.alpha),
            y_hi=p.k * f_cr ** (1 + p.alpha),
            f_cf=f_cf,
            f_cr=f_cr,
        )

    def x_at(y):
        return respond(y, p)[0][0]

    tol = THRESHOLD_TOL * p.k
    if x_at(0.0) > 0:
        y1 = 0.0
    elif x_at(p.k) == 0:
        y1 = math.inf
    else:
        y1 = _bisect_switch(lambda y: x_at(y) > 0, 0.0, p.k, tol)

    # frontier below full coverage; at y = k the coupling point is x = 1 anyway
    # stay outside the band where demand k counts as covered by y
    top = p.k * (1 - 10 * REL_TOL)
    if x_at(0.0) == 1:
        y2 = 0.0
    elif x_at(top) < 1:
        y2 = math.inf
    else:
        y2 = _bisect_switch(lambda y: x_at(y) == 1, 0.0, top, tol)
    return ResponseThresholds(regime=regime, theta_bar=theta_bar, y1=y1, y2=y2)


# -- closed forms from the case analysis, used as cross-checks ---------------


def coupling_entry_closed_form(p: ModelParams) -> float:
    """Capacity at which the coupling point first beats inactivity (``lam > 1+alpha``)."""
    gap = p.lam - p.alpha - 1
    if gap <= 0:
        raise DomainError("requires lam > 1 + alpha")
    return _entry_capacity(p.theta, p)


def _entry_capacity(theta: float, p: ModelParams) -> float:
    # y1^0 evaluated in logs: the exponents blow up as lam approaches 1 + alpha
    gap = p.lam - p.alpha - 1
    log_y = (p.lam * math.log(p.k) + (p.alpha + 1) * math.log(p.c_r / theta)) / gap
    return math.exp(log_y) if log_y < 700 else math.inf


def frontier_gap(y, p: ModelParams):
    """Coupling-point profit minus frontier profit, both at fossil prices."""
    y = np.asarray(y, dtype=float)
    return p.theta * ((y / p.k) ** (p.lam / (p.alpha + 1)) - 1) - p.c_f * p.k * (y / p.k - 1)


def entry_gap(theta: float, p: ModelParams) -> float:
    """Sign of this decides whether the coupling zone precedes the frontier jump."""
    y10 = _entry_capacity(theta, p)
    return -(p.c_f - p.c_r) * y10 + p.c_f * p.k - theta


def frontier_entry_closed_form(p: ModelParams) -> float:
    """Root of ``frontier_gap`` below ``k`` (requires ``theta > theta_bar``)."""
    theta_bar = (p.alpha + 1) * p.c_f * p.k / p.lam
    if p.theta <= theta_bar:
        return math.inf
    y_min = p.k * (theta_bar / p.theta) ** ((p.alpha + 1) / (p.lam - p.alpha - 1))
    if frontier_gap(0.0, p) <= 0:
        return 0.0
    return brentq(lambda y: float(frontier_gap(y, p)), 0.0, y_min, xtol=1e-14 * p.k)


def jump_point_closed_form(p: ModelParams) -> float:
    """Capacity at which inactivity and the fossil-topped frontier tie."""
    return max((p.c_f * p.k - p.theta) / (p.c_f - p.c_r), 0.0)


def market_led_thresholds_closed_form(p: ModelParams) -> tuple[float, float, str]:
    """``(y1, y2, case)`` from the case taxonomy for ``lam > 1 + alpha``.

    Values beyond ``k`` are mapped to ``inf``; the ``"A"`` case reports
    ``y2 = inf`` since the frontier is only reached at ``y = k`` itself.
    """
    if p.lam <= 1 + p.alpha:
        raise DomainError("requires lam > 1 + alpha")
    theta_bar = (p.alpha + 1) * p.c_f * p.k / p.lam

    def clip(v):
        return v if v <= p.k else math.inf

    if p.c_r / p.c_f < (1 + p.alpha) / p.lam:
        if p.theta <= theta_bar:
            return clip(coupling_entry_closed_form(p)), math.inf, "A"
        if entry_gap(p.theta, p) > 0:
            return coupling_entry_closed_form(p), frontier_entry_closed_form(p), "interior"
        jump = clip(jump_point_closed_form(p))
        return jump, jump, "B"
    jump = clip(jump_point_closed_form(p))
    return jump, jump, "C"
