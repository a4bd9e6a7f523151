"""Scalar search routines shared by the solvers."""

from __future__ import annotations

import math
from typing import Callable

INV_PHI = (math.sqrt(5) - 1) / 2


def golden_max(fun: Callable[[float], float], a: float, b: float, tol: float) -> tuple[float, float]:
    """Maximize a unimodal ``fun`` on ``[a, b]`` by golden-section search.

    Returns ``(x, fun(x))`` for the best point evaluated.
    """
    if b - a <= tol:
        x = 0.5 * (a + b)
        return x, fun(x)
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = fun(c), fun(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = fun(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = fun(d)
    return (c, fc) if fc >= fd else (d, fd)


def bisect_threshold(pred: Callable[[float], bool], lo: float, hi: float, tol: float) -> float:
    """Boundary of a monotone predicate, false at ``lo`` and true at ``hi``.

    Returns the midpoint of the final bracket.
    """
    if pred(lo) or not pred(hi):
        raise ValueError("predicate must be false at lo and true at hi")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if pred(mid):
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)
