"""
Binary entropy arithmetic and the two side-information rate bounds.

gp_bound is the upper convex envelope of h(W) - h(p) with the point (0, 0);
wz_bound is the lower convex envelope of h(p*D) - h(D) with the point (p, 0).
Both envelopes are a tangent line from the time-sharing point: the tangent
point is located on a 10^4-point grid and refined by ternary search.
"""

import logging
import math
from functools import lru_cache
from typing import Callable

import numpy as np

from ..core.errors import UsageError

logger = logging.getLogger(__name__)

GRID_POINTS = 10_000
INVERSE_TOL = 1e-12
TANGENT_TOL = 1e-9


def _check_unit(name: str, x: float, hi: float = 1.0) -> float:
    x = float(x)
    if not 0.0 <= x <= hi:
        raise UsageError(f"{name}={x} outside [0, {hi}]")
    return x


def _h(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    inside = (x > 0) & (x < 1)
    xi = x[inside]
    out[inside] = -xi * np.log2(xi) - (1 - xi) * np.log2(1 - xi)
    return out


def binary_entropy(x: float) -> float:
    x = _check_unit("x", x)
    if x in (0.0, 1.0):
        return 0.0
    if x == 0.5:
        return 1.0
    return -x * math.log2(x) - (1 - x) * math.log2(1 - x)


def entropy_inverse(y: float) -> float:
    """The x in [0, 1/2] with h(x) = y, by bisection."""
    y = _check_unit("y", y)
    if y == 1.0:
        return 0.5
    lo, hi = 0.0, 0.5
    while hi - lo > INVERSE_TOL:
        mid = (lo + hi) / 2
        # h rounds to 1.0 near 1/2; ties keep moving lo
        if binary_entropy(mid) <= y:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


def binary_convolution(p: float, d: float) -> float:
    p, d = _check_unit("p", p), _check_unit("D", d)
    return p * (1 - d) + d * (1 - p)


def gp_curve(w: float, p: float) -> float:
    return binary_entropy(w) - binary_entropy(p)


def wz_curve(d: float, p: float) -> float:
    return binary_entropy(binary_convolution(p, d)) - binary_entropy(d)


def _refine(score: Callable[[float], float], grid: np.ndarray, values: np.ndarray, maximize: bool) -> float:
    i = int(np.argmax(values) if maximize else np.argmin(values))
    lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, len(grid) - 1)]
    sign = 1.0 if maximize else -1.0
    while hi - lo > TANGENT_TOL:
        a, b = lo + (hi - lo) / 3, hi - (hi - lo) / 3
        if sign * score(a) < sign * score(b):
            lo = a
        else:
            hi = b
    return (lo + hi) / 2


@lru_cache(maxsize=256)
def gp_tangent(p: float) -> float:
    """W* maximizing (h(W) - h(p)) / W over (p, 1/2]; 0 when p = 0 (the curve itself is the envelope)."""
    p = _check_unit("p", p, 0.5)
    if p == 0.0:
        return 0.0
    grid = np.linspace(p, 0.5, GRID_POINTS)[1:]
    values = (_h(grid) - binary_entropy(p)) / grid
    w_star = _refine(lambda w: gp_curve(w, p) / w, grid, values, maximize=True)
    logger.debug(f"gp tangent for p={p}: W*={w_star:.9f}")
    return w_star


@lru_cache(maxsize=256)
def wz_tangent(p: float) -> float:
    """D* minimizing (h(p*D) - h(D)) / (p - D) over [0, p)."""
    p = _check_unit("p", p, 0.5)
    if p == 0.0:
        return 0.0
    grid = np.linspace(0.0, p, GRID_POINTS)[:-1]
    conv = p * (1 - grid) + grid * (1 - p)
    values = (_h(conv) - _h(grid)) / (p - grid)
    d_star = _refine(lambda d: wz_curve(d, p) / (p - d), grid, values, maximize=False)
    logger.debug(f"wz tangent for p={p}: D*={d_star:.9f}")
    return d_star


def gp_bound(w: float, p: float) -> float:
    w, p = _check_unit("W", w, 0.5), _check_unit("p", p, 0.5)
    w_star = gp_tangent(p)
    if w >= w_star:
        return max(gp_curve(w, p), 0.0)
    return max(w * gp_curve(w_star, p) / w_star, 0.0)


def wz_bound(d: float, p: float) -> float:
    d, p = _check_unit("D", d, 0.5), _check_unit("p", p, 0.5)
    if d >= p:
        return 0.0
    d_star = wz_tangent(p)
    if d <= d_star:
        return max(wz_curve(d, p), 0.0)
    return max(wz_curve(d_star, p) * (p - d) / (p - d_star), 0.0)


def ccsi_rate_targets(w: float, p: float) -> dict[str, float]:
    """Overall, binning and information rates of a capacity-approaching nested pair."""
    hw, hp = binary_entropy(w), binary_entropy(p)
    return {"R": 1 - hp, "R2": 1 - hw, "R1": hw - hp}


def scsi_rate_targets(d: float, p: float) -> dict[str, float]:
    hd, hpd = binary_entropy(d), binary_entropy(binary_convolution(p, d))
    return {"R": 1 - hd, "R2": 1 - hpd, "R1": hpd - hd}


def bound_table(problem: str, p: float, points: int) -> list[tuple[float, float, float]]:
    """(x, raw_curve, envelope) on an even grid over [0, 1/2]."""
    if points < 2:
        raise UsageError("need at least two grid points")
    p = float(p)
    if not 0.0 <= p < 0.5:
        raise UsageError(f"p={p} outside [0, 1/2)")
    rows = []
    for x in np.linspace(0.0, 0.5, points):
        x = float(x)
        if problem == "gp":
            rows.append((x, gp_curve(x, p), gp_bound(x, p)))
        elif problem == "wz":
            rows.append((x, wz_curve(x, p), wz_bound(x, p)))
        else:
            raise UsageError(f"unknown bound {problem!r}")
    return rows
