"""Takahashi convex structure W on the river plane.

``w_point(v1, v2, lam)`` is the point z with d(z, v1) = (1 - lam) d and
d(z, v2) = lam d, where d = d(v1, v2).  For distinct abscissae the point
lies on one of three pieces of the geodesic depending on lam; each piece
has its own closed-form expression.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import PreconditionError, ToleranceError
from .river_metric import Point, distance, distances, point_at_arclength, points_at_arclength

AGREEMENT_TOL = 1e-12


class WTag(enum.Enum):
    VERTICAL_AT_X1 = "VerticalAtX1"  # case (a): on the drop below/above v1
    ON_RIVER = "OnRiver"  # case (b)
    VERTICAL_AT_X2 = "VerticalAtX2"  # case (c): on the rise to v2
    VERTICAL_PAIR = "VerticalPair"  # v1 and v2 share an abscissa


@dataclass(frozen=True)
class WCase:
    tag: WTag
    lambda_lo: float
    lambda_hi: float


def _check_lambda(lam: float) -> None:
    if not 0.0 <= lam <= 1.0:
        raise PreconditionError(f"lambda must lie in [0, 1], got {lam}")


def _case_bounds(v1: Point, v2: Point) -> tuple[float, float]:
    """Thresholds (t_c, t_a) for x1 < x2: case (c) below t_c, (b) in [t_c, t_a), (a) from t_a."""
    d = distance(v1, v2)
    run = v2.x - v1.x
    return 1.0 - (abs(v1.y) + run) / d, 1.0 - abs(v1.y) / d


def w_case(v1: Point, v2: Point, lam: float) -> WCase:
    """Which piece of the geodesic W(v1, v2, lam) lands on, with that piece's lambda-interval.

    Tags refer to the pair as given; for x1 > x2 the pair is swapped
    internally, so VerticalAtX1 always means "on the vertical through v1".
    """
    _check_lambda(lam)
    if v1.x == v2.x:
        return WCase(WTag.VERTICAL_PAIR, 0.0, 1.0)
    if v1.x > v2.x:
        flipped = w_case(v2, v1, 1.0 - lam)
        tag = {WTag.VERTICAL_AT_X1: WTag.VERTICAL_AT_X2,
               WTag.VERTICAL_AT_X2: WTag.VERTICAL_AT_X1}.get(flipped.tag, flipped.tag)
        return WCase(tag, 1.0 - flipped.lambda_hi, 1.0 - flipped.lambda_lo)
    t_c, t_a = _case_bounds(v1, v2)
    if lam >= t_a:
        return WCase(WTag.VERTICAL_AT_X1, t_a, 1.0)
    if lam >= t_c:
        return WCase(WTag.ON_RIVER, t_c, t_a)
    return WCase(WTag.VERTICAL_AT_X2, 0.0, t_c)


def w_point_piecewise(v1: Point, v2: Point, lam: float) -> Point:
    """Closed-form W by case analysis on lam."""
    _check_lambda(lam)
    if v1 == v2:
        return v1
    if v1.x == v2.x:
        return Point(v1.x, lam * v1.y + (1.0 - lam) * v2.y)
    if v1.x > v2.x:
        return w_point_piecewise(v2, v1, 1.0 - lam)

    x1, y1, x2, y2 = v1.x, v1.y, v2.x, v2.y
    run = x2 - x1
    mu = 1.0 - lam
    t_c, t_a = _case_bounds(v1, v2)
    if lam >= t_a:
        if y1 >= 0:
            zy = lam * y1 - mu * abs(y2) - mu * run
        else:
            zy = lam * y1 + mu * abs(y2) + mu * run
        return Point(x1, zy)
    if lam >= t_c:
        return Point(-lam * abs(y1) + mu * abs(y2) + lam * x1 + mu * x2, 0.0)
    if y2 >= 0:
        zy = -lam * abs(y1) + mu * y2 - lam * run
    else:
        zy = lam * abs(y1) + mu * y2 + lam * run
    return Point(x2, zy)


def w_point_arclength(v1: Point, v2: Point, lam: float) -> Point:
    """W as the point at arclength (1 - lam) d along the geodesic from v1."""
    _check_lambda(lam)
    d = distance(v1, v2)
    return point_at_arclength(v1, v2, (1.0 - lam) * d)


def w_point(v1: Point, v2: Point, lam: float) -> Point:
    """W(v1, v2, lam), computed by both routes and cross-checked.

    Raises ToleranceError if the case formulas and the arclength walk
    disagree by more than 1e-12 (scaled by the coordinate magnitude).
    The arclength result is returned, so endpoints come back exactly.
    """
    by_cases = w_point_piecewise(v1, v2, lam)
    by_walk = w_point_arclength(v1, v2, lam)
    scale = max(1.0, abs(v1.x), abs(v1.y), abs(v2.x), abs(v2.y))
    if abs(by_cases.x - by_walk.x) > AGREEMENT_TOL * scale or abs(by_cases.y - by_walk.y) > AGREEMENT_TOL * scale:
        raise ToleranceError(f"W({v1}, {v2}, {lam}): case formula {by_cases} != arclength {by_walk}")
    return by_walk


def takahashi_residual(u: Point, v1: Point, v2: Point, lam: float) -> float:
    """lam d(u, v1) + (1 - lam) d(u, v2) - d(u, W(v1, v2, lam)); never negative for a convex structure."""
    z = w_point(v1, v2, lam)
    return lam * distance(u, v1) + (1.0 - lam) * distance(u, v2) - distance(u, z)


def menger_witness(p: Point, q: Point) -> Point:
    """A point strictly between p and q."""
    if p == q:
        raise PreconditionError("a Menger witness needs two distinct points")
    d = distance(p, q)
    z = point_at_arclength(p, q, d / 2)
    if z == p or z == q:
        z = point_at_arclength(p, q, d / 3)
    return z


def w_points_piecewise(v1: np.ndarray, v2: np.ndarray, lam: np.ndarray) -> np.ndarray:
    """Vectorised case formulas; used for bulk agreement checks."""
    v1 = np.asarray(v1, dtype=float)
    v2 = np.asarray(v2, dtype=float)
    lam = np.broadcast_to(np.asarray(lam, dtype=float), v1.shape[:-1])
    swap = v1[..., 0] > v2[..., 0]
    a = np.where(swap[..., None], v2, v1)
    b = np.where(swap[..., None], v1, v2)
    lam = np.where(swap, 1.0 - lam, lam)
    mu = 1.0 - lam
    x1, y1, x2, y2 = a[..., 0], a[..., 1], b[..., 0], b[..., 1]
    run = x2 - x1
    d = distances(a, b)
    with np.errstate(divide="ignore", invalid="ignore"):
        t_a = 1.0 - np.abs(y1) / d
        t_c = 1.0 - (np.abs(y1) + run) / d

    zy_a = np.where(y1 >= 0, lam * y1 - mu * np.abs(y2) - mu * run, lam * y1 + mu * np.abs(y2) + mu * run)
    zx_b = -lam * np.abs(y1) + mu * np.abs(y2) + lam * x1 + mu * x2
    zy_c = np.where(y2 >= 0, -lam * np.abs(y1) + mu * y2 - lam * run, lam * np.abs(y1) + mu * y2 + lam * run)

    in_a = lam >= t_a
    in_b = ~in_a & (lam >= t_c)
    zx = np.where(in_a, x1, np.where(in_b, zx_b, x2))
    zy = np.where(in_a, zy_a, np.where(in_b, 0.0, zy_c))

    vertical = x1 == x2
    zx = np.where(vertical, x1, zx)
    zy = np.where(vertical, lam * y1 + mu * y2, zy)
    same = vertical & (y1 == y2)
    zx = np.where(same, x1, zx)
    zy = np.where(same, y1, zy)
    return np.stack([zx, zy], axis=-1)


def w_points_arclength(v1: np.ndarray, v2: np.ndarray, lam: np.ndarray) -> np.ndarray:
    v1 = np.asarray(v1, dtype=float)
    v2 = np.asarray(v2, dtype=float)
    lam = np.asarray(lam, dtype=float)
    return points_at_arclength(v1, v2, (1.0 - lam) * distances(v1, v2))
