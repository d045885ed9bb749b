"""Measures of noncompactness and moduli of noncompact convexity.

Everything is driven by the height y*(D): the largest |height| at which D
holds infinitely many points with pairwise distinct abscissae.  Such
points are at least twice that height apart, which gives the Kuratowski
measure 2 y*, while the Hausdorff and separation measures both equal y*.
"""
from __future__ import annotations

import enum
import time
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .convex_sets import (Ball, Box, FinitePoints, SetDescription, UnionOf, VerticalSegment,
                          members, set_to_json)
from .errors import PreconditionError
from .river_metric import Point, distances


class Measure(enum.Enum):
    ALPHA = "alpha"  # Kuratowski
    CHI = "chi"  # Hausdorff
    BETA = "beta"  # separation (Istratescu)

    @property
    def factor(self) -> float:
        return 2.0 if self is Measure.ALPHA else 1.0

    @property
    def max_epsilon(self) -> float:
        # value of the measure on the unit ball
        return 2.0 if self is Measure.ALPHA else 1.0


def _primitive_y_star(m) -> float:
    match m:
        case FinitePoints() | VerticalSegment():
            return 0.0
        case Box(a, b, c, d):
            return max(abs(c), abs(d)) if a < b else 0.0
        case Ball(center, radius, _):
            return max(0.0, radius - abs(center.y))
    raise TypeError(f"not a primitive: {m!r}")


def y_star(D: SetDescription) -> float:
    return max(_primitive_y_star(m) for m in members(D))


@dataclass(frozen=True)
class MncReport:
    y_star: float
    alpha: float
    chi: float
    beta: float
    witness: dict

    def to_json(self) -> dict:
        return {"y_star": self.y_star, "alpha": self.alpha, "chi": self.chi, "beta": self.beta,
                "witness": self.witness}


def mnc(D: SetDescription) -> MncReport:
    ms = members(D)
    heights = [_primitive_y_star(m) for m in ms]
    best = max(range(len(ms)), key=lambda i: (heights[i], -i))
    y = heights[best]
    witness = {"member": best, "primitive": set_to_json(ms[best]), "height": y}
    return MncReport(y_star=y, alpha=2.0 * y, chi=y, beta=y, witness=witness)


def measure_of(measure: Measure | str, D: SetDescription) -> float:
    return Measure(measure).factor * y_star(D)


# -- modulus of noncompact convexity ------------------------------------------------
#
# Candidates are closed convex subsets of the closed unit ball about the
# origin, drawn from two families:
#   balls  B((cx, cy), r) with |cy| < r    parameters (cx, cy, r)
#   boxes  [a, b] x [c, d] with c <= 0 <= d   parameters (a, b, d, c)
# The objective is 1 - d(origin, A).  Reflections x -> -x and y -> -y map
# both families to themselves and preserve the objective and the measures,
# so balls are searched with cx >= 0, cy <= 0 and boxes with a + b >= 0,
# |c| <= d.

FAMILIES = ("box", "ball")
CONTAINMENT_TOL = 1e-12
BOX_C_FRACTIONS = (0.0, 0.5, 1.0)


def _box_batch(a, b, d, c):
    """Objective, y* and sup-distance from the origin for boxes (vectorised)."""
    ax, bx = np.abs(a), np.abs(b)
    gap = np.where(a > 0, a, np.where(b < 0, -b, 0.0))
    objective = 1.0 - gap  # c <= 0 <= d, so the nearest point sits on the river
    height = np.maximum(np.abs(c), np.abs(d))
    ystar = np.where(a < b, height, 0.0)
    far = np.where((a == 0) & (b == 0), height, np.maximum(ax, bx) + height)
    return objective, ystar, far


def _ball_batch(cx, cy, r):
    centre = np.stack([cx, cy], axis=-1)
    to_centre = distances(np.zeros_like(centre), centre)
    objective = 1.0 - np.maximum(0.0, to_centre - r)
    ystar = np.maximum(0.0, r - np.abs(cy))
    far = to_centre + r
    return objective, ystar, far


def _family_grid(family: str, n: int) -> list[np.ndarray]:
    if family == "ball":
        return [np.linspace(0.0, 1.0, n), np.linspace(-1.0, 0.0, n), np.linspace(0.0, 1.0, n)]
    return [np.linspace(-1.0, 1.0, n), np.linspace(-1.0, 1.0, n), np.linspace(0.0, 1.0, n)]


def _evaluate(family: str, params: np.ndarray):
    """Objective and y* of candidate rows; infeasible rows get objective +inf."""
    if family == "ball":
        cx, cy, r = params.T
        objective, ystar, far = _ball_batch(cx, cy, r)
        valid = np.abs(cy) < r
    else:
        a, b, d, c = params.T
        objective, ystar, far = _box_batch(a, b, d, c)
        valid = (a <= b) & (c <= 0) & (d >= 0) & (a + b >= 0) & (-c <= d)
    feasible = valid & (far <= 1.0 + CONTAINMENT_TOL)
    return np.where(feasible, objective, np.inf), ystar


def _candidate_rows(family: str, axes: list[np.ndarray], first: np.ndarray) -> np.ndarray:
    """Grid rows whose first parameter is in ``first`` (in lexicographic order)."""
    if family == "ball":
        grids = np.meshgrid(first, axes[1], axes[2], indexing="ij")
        return np.stack([g.ravel() for g in grids], axis=-1)
    fr = np.asarray(BOX_C_FRACTIONS)
    ga, gb, gd, gf = np.meshgrid(first, axes[1], axes[2], fr, indexing="ij")
    return np.stack([ga.ravel(), gb.ravel(), gd.ravel(), -gf.ravel() * gd.ravel()], axis=-1)


def _pareto(objective: np.ndarray, ystar: np.ndarray, params: np.ndarray):
    """Rows not beaten by another row that is both lower and at least as high in y*.

    Rows are ordered by descending y*, then objective, then parameters, so
    the kept representative of a tie is the lexicographically first one.
    """
    keep = np.isfinite(objective)
    objective, ystar, params = objective[keep], ystar[keep], params[keep]
    keys = [params[:, k] for k in reversed(range(params.shape[1]))] + [objective, -ystar]
    order = np.lexsort(keys)
    objective, ystar, params = objective[order], ystar[order], params[order]
    running = np.minimum.accumulate(objective)
    improves = np.ones(len(objective), dtype=bool)
    improves[1:] = objective[1:] < running[:-1]
    return objective[improves], ystar[improves], params[improves]


@lru_cache(maxsize=16)
def _frontier(family: str, n: int):
    axes = _family_grid(family, n)
    chunk = max(1, 2_000_000 // (n * n * (len(BOX_C_FRACTIONS) if family == "box" else 1)))
    parts = []
    for start in range(0, n, chunk):
        rows = _candidate_rows(family, axes, axes[0][start:start + chunk])
        obj, ys = _evaluate(family, rows)
        parts.append(_pareto(obj, ys, rows))
    obj = np.concatenate([p[0] for p in parts])
    ys = np.concatenate([p[1] for p in parts])
    rows = np.concatenate([p[2] for p in parts])
    return _pareto(obj, ys, rows) + (axes,)


def _best(obj: np.ndarray, ys: np.ndarray, rows: np.ndarray, factor: float, eps: float):
    ok = np.isfinite(obj) & (factor * ys >= eps)
    if not ok.any():
        return None
    idx = np.flatnonzero(ok)
    keys = [rows[idx, k] for k in reversed(range(rows.shape[1]))] + [obj[idx]]
    i = idx[np.lexsort(keys)[0]]
    return float(obj[i]), rows[i]


def _refine(family: str, centre: np.ndarray, steps: np.ndarray, n: int):
    """Local grid of n points per parameter spanning REFINE_SPAN coarse steps either side."""
    local = [np.linspace(c - REFINE_SPAN * s, c + REFINE_SPAN * s, n) for c, s in zip(centre, steps)]
    if family == "ball":
        local[0] = np.clip(local[0], 0.0, None)
        local[1] = np.clip(local[1], None, 0.0)
        local[2] = np.clip(local[2], 0.0, None)
        grids = np.meshgrid(*local, indexing="ij")
    else:
        # the c parameter keeps its coarse level; it only enters through |c| <= d
        local[2] = np.clip(local[2], 0.0, None)
        grids = list(np.meshgrid(local[0], local[1], local[2], indexing="ij"))
        frac = -centre[3] / centre[2] if centre[2] > 0 else 0.0
        grids.append(-frac * grids[2])
    return np.stack([g.ravel() for g in grids], axis=-1)


def _describe(family: str, row: np.ndarray) -> SetDescription:
    if family == "ball":
        cx, cy, r = (float(v) for v in row)
        return Ball(Point(cx, cy), r, closed=True)
    a, b, d, c = (float(v) for v in row)
    return Box(a, b, c, d)


@dataclass(frozen=True)
class ModulusEstimate:
    measure: Measure
    epsilon: float
    value: float
    argmin_set: SetDescription
    search_stats: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"measure": self.measure.value, "epsilon": self.epsilon, "value": self.value,
                "argmin_set": set_to_json(self.argmin_set), "search_stats": self.search_stats}


DEFAULT_GRID = 200
REFINE_POINTS = 61
REFINE_SPAN = 2


def modulus_estimate(measure: Measure | str, epsilon: float, grid: int = DEFAULT_GRID) -> ModulusEstimate:
    """Estimate inf 1 - d(0, A) over closed convex A in the unit ball with measure(A) >= epsilon.

    Coarse grid search over both families followed by one local refinement
    pass around the best coarse candidate of each family.  Output depends
    only on the arguments.
    """
    measure = Measure(measure)
    if not 0 < epsilon <= measure.max_epsilon:
        raise PreconditionError(f"epsilon for {measure.value} must lie in (0, {measure.max_epsilon}], got {epsilon}")
    if grid < 3:
        raise PreconditionError("grid needs at least 3 points per parameter")
    started = time.perf_counter()
    evaluations = 0
    best = None
    for rank, family in enumerate(FAMILIES):
        obj, ys, rows, axes = _frontier(family, grid)
        evaluations += int(np.prod([len(ax) for ax in axes])) * (len(BOX_C_FRACTIONS) if family == "box" else 1)
        coarse = _best(obj, ys, rows, measure.factor, epsilon)
        if coarse is None:
            continue
        steps = np.array([ax[1] - ax[0] for ax in axes])
        local = _refine(family, coarse[1], steps, REFINE_POINTS)
        lobj, lys = _evaluate(family, local)
        evaluations += len(local)
        fine = _best(lobj, lys, local, measure.factor, epsilon)
        found = min(coarse, fine, key=lambda c: c[0]) if fine is not None else coarse
        key = (found[0], rank, tuple(found[1]))
        if best is None or key < best[0]:
            best = (key, family, found[1])
    if best is None:
        raise PreconditionError(f"no candidate reaches {measure.value} >= {epsilon} at grid {grid}")
    (value, _, _), family, row = best
    stats = {"evaluations": evaluations, "grid": grid, "family": family,
             "runtime_s": round(time.perf_counter() - started, 6)}
    return ModulusEstimate(measure, float(epsilon), float(value), _describe(family, row), stats)


NUC_FLOOR = 1e-3


def nuc_characteristic(measure: Measure | str, epsilon_grid, grid: int = DEFAULT_GRID,
                       floor: float = NUC_FLOOR) -> float:
    """Largest grid epsilon whose estimated modulus is numerically zero (0.0 if none)."""
    eps = [float(e) for e in epsilon_grid]
    if not eps or any(e <= 0 for e in eps) or any(b <= a for a, b in zip(eps, eps[1:])):
        raise PreconditionError("epsilon grid must be positive and strictly increasing")
    found = 0.0
    for e in eps:
        if modulus_estimate(measure, e, grid).value <= floor:
            found = e
    return found

