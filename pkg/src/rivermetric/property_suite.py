"""Randomised checks of the convexity properties of the river plane.

Every check is a sampler that draws inputs, a margin function that is
nonnegative when the property holds on those inputs, and optionally a
predicate marking inputs as degenerate (reported apart from the rest).
:func:`run_check` drives them and summarises into a :class:`PropertyReport`.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .convex_structure import WTag, takahashi_residual, w_case, w_point
from .errors import PreconditionError
from .river_metric import Point, distance, is_between, midpoint, point_at_arclength

DEFAULT_TOL = 1e-9


def _sign(v: float) -> float:
    return 1.0 if v > 0 else (-1.0 if v < 0 else 0.0)


# -- single-sample operations ------------------------------------------------------

def split_distance(v1: Point, v2: Point, a: float) -> Point:
    """The point v with d(v1, v) = a and d(v, v2) = d(v1, v2) - a.

    Walks the three possibilities in turn: still on the vertical through
    v1, on the river, or already on the vertical through v2.
    """
    d = distance(v1, v2)
    if not 0.0 < a < d:
        raise PreconditionError(f"split length {a} must lie strictly inside (0, {d})")
    if v1.x == v2.x:
        return Point(v1.x, v1.y + _sign(v2.y - v1.y) * a)
    h1 = abs(v1.y)
    run = abs(v2.x - v1.x)
    if a <= h1:
        return Point(v1.x, v1.y - _sign(v1.y) * a)
    if a <= h1 + run:
        return Point(v1.x + _sign(v2.x - v1.x) * (a - h1), 0.0)
    b = d - a
    return Point(v2.x, v2.y - _sign(v2.y) * b)


def ball_convexity_margin(x: Point, y: Point, z: Point) -> float:
    return max(distance(x, z), distance(y, z)) - distance(midpoint(x, y), z)


def distance_convexity_margin(x: Point, y: Point, z: Point) -> float:
    return 0.5 * (distance(x, z) + distance(y, z)) - distance(midpoint(x, y), z)


def npbc_margin(x: Point, y: Point, z: Point) -> float:
    return 0.5 * distance(x, y) - distance(midpoint(x, z), midpoint(y, z))


EQUIDISTANCE_TOL = 1e-9


def strict_convexity_check(v1: Point, v2: Point, v3: Point, t: Point) -> float:
    """d(v1, v2) - d(v1, t) for t strictly between two points equidistant from v1."""
    r2, r3 = distance(v1, v2), distance(v1, v3)
    scale = max(1.0, r2, r3)
    if abs(r2 - r3) > EQUIDISTANCE_TOL * scale:
        raise PreconditionError(f"v2 and v3 are not equidistant from v1: {r2} vs {r3}")
    if t == v2 or t == v3:
        raise PreconditionError("t must differ from both endpoints")
    if not is_between(v2, t, v3, EQUIDISTANCE_TOL * scale):
        raise PreconditionError(f"{t} is not between {v2} and {v3}")
    return r2 - distance(v1, t)


@dataclass(frozen=True)
class ProlongationSet:
    """All z with d(v1, v2) + d(v2, z) = d(v1, z) = k.

    Either a single point or a polyline (closed edges) minus a few
    excluded points.
    """

    base: tuple[Point, Point]
    k: float
    points: tuple[Point, ...] = ()
    edges: tuple[tuple[Point, Point], ...] = ()
    excluded: tuple[Point, ...] = ()

    @property
    def unique(self) -> bool:
        return len(self.points) == 1 and not self.edges

    def residual(self, z: Point) -> float:
        v1, v2 = self.base
        return max(abs(distance(v1, v2) + distance(v2, z) - self.k), abs(distance(v1, z) - self.k))

    def contains(self, z: Point, tol: float = 0.0) -> bool:
        if any(z == e for e in self.excluded):
            return False
        if any(abs(z.x - p.x) <= tol and abs(z.y - p.y) <= tol for p in self.points):
            return True
        for p, q in self.edges:
            # edges are diagonals of slope +-1 (or vertical when degenerate)
            lo, hi = min(p.x, q.x), max(p.x, q.x)
            if not lo - tol <= z.x <= hi + tol:
                continue
            if q.x == p.x:
                if min(p.y, q.y) - tol <= z.y <= max(p.y, q.y) + tol:
                    return True
                continue
            y = p.y + (q.y - p.y) * (z.x - p.x) / (q.x - p.x)
            if abs(z.y - y) <= tol:
                return True
        return False

    def sample(self, n: int) -> list[Point]:
        """The isolated points plus n points spread along the edges, avoiding exclusions."""
        out = list(self.points)
        if not self.edges or n <= 0:
            return out
        per_edge = max(1, math.ceil(n / len(self.edges)))
        for p, q in self.edges:
            for s in np.linspace(0.0, 1.0, per_edge + 2):
                z = Point(p.x + s * (q.x - p.x), p.y + s * (q.y - p.y))
                if z not in self.excluded and z not in out:
                    out.append(z)
        return out

    def to_json(self) -> dict:
        return {"base": [p.to_json() for p in self.base], "k": self.k,
                "points": [p.to_json() for p in self.points],
                "edges": [[p.to_json(), q.to_json()] for p, q in self.edges],
                "excluded": [p.to_json() for p in self.excluded], "unique": self.unique}


def _sphere_edges(cx: float, u: float) -> tuple[tuple[Point, Point], ...]:
    left, right, top, bottom = Point(cx - u, 0.0), Point(cx + u, 0.0), Point(cx, u), Point(cx, -u)
    return (left, top), (top, right), (right, bottom), (bottom, left)


def prolongation_set(v1: Point, v2: Point, k: float) -> ProlongationSet:
    """Continue the geodesic from v1 through v2 until total length k.

    Off the river there is one way to continue (up or down the vertical
    through v2), except when the continuation runs into the river, where
    it fans out.  On the river every direction except the one back toward
    v1 is available, so the answer is a piece of a sphere.
    """
    if v1 == v2:
        raise PreconditionError("prolongation needs two distinct points")
    lam = distance(v1, v2)
    if not k > lam:
        raise PreconditionError(f"target length {k} must exceed d(v1, v2) = {lam}")
    t = k - lam
    x2, y2 = v2.x, v2.y
    base = (v1, v2)
    if y2 != 0.0:
        toward_v1 = _sign(v1.y - y2) if v1.x == x2 else -_sign(y2)
        away = -toward_v1
        if away == _sign(y2) or t <= abs(y2):
            return ProlongationSet(base, k, points=(Point(x2, y2 + away * t),))
        u = t - abs(y2)
        return ProlongationSet(base, k, edges=_sphere_edges(x2, u), excluded=(Point(x2, _sign(y2) * u),))
    if v1.x != x2:
        s = _sign(x2 - v1.x)
        apex = Point(x2 + s * t, 0.0)
        return ProlongationSet(base, k, edges=((Point(x2, t), apex), (apex, Point(x2, -t))))
    return ProlongationSet(base, k, edges=_sphere_edges(x2, t), excluded=(Point(x2, _sign(v1.y) * t),))


@dataclass(frozen=True)
class UCDelta:
    delta: float
    branch: str  # "river" or "vertical"
    degenerate: bool


def uc_delta(v1: Point, v2: Point, eps: float, vertical_factor: float = 1.0) -> UCDelta:
    """The depth delta used by the uniform convexity inequality.

    When the midpoint is on the river, delta = eps * min(|y1|, |y2|) / d.
    When it is on a vertical piece, delta = vertical_factor * eps; the
    default factor 1 is the value claimed for that branch, 0.5 is the
    value the inequality actually supports there.
    """
    d = distance(v1, v2)
    if d == 0:
        raise PreconditionError("uniform convexity needs distinct points")
    if v1.x != v2.x and w_case(v1, v2, 0.5).tag is WTag.ON_RIVER:
        delta = min(eps * abs(v1.y) / d, eps * abs(v2.y) / d)
        return UCDelta(delta, "river", delta == 0.0)
    return UCDelta(vertical_factor * eps, "vertical", False)


def uniform_convexity_check(v1: Point, v2: Point, z: Point, c: float, eps: float,
                            vertical_factor: float = 1.0) -> float:
    """c (1 - delta) - d(z, W(v1, v2, 1/2)); nonnegative when the inequality holds."""
    if not (c > 0 and eps > 0):
        raise PreconditionError("c and eps must be positive")
    slack = EQUIDISTANCE_TOL * max(1.0, c)
    if distance(v1, z) > c + slack or distance(v2, z) > c + slack:
        raise PreconditionError("z must be within c of both points")
    if distance(v1, v2) < c * eps - slack or v1 == v2:
        raise PreconditionError("d(v1, v2) must be at least c * eps")
    delta = uc_delta(v1, v2, eps, vertical_factor).delta
    return c * (1.0 - delta) - distance(z, w_point(v1, v2, 0.5))


# -- reports -----------------------------------------------------------------------

def _jsonable(value):
    if isinstance(value, Point):
        return value.to_json()
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


@dataclass
class PropertyReport:
    name: str
    samples: int = 0
    violations: int = 0
    min_margin: float = math.inf
    worst_case: dict | None = None
    tolerance: float = DEFAULT_TOL
    degenerate: int = 0
    degenerate_violations: int = 0
    degenerate_min_margin: float = math.inf

    @property
    def passed(self) -> bool:
        return self.violations == 0

    def record(self, margin: float, inputs: dict, degenerate: bool = False) -> None:
        if degenerate:
            self.degenerate += 1
            self.degenerate_violations += margin < -self.tolerance
            self.degenerate_min_margin = min(self.degenerate_min_margin, margin)
            return
        self.samples += 1
        self.violations += margin < -self.tolerance
        if margin < self.min_margin:
            self.min_margin = margin
            self.worst_case = {"inputs": inputs, "margin": margin}

    def merge(self, other: PropertyReport) -> PropertyReport:
        if other.name != self.name or other.tolerance != self.tolerance:
            raise ValueError("only reports of the same check and tolerance merge")
        worst = self if self.min_margin <= other.min_margin else other
        return PropertyReport(
            self.name, self.samples + other.samples, self.violations + other.violations,
            worst.min_margin, worst.worst_case, self.tolerance,
            self.degenerate + other.degenerate,
            self.degenerate_violations + other.degenerate_violations,
            min(self.degenerate_min_margin, other.degenerate_min_margin))

    def to_json(self) -> dict:
        out = {"property": self.name, "samples": self.samples, "violations": self.violations,
               "min_margin": self.min_margin if self.samples else None,
               "worst_case": _jsonable(self.worst_case), "tolerance": self.tolerance}
        if self.degenerate:
            out["degenerate"] = {"samples": self.degenerate, "violations": self.degenerate_violations,
                                 "min_margin": self.degenerate_min_margin}
        return out


# -- samplers ------------------------------------------------------------------------

BOX = 10.0


def _coord(rng: random.Random) -> float:
    return rng.uniform(-BOX, BOX)


def random_point(rng: random.Random, share_x: Point | None = None) -> Point:
    """Uniform in [-10, 10]^2, sometimes snapped onto the river or onto a given abscissa."""
    x, y = _coord(rng), _coord(rng)
    roll = rng.random()
    if roll < 0.1:
        y = 0.0
    elif roll < 0.2 and share_x is not None:
        x = share_x.x
    return Point(x, y)


def random_points(rng: random.Random, n: int) -> list[Point]:
    pts = [random_point(rng)]
    for _ in range(n - 1):
        pts.append(random_point(rng, share_x=rng.choice(pts)))
    return pts


def sphere_point(rng: random.Random, centre: Point, radius: float) -> Point:
    """A point at river distance ``radius`` from ``centre``."""
    h = radius - abs(centre.y)
    roll = rng.random()
    if h <= 0 or roll < 0.3:
        return Point(centre.x, centre.y + rng.choice((radius, -radius)))
    s = 0.0
    while s == 0.0:
        s = rng.uniform(-h, h)
    return Point(centre.x + s, rng.choice((1.0, -1.0)) * (h - abs(s)))


def _equidistant_pair(rng: random.Random) -> tuple[Point, Point, Point]:
    centre = random_point(rng)
    radius = rng.uniform(0.01, 2 * BOX)
    while True:
        a, b = sphere_point(rng, centre, radius), sphere_point(rng, centre, radius)
        if distance(a, b) > 1e-6:
            return centre, a, b


def _lam(rng: random.Random) -> float:
    roll = rng.random()
    if roll < 0.05:
        return float(rng.choice((0.0, 1.0, 0.5)))
    return rng.random()


@dataclass(frozen=True)
class Check:
    name: str
    sample: Callable[[random.Random], dict]
    margin: Callable[..., float]
    degenerate: Callable[..., bool] | None = None
    description: str = ""


def _triple(rng):
    x, y, z = random_points(rng, 3)
    return {"x": x, "y": y, "z": z}


def _triangle_margin(x, y, z):
    sym = 0.0 if distance(x, y) == distance(y, x) else -math.inf
    ident = 0.0 if (distance(x, x) == 0.0 and (distance(x, y) == 0.0) == (x == y)) else -math.inf
    return min(distance(x, z) + distance(z, y) - distance(x, y), sym, ident)


def _distance_implies_ball(x, y, z):
    to_mid = distance(midpoint(x, y), z)
    dx, dy = distance(x, z), distance(y, z)
    if 0.5 * (dx + dy) < to_mid:
        return math.inf  # premise fails, nothing to check
    return max(dx, dy) - to_mid


def _takahashi_sample(rng):
    u, v1, v2 = random_points(rng, 3)
    return {"u": u, "v1": v1, "v2": v2, "lam": _lam(rng)}


def _strict_sample(rng):
    centre, a, b = _equidistant_pair(rng)
    d = distance(a, b)
    s = 0.0
    while not 0.0 < s < d:
        s = rng.random() * d
    t = point_at_arclength(a, b, s)
    if t == a or t == b:
        return _strict_sample(rng)
    return {"v1": centre, "v2": a, "v3": b, "t": t}


def _strict_ball_sample(rng):
    centre, a, b = _equidistant_pair(rng)
    return {"x": a, "y": b, "z": centre}


def _split_sample(rng):
    v1, v2 = random_points(rng, 2)
    while v1 == v2:
        v1, v2 = random_points(rng, 2)
    d = distance(v1, v2)
    a = 0.0
    while not 0.0 < a < d:
        a = rng.random() * d
    return {"v1": v1, "v2": v2, "a": a}


def _split_margin(v1, v2, a):
    v = split_distance(v1, v2, a)
    d = distance(v1, v2)
    along = point_at_arclength(v1, v2, a)
    return -max(abs(distance(v1, v) - a), abs(distance(v, v2) - (d - a)),
                abs(v.x - along.x), abs(v.y - along.y))


def _external_sample(rng):
    v1, v2 = random_points(rng, 2)
    while v1 == v2:
        v1, v2 = random_points(rng, 2)
    return {"v1": v1, "v2": v2, "k": distance(v1, v2) + rng.uniform(1e-3, BOX)}


def _external_margin(v1, v2, k):
    pro = prolongation_set(v1, v2, k)
    pts = pro.sample(20)
    if not pts:
        return -math.inf
    return -max(pro.residual(z) for z in pts)


UC_MIN_HEIGHT = 0.01


def _uc_sample(rng):
    v1, v2, z = random_points(rng, 3)
    while v1 == v2:
        v1, v2, z = random_points(rng, 3)
    c = max(distance(v1, z), distance(v2, z)) * rng.uniform(1.0, 1.5)
    eps = distance(v1, v2) / c * (1.0 - rng.random())
    return {"v1": v1, "v2": v2, "z": z, "c": c, "eps": eps}


def _uc_degenerate(v1, v2, z, c, eps):
    return min(abs(v1.y), abs(v2.y)) <= UC_MIN_HEIGHT


CHECKS: dict[str, Check] = {c.name: c for c in (
    Check("metric-axioms", _triple, _triangle_margin,
          description="triangle inequality, symmetry and identity of indiscernibles"),
    Check("takahashi", _takahashi_sample, takahashi_residual,
          description="d(u, W(v1, v2, lam)) <= lam d(u, v1) + (1 - lam) d(u, v2)"),
    Check("ball-convexity", _triple, ball_convexity_margin,
          description="d(m(x, y), z) <= max(d(x, z), d(y, z))"),
    Check("strict-ball-convexity", _strict_ball_sample, ball_convexity_margin,
          description="ball convexity on equidistant triples with x != y; margins must be positive"),
    Check("distance-convexity", _triple, distance_convexity_margin,
          description="d(m(x, y), z) <= (d(x, z) + d(y, z)) / 2"),
    Check("distance-implies-ball", _triple, _distance_implies_ball,
          description="whenever the averaged bound holds, the max bound holds too"),
    Check("npbc", _triple, npbc_margin,
          description="d(m(x, z), m(y, z)) <= d(x, y) / 2"),
    Check("strict-convexity", _strict_sample, strict_convexity_check,
          description="points strictly between two equidistant points are strictly closer"),
    Check("split-distance", _split_sample, _split_margin,
          description="every split d = a + b is realised by a point of the geodesic"),
    Check("external-convexity", _external_sample, _external_margin,
          description="every geodesic prolongs to every length k > d"),
    Check("uniform-convexity", _uc_sample, uniform_convexity_check, _uc_degenerate,
          description="midpoint depth with delta = eps min|y|/d (river) or eps (vertical)"),
    Check("uniform-convexity-half", _uc_sample,
          lambda v1, v2, z, c, eps: uniform_convexity_check(v1, v2, z, c, eps, vertical_factor=0.5),
          _uc_degenerate,
          description="as uniform-convexity, with delta = eps / 2 on the vertical branch"),
)}

STRICT_CHECKS = ("strict-ball-convexity", "strict-convexity")


def _run(check: Check, samples: int, rng: random.Random, tol: float) -> PropertyReport:
    report = PropertyReport(check.name, tolerance=tol)
    while report.samples < samples:
        inputs = check.sample(rng)
        margin = check.margin(**inputs)
        degenerate = check.degenerate(**inputs) if check.degenerate else False
        report.record(margin, inputs, degenerate)
    return report


def run_check(name: str, samples: int, seed: int = 0, tol: float = DEFAULT_TOL,
              batches: int = 1) -> PropertyReport:
    """Run a named check on ``samples`` non-degenerate samples.

    Batches use independent seeds derived from ``seed`` and their reports
    are merged, so the result depends only on (name, samples, seed, tol,
    batches).
    """
    if name not in CHECKS:
        raise PreconditionError(f"unknown check {name!r}; choose from {sorted(CHECKS)}")
    if samples < 1 or batches < 1 or tol < 0 or seed < 0:
        raise PreconditionError("samples and batches must be positive; seed and tol nonnegative")
    check = CHECKS[name]
    seeds = np.random.SeedSequence(seed).spawn(batches)
    sizes = [samples // batches + (i < samples % batches) for i in range(batches)]
    report = None
    for ss, size in zip(seeds, sizes):
        if size == 0:
            continue
        part = _run(check, size, random.Random(int(ss.generate_state(1)[0])), tol)
        report = part if report is None else report.merge(part)
    return report


def recompute_margin(name: str, inputs: dict) -> float:
    return CHECKS[name].margin(**inputs)
