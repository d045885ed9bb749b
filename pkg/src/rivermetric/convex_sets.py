"""Bounded sets in the river plane, their convexity, hulls and distances.

A set is convex when it contains the geodesic between any two of its
points.  Apart from sets lying on a single vertical line, this happens
exactly when every point's vertical drop to the river is in the set and
the river interval under the set's horizontal extent is too.  Both
conditions are decided here from the fibres of the set: the set of
heights it contains above a given abscissa.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence, Union

from .errors import PreconditionError
from .river_metric import Point, as_point, distance

Interval = tuple[float, float]


@dataclass(frozen=True)
class FinitePoints:
    points: tuple[Point, ...]

    def __post_init__(self):
        pts = tuple(as_point(p) for p in self.points)
        if not pts:
            raise PreconditionError("FinitePoints needs at least one point")
        object.__setattr__(self, "points", pts)


@dataclass(frozen=True)
class Box:
    """The rectangle [a, b] x [c, d]."""

    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        for name in ("a", "b", "c", "d"):
            object.__setattr__(self, name, float(getattr(self, name)))
        if not (self.a <= self.b and self.c <= self.d):
            raise PreconditionError(f"box intervals must be ordered: [{self.a}, {self.b}] x [{self.c}, {self.d}]")


@dataclass(frozen=True)
class Ball:
    center: Point
    radius: float
    closed: bool = True

    def __post_init__(self):
        object.__setattr__(self, "center", as_point(self.center))
        object.__setattr__(self, "radius", float(self.radius))
        if not self.radius > 0:
            raise PreconditionError(f"ball radius must be positive, got {self.radius}")

    @property
    def reach(self) -> float:
        """Half-width of the part of the ball around the river, negative if it misses the river."""
        return self.radius - abs(self.center.y)


@dataclass(frozen=True)
class VerticalSegment:
    x: float
    y_lo: float
    y_hi: float

    def __post_init__(self):
        for name in ("x", "y_lo", "y_hi"):
            object.__setattr__(self, name, float(getattr(self, name)))
        if not self.y_lo <= self.y_hi:
            raise PreconditionError(f"vertical segment needs y_lo <= y_hi, got {self.y_lo} > {self.y_hi}")


Primitive = Union[FinitePoints, Box, Ball, VerticalSegment]


@dataclass(frozen=True)
class UnionOf:
    members: tuple[Primitive, ...]

    def __post_init__(self):
        members = tuple(self.members)
        if not members:
            raise PreconditionError("a union needs at least one member")
        if any(isinstance(m, UnionOf) for m in members):
            raise PreconditionError("unions are flat; nested unions are not allowed")
        object.__setattr__(self, "members", members)


SetDescription = Union[FinitePoints, Box, Ball, VerticalSegment, UnionOf]


def members(D: SetDescription) -> tuple[Primitive, ...]:
    return D.members if isinstance(D, UnionOf) else (D,)


# -- serialisation -----------------------------------------------------------

def set_to_json(D: SetDescription) -> dict:
    match D:
        case FinitePoints(points):
            return {"type": "points", "points": [p.to_json() for p in points]}
        case Box(a, b, c, d):
            return {"type": "box", "a": a, "b": b, "c": c, "d": d}
        case Ball(center, radius, closed):
            return {"type": "ball", "center": center.to_json(), "radius": radius, "closed": closed}
        case VerticalSegment(x, lo, hi):
            return {"type": "vseg", "x": x, "y_lo": lo, "y_hi": hi}
        case UnionOf(ms):
            return {"type": "union", "members": [set_to_json(m) for m in ms]}
    raise TypeError(f"not a set description: {D!r}")


def set_from_json(data: dict) -> SetDescription:
    try:
        kind = data["type"]
        if kind == "points":
            return FinitePoints(tuple(Point.from_json(p) for p in data["points"]))
        if kind == "box":
            return Box(float(data["a"]), float(data["b"]), float(data["c"]), float(data["d"]))
        if kind == "ball":
            return Ball(Point.from_json(data["center"]), float(data["radius"]), bool(data.get("closed", True)))
        if kind == "vseg":
            return VerticalSegment(float(data["x"]), float(data["y_lo"]), float(data["y_hi"]))
        if kind == "union":
            return UnionOf(tuple(set_from_json(m) for m in data["members"]))
    except (KeyError, TypeError) as exc:
        raise PreconditionError(f"malformed set description {data!r}: {exc}") from exc
    raise PreconditionError(f"unknown set type {kind!r}")


# -- membership and distances --------------------------------------------------

def _box_distance(p: Point, a: float, b: float, c: float, d: float) -> float:
    nearest_height = 0.0 if c <= 0.0 <= d else min(abs(c), abs(d))
    if a <= p.x <= b:
        column = abs(p.y - min(max(p.y, c), d))
        if a == b:
            return column
        # neighbouring columns are reached through the river
        return min(column, abs(p.y) + nearest_height)
    gap = a - p.x if p.x < a else p.x - b
    return abs(p.y) + nearest_height + gap


def _primitive_distance(p: Point, D: Primitive) -> float:
    match D:
        case FinitePoints(points):
            return min(distance(p, q) for q in points)
        case Box(a, b, c, d):
            return _box_distance(p, a, b, c, d)
        case VerticalSegment(x, lo, hi):
            return _box_distance(p, x, x, lo, hi)
        case Ball(center, radius, _):
            return max(0.0, distance(p, center) - radius)
    raise TypeError(f"not a primitive: {D!r}")


def distance_to_set(p: Point, D: SetDescription) -> float:
    """inf over D of d(p, .); for an open ball this is the distance to its closure."""
    p = as_point(p)
    return min(_primitive_distance(p, m) for m in members(D))


def contains(D: SetDescription, p: Point, tol: float = 0.0) -> bool:
    """Membership, widened by ``tol`` in the river metric."""
    if tol < 0:
        raise PreconditionError("tolerance must be nonnegative")
    p = as_point(p)
    for m in members(D):
        if isinstance(m, Ball) and not m.closed:
            if distance(m.center, p) < m.radius + tol:
                return True
        elif _primitive_distance(p, m) <= tol:
            return True
    return False


def farthest_distance(p: Point, D: SetDescription) -> float:
    """sup over D of d(p, .)."""
    p = as_point(p)
    best = 0.0
    for m in members(D):
        match m:
            case FinitePoints(points):
                best = max(best, max(distance(p, q) for q in points))
            case Box(a, b, c, d):
                # off the column x = p.x the distance is convex, so a corner wins
                best = max(best, *(distance(p, Point(x, y)) for x in (a, b) for y in (c, d)))
            case VerticalSegment(x, lo, hi):
                best = max(best, distance(p, Point(x, lo)), distance(p, Point(x, hi)))
            case Ball(center, radius, _):
                best = max(best, distance(p, Point(center.x, center.y - radius)),
                           distance(p, Point(center.x, center.y + radius)))
                if m.reach > 0:
                    if center.x == p.x:
                        best = max(best, abs(p.y) + m.reach)
                    best = max(best, distance(p, Point(center.x - m.reach, 0.0)),
                               distance(p, Point(center.x + m.reach, 0.0)))
    return best


def x_extent(D: SetDescription) -> tuple[float, float]:
    lo, hi = float("inf"), float("-inf")
    for m in members(D):
        for s, e in _x_support(m):
            lo, hi = min(lo, s), max(hi, e)
    return lo, hi


# -- fibres ------------------------------------------------------------------------

def _x_support(m: Primitive) -> list[Interval]:
    match m:
        case FinitePoints(points):
            return [(p.x, p.x) for p in points]
        case Box(a, b, _, _):
            return [(a, b)]
        case VerticalSegment(x, _, _):
            return [(x, x)]
        case Ball(center, _, _):
            w = max(m.reach, 0.0)
            return [(center.x - w, center.x + w)]
    raise TypeError(f"not a primitive: {m!r}")


def _fiber(m: Primitive, x: float) -> list[Interval]:
    """Closed height intervals of a closed primitive above abscissa x."""
    match m:
        case FinitePoints(points):
            return [(p.y, p.y) for p in points if p.x == x]
        case Box(a, b, c, d):
            return [(c, d)] if a <= x <= b else []
        case VerticalSegment(vx, lo, hi):
            return [(lo, hi)] if x == vx else []
        case Ball(center, radius, _):
            if x == center.x:
                return [(center.y - radius, center.y + radius)]
            h = m.reach - abs(x - center.x)
            return [(-h, h)] if h >= 0 else []
    raise TypeError(f"not a primitive: {m!r}")


def _merge(intervals: Iterable[Interval], tol: float = 0.0) -> list[Interval]:
    merged: list[list[float]] = []
    for lo, hi in sorted(intervals):
        if merged and lo <= merged[-1][1] + tol:
            merged[-1][1] = max(merged[-1][1], hi)
        else:
            merged.append([lo, hi])
    return [(lo, hi) for lo, hi in merged]


def fiber(D: SetDescription, x: float, tol: float = 0.0) -> list[Interval]:
    """Merged closed height intervals of D above abscissa x."""
    return _merge((iv for m in members(D) for iv in _fiber(m, x)), tol)


def _river_support(m: Primitive) -> list[Interval]:
    """Abscissae where the primitive meets the river."""
    match m:
        case FinitePoints(points):
            return [(p.x, p.x) for p in points if p.y == 0.0]
        case Box(a, b, c, d):
            return [(a, b)] if c <= 0.0 <= d else []
        case VerticalSegment(x, lo, hi):
            return [(x, x)] if lo <= 0.0 <= hi else []
        case Ball(center, _, _):
            return [(center.x - m.reach, center.x + m.reach)] if m.reach >= 0 else []
    raise TypeError(f"not a primitive: {m!r}")


def _boundary_lines(m: Primitive) -> list[tuple[float, float, float, float]]:
    """Fibre endpoints of a primitive as lines y = slope * x + icpt on [x0, x1]."""
    match m:
        case Box(a, b, c, d) if a < b:
            return [(0.0, c, a, b), (0.0, d, a, b)]
        case Ball(center, _, _) if m.reach > 0:
            cx, w = center.x, m.reach
            return [(1.0, w - cx, cx - w, cx), (-1.0, cx - w, cx - w, cx),
                    (-1.0, w + cx, cx, cx + w), (1.0, -w - cx, cx, cx + w)]
    return []


def _critical_abscissae(ms: Sequence[Primitive]) -> list[float]:
    """Abscissae between which the ordering of all fibre endpoints cannot change."""
    xs: set[float] = set()
    for m in ms:
        for s, e in _x_support(m):
            xs.update((s, e))
        if isinstance(m, Ball):
            xs.add(m.center.x)
    lines = [ln for m in ms for ln in _boundary_lines(m)]
    for (s1, c1, lo1, hi1), (s2, c2, lo2, hi2) in combinations(lines, 2):
        if s1 == s2:
            continue
        x = (c2 - c1) / (s1 - s2)
        if max(lo1, lo2) <= x <= min(hi1, hi2):
            xs.add(x)
    return sorted(xs)


@dataclass(frozen=True)
class ConvexityVerdict:
    convex: bool
    counterexample: tuple[Point, Point] | None = None
    reason: str | None = None
    exit_point: Point | None = None

    def to_json(self) -> dict:
        out = {"convex": self.convex}
        if not self.convex:
            out["reason"] = self.reason
            out["counterexample"] = [p.to_json() for p in self.counterexample]
            out["exit_point"] = self.exit_point.to_json()
        return out


CONVEX = ConvexityVerdict(True)


def _outermost(intervals: list[Interval]) -> float:
    """Height of the point farthest from the river; ties go to the upper one."""
    lo, hi = intervals[0][0], intervals[-1][1]
    return hi if abs(hi) >= abs(lo) else lo


def is_convex(D: SetDescription, tol: float = 0.0) -> ConvexityVerdict:
    """Decide convexity from the fibre structure; no sampling.

    ``tol`` lets fibre intervals separated by at most that much count as
    touching.  Open balls are accepted only on their own (every ball is
    convex); inside a union they are rejected because the extent of the
    set need not be attained.
    """
    if isinstance(D, Ball):
        return CONVEX
    ms = members(D)
    if any(isinstance(m, Ball) and not m.closed for m in ms):
        raise PreconditionError("convexity of unions is decided for closed primitives only")

    xmin, xmax = x_extent(D)
    if xmin == xmax:
        heights = fiber(D, xmin, tol)
        if len(heights) == 1:
            return CONVEX
        (_, top), (bottom, _) = heights[0], heights[1]
        return ConvexityVerdict(False, (Point(xmin, top), Point(xmin, bottom)), "vertical-interval",
                                Point(xmin, (top + bottom) / 2))

    crit = _critical_abscissae(ms)
    probes = []
    for left, right in zip(crit, crit[1:]):
        probes.append(left)
        probes.append((left + right) / 2)
    probes.append(crit[-1])
    for x in probes:
        heights = fiber(D, x, tol)
        if not heights:
            continue
        if len(heights) == 1 and heights[0][0] <= 0.0 <= heights[0][1]:
            continue
        home = next((iv for iv in heights if iv[0] <= 0.0 <= iv[1]), None)
        strays = [iv for iv in heights if iv is not home]
        y = _outermost(strays)
        if home is None:
            exit_y = 0.0
        elif y > 0:
            exit_y = (home[1] + min(lo for lo, _ in strays if lo > home[1])) / 2
        else:
            exit_y = (home[0] + max(hi for _, hi in strays if hi < home[0])) / 2
        partner_x = xmax if x != xmax else xmin
        partner = Point(partner_x, _outermost(fiber(D, partner_x, tol)))
        return ConvexityVerdict(False, (Point(x, y), partner), "vertical-drop", Point(x, exit_y))

    covered = _merge((iv for m in ms for iv in _river_support(m)), tol)
    reach = xmin
    gap = None
    for lo, hi in covered:
        if lo > reach:
            gap = (reach, lo)
            break
        reach = max(reach, hi)
    if gap is None and reach < xmax:
        gap = (reach, xmax)
    if gap is not None:
        ends = (Point(xmin, _outermost(fiber(D, xmin, tol))), Point(xmax, _outermost(fiber(D, xmax, tol))))
        return ConvexityVerdict(False, ends, "base-interval", Point((gap[0] + gap[1]) / 2, 0.0))
    return CONVEX


def convex_hull(points: Sequence[Point]) -> SetDescription:
    """Smallest convex set containing the given points."""
    pts = [as_point(p) for p in points]
    if not pts:
        raise PreconditionError("the hull of an empty point set is undefined")
    by_x: dict[float, list[float]] = {}
    for p in pts:
        by_x.setdefault(p.x, []).append(p.y)
    if len(by_x) == 1:
        (x, ys), = by_x.items()
        return VerticalSegment(x, min(ys), max(ys))
    pieces = [VerticalSegment(x, min(0.0, min(ys)), max(0.0, max(ys))) for x, ys in sorted(by_x.items())]
    return UnionOf((*pieces, Box(min(by_x), max(by_x), 0.0, 0.0)))
