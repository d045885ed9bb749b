"""The plane with the river metric.

Travel between points with different abscissae has to go down to the
river (the x-axis), along it, and back up.  Points sharing an abscissa are
joined by the vertical segment between them.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .errors import PreconditionError


@dataclass(frozen=True, slots=True)
class Point:
    x: float
    y: float

    def __post_init__(self):
        x, y = float(self.x), float(self.y)
        if not (math.isfinite(x) and math.isfinite(y)):
            raise PreconditionError(f"point coordinates must be finite, got ({self.x}, {self.y})")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    def __iter__(self) -> Iterator[float]:
        yield self.x
        yield self.y

    def to_json(self) -> list[float]:
        return [self.x, self.y]

    @classmethod
    def from_json(cls, data) -> Point:
        if isinstance(data, Point):
            return data
        if not isinstance(data, (list, tuple)) or len(data) != 2:
            raise PreconditionError(f"a point is a two-element array [x, y], got {data!r}")
        return cls(data[0], data[1])


def as_point(p) -> Point:
    """Accept a Point or any (x, y) pair."""
    if isinstance(p, Point):
        return p
    return Point.from_json(p)


ORIGIN = Point(0.0, 0.0)


def _sign(v: float) -> float:
    return 1.0 if v > 0 else (-1.0 if v < 0 else 0.0)


def distance(p: Point, q: Point) -> float:
    if p.x == q.x:
        return abs(p.y - q.y)
    return abs(p.y) + abs(q.y) + abs(p.x - q.x)


Piece = tuple[Point, Point]


@dataclass(frozen=True)
class MetricSegment:
    """The geodesic between two points as 1 to 3 axis-aligned pieces.

    Pieces are oriented from ``start`` to ``end``; vertical pieces keep a
    constant abscissa and horizontal pieces lie on the river.
    """

    pieces: tuple[Piece, ...]
    start: Point
    end: Point

    @property
    def endpoints(self) -> tuple[Point, Point]:
        return self.start, self.end

    @property
    def length(self) -> float:
        # same summation order as distance(): vertical pieces, then the river run
        vertical = [distance(a, b) for a, b in self.pieces if a.x == b.x]
        run = [distance(a, b) for a, b in self.pieces if a.x != b.x]
        return sum(vertical) + sum(run)

    def reversed(self) -> MetricSegment:
        return MetricSegment(tuple((b, a) for a, b in reversed(self.pieces)), self.end, self.start)

    def contains(self, p: Point, tol: float = 0.0) -> bool:
        """Piecewise membership, with ``tol`` slack on the fixed coordinate and the range."""
        for a, b in self.pieces:
            if a.x == b.x:
                if abs(p.x - a.x) <= tol and min(a.y, b.y) - tol <= p.y <= max(a.y, b.y) + tol:
                    return True
            elif abs(p.y) <= tol and min(a.x, b.x) - tol <= p.x <= max(a.x, b.x) + tol:
                return True
        return False

    def to_json(self) -> dict:
        return {"pieces": [[a.to_json(), b.to_json()] for a, b in self.pieces]}

    @classmethod
    def from_json(cls, data: dict) -> MetricSegment:
        pieces = tuple((Point.from_json(a), Point.from_json(b)) for a, b in data["pieces"])
        if not pieces:
            raise PreconditionError("a segment has at least one piece")
        return cls(pieces, pieces[0][0], pieces[-1][1])


def metric_segment(p: Point, q: Point) -> MetricSegment:
    if p.x > q.x:
        return metric_segment(q, p).reversed()
    if p.x == q.x:
        return MetricSegment(((p, q),), p, q)
    foot_p = Point(p.x, 0.0)
    foot_q = Point(q.x, 0.0)
    pieces = [(p, foot_p), (foot_p, foot_q), (foot_q, q)]
    # the river run always has positive length here, so at least one piece survives
    pieces = tuple((a, b) for a, b in pieces if a != b)
    return MetricSegment(pieces, p, q)


def is_between(p: Point, z: Point, q: Point, tol: float = 0.0) -> bool:
    if tol < 0:
        raise PreconditionError("tolerance must be nonnegative")
    return abs(distance(p, z) + distance(z, q) - distance(p, q)) <= tol


def point_at_arclength(p: Point, q: Point, s: float) -> Point:
    """The point at distance ``s`` from ``p`` along the geodesic to ``q``."""
    d = distance(p, q)
    if not 0.0 <= s <= d:
        raise PreconditionError(f"arclength {s} outside [0, {d}]")
    if s == 0.0:
        return p
    if s == d:
        return q
    if p.x == q.x:
        return Point(p.x, p.y + _sign(q.y - p.y) * s)
    drop = abs(p.y)
    if s <= drop:
        return Point(p.x, p.y - _sign(p.y) * s)
    run = abs(q.x - p.x)
    if s <= drop + run:
        return Point(p.x + _sign(q.x - p.x) * (s - drop), 0.0)
    return Point(q.x, _sign(q.y) * (s - drop - run))


def midpoint(p: Point, q: Point) -> Point:
    return point_at_arclength(p, q, distance(p, q) / 2)


# Vectorised counterparts for bulk verification.  Arrays have shape (..., 2).

def distances(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    same = p[..., 0] == q[..., 0]
    through_river = np.abs(p[..., 1]) + np.abs(q[..., 1]) + np.abs(p[..., 0] - q[..., 0])
    return np.where(same, np.abs(p[..., 1] - q[..., 1]), through_river)


def points_at_arclength(p: np.ndarray, q: np.ndarray, s: np.ndarray) -> np.ndarray:
    """Batch version of :func:`point_at_arclength`; ``s`` must already be in range."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    s = np.asarray(s, dtype=float)
    d = distances(p, q)
    px, py, qx, qy = p[..., 0], p[..., 1], q[..., 0], q[..., 1]
    drop = np.abs(py)
    run = np.abs(qx - px)
    vertical = px == qx

    out_x = np.where(s <= drop, px, np.where(s <= drop + run, px + np.sign(qx - px) * (s - drop), qx))
    out_y = np.where(s <= drop, py - np.sign(py) * s,
                     np.where(s <= drop + run, 0.0, np.sign(qy) * (s - drop - run)))
    out_x = np.where(vertical, px, out_x)
    out_y = np.where(vertical, py + np.sign(qy - py) * s, out_y)

    at_start = s == 0
    at_end = s == d
    out_x = np.where(at_start, px, np.where(at_end, qx, out_x))
    out_y = np.where(at_start, py, np.where(at_end, qy, out_y))
    return np.stack([out_x, out_y], axis=-1)


def points_from(coords: Sequence[Sequence[float]]) -> list[Point]:
    return [Point(x, y) for x, y in coords]
