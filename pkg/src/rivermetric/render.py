"""SVG drawings of river-metric scenes.

Balls are drawn with their true shape: a diamond around the river with a
vertical spike through the centre, or just the spike when the ball does
not reach the river.  Output is byte-stable for a given scene.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from xml.sax.saxutils import escape

from .convex_sets import Ball, Box, UnionOf, VerticalSegment, convex_hull, members
from .errors import PreconditionError
from .river_metric import Point, metric_segment

DEFAULT_STYLE = {
    "scale": 50.0,
    "stroke_width": 2.0,
    "point_radius": 3.0,
    "river": "#3b7dd8",
    "segment": "#d83b3b",
    "ball": "#2e8b57",
    "box": "#c9a227",
    "hull": "#7b4fc9",
    "point": "#222222",
    "fill_opacity": 0.25,
}

# layers are drawn bottom to top in this order
LAYERS = ("box", "hull", "ball", "segment", "point")


@dataclass(frozen=True)
class Scene:
    objects: tuple[dict, ...]
    viewport: tuple[float, float, float, float]  # xmin, xmax, ymin, ymax
    style: dict = field(default_factory=dict)


def _resolve(ref, named: dict[str, Point]) -> Point:
    if isinstance(ref, str):
        if ref not in named:
            raise PreconditionError(f"unresolved point reference {ref!r}")
        return named[ref]
    return Point.from_json(ref)


def parse_scene(data: dict) -> Scene:
    """Validate a scene document and resolve point references to coordinates."""
    try:
        vp = data["viewport"]
        xmin, xmax = (float(v) for v in vp["x"])
        ymin, ymax = (float(v) for v in vp["y"])
    except (KeyError, TypeError, ValueError) as exc:
        raise PreconditionError(f"scene needs a viewport {{'x': [min, max], 'y': [min, max]}}: {exc}") from exc
    if not (xmin < xmax and ymin < ymax):
        raise PreconditionError("viewport ranges must be nonempty")
    raw = data.get("objects", [])
    named = {o["id"]: Point.from_json(o["at"]) for o in raw if o.get("type") == "point" and "id" in o}
    objects = []
    for o in raw:
        kind = o.get("type")
        if kind == "point":
            objects.append({"type": "point", "at": Point.from_json(o["at"]), "label": o.get("id")})
        elif kind == "segment":
            objects.append({"type": "segment", "from": _resolve(o["from"], named), "to": _resolve(o["to"], named)})
        elif kind == "ball":
            objects.append({"type": "ball", "set": Ball(Point.from_json(o["center"]), float(o["radius"]),
                                                        bool(o.get("closed", True)))})
        elif kind == "box":
            objects.append({"type": "box", "set": Box(float(o["a"]), float(o["b"]), float(o["c"]), float(o["d"]))})
        elif kind == "hull":
            pts = [_resolve(p, named) for p in o["points"]]
            objects.append({"type": "hull", "set": convex_hull(pts)})
        else:
            raise PreconditionError(f"unknown scene object type {kind!r}")
    style = {**DEFAULT_STYLE, **data.get("style", {})}
    return Scene(tuple(objects), (xmin, xmax, ymin, ymax), style)


def _num(v: float) -> str:
    s = f"{v:.3f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


class _Canvas:
    def __init__(self, scene: Scene):
        self.xmin, self.xmax, self.ymin, self.ymax = scene.viewport
        self.style = scene.style
        self.scale = float(self.style["scale"])
        self.width = (self.xmax - self.xmin) * self.scale
        self.height = (self.ymax - self.ymin) * self.scale

    def px(self, x: float, y: float) -> str:
        return f"{_num((x - self.xmin) * self.scale)},{_num((self.ymax - y) * self.scale)}"

    def line(self, a: tuple[float, float], b: tuple[float, float], cls: str, colour: str, extra: str = "") -> str:
        (x1, y1), (x2, y2) = self.px(*a).split(","), self.px(*b).split(",")
        return (f'<line class="{cls}" x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="{colour}" '
                f'stroke-width="{_num(self.style["stroke_width"])}"{extra}/>')

    def polygon(self, pts: list[tuple[float, float]], cls: str, colour: str, extra: str = "") -> str:
        coords = " ".join(self.px(x, y) for x, y in pts)
        return (f'<polygon class="{cls}" points="{coords}" stroke="{colour}" fill="{colour}" '
                f'fill-opacity="{_num(self.style["fill_opacity"])}" '
                f'stroke-width="{_num(self.style["stroke_width"])}"{extra}/>')


def _draw(obj: dict, cv: _Canvas) -> list[str]:
    st = cv.style
    kind = obj["type"]
    if kind == "point":
        p = obj["at"]
        x, y = cv.px(p.x, p.y).split(",")
        out = [f'<circle class="point" cx="{x}" cy="{y}" r="{_num(st["point_radius"])}" fill="{st["point"]}"/>']
        if obj["label"]:
            out.append(f'<text class="label" x="{x}" y="{y}" dx="4" dy="-4" font-size="12" '
                       f'fill="{st["point"]}">{escape(str(obj["label"]))}</text>')
        return out
    if kind == "segment":
        seg = metric_segment(obj["from"], obj["to"])
        corners = [seg.start] + [b for _, b in seg.pieces]
        coords = " ".join(cv.px(p.x, p.y) for p in corners)
        return [f'<polyline class="segment" points="{coords}" fill="none" stroke="{st["segment"]}" '
                f'stroke-width="{_num(st["stroke_width"])}"/>']
    if kind == "ball":
        ball = obj["set"]
        c, r, w = ball.center, ball.radius, ball.reach
        dash = "" if ball.closed else ' stroke-dasharray="6,4"'
        out = []
        if w > 0:
            diamond = [(c.x - w, 0.0), (c.x, w), (c.x + w, 0.0), (c.x, -w)]
            out.append(cv.polygon(diamond, "ball", st["ball"], dash))
        out.append(cv.line((c.x, c.y - r), (c.x, c.y + r), "ball-spike", st["ball"], dash))
        return out
    if kind == "box":
        b = obj["set"]
        return [cv.polygon([(b.a, b.c), (b.b, b.c), (b.b, b.d), (b.a, b.d)], "box", st["box"])]
    if kind == "hull":
        out = []
        for m in members(obj["set"]):
            if isinstance(m, VerticalSegment):
                out.append(cv.line((m.x, m.y_lo), (m.x, m.y_hi), "hull", st["hull"]))
            elif isinstance(m, Box):
                out.append(cv.line((m.a, 0.0), (m.b, 0.0), "hull-base", st["hull"]))
        return out
    raise PreconditionError(f"cannot draw {kind!r}")


def render(scene: Scene) -> str:
    cv = _Canvas(scene)
    body = [cv.line((cv.xmin, 0.0), (cv.xmax, 0.0), "river", scene.style["river"])]
    for layer in LAYERS:
        for obj in scene.objects:
            if obj["type"] == layer:
                body.extend(_draw(obj, cv))
    head = ('<?xml version="1.0" encoding="UTF-8"?>\n'
            f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{_num(cv.width)}" '
            f'height="{_num(cv.height)}" viewBox="0 0 {_num(cv.width)} {_num(cv.height)}">')
    return "\n".join([head, *("  " + line for line in body), "</svg>"]) + "\n"
