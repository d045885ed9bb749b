"""Command-line front end.

Every subcommand prints JSON on stdout, except ``render`` which writes an
SVG file.  Exit status: 0 success, 2 unparseable input, 3 precondition
violation, 4 a tolerance check failed.
"""
from __future__ import annotations

import argparse
import contextlib
import json
import math
import sys

from . import convex_sets as cs
from . import noncompactness as nc
from .convex_structure import w_point
from .errors import PreconditionError, ToleranceError
from .property_suite import CHECKS, DEFAULT_TOL, run_check
from .render import parse_scene, render
from .river_metric import Point, distance, metric_segment, midpoint

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_PRECONDITION = 3
EXIT_TOLERANCE = 4

SIGNIFICANT_DIGITS = 12


class InputError(Exception):
    """Input could not be parsed."""


def tidy(value):
    """Round floats to 12 significant digits; integral values print as integers."""
    if isinstance(value, bool) or value is None or isinstance(value, (int, str)):
        return value
    if isinstance(value, float):
        if not math.isfinite(value):
            return None
        v = float(f"{value:.{SIGNIFICANT_DIGITS}g}")
        if v == int(v) and abs(v) < 1e15:
            return int(v)
        return v
    if isinstance(value, dict):
        return {k: tidy(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [tidy(v) for v in value]
    if hasattr(value, "item"):  # numpy scalars
        return tidy(value.item())
    raise TypeError(f"cannot serialise {type(value).__name__}")


def dumps(obj) -> str:
    return json.dumps(tidy(obj), indent=2)


def _json_arg(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"not valid JSON: {text!r}") from exc


def _point_arg(text: str) -> Point:
    try:
        return Point.from_json(_json_arg(text))
    except PreconditionError as exc:
        raise InputError(str(exc)) from exc


def _load(path: str):
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read JSON from {path}: {exc}") from exc


def _load_set(path: str) -> cs.SetDescription:
    data = _load(path)
    if not isinstance(data, dict):
        raise InputError("a set description is a JSON object with a 'type' field")
    return cs.set_from_json(data)


def _cmd_dist(args):
    return {"distance": distance(_point_arg(args.p), _point_arg(args.q))}


def _cmd_segment(args):
    seg = metric_segment(_point_arg(args.p), _point_arg(args.q))
    return {**seg.to_json(), "length": seg.length}


def _cmd_w(args):
    return {"point": w_point(_point_arg(args.p), _point_arg(args.q), args.lam).to_json()}


def _cmd_midpoint(args):
    return {"point": midpoint(_point_arg(args.p), _point_arg(args.q)).to_json()}


def _cmd_hull(args):
    data = _load(args.points)
    if isinstance(data, dict):
        data = data.get("points")
    if not isinstance(data, list):
        raise InputError("hull input is a list of [x, y] points or {'points': [...]}")
    return cs.set_to_json(cs.convex_hull([Point.from_json(p) for p in data]))


def _cmd_convex_check(args):
    return cs.is_convex(_load_set(args.set), tol=args.tol).to_json()


def _cmd_mnc(args):
    return nc.mnc(_load_set(args.set)).to_json()


def _cmd_modulus(args):
    out = nc.modulus_estimate(args.measure, args.eps, args.grid).to_json()
    if not args.timing:
        # wall-clock time would make the output differ between runs
        out["search_stats"].pop("runtime_s")
    return out


NUC_GRIDS = {
    "alpha": [round(0.1 * i, 10) for i in range(1, 21)],
    "chi": [round(0.1 * i, 10) for i in range(1, 11)],
    "beta": [round(0.1 * i, 10) for i in range(1, 11)],
}


def _cmd_nuc_sweep(args):
    out = {}
    for name, eps_grid in NUC_GRIDS.items():
        values = [nc.modulus_estimate(name, e, args.grid).value for e in eps_grid]
        out[name] = {"epsilon": eps_grid, "modulus": values,
                     "characteristic": nc.nuc_characteristic(name, eps_grid, args.grid, args.floor)}
    return out


def _cmd_properties(args):
    report = run_check(args.check, args.samples, args.seed, args.tol, args.batches)
    out = report.to_json()
    if not report.passed:
        return out, EXIT_TOLERANCE
    return out


def _cmd_render(args):
    svg = render(parse_scene(_load(args.scene)))
    with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(svg)
    return None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rivermetric", description="Geometry of the river metric plane.")
    sub = parser.add_subparsers(dest="command", required=True)

    verify = argparse.ArgumentParser(add_help=False)
    verify.add_argument("--seed", type=int, default=0, help="unsigned integer seed (ignored by deterministic checks)")
    verify.add_argument("--tol", type=float, default=DEFAULT_TOL, help="comparison tolerance")

    for name, fn, helptext in (("dist", _cmd_dist, "distance between two points"),
                               ("segment", _cmd_segment, "geodesic between two points"),
                               ("midpoint", _cmd_midpoint, "midpoint of the geodesic")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("p", help='point as JSON, e.g. "[1,1]"')
        p.add_argument("q")
        p.set_defaults(func=fn)

    p = sub.add_parser("w", help="convex structure W(p, q, lambda)")
    p.add_argument("p")
    p.add_argument("q")
    p.add_argument("lam", type=float, metavar="lambda")
    p.set_defaults(func=_cmd_w)

    p = sub.add_parser("hull", help="convex hull of a JSON point list")
    p.add_argument("points")
    p.set_defaults(func=_cmd_hull)

    p = sub.add_parser("convex-check", parents=[verify], help="decide convexity of a set description")
    p.add_argument("set")
    p.set_defaults(func=_cmd_convex_check)

    p = sub.add_parser("mnc", help="measures of noncompactness of a set description")
    p.add_argument("set")
    p.set_defaults(func=_cmd_mnc)

    p = sub.add_parser("modulus", help="estimate the modulus of noncompact convexity")
    p.add_argument("--measure", choices=[m.value for m in nc.Measure], required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--grid", type=int, default=nc.DEFAULT_GRID)
    p.add_argument("--timing", action="store_true", help="include wall-clock runtime in search_stats")
    p.set_defaults(func=_cmd_modulus)

    p = sub.add_parser("nuc-sweep", parents=[verify], help="moduli over an epsilon grid and the NUC characteristic")
    p.add_argument("--grid", type=int, default=nc.DEFAULT_GRID)
    p.add_argument("--floor", type=float, default=nc.NUC_FLOOR)
    p.set_defaults(func=_cmd_nuc_sweep)

    p = sub.add_parser("properties", parents=[verify], help="randomised property check")
    p.add_argument("--check", choices=sorted(CHECKS), required=True)
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--batches", type=int, default=1)
    p.set_defaults(func=_cmd_properties)

    p = sub.add_parser("render", help="draw a scene as SVG")
    p.add_argument("scene")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=_cmd_render)
    return parser


def run(argv: list[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        with contextlib.redirect_stdout(stdout), contextlib.redirect_stderr(stderr):
            args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else EXIT_OK
    if getattr(args, "seed", 0) < 0:
        print("error: --seed must be an unsigned integer", file=stderr)
        return EXIT_PARSE
    try:
        result = args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_PARSE
    except PreconditionError as exc:
        print(f"precondition violated: {exc}", file=stderr)
        return EXIT_PRECONDITION
    except ToleranceError as exc:
        print(f"tolerance failure: {exc}", file=stderr)
        return EXIT_TOLERANCE
    status = EXIT_OK
    if isinstance(result, tuple):
        result, status = result
    if result is not None:
        stdout.write(dumps(result) + "\n")
    if status == EXIT_TOLERANCE:
        print("tolerance failure: property violated on some samples", file=stderr)
    return status


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
