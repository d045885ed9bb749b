"""Acceptance criteria, one test each.

Every criterion appends a PASS/FAIL line to ``RESULTS``; the conftest hook
prints them after the run.  ``python3 tests/test_acceptance.py`` runs the
criteria without pytest and prints the same lines.
"""
import itertools
import random
import subprocess
import sys
import tempfile
import time
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from golden_cases import JSON_CASES, SCENES, render_argv  # noqa: E402
from oracles import grid_axis, member_mask, random_convex_containing, union_of, w_closure_mask  # noqa: E402
from rivermetric import (Ball, Box, FinitePoints, Point, UnionOf, VerticalSegment, contains,  # noqa: E402
                         convex_hull, distance, is_convex, midpoint, mnc, modulus_estimate,
                         nuc_characteristic, prolongation_set, run_check, y_star)
from rivermetric.convex_structure import w_points_arclength, w_points_piecewise  # noqa: E402
from rivermetric.river_metric import distances, metric_segment  # noqa: E402

SEED = 20240601
N = 100_000
RESULTS: list[str] = []


def report(number: int, title: str, ok: bool, detail: str, elapsed: float, limit: float | None = None) -> bool:
    within = limit is None or elapsed < limit
    budget = f" (limit {limit:g} s)" if limit is not None else ""
    RESULTS.append(f"{'PASS' if ok and within else 'FAIL'}  {number:>2}. {title}: {detail}; "
                   f"{elapsed:.2f} s{budget}")
    return ok and within


def _uniform(rng: np.random.Generator, n: int) -> np.ndarray:
    return rng.uniform(-10, 10, size=(n, 2))


def criterion_1() -> bool:
    rng = np.random.default_rng(SEED)
    start = time.perf_counter()
    x, y, z = _uniform(rng, N), _uniform(rng, N), _uniform(rng, N)
    dxy, dyx = distances(x, y), distances(y, x)
    slack = distances(x, z) + distances(z, y) - dxy
    violations = int(np.sum(slack < -1e-9))
    symmetric = bool(np.array_equal(dxy, dyx))
    identity = bool(np.all(distances(x, x) == 0)) and bool(np.all((dxy == 0) == np.all(x == y, axis=1)))
    # the scalar implementation must agree with the batch one
    scalar_ok = all(distance(Point(*x[i]), Point(*y[i])) == dxy[i] for i in range(0, N, 100))
    elapsed = time.perf_counter() - start
    ok = violations == 0 and symmetric and identity and scalar_ok
    return report(1, "metric axioms", ok, f"{violations} triangle violations in {N} triples, "
                  f"symmetry {symmetric}, identity {identity}", elapsed, 1.0)


def criterion_2() -> bool:
    rng = np.random.default_rng(SEED + 2)
    start = time.perf_counter()
    u, v1, v2 = _uniform(rng, N), _uniform(rng, N), _uniform(rng, N)
    lam = rng.random(N)
    snap = rng.random(N)
    lam[snap < 0.02] = 0.0
    lam[(snap >= 0.02) & (snap < 0.04)] = 1.0
    lam[(snap >= 0.04) & (snap < 0.06)] = 0.5
    v2[(snap >= 0.06) & (snap < 0.08), 0] = v1[(snap >= 0.06) & (snap < 0.08), 0]
    w = w_points_piecewise(v1, v2, lam)
    walked = w_points_arclength(v1, v2, lam)
    residual = lam * distances(u, v1) + (1 - lam) * distances(u, v2) - distances(u, w)
    worst = float(residual.min())
    gap = float(np.max(np.abs(w - walked)))
    elapsed = time.perf_counter() - start
    ok = worst >= -1e-9 and gap <= 1e-12
    return report(2, "takahashi structure", ok, f"min residual {worst:.3g}, max implementation gap {gap:.3g}",
                  elapsed, 2.0)


def criterion_3() -> bool:
    start = time.perf_counter()
    d = distance(Point(1, 1), Point(3, 0))
    p, q = Point(0, 2), Point(4, 1)
    m = midpoint(p, q)
    formula = Point((abs(q.y) + q.x - abs(p.y) + p.x) / 2, 0)
    pro = prolongation_set(Point(1, 1), Point(3, 0), 4)
    witnesses = [pro.contains(Point(3, 1)), pro.contains(Point(3, -1))]
    exact = [pro.residual(Point(3, 1)) == 0, pro.residual(Point(3, -1)) == 0]
    elapsed = time.perf_counter() - start
    ok = d == 3 and m == Point(1.5, 0) == formula and all(witnesses) and all(exact)
    return report(3, "exact values", ok, f"d = {d:g}, midpoint = {m.to_json()}, "
                  f"prolongation holds (3,1) and (3,-1): {all(witnesses) and all(exact)}", elapsed)


def criterion_4() -> bool:
    values = [k / 4 for k in range(-9, 11)]
    start = time.perf_counter()
    boxes = wrong = bad_witness = rejected = 0
    for a, b, c, d in itertools.product(values, repeat=4):
        if a > b or c > d:
            continue
        boxes += 1
        box = Box(a, b, c, d)
        verdict = is_convex(box)
        if verdict.convex != (c <= 0 <= d or a == b):
            wrong += 1
        if not verdict.convex:
            rejected += 1
            p, q = verdict.counterexample
            exits = (contains(box, p) and contains(box, q)
                     and metric_segment(p, q).contains(verdict.exit_point, 1e-12)
                     and not contains(box, verdict.exit_point))
            bad_witness += not exits
    elapsed = time.perf_counter() - start
    ok = wrong == 0 and bad_witness == 0
    return report(4, "box convexity", ok, f"{wrong} wrong verdicts over {boxes} boxes, "
                  f"{bad_witness} of {rejected} counterexamples fail to exit", elapsed, 5.0)


def criterion_5() -> bool:
    axis = grid_axis()
    G = np.stack(np.meshgrid(axis, axis, indexing="ij"), axis=-1).reshape(-1, 2)
    rng = random.Random(SEED + 5)
    start = time.perf_counter()
    disagreements = 0
    for k in range(200):
        P = [Point(rng.randint(-5, 5), rng.randint(-5, 5)) for _ in range(rng.randint(1, 6))]
        expected = w_closure_mask(P, G, 1e-6, seed=k)
        got = member_mask(convex_hull(P), G[:, 0], G[:, 1], 1e-6)
        disagreements += int(np.sum(expected != got))
    elapsed = time.perf_counter() - start
    return report(5, "hull oracle", disagreements == 0,
                  f"{disagreements} disagreements over 200 point sets x {len(G)} grid points", elapsed, 30.0)


def _random_convex(rng: random.Random, z: Point):
    if rng.random() < 0.25:
        extra = [Point(rng.uniform(-5, 5), rng.uniform(-5, 5)) for _ in range(rng.randint(1, 4))]
        return convex_hull([z, *extra])
    return random_convex_containing(rng, z)


def criterion_6() -> bool:
    rng = random.Random(SEED + 6)
    start = time.perf_counter()
    failures = 0
    for _ in range(1000):
        z = Point(rng.uniform(-5, 5), rng.uniform(-5, 5))
        A, B = _random_convex(rng, z), _random_convex(rng, z)
        assert is_convex(A).convex and is_convex(B).convex
        failures += not is_convex(union_of(A, B)).convex
    elapsed = time.perf_counter() - start
    return report(6, "convex unions", failures == 0, f"{failures} non-convex unions out of 1000", elapsed)


def _random_description(rng: random.Random):
    def primitive():
        kind = rng.randrange(4)
        if kind == 0:
            return FinitePoints(tuple(Point(rng.uniform(-5, 5), rng.uniform(-5, 5)) for _ in range(3)))
        if kind == 1:
            c, d = sorted((rng.uniform(-5, 5), rng.uniform(-5, 5)))
            a = rng.uniform(-5, 5)
            return Box(a, a + rng.choice((0.0, rng.uniform(0, 3))), c, d)
        if kind == 2:
            return Ball(Point(rng.uniform(-5, 5), rng.uniform(-5, 5)), rng.uniform(0.01, 5))
        lo = rng.uniform(-5, 5)
        return VerticalSegment(rng.uniform(-5, 5), lo, lo + rng.uniform(0, 3))
    parts = [primitive() for _ in range(rng.randint(1, 3))]
    return parts[0] if len(parts) == 1 else UnionOf(tuple(parts))


def criterion_7() -> bool:
    rng = random.Random(SEED + 7)
    start = time.perf_counter()
    broken = 0
    for _ in range(10_000):
        r = mnc(_random_description(rng))
        broken += not (r.alpha == 2 * r.chi and r.beta == r.chi)
    values = (y_star(Box(0, 1, -0.2, 0.5)), y_star(Ball(Point(0.3, -0.3), 1)), y_star(Ball(Point(0, 2), 1)))
    elapsed = time.perf_counter() - start
    ok = broken == 0 and values == (0.5, 0.7, 0.0)
    return report(7, "noncompactness identities", ok,
                  f"{broken} identity failures in 10000 sets, y* values {list(values)}", elapsed)


def criterion_8() -> bool:
    start = time.perf_counter()
    worst = {}
    for measure, top, target in (("alpha", 10, lambda e: e / 2), ("chi", 10, lambda e: e), ("beta", 10, lambda e: e)):
        step = 0.2 if measure == "alpha" else 0.1
        grid = [round(step * k, 10) for k in range(1, top + 1)]
        worst[measure] = max(abs(modulus_estimate(measure, e).value - target(e)) for e in grid)
    nuc = {
        "alpha": nuc_characteristic("alpha", [round(0.1 * k, 10) for k in range(1, 21)]),
        "chi": nuc_characteristic("chi", [round(0.1 * k, 10) for k in range(1, 11)]),
        "beta": nuc_characteristic("beta", [round(0.1 * k, 10) for k in range(1, 11)]),
    }
    elapsed = time.perf_counter() - start
    ok = all(v <= 0.02 for v in worst.values()) and all(v == 0 for v in nuc.values())
    detail = ", ".join(f"{m} max error {worst[m]:.4f}" for m in worst) + f", NUC characteristic {nuc}"
    return report(8, "moduli", ok, detail, elapsed, 60.0)


SUITES = ("ball-convexity", "distance-convexity", "npbc", "strict-convexity", "strict-ball-convexity",
          "split-distance", "external-convexity")


def criterion_9() -> bool:
    details, ok, slowest = [], True, 0.0
    for name in SUITES:
        start = time.perf_counter()
        r = run_check(name, N, seed=SEED, tol=1e-9)
        took = time.perf_counter() - start
        slowest = max(slowest, took)
        good = r.violations == 0 and (not name.startswith("strict") or r.min_margin > 0)
        ok = ok and good and took < 10.0
        details.append(f"{name} {r.violations} (min margin {r.min_margin:.3g}, {took:.1f} s)")
    return report(9, "property suites", ok, "violations: " + "; ".join(details), slowest, 10.0)


def criterion_10() -> bool:
    start = time.perf_counter()
    r = run_check("uniform-convexity", N, seed=SEED, tol=1e-9)
    elapsed = time.perf_counter() - start
    detail = (f"{r.violations} violations in {r.samples} admissible samples with min(|y1|,|y2|) > 0.01 "
              f"(min margin {r.min_margin:.3g}); degenerate samples reported separately: "
              f"{r.degenerate} with {r.degenerate_violations} violations")
    return report(10, "uniform convexity with the stated delta", r.violations == 0, detail, elapsed)


DRIVER = """
import sys
from pathlib import Path
sys.path.insert(0, {tests!r})
from golden_cases import JSON_CASES, SCENES, render_argv
from rivermetric.cli import run
out = Path(sys.argv[1])
for name, argv in JSON_CASES:
    with open(out / (name + ".json"), "w", encoding="utf-8", newline="\\n") as fh:
        assert run(argv, stdout=fh) == 0, name
for scene in SCENES:
    assert run(render_argv(scene, out / (scene + ".svg"))) == 0, scene
"""


def criterion_11() -> bool:
    start = time.perf_counter()
    script = DRIVER.format(tests=str(Path(__file__).parent))
    with tempfile.TemporaryDirectory() as first, tempfile.TemporaryDirectory() as second:
        for target in (first, second):
            subprocess.run([sys.executable, "-c", script, target], check=True)
        names = [f"{n}.json" for n, _ in JSON_CASES] + [f"{s}.svg" for s in SCENES]
        differing = [n for n in names if (Path(first) / n).read_bytes() != (Path(second) / n).read_bytes()]
    elapsed = time.perf_counter() - start
    return report(11, "CLI golden files", not differing,
                  f"{len(names) - len(differing)} of {len(names)} outputs byte-identical across two runs", elapsed)


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7,
            criterion_8, criterion_9, criterion_10, criterion_11]


@pytest.mark.parametrize("criterion", CRITERIA, ids=[f"criterion_{k}" for k in range(1, 12)])
def test_acceptance(criterion):
    assert criterion(), RESULTS[-1]


if __name__ == "__main__":
    outcomes = [c() for c in CRITERIA]
    print("\n".join(RESULTS))
    sys.exit(0 if all(outcomes) else 1)
