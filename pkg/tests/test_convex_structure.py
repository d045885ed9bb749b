import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import points, random_cloud
from rivermetric import Point, PreconditionError
from rivermetric.convex_structure import (WTag, menger_witness, takahashi_residual, w_case, w_point,
                                          w_point_arclength, w_point_piecewise, w_points_arclength,
                                          w_points_piecewise)
from rivermetric.river_metric import distance, is_between, metric_segment

V1, V2 = Point(0, 2), Point(4, 1)


@pytest.mark.parametrize("lam, expected, tag", [
    (0.9, (0, 1.3), WTag.VERTICAL_AT_X1),
    (0.5, (1.5, 0), WTag.ON_RIVER),
    (0.1, (4, 0.3), WTag.VERTICAL_AT_X2),
])
def test_three_cases(lam, expected, tag):
    z = w_point_piecewise(V1, V2, lam)
    assert z.x == pytest.approx(expected[0], abs=1e-12)
    assert z.y == pytest.approx(expected[1], abs=1e-12)
    assert w_case(V1, V2, lam).tag is tag


def test_case_boundaries():
    # the drop ends at lambda = 1 - 2/7 and the river run at 1 - 6/7
    river = w_case(V1, V2, 0.5)
    assert river.lambda_lo == pytest.approx(1 / 7) and river.lambda_hi == pytest.approx(5 / 7)
    assert w_case(V1, V2, river.lambda_hi).tag is WTag.VERTICAL_AT_X1
    assert w_case(V1, V2, river.lambda_lo).tag is WTag.ON_RIVER
    for lam in (river.lambda_lo, river.lambda_hi):
        a, b = w_point_piecewise(V1, V2, lam), w_point_arclength(V1, V2, lam)
        assert abs(a.x - b.x) <= 1e-12 and abs(a.y - b.y) <= 1e-12


def test_endpoints_exact():
    assert w_point(V1, V2, 1.0) == V1
    assert w_point(V1, V2, 0.0) == V2


def test_lambda_out_of_range():
    with pytest.raises(PreconditionError):
        w_point(V1, V2, 1.5)


def test_residual_examples():
    assert takahashi_residual(Point(0, 0), V1, V2, 0.5) == pytest.approx(2.0, abs=1e-12)
    assert takahashi_residual(Point(2, 3), V1, V2, 0.1) == pytest.approx(0.8, abs=1e-12)
    assert takahashi_residual(V1, V1, V2, 0.3) == pytest.approx(0.0, abs=1e-12)


def test_menger_witness():
    assert menger_witness(Point(1, 1), Point(3, 0)) == Point(1.5, 0)
    assert menger_witness(Point(2, -1), Point(2, 3)) == Point(2, 1)
    with pytest.raises(PreconditionError):
        menger_witness(Point(0, 0), Point(0, 0))


@given(points, points, points, st.floats(min_value=0, max_value=1))
def test_takahashi_inequality(u, v1, v2, lam):
    scale = max(1.0, distance(u, v1), distance(u, v2))
    assert takahashi_residual(u, v1, v2, lam) >= -1e-9 * scale


@given(points, points, st.floats(min_value=0, max_value=1))
def test_implementations_agree(v1, v2, lam):
    a, b = w_point_piecewise(v1, v2, lam), w_point_arclength(v1, v2, lam)
    tol = 1e-12 * max(1.0, abs(v1.x), abs(v1.y), abs(v2.x), abs(v2.y))
    assert abs(a.x - b.x) <= tol and abs(a.y - b.y) <= tol


@given(points, points)
def test_image_lies_on_segment_and_moves_uniformly(v1, v2):
    d = distance(v1, v2)
    seg = metric_segment(v1, v2)
    grid = np.linspace(0, 1, 1000)
    prev = None
    tol = 1e-9 * max(1.0, d)
    for lam in grid[::37]:
        z = w_point(v1, v2, float(lam))
        assert is_between(v1, z, v2, tol)
        assert seg.contains(z, tol)
        assert abs(distance(z, v2) - lam * d) <= tol
    for lo, hi in zip(grid[:-1:101], grid[1::101]):
        step = distance(w_point(v1, v2, float(lo)), w_point(v1, v2, float(hi)))
        assert abs(step - (hi - lo) * d) <= tol


def test_vectorised_implementations_agree():
    v1, v2 = random_cloud(5, 10_000), random_cloud(6, 10_000)
    lam = np.random.default_rng(7).random(10_000)
    lam[:100] = 0.0
    lam[100:200] = 1.0
    a, b = w_points_piecewise(v1, v2, lam), w_points_arclength(v1, v2, lam)
    assert np.max(np.abs(a - b)) <= 1e-12 * 10
