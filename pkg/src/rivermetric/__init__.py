"""Geometry of the plane under the river metric.

The river metric measures the distance between points on different
verticals as the length of a trip down to the x-axis, along it, and back
up: ``|y1| + |y2| + |x1 - x2|``.  Points on a shared vertical are simply
``|y1 - y2|`` apart.
"""
from .convex_sets import (Ball, Box, ConvexityVerdict, FinitePoints, UnionOf, VerticalSegment,
                          contains, convex_hull, distance_to_set, is_convex, set_from_json, set_to_json)
from .convex_structure import menger_witness, takahashi_residual, w_case, w_point
from .errors import PreconditionError, RiverMetricError, ToleranceError
from .noncompactness import Measure, mnc, modulus_estimate, nuc_characteristic, y_star
from .property_suite import (CHECKS, PropertyReport, prolongation_set, run_check, split_distance,
                             uc_delta, uniform_convexity_check)
from .river_metric import MetricSegment, Point, distance, is_between, metric_segment, midpoint, point_at_arclength

__all__ = [
    "Ball", "Box", "CHECKS", "ConvexityVerdict", "FinitePoints", "Measure", "MetricSegment", "Point",
    "PreconditionError", "PropertyReport", "RiverMetricError", "ToleranceError", "UnionOf",
    "VerticalSegment", "contains", "convex_hull", "distance", "distance_to_set", "is_between",
    "is_convex", "menger_witness", "metric_segment", "midpoint", "mnc", "modulus_estimate",
    "nuc_characteristic", "point_at_arclength", "prolongation_set", "run_check", "set_from_json",
    "set_to_json", "split_distance", "takahashi_residual", "uc_delta", "uniform_convexity_check",
    "w_case", "w_point", "y_star",
]
