import sys

import numpy as np
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from rivermetric import Point

settings.register_profile("default", max_examples=200, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

# coordinates with extra weight on the river and on a few shared abscissae
coord = st.one_of(
    st.floats(min_value=-10, max_value=10, allow_nan=False, allow_infinity=False),
    st.sampled_from([0.0, 1.0, -1.0, 2.5]),
)
points = st.builds(Point, coord, coord)


def random_cloud(seed: int, n: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    pts = rng.uniform(-10, 10, size=(n, 2))
    pts[rng.random(n) < 0.1, 1] = 0.0
    return pts


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    if module and module.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in module.RESULTS:
            terminalreporter.write_line(line)
