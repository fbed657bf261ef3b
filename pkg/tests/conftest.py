import math

import numpy as np
import pytest
from hypothesis import HealthCheck, settings, strategies as st

from quakelab.hyperbolic import BoundaryPoint, HPoint, MoebiusMap
from quakelab.lamination import FiniteMeasuredLamination

settings.register_profile(
    "quakelab", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("quakelab")

angles = st.floats(0.0, 2 * math.pi, exclude_max=True, allow_nan=False)
reals = st.floats(-50.0, 50.0, allow_nan=False)
heights = st.floats(0.05, 20.0, allow_nan=False)


@st.composite
def hpoints(draw):
    return HPoint(draw(reals), draw(heights))


@st.composite
def moebius_maps(draw):
    """Disk automorphism followed by a dilation: covers PSL(2,R) with bounded entries."""
    r = draw(st.floats(0.0, 0.9))
    t = draw(angles)
    rot = draw(angles)
    s = draw(st.floats(-2.0, 2.0))
    disk = MoebiusMap.from_disk_automorphism(complex(r * math.cos(t), r * math.sin(t)), rot)
    return disk @ MoebiusMap.dilation(s)


@st.composite
def boundary_points(draw):
    return BoundaryPoint.from_angle(draw(angles))


def rand_moebius(rng, spread=2.0) -> MoebiusMap:
    while True:
        m = rng.normal(0.0, spread, (2, 2))
        if np.linalg.det(m) > 0.05:
            return MoebiusMap.from_matrix(m)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def single_leaf():
    return FiniteMeasuredLamination.from_pairs([(0.0, math.inf, 0.7)])


@pytest.fixture
def nested_pair():
    return FiniteMeasuredLamination.from_pairs([(-1.0, 1.0, 1.0), (-2.0, 2.0, 1.0)])


@pytest.fixture
def far_pair():
    return FiniteMeasuredLamination.from_pairs([(-1.0, 1.0, 1.0), (-8.0, 8.0, 1.0)])
