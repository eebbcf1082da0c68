import math

import numpy as np
import pytest
from hypothesis import settings
from hypothesis import strategies as st

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

TWO_PI = 2 * math.pi


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


angles = st.floats(min_value=0.0, max_value=TWO_PI, exclude_max=True, allow_nan=False)


@st.composite
def ccw_angles(draw, k=4, min_gap=1e-2):
    """k counterclockwise angles with cyclic gaps at least min_gap."""
    start = draw(angles)
    gaps = draw(st.lists(st.floats(min_value=1.0, max_value=100.0), min_size=k, max_size=k))
    total = sum(gaps)
    usable = TWO_PI - k * min_gap
    out, pos = [], start
    for g in gaps[:-1]:
        out.append(pos % TWO_PI)
        pos += min_gap + usable * g / total
    out.append(pos % TWO_PI)
    return out


@st.composite
def mobius_params(draw):
    """(theta, a, n) for N(n) A(a) K(theta), moderate distortion."""
    return (
        draw(angles),
        draw(st.floats(min_value=-3.0, max_value=3.0)),
        draw(st.floats(min_value=-3.0, max_value=3.0)),
    )
