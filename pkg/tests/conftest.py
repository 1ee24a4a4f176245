import numpy as np
import pytest
from hypothesis import strategies as st

from unsharp.qubit import MeasurementAxis


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_state(rng):
    v = rng.normal(size=2) + 1j * rng.normal(size=2)
    return v / np.linalg.norm(v)


def random_axis(rng):
    return MeasurementAxis(np.arccos(rng.uniform(-1, 1)), rng.uniform(0, 2 * np.pi))


p0s = st.floats(0.0, 0.5, allow_nan=False)
thetas = st.floats(0.0, np.pi, allow_nan=False)
phis = st.floats(0.0, 2 * np.pi, allow_nan=False, exclude_max=True)
axes = st.builds(MeasurementAxis, thetas, phis)
states = st.tuples(*[st.floats(-1, 1, allow_nan=False)] * 4).filter(
    lambda t: sum(x * x for x in t) > 1e-3
).map(lambda t: np.array([t[0] + 1j * t[1], t[2] + 1j * t[3]]) / np.sqrt(sum(x * x for x in t)))
