import numpy as np
import pytest

from diracsim import DiracParams


def draw_params(rng, min_momentum=0.0, max_scale=50.0):
    """One random parameter set; momentum norm resampled above min_momentum."""
    while True:
        mass = float(rng.uniform(0.0, max_scale))
        mom = tuple(float(v) for v in rng.uniform(-max_scale, max_scale, size=3))
        params = DiracParams(mass_mhz=mass, momentum_mhz=mom)
        if params.momentum_norm_mhz >= min_momentum:
            return params


@pytest.fixture
def rng():
    return np.random.default_rng(20260814)
