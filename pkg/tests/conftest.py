import numpy as np
import pytest

from selfgrav import GridSpec, make_packet, metric_for_state


@pytest.fixture(scope="session")
def spec32():
    return GridSpec(32, 16.0)


@pytest.fixture(scope="session")
def spec64():
    return GridSpec(64, 16.0)


@pytest.fixture(scope="session")
def gaussian_packet():
    return make_packet("gaussian", L_vec=(1.0, 0.0, 0.0))


@pytest.fixture(scope="session")
def chirped_packet():
    return make_packet("gaussian_phase", L_vec=(1.0, 0.0, 0.0), chirp=0.5)


@pytest.fixture(scope="session")
def gaussian_metric(gaussian_packet, spec64):
    return metric_for_state(gaussian_packet, 0.5, 0.5, spec64)


@pytest.fixture(scope="session")
def chirped_metric(chirped_packet, spec64):
    return metric_for_state(chirped_packet, 0.5, 0.5, spec64)


@pytest.fixture()
def rng():
    return np.random.default_rng(1234)
