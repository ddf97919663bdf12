import numpy as np
import pytest

from inertial_tls import ProtocolParams

TWO_PI = 2.0 * np.pi

# Reference drive: alpha0 = 6 kHz, gamma = 50 kHz^2 (angular), mu0 = -1.
# The 0.2 ms horizon keeps every ramp rate in DELTA_RATIOS nonsingular.
ALPHA0 = 6.0e3 * TWO_PI
GAMMA = 50.0e6 * TWO_PI
MU0 = -1.0
T_FINAL = 0.2e-3
DELTA_RATIOS = (-1.0, -0.05, -0.01, 0.01, 0.05, 0.1)


def make_params(delta_ratio: float = 0.0, n_samples: int = 2000,
                t_final: float = T_FINAL, **overrides) -> ProtocolParams:
    kwargs = dict(
        alpha0=ALPHA0,
        gamma=GAMMA,
        mu0=MU0,
        delta=delta_ratio * ALPHA0,
        t_final=t_final,
        n_samples=n_samples,
    )
    kwargs.update(overrides)
    return ProtocolParams(**kwargs)


@pytest.fixture
def params_factory():
    return make_params
