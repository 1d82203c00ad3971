import numpy as np
import pytest

from trichain import SystemParams


def random_params(rng, n, coupling_hi=1.2, delta_hi=1.2):
    """Deterministic random parameter draws in the physical working range."""
    draws = []
    for _ in range(n):
        g, f1, f2 = rng.uniform(0.0, coupling_hi, 3)
        delta = rng.uniform(-delta_hi, delta_hi)
        draws.append(SystemParams(g=float(g), delta=float(delta), f1=float(f1), f2=float(f2)))
    return draws


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
