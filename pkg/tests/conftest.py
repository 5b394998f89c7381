import os
import sys

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile("default", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.diag([1, -1]).astype(complex)
I2 = np.eye(2, dtype=complex)


def unit(i, j, n=2):
    e = np.zeros((n, n), dtype=complex)
    e[i, j] = 1
    return e


@pytest.fixture(scope="session")
def builtins():
    from spectra_lab.document import BUILTINS, builtin_system
    return {name: builtin_system(name) for name in BUILTINS}


@pytest.fixture(scope="session")
def s3(builtins):
    return builtins["s3-m2"]
