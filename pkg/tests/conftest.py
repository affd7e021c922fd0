import numpy as np
import pytest

from ehfol.foliation import build_time_function


@pytest.fixture(scope="session")
def table_s3():
    return build_time_function(3.0, 20.0, 1e-10)


@pytest.fixture(scope="session")
def tables_234():
    return {s: build_time_function(s, 0.5 * s * s + 10.0, 1e-10)
            for s in (2.0, 3.0, 4.0)}


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20260810)
