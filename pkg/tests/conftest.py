import numpy as np
import pytest

from affprimes import arith


@pytest.fixture(scope="session")
def tables_1e6():
    return arith.build_tables(10**6)


@pytest.fixture(scope="session")
def tables_4e6():
    """Covers W*N + b for W = 30, N = 1e5 experiments."""
    return arith.build_tables(4 * 10**6)


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20260810)
