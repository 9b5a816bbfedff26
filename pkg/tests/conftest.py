import numpy as np
import pytest

from bures.euler import COSET_RANGES, EIGEN_RANGES


@pytest.fixture
def rng():
    return np.random.default_rng(42)


def random_box_points(n: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform full-coordinate rows inside the angle box."""
    ranges = EIGEN_RANGES[n] + COSET_RANGES[n]
    return np.column_stack([rng.uniform(lo, hi, count) for lo, hi in ranges])


def random_hermitian(n: int, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    h = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    h = h + h.conj().T
    return scale * h
