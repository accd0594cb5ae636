"""Shared fixtures: the four worked configurations on the unit wavevector bases."""
import numpy as np
import pytest

from wavetrap import Coefficients, q0_decomposition, wave_config_from_K

S2 = np.sqrt(2.0)
S3 = np.sqrt(3.0)


class Case:
    def __init__(self, K, a, b, u):
        self.cfg = wave_config_from_K(np.asarray(K, dtype=float))
        self.coef = Coefficients.direct(a, b, k=self.cfg.k)
        self.dec = q0_decomposition(self.coef, self.cfg)
        self.u = np.asarray(u, dtype=float)
        self.group = None

    def with_group(self):
        from wavetrap.levelsets import find_eigen_group

        self.group = find_eigen_group(self.dec, self.u)
        return self


@pytest.fixture
def em2():
    # points: K = I2, a = b = 1, eigenvector of -2
    return Case(np.eye(2), 1.0, 1.0, np.array([1, 1, -1, -1]) / 2).with_group()


@pytest.fixture
def lom():
    # lines: K = I2, a = 1, b = 0
    return Case(np.eye(2), 1.0, 0.0, np.array([-1, 1, -1, 1]) / 2).with_group()


@pytest.fixture
def planes():
    return Case(np.eye(3), 1.0, 0.0, np.array([1, -1, 0, 1, -1, 0]) / 2).with_group()


@pytest.fixture
def lines3d():
    return Case(np.eye(3), 1.0, 0.0, np.array([1, 1, -2, 1, 1, -2]) / (2 * S3)).with_group()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_K(rng, d, k=None):
    """Random equal-length, well-conditioned wavevector basis."""
    while True:
        K = rng.normal(size=(d, d))
        K /= np.linalg.norm(K, axis=0)
        if abs(np.linalg.det(K)) > 0.2:
            return K * (k if k is not None else rng.uniform(0.5, 2.0))
