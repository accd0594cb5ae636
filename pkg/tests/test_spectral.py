import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_K
from wavetrap import (
    Coefficients,
    general_decomposition,
    h_split,
    min_eigenvector,
    q0_closed_form,
    q0_decomposition,
    symmetric_eig,
    wave_config_from_K,
)
from wavetrap.exceptions import ConvergenceError, NotSymmetricError
from wavetrap.spectral import MINUS, MIXED, PLUS, canonical_sign, eigenspace_contains, group_eigenvalues, h_label


def _dec(K, a, b):
    cfg = wave_config_from_K(np.asarray(K, dtype=float))
    return q0_decomposition(Coefficients.direct(a, b, k=cfg.k), cfg)


@pytest.mark.parametrize(
    "K, a, b, expected",
    [
        (np.eye(2), 1, 1, [4, 0, -2, -2]),
        (np.eye(2), 1, 0, [4, 0, 0, 0]),
        (np.eye(3), 1, 0, [6, 0, 0, 0, 0, 0]),
    ],
)
def test_example_spectra(K, a, b, expected):
    dec = _dec(K, a, b)
    np.testing.assert_allclose(dec.values, expected, atol=1e-12)


def test_em2_groups_and_labels():
    dec = _dec(np.eye(2), 1, 1)
    assert dec.groups == ((0,), (1,), (2, 3))
    assert dec.group_labels(2) == {MINUS}
    assert dec.labels[0] == PLUS


def test_eigenvectors_orthonormal_and_reconstruct(rng):
    for d in (2, 3):
        cfg = wave_config_from_K(random_K(rng, d))
        coef = Coefficients.direct(rng.normal(), rng.normal(), k=cfg.k)
        dec = q0_decomposition(coef, cfg)
        np.testing.assert_allclose(dec.vectors.T @ dec.vectors, np.eye(2 * d), atol=1e-12)
        np.testing.assert_allclose(dec.reconstruct(), q0_closed_form(coef, cfg), atol=1e-10)
        assert all(lab in (PLUS, MINUS) for lab in dec.labels)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**31), st.sampled_from([2, 3]))
def test_structured_matches_jacobi_oracle(seed, d):
    rng = np.random.default_rng(seed)
    cfg = wave_config_from_K(random_K(rng, d))
    coef = Coefficients.direct(rng.normal(), rng.normal(), k=cfg.k)
    fast, slow = q0_decomposition(coef, cfg), general_decomposition(coef, cfg)
    np.testing.assert_allclose(fast.values, slow.values, atol=1e-10)


def test_jacobi_against_numpy(rng):
    for n in range(1, 7):
        S = rng.normal(size=(n, n))
        S = S + S.T
        w, V = symmetric_eig(S)
        np.testing.assert_allclose(w, np.sort(np.linalg.eigvalsh(S))[::-1], atol=1e-12)
        np.testing.assert_allclose(V @ np.diag(w) @ V.T, S, atol=1e-12)
        assert np.all(np.diff(w) <= 0)


def test_jacobi_identity_and_zero():
    w, V = symmetric_eig(np.eye(3))
    np.testing.assert_array_equal(w, np.ones(3))
    w, _ = symmetric_eig(np.zeros((4, 4)))
    np.testing.assert_array_equal(w, np.zeros(4))


def test_jacobi_rejects_nonsymmetric():
    with pytest.raises(NotSymmetricError):
        symmetric_eig(np.array([[1.0, 2.0], [0.0, 1.0]]))


def test_jacobi_sweep_budget():
    S = np.array([[1.0, 0.3, 0.2], [0.3, 2.0, 0.1], [0.2, 0.1, 3.0]])
    with pytest.raises(ConvergenceError):
        symmetric_eig(S, max_sweeps=0)


def test_canonical_sign_first_largest_positive():
    V = canonical_sign(np.array([[-1.0, 0.5], [0.2, -0.5]]))
    assert V[0, 0] == 1.0 and V[0, 1] == 0.5


def test_h_split_and_labels():
    w = np.array([1.0, 2.0, 1.0, 2.0])
    parts = h_split(w)
    np.testing.assert_allclose(parts.plus_part, w)
    np.testing.assert_allclose(parts.minus_part, 0)
    assert h_label(w) == PLUS
    assert h_label(np.array([1.0, 0.0, -1.0, 0.0])) == MINUS
    assert h_label(np.array([1.0, 0.0, 0.0, 0.0])) == MIXED


def test_group_eigenvalues_tolerance():
    assert group_eigenvalues(np.array([3.0, 1.0 + 1e-12, 1.0, -1.0])) == ((0,), (1, 2), (3,))


def test_min_eigenvector_examples():
    dec = _dec(np.eye(2), 1, 1)
    u = min_eigenvector(dec)
    assert u @ dec.reconstruct() @ u == pytest.approx(-2, abs=1e-12)
    assert np.all(np.abs(u) > 1e-9)
    assert eigenspace_contains(dec, dec.smallest_group, u)


def test_eigenspace_membership():
    dec = _dec(np.eye(2), 1, 0)
    assert eigenspace_contains(dec, 1, np.array([-1, 1, -1, 1]) / 2)
    assert not eigenspace_contains(dec, 1, np.ones(4) / 2)
