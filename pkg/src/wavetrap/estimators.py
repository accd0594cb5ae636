"""scikit-learn style wrappers around the functional API.

``RadiationPotential`` is fitted on a wave configuration and predicts the
potential at positions; ``TrapRelaxation`` is a transformer moving positions
to the trap sites of a fitted potential.
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin, clone
from sklearn.utils.validation import check_array, check_is_fitted

from .dynamics import ParticleEnsemble, grad_psi, relax
from .exceptions import InvalidParameterError
from .levelsets import classify, find_eigen_group
from .potential import psi_direct
from .spectral import min_eigenvector, q0_decomposition
from .wavefield import Coefficients, check_amplitudes, wave_config_from_K


class RadiationPotential(BaseEstimator):
    """Periodic radiation potential of a plane-wave superposition.

    Parameters
    ----------
    K : array-like of shape (d, d)
        Wavevectors as columns, all of the same length.
    a, b : float
        Coefficients of ``a |p|^2 - b |grad p|^2``.
    amplitudes : "min-eigenvector", array-like of length 2d, or (group, basis) tuple
        Transducer amplitudes. The default places a global minimum at the origin.
    coefficients : Coefficients, optional
        Physical coefficients; overrides ``a`` and ``b`` when given.
    tol : float
        Relative tolerance of eigenspace membership tests.

    Attributes
    ----------
    wave_config_ : WaveConfig
    coefficients_ : Coefficients
    decomposition_ : SpectralDecomposition
    amplitudes_ : ndarray of shape (2d,)
    classification_ : Classification or None
        Predicted level set, when ``amplitudes_`` is a real eigenvector.
    """

    def __init__(self, K=None, a=1.0, b=1.0, amplitudes="min-eigenvector",
                 coefficients=None, tol=1e-9):
        self.K = K
        self.a = a
        self.b = b
        self.amplitudes = amplitudes
        self.coefficients = coefficients
        self.tol = tol

    def fit(self, X=None, y=None):
        if self.K is None:
            raise InvalidParameterError("K is required")
        cfg = wave_config_from_K(check_array(self.K, ensure_min_samples=2, ensure_min_features=2))
        coef = self.coefficients
        if coef is None:
            coef = Coefficients.direct(self.a, self.b, k=cfg.k)
        dec = q0_decomposition(coef, cfg)
        u, group = self._resolve_amplitudes(dec, cfg.d)

        self.wave_config_ = cfg
        self.coefficients_ = coef
        self.decomposition_ = dec
        self.amplitudes_ = u
        self.n_features_in_ = cfg.d
        self.classification_ = None
        if group is not None and np.isrealobj(u):
            self.classification_ = classify(dec, group, u, cfg, self.tol)
        return self

    def _resolve_amplitudes(self, dec, d):
        spec = self.amplitudes
        if isinstance(spec, str):
            if spec != "min-eigenvector":
                raise InvalidParameterError(f"unknown amplitude source {spec!r}")
            return min_eigenvector(dec), dec.smallest_group
        if isinstance(spec, tuple) and len(spec) == 2 and all(isinstance(i, int) for i in spec):
            group, basis = spec
            return dec.basis(group)[:, basis].copy(), group
        u = check_amplitudes(spec, d)
        if not np.any(u.imag):
            u = u.real
        return u, find_eigen_group(dec, u, self.tol)

    def _points(self, X):
        check_is_fitted(self, "decomposition_")
        X = check_array(X)
        if X.shape[1] != self.n_features_in_:
            raise InvalidParameterError(
                f"X has {X.shape[1]} features, expected {self.n_features_in_}"
            )
        return X

    def predict(self, X):
        """Potential at each row of ``X``."""
        X = self._points(X)
        return psi_direct(X, self.amplitudes_, self.coefficients_, self.wave_config_)

    def gradient(self, X):
        X = self._points(X)
        return grad_psi(X, self.amplitudes_, self.coefficients_, self.wave_config_)

    def force(self, X):
        return -self.gradient(X)

    @property
    def predictions_(self):
        check_is_fitted(self, "decomposition_")
        return () if self.classification_ is None else self.classification_.predictions


class TrapRelaxation(TransformerMixin, BaseEstimator):
    """Move particle positions downhill until they settle in a trap.

    ``transform`` returns positions wrapped into the primitive cell; the last
    run's convergence flags are kept in ``converged_``.
    """

    def __init__(self, potential=None, step=0.05, max_iter=5000, grad_tol=1e-6):
        self.potential = potential
        self.step = step
        self.max_iter = max_iter
        self.grad_tol = grad_tol

    def fit(self, X=None, y=None):
        if self.potential is None:
            raise InvalidParameterError("a RadiationPotential is required")
        try:
            check_is_fitted(self.potential, "decomposition_")
            self.potential_ = self.potential
        except Exception:
            self.potential_ = clone(self.potential).fit()
        self.n_features_in_ = self.potential_.n_features_in_
        return self

    def transform(self, X):
        check_is_fitted(self, "potential_")
        X = self.potential_._points(X)
        ens = ParticleEnsemble(X, step=self.step, max_iter=self.max_iter, grad_tol=self.grad_tol)
        pot = self.potential_
        result = relax(ens, pot.amplitudes_, pot.coefficients_, pot.wave_config_)
        self.result_ = result
        self.converged_ = result.converged
        return result.positions
