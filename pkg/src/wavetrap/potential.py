"""The radiation potential as a Hermitian quadratic form in the amplitudes.

``psi(x; u) = u* Q(x) u`` with ``Q(x) = M(x)* diag(a, -b I_d) M(x)`` where
``M(x) u = [p(x; u); grad p(x; u)]``. Shifting the position only rotates the
phases of ``u``, so every ``Q(x)`` is unitarily similar to the real matrix
``Q(0)``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import InvalidParameterError
from .wavefield import (
    Coefficients,
    WaveConfig,
    check_amplitudes,
    check_points,
    pressure,
    pressure_gradient,
)


@dataclass(frozen=True)
class WaveMatrix:
    M: np.ndarray

    @property
    def plus(self) -> np.ndarray:
        return self.M[:, : self.M.shape[1] // 2]

    @property
    def minus(self) -> np.ndarray:
        return self.M[:, self.M.shape[1] // 2 :]


@dataclass(frozen=True)
class PotentialMatrix:
    Q: np.ndarray
    at_origin: bool = False


def build_M(x, cfg: WaveConfig) -> WaveMatrix:
    x2, single = check_points(x, cfg.d)
    if not single:
        raise InvalidParameterError("build_M takes a single point")
    blocks = []
    for sign in (1.0, -1.0):
        e = np.exp(sign * 1j * (x2[0] @ cfg.K))
        blocks.append(np.vstack([e, cfg.K * (sign * 1j * e)]))
    return WaveMatrix(M=np.hstack(blocks))


def q0_closed_form(coef: Coefficients, cfg: WaveConfig) -> np.ndarray:
    """Real symmetric ``Q(0) = a 11^T - b [G, -G; -G, G]`` with ``G = K^T K``."""
    d = cfg.d
    KK = np.hstack([cfg.K, -cfg.K])
    ones = np.ones((2 * d, 2 * d))
    return coef.a * ones - coef.b * (KK.T @ KK)


def build_Q(x, coef: Coefficients, cfg: WaveConfig) -> PotentialMatrix:
    x = np.asarray(x, dtype=float)
    if x.shape == (cfg.d,) and not np.any(x):
        return PotentialMatrix(Q=q0_closed_form(coef, cfg), at_origin=True)
    M = build_M(x, cfg).M
    weights = np.concatenate([[coef.a], -coef.b * np.ones(cfg.d)])
    Q = M.conj().T @ (weights[:, None] * M)
    # symmetrize away the last-ulp asymmetry of the product
    Q = 0.5 * (Q + Q.conj().T)
    return PotentialMatrix(Q=Q, at_origin=False)


def psi_direct(x, u, coef: Coefficients, cfg: WaveConfig):
    """``a |p|^2 - b |grad p|^2`` evaluated from the field itself."""
    p = pressure(x, u, cfg)
    g = pressure_gradient(x, u, cfg)
    return coef.a * np.abs(p) ** 2 - coef.b * np.sum(np.abs(g) ** 2, axis=-1)


def psi(x, u, coef: Coefficients, cfg: WaveConfig):
    """Potential at one point via ``u* Q(x) u``; many points fall back to the field formula."""
    x2, single = check_points(x, cfg.d)
    u = check_amplitudes(u, cfg.d)
    if not single:
        return psi_direct(x2, u, coef, cfg)
    Q = build_Q(x2[0], coef, cfg).Q
    val = np.vdot(u, Q @ u)
    scale = 1.0 + np.max(np.abs(Q)) * np.vdot(u, u).real
    assert abs(val.imag) < 1e-10 * scale, "quadratic form lost hermiticity"
    return float(val.real)


def phase_factors(eps, cfg: WaveConfig) -> np.ndarray:
    eps = np.asarray(eps, dtype=float)
    return np.exp(1j * (eps @ cfg.phase_matrix))


def phase_shift(u, eps, cfg: WaveConfig) -> np.ndarray:
    """Amplitudes whose potential at ``x0`` equals the original potential at ``x0 + eps``."""
    u = check_amplitudes(u, cfg.d)
    check_points(eps, cfg.d)
    return phase_factors(eps, cfg) * u


def retarget(u, x0, cfg: WaveConfig) -> np.ndarray:
    """Move the value ``psi(0; u)`` to position ``x0``."""
    return phase_shift(u, -np.asarray(x0, dtype=float), cfg)
