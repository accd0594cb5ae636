"""Physical coefficients, wavevector geometry and the plane-wave pressure field.

A periodic field in dimension ``d`` is a superposition of ``d`` pairs of
counter-propagating plane waves,

    p(x; u) = sum_j alpha_j exp(i k_j . x) + beta_j exp(-i k_j . x),

with ``u = [alpha; beta]`` the complex transducer amplitudes and ``k_j`` the
columns of the wavevector matrix ``K``. All wavevectors share the length ``k``
and the field is periodic on the lattice ``A = 2 pi K^{-T}``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .exceptions import (
    DegenerateBasisError,
    DimensionMismatchError,
    InvalidParameterError,
    UnequalWavenumberError,
)

#: relative tolerance on the spread of wavevector lengths
WAVENUMBER_RTOL = 1e-9


@dataclass(frozen=True)
class MediumParams:
    """Host fluid: compressibility (1/Pa) and mass density (kg/m^3)."""

    compressibility: float
    mass_density: float

    def __post_init__(self):
        if not self.compressibility > 0:
            raise InvalidParameterError("fluid compressibility must be positive")
        if not self.mass_density > 0:
            raise InvalidParameterError("fluid mass density must be positive")

    @property
    def sound_speed(self) -> float:
        return 1.0 / math.sqrt(self.compressibility * self.mass_density)


@dataclass(frozen=True)
class ParticleParams:
    compressibility: float
    mass_density: float

    def __post_init__(self):
        if not self.compressibility >= 0:
            raise InvalidParameterError("particle compressibility must be non-negative")
        if not self.mass_density > 0:
            raise InvalidParameterError("particle mass density must be positive")


@dataclass(frozen=True)
class Coefficients:
    """Coefficients of ``psi = a |p|^2 - b |grad p|^2``.

    Built either from physical parameters (:func:`derive_coefficients`) or
    directly with :meth:`direct`, in which case only ``a``, ``b`` and ``k``
    are meaningful and the physical fields stay ``None``.
    """

    a: float
    b: float
    k: float
    f1: Optional[float] = None
    f2: Optional[float] = None
    omega: Optional[float] = None
    sound_speed: Optional[float] = None

    def __post_init__(self):
        if not (math.isfinite(self.a) and math.isfinite(self.b)):
            raise InvalidParameterError("coefficients must be finite")
        if not self.k > 0:
            raise InvalidParameterError("wavenumber must be positive")

    @classmethod
    def direct(cls, a: float, b: float, k: float = 1.0) -> "Coefficients":
        return cls(a=float(a), b=float(b), k=float(k))

    @property
    def wavelength(self) -> float:
        return 2.0 * math.pi / self.k

    @property
    def frequency(self) -> Optional[float]:
        return None if self.omega is None else self.omega / (2.0 * math.pi)

    def as_dict(self) -> dict:
        return {
            "a": self.a,
            "b": self.b,
            "k": self.k,
            "wavelength": self.wavelength,
            "f1": self.f1,
            "f2": self.f2,
            "omega": self.omega,
            "frequency": self.frequency,
            "sound_speed": self.sound_speed,
        }


def derive_coefficients(
    medium: MediumParams,
    particle: ParticleParams,
    frequency: float,
    sound_speed: Optional[float] = None,
) -> Coefficients:
    """Radiation-potential coefficients for a small sphere in a fluid.

    ``sound_speed`` defaults to ``1/sqrt(kappa_0 rho_0)``.
    """
    if not frequency > 0:
        raise InvalidParameterError("frequency must be positive")
    c = medium.sound_speed if sound_speed is None else float(sound_speed)
    if not c > 0:
        raise InvalidParameterError("sound speed must be positive")
    kappa0, rho0 = medium.compressibility, medium.mass_density
    rho_p = particle.mass_density
    f1 = 1.0 - particle.compressibility / kappa0
    f2 = 2.0 * (rho_p - rho0) / (2.0 * rho_p + rho0)
    omega = 2.0 * math.pi * frequency
    a = f1 * kappa0 / 4.0
    b = f2 * 3.0 / (8.0 * rho0 * omega**2)
    return Coefficients(
        a=a, b=b, k=omega / c, f1=f1, f2=f2, omega=omega, sound_speed=c
    )


def _readonly(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class WaveConfig:
    """Wavevector matrix ``K`` (columns ``k_j``) and its lattice ``A``."""

    K: np.ndarray
    A: np.ndarray = field(repr=False)

    @property
    def d(self) -> int:
        return self.K.shape[0]

    @property
    def k(self) -> float:
        return float(np.mean(np.linalg.norm(self.K, axis=0)))

    @property
    def wavelength(self) -> float:
        return 2.0 * math.pi / self.k

    @property
    def phase_matrix(self) -> np.ndarray:
        """``[K, -K]``; its transpose maps positions to the 2d plane-wave phases."""
        return np.hstack([self.K, -self.K])

    def to_atomic(self, x) -> np.ndarray:
        """Atomic coordinates ``alpha`` with ``x = A alpha`` (not reduced)."""
        x = np.asarray(x, dtype=float)
        return x @ self.K / (2.0 * math.pi)

    def from_atomic(self, alpha) -> np.ndarray:
        return np.asarray(alpha, dtype=float) @ self.A.T


def wave_config_from_K(K) -> WaveConfig:
    K = np.asarray(K, dtype=float)
    if K.ndim != 2 or K.shape[0] != K.shape[1]:
        raise DimensionMismatchError(f"K must be square, got shape {K.shape}")
    d = K.shape[0]
    if d not in (2, 3):
        raise DimensionMismatchError(f"dimension must be 2 or 3, got {d}")
    if not np.all(np.isfinite(K)):
        raise InvalidParameterError("K has non-finite entries")
    norms = np.linalg.norm(K, axis=0)
    if np.min(norms) == 0.0:
        raise DegenerateBasisError("K has a zero column")
    # relative determinant: |det K| / prod |k_j| is the volume of the unit-column parallelotope
    if abs(np.linalg.det(K)) <= 1e-12 * np.prod(norms):
        raise DegenerateBasisError("wavevectors do not form a basis")
    if (norms.max() - norms.min()) > WAVENUMBER_RTOL * norms.max():
        raise UnequalWavenumberError(
            f"wavevectors must share one length, got norms {norms.tolist()}"
        )
    # A = 2 pi K^{-T}  <=>  K^T A = 2 pi I
    A = np.linalg.solve(K.T, 2.0 * math.pi * np.eye(d))
    return WaveConfig(K=_readonly(K), A=_readonly(A))


def check_points(x, d: int) -> tuple[np.ndarray, bool]:
    """Return ``(points as (n, d) array, was_single_point)``."""
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    x2 = np.atleast_2d(x)
    if x2.ndim != 2 or x2.shape[1] != d:
        raise DimensionMismatchError(f"points must have {d} coordinates, got shape {x.shape}")
    return x2, single


def check_amplitudes(u, d: int) -> np.ndarray:
    u = np.asarray(u, dtype=complex)
    if u.shape != (2 * d,):
        raise DimensionMismatchError(f"amplitude vector must have length {2 * d}, got shape {u.shape}")
    return u


def _plane_waves(x2: np.ndarray, cfg: WaveConfig) -> np.ndarray:
    return np.exp(1j * (x2 @ cfg.K))


def pressure(x, u, cfg: WaveConfig):
    """Complex pressure at one point ``(d,)`` or many points ``(n, d)``."""
    x2, single = check_points(x, cfg.d)
    u = check_amplitudes(u, cfg.d)
    d = cfg.d
    e = _plane_waves(x2, cfg)
    p = e @ u[:d] + e.conj() @ u[d:]
    return p[0] if single else p


def pressure_gradient(x, u, cfg: WaveConfig):
    """Analytic gradient, ``sum_j i k_j (alpha_j e_j - beta_j conj(e_j))``."""
    x2, single = check_points(x, cfg.d)
    u = check_amplitudes(u, cfg.d)
    d = cfg.d
    e = _plane_waves(x2, cfg)
    coeff = 1j * (e * u[:d] - e.conj() * u[d:])
    g = coeff @ cfg.K.T
    return g[0] if single else g


def pressure_hessian(x, u, cfg: WaveConfig):
    """Second derivatives of ``p``, shape ``(d, d)`` or ``(n, d, d)``."""
    x2, single = check_points(x, cfg.d)
    u = check_amplitudes(u, cfg.d)
    d = cfg.d
    e = _plane_waves(x2, cfg)
    coeff = -(e * u[:d] + e.conj() * u[d:])
    H = np.einsum("nj,aj,bj->nab", coeff, cfg.K, cfg.K)
    return H[0] if single else H
