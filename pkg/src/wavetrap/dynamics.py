"""Overdamped relaxation of non-interacting particles under ``F = -grad psi``."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .exceptions import DivergenceError, InvalidParameterError
from .potential import psi_direct
from .spectral import q0_decomposition
from .wavefield import (
    Coefficients,
    WaveConfig,
    check_amplitudes,
    check_points,
    pressure,
    pressure_gradient,
    pressure_hessian,
)


def grad_psi(x, u, coef: Coefficients, cfg: WaveConfig):
    """Analytic gradient of ``a |p|^2 - b |grad p|^2``."""
    x2, single = check_points(x, cfg.d)
    u = check_amplitudes(u, cfg.d)
    p = pressure(x2, u, cfg)
    g = pressure_gradient(x2, u, cfg)
    H = pressure_hessian(x2, u, cfg)
    out = 2.0 * coef.a * np.real(p.conj()[:, None] * g)
    out -= 2.0 * coef.b * np.real(np.einsum("nl,nlm->nm", g.conj(), H))
    return out[0] if single else out


def lipschitz_estimate(coef: Coefficients, cfg: WaveConfig, u) -> float:
    """Curvature scale ``(lambda_max - lambda_min) k^2 |u|^2`` bounding stable step sizes."""
    dec = q0_decomposition(coef, cfg)
    power = float(np.vdot(u, u).real)
    return (dec.lambda_max - dec.lambda_min) * cfg.k**2 * power


def reduce_to_cell(x, cfg: WaveConfig) -> np.ndarray:
    alpha = np.mod(cfg.to_atomic(x), 1.0)
    return cfg.from_atomic(alpha)


@dataclass
class ParticleEnsemble:
    positions: np.ndarray
    step: float = 0.05
    max_iter: int = 5000
    grad_tol: float = 1e-6

    def __post_init__(self):
        self.positions = np.atleast_2d(np.asarray(self.positions, dtype=float))
        if not self.step > 0:
            raise InvalidParameterError("step size must be positive")
        if self.max_iter < 1:
            raise InvalidParameterError("max_iter must be at least 1")


@dataclass
class RelaxResult:
    positions: np.ndarray
    alpha: np.ndarray
    psi: np.ndarray
    grad_norm: np.ndarray
    converged: np.ndarray
    iterations: np.ndarray
    rejected_steps: np.ndarray
    trajectory: Optional[list] = field(default=None, repr=False)


def relax(
    ensemble: ParticleEnsemble,
    u,
    coef: Coefficients,
    cfg: WaveConfig,
    record_trajectory: bool = False,
) -> RelaxResult:
    """Gradient descent ``x <- x - step * grad psi`` with per-particle step halving.

    A step that would raise ``psi`` is rejected and that particle's step is
    halved, so the accepted iterates are monotone. Positions are wrapped into
    the primitive cell after every accepted step.
    """
    u = check_amplitudes(u, cfg.d)
    L = lipschitz_estimate(coef, cfg, u)
    if L > 0 and ensemble.step >= 2.0 / L:
        raise InvalidParameterError(
            f"step {ensemble.step} exceeds the stability bound 2/L = {2.0 / L:.6g}"
        )
    x = reduce_to_cell(check_points(ensemble.positions, cfg.d)[0], cfg)
    n = len(x)
    cell_diameter = float(np.linalg.norm(cfg.A, axis=0).sum())

    step = np.full(n, float(ensemble.step))
    psi_val = psi_direct(x, u, coef, cfg)
    g = grad_psi(x, u, coef, cfg)
    gnorm = np.linalg.norm(g, axis=1)
    converged = gnorm < ensemble.grad_tol
    iterations = np.zeros(n, dtype=int)
    rejected = np.zeros(n, dtype=int)
    trajectory = [] if record_trajectory else None
    if record_trajectory:
        _record(trajectory, 0, np.arange(n), cfg.to_atomic(x), psi_val)

    for it in range(1, ensemble.max_iter + 1):
        active = np.flatnonzero(~converged & (step > 1e-12 * ensemble.step))
        if active.size == 0:
            break
        move = step[active, None] * g[active]
        if not np.all(np.isfinite(move)) or np.max(np.linalg.norm(move, axis=1)) > cell_diameter:
            raise DivergenceError(f"particles left the primitive cell scale at iteration {it}")
        trial = reduce_to_cell(x[active] - move, cfg)
        trial_psi = psi_direct(trial, u, coef, cfg)
        ok = trial_psi <= psi_val[active]
        acc, rej = active[ok], active[~ok]
        step[rej] *= 0.5
        rejected[rej] += 1
        if acc.size:
            x[acc] = trial[ok]
            psi_val[acc] = trial_psi[ok]
            g[acc] = grad_psi(x[acc], u, coef, cfg)
            gnorm[acc] = np.linalg.norm(g[acc], axis=1)
            iterations[acc] = it
            converged[acc] = gnorm[acc] < ensemble.grad_tol
            if record_trajectory:
                _record(trajectory, it, acc, cfg.to_atomic(x[acc]), psi_val[acc])

    return RelaxResult(
        positions=x,
        alpha=np.mod(cfg.to_atomic(x), 1.0),
        psi=psi_val,
        grad_norm=gnorm,
        converged=converged,
        iterations=iterations,
        rejected_steps=rejected,
        trajectory=trajectory,
    )


def _record(trajectory: list, it: int, ids, alpha, values) -> None:
    for pid, a, v in zip(ids, alpha, values):
        trajectory.append((it, int(pid), *map(float, a), float(v)))
