"""Brute-force evaluation of the potential on the primitive cell and checks of predictions."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .exceptions import InvalidParameterError
from .levelsets import Classification, PointLatticeSet
from .potential import psi_direct
from .spectral import q0_decomposition
from .wavefield import Coefficients, WaveConfig, check_amplitudes

DEFAULT_RESOLUTION = {2: 256, 3: 64}
LEVEL_ATOL = 1e-9


def level_tolerance(coef: Coefficients, u) -> float:
    """``1e-9`` for unit-scale problems, scaled with the size of ``psi`` otherwise."""
    u = np.asarray(u)
    scale = (abs(coef.a) + abs(coef.b) * coef.k**2) * float(np.vdot(u, u).real)
    return LEVEL_ATOL * max(1.0, scale)


@dataclass(frozen=True)
class FieldGrid:
    """Potential sampled at atomic coordinates ``i / resolution`` along each axis.

    ``values`` has shape ``(resolution,) * d`` with ``values[i, j, ...]`` at
    ``alpha = (i, j, ...) / resolution``.
    """

    resolution: int
    values: np.ndarray
    cfg: WaveConfig = field(repr=False)
    coef: Coefficients = field(repr=False)
    u: np.ndarray = field(repr=False)

    @property
    def d(self) -> int:
        return self.values.ndim

    @property
    def alpha(self) -> np.ndarray:
        axes = [np.arange(self.resolution) / self.resolution] * self.d
        mesh = np.meshgrid(*axes, indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=1)

    @property
    def x(self) -> np.ndarray:
        return self.cfg.from_atomic(self.alpha)

    def summary(self) -> dict:
        return {
            "resolution": self.resolution,
            "min": float(self.values.min()),
            "max": float(self.values.max()),
            "mean": float(self.values.mean()),
            "argmin_alpha": (np.array(np.unravel_index(np.argmin(self.values), self.values.shape))
                             / self.resolution).tolist(),
        }


def sample(cfg: WaveConfig, coef: Coefficients, u, resolution: Optional[int] = None,
           chunk: int = 1 << 16) -> FieldGrid:
    u = check_amplitudes(u, cfg.d)
    if resolution is None:
        resolution = DEFAULT_RESOLUTION[cfg.d]
    resolution = int(resolution)
    if resolution < 8:
        raise InvalidParameterError("grid resolution must be at least 8")
    axes = [np.arange(resolution) / resolution] * cfg.d
    mesh = np.meshgrid(*axes, indexing="ij")
    alpha = np.stack([m.ravel() for m in mesh], axis=1)
    x = cfg.from_atomic(alpha)
    values = np.empty(len(x))
    for start in range(0, len(x), chunk):
        values[start:start + chunk] = psi_direct(x[start:start + chunk], u, coef, cfg)
    values = values.reshape((resolution,) * cfg.d)
    values.setflags(write=False)
    return FieldGrid(resolution=resolution, values=values, cfg=cfg, coef=coef, u=u)


@dataclass(frozen=True)
class NumericMinimum:
    alpha: np.ndarray
    value: float
    size: int
    extended: bool

    def to_dict(self) -> dict:
        return {
            "alpha": self.alpha.tolist(),
            "value": self.value,
            "cells": self.size,
            "extended": self.extended,
        }


def extended_threshold(resolution: int, d: int) -> float:
    return 3.0 * resolution ** ((d - 1) / d)


def numeric_minima(grid: FieldGrid, rtol: float = 1e-10) -> list[NumericMinimum]:
    """Discrete periodic local minima, merged into connected plateaus.

    A cell is a minimum when it is no larger than any of its ``3^d - 1``
    periodic neighbours (up to ``rtol`` times the value range, which absorbs
    rounding on flat valleys). Connected minimum cells form one component.
    """
    vals = grid.values
    d, res = vals.ndim, grid.resolution
    spread = float(vals.max() - vals.min())
    tol = rtol * max(spread, np.max(np.abs(vals)), np.finfo(float).tiny)
    shifts = [s for s in itertools.product((-1, 0, 1), repeat=d) if any(s)]

    is_min = np.ones(vals.shape, dtype=bool)
    for s in shifts:
        is_min &= vals <= np.roll(vals, s, axis=tuple(range(d))) + tol

    index = np.full(vals.shape, -1, dtype=np.int64)
    n = int(is_min.sum())
    index[is_min] = np.arange(n)
    rows, cols = [], []
    for s in shifts:
        nb = np.roll(index, s, axis=tuple(range(d)))
        both = is_min & (nb >= 0)
        rows.append(index[both])
        cols.append(nb[both])
    rows = np.concatenate(rows) if rows else np.zeros(0, dtype=np.int64)
    cols = np.concatenate(cols) if cols else np.zeros(0, dtype=np.int64)
    graph = coo_matrix((np.ones(len(rows)), (rows, cols)), shape=(n, n))
    _, labels = connected_components(graph, directed=False)

    cells = np.argwhere(is_min)
    cell_values = vals[is_min]
    limit = extended_threshold(res, d)
    minima = []
    for lab in np.unique(labels):
        members = labels == lab
        alpha = cells[members] / res
        # circular mean per axis handles components wrapping across the cell wall
        angle = np.angle(np.mean(np.exp(2j * np.pi * alpha), axis=0))
        centroid = np.mod(angle / (2 * np.pi), 1.0)
        centroid[np.abs(centroid - 1.0) < 1e-12] = 0.0
        size = int(members.sum())
        minima.append(NumericMinimum(
            alpha=centroid,
            value=float(cell_values[members].min()),
            size=size,
            extended=size > limit,
        ))
    minima.sort(key=lambda m: (m.value, tuple(m.alpha)))
    return minima


def cell_distance(alpha: np.ndarray, offsets: np.ndarray, resolution: int) -> float:
    """Periodic Chebyshev distance from ``alpha`` to the nearest offset, in grid cells."""
    diff = np.asarray(alpha)[None, :] - np.asarray(offsets)
    diff -= np.round(diff)
    return float(np.min(np.max(np.abs(diff), axis=1)) * resolution)


@dataclass
class VerificationReport:
    statuses: list
    worst_level_error: float
    unexplained_minima: list
    bound_ok: Optional[bool]
    tolerance: float

    @property
    def all_confirmed(self) -> bool:
        return bool(self.statuses) and all(s["status"] == "confirmed" for s in self.statuses)

    def to_dict(self) -> dict:
        return {
            "all_confirmed": self.all_confirmed,
            "statuses": self.statuses,
            "worst_level_error": self.worst_level_error,
            "unexplained_minima": self.unexplained_minima,
            "bound_ok": self.bound_ok,
            "tolerance": self.tolerance,
        }


def verify(
    predictions,
    cfg: WaveConfig,
    coef: Coefficients,
    u,
    grid: Optional[FieldGrid] = None,
    n_samples: int = 200,
    seed: int = 0,
    band: float = 0.05,
) -> VerificationReport:
    """Check that sampled points of every predicted set sit at the predicted level.

    For point lattices the grid minima are also compared with the predicted
    points: a numeric minimum whose value lies within ``band`` times the
    spectral spread of the level, and farther than 1.5 cells from every
    predicted point, counts as an extra minimum. Minima above that band are
    listed but do not fail the check (they can be ordinary local minima).
    """
    if isinstance(predictions, Classification):
        predictions = predictions.predictions
    predictions = list(predictions)
    u = check_amplitudes(u, cfg.d)
    rng = np.random.default_rng(seed)
    tol = level_tolerance(coef, u)
    dec = q0_decomposition(coef, cfg)
    power = float(np.vdot(u, u).real)
    lo, hi = dec.lambda_min * power, dec.lambda_max * power

    minima = numeric_minima(grid) if grid is not None else []
    statuses, unexplained, worst = [], [], 0.0
    for pred in predictions:
        pts = pred.sample_points(n_samples, rng)
        err = float(np.max(np.abs(psi_direct(pts, u, coef, cfg) - pred.level)))
        worst = max(worst, err)
        status = "confirmed" if err < tol else "value-mismatch"
        entry = {"kind": pred.kind, "status": status, "level": pred.level,
                 "worst_error": err, "samples": int(len(pts))}
        if isinstance(pred, PointLatticeSet) and grid is not None:
            cutoff = pred.level + band * max(hi - lo, tol)
            extra = []
            for m in minima:
                far = cell_distance(m.alpha, pred.offsets, grid.resolution) > 1.5
                if m.extended or far:
                    unexplained.append(m.to_dict())
                    if m.value <= cutoff:
                        extra.append(m.to_dict())
            entry["numeric_minima"] = len(minima)
            if extra and status == "confirmed":
                status = entry["status"] = "extra-minima-found"
            entry["extra_minima"] = extra
        statuses.append(entry)

    bound_ok = None
    if grid is not None:
        bound_ok = bool(grid.values.min() >= lo - tol and grid.values.max() <= hi + tol)
    return VerificationReport(
        statuses=statuses,
        worst_level_error=worst,
        unexplained_minima=unexplained,
        bound_ok=bound_ok,
        tolerance=tol,
    )


def point_minima_summary(minima: Iterable[NumericMinimum]) -> dict:
    minima = list(minima)
    return {
        "count": len(minima),
        "isolated": sum(not m.extended for m in minima),
        "extended": sum(m.extended for m in minima),
    }
