"""Eigendecomposition of the potential matrix at the origin.

``Q(0)`` block-diagonalizes on ``C^{2d} = H+ (+) H-`` where
``H+- = {[w; +-w]}``. On ``H+`` it acts like ``2a 11^T`` and on ``H-`` like
``-2b K^T K``, so its eigenpairs follow from those of the ``d x d`` Gram
matrix of the wavevectors. A cyclic Jacobi solver provides the general
eigendecomposition used for the small matrices involved and serves as an
independent check of the structured route.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .exceptions import ConvergenceError, InvalidParameterError, NotSymmetricError
from .potential import q0_closed_form
from .wavefield import Coefficients, WaveConfig

GROUP_RTOL = 1e-9
MEMBERSHIP_TOL = 1e-9

PLUS, MINUS, MIXED = "plus", "minus", "mixed"


def canonical_sign(vectors: np.ndarray) -> np.ndarray:
    """Flip each column so its first largest-magnitude entry is positive."""
    vectors = np.array(vectors, dtype=float)
    for j in range(vectors.shape[1]):
        col = vectors[:, j]
        mags = np.abs(col)
        top = np.flatnonzero(mags >= mags.max() * (1 - 1e-12))[0]
        if col[top] < 0:
            vectors[:, j] = -col
    return vectors


def symmetric_eig(S, max_sweeps: int = 100) -> tuple[np.ndarray, np.ndarray]:
    """Cyclic Jacobi eigensolver for small dense real symmetric matrices.

    Returns eigenvalues sorted in descending order and the matching
    orthonormal eigenvectors as columns.
    """
    S = np.array(S, dtype=float)
    if S.ndim != 2 or S.shape[0] != S.shape[1]:
        raise NotSymmetricError(f"expected a square matrix, got shape {S.shape}")
    scale = np.max(np.abs(S)) if S.size else 0.0
    if np.max(np.abs(S - S.T), initial=0.0) > 1e-12 * max(scale, np.finfo(float).tiny):
        raise NotSymmetricError("matrix is not symmetric")
    n = S.shape[0]
    A = 0.5 * (S + S.T)
    V = np.eye(n)
    fro = np.linalg.norm(A)
    if fro == 0.0:
        return np.zeros(n), V

    for _ in range(max_sweeps):
        off = np.linalg.norm(A - np.diag(np.diag(A)))
        if off <= 1e-14 * fro:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if apq == 0.0:
                    continue
                tau = (A[q, q] - A[p, p]) / (2.0 * apq)
                t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                colp, colq = A[:, p].copy(), A[:, q].copy()
                A[:, p] = c * colp - s * colq
                A[:, q] = s * colp + c * colq
                rowp, rowq = A[p, :].copy(), A[q, :].copy()
                A[p, :] = c * rowp - s * rowq
                A[q, :] = s * rowp + c * rowq
                A[p, q] = A[q, p] = 0.0
                vp, vq = V[:, p].copy(), V[:, q].copy()
                V[:, p] = c * vp - s * vq
                V[:, q] = s * vp + c * vq
    else:
        raise ConvergenceError(f"Jacobi iteration did not converge in {max_sweeps} sweeps")

    values = np.diag(A).copy()
    order = np.argsort(-values, kind="stable")
    return values[order], canonical_sign(V[:, order])


@dataclass(frozen=True)
class HSplit:
    plus_part: np.ndarray
    minus_part: np.ndarray


def h_split(w) -> HSplit:
    """Orthogonal projections of ``w`` onto ``H+`` and ``H-``."""
    w = np.asarray(w)
    if w.ndim != 1 or w.size % 2:
        raise InvalidParameterError(f"expected a vector of even length, got shape {w.shape}")
    d = w.size // 2
    top, bottom = w[:d], w[d:]
    even = 0.5 * (top + bottom)
    odd = 0.5 * (top - bottom)
    return HSplit(
        plus_part=np.concatenate([even, even]),
        minus_part=np.concatenate([odd, -odd]),
    )


def h_label(w, atol: float = 1e-14) -> str:
    split = h_split(w)
    scale = max(np.linalg.norm(w), np.finfo(float).tiny)
    if np.linalg.norm(split.minus_part) <= atol * scale:
        return PLUS
    if np.linalg.norm(split.plus_part) <= atol * scale:
        return MINUS
    return MIXED


def group_eigenvalues(values: np.ndarray, rtol: float = GROUP_RTOL) -> tuple[tuple[int, ...], ...]:
    """Group consecutive entries of a descending spectrum that coincide within tolerance."""
    if len(values) == 0:
        return ()
    tol = rtol * (1.0 + np.max(np.abs(values)))
    groups = [[0]]
    for i in range(1, len(values)):
        if abs(values[i] - values[groups[-1][-1]]) <= tol:
            groups[-1].append(i)
        else:
            groups.append([i])
    return tuple(tuple(g) for g in groups)


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenpairs of ``Q(0)`` sorted by descending eigenvalue.

    ``vectors[:, i]`` is the eigenvector of ``values[i]``; ``groups`` lists
    index tuples of (numerically) equal eigenvalues, from largest to smallest;
    ``labels[i]`` tells whether ``vectors[:, i]`` lies in ``H+``, ``H-`` or
    neither.
    """

    values: np.ndarray
    vectors: np.ndarray
    groups: tuple
    labels: tuple

    @property
    def dim(self) -> int:
        return self.values.size

    def group_value(self, group: int) -> float:
        return float(np.mean(self.values[list(self.groups[group])]))

    def basis(self, group: int) -> np.ndarray:
        return self.vectors[:, list(self.groups[group])]

    def group_labels(self, group: int) -> set:
        return {self.labels[i] for i in self.groups[group]}

    def group_of(self, index: int) -> int:
        for g, members in enumerate(self.groups):
            if index in members:
                return g
        raise IndexError(index)

    def find_group(self, value: float, rtol: float = GROUP_RTOL) -> int:
        tol = rtol * (1.0 + np.max(np.abs(self.values)))
        for g in range(len(self.groups)):
            if abs(self.group_value(g) - value) <= tol:
                return g
        raise InvalidParameterError(f"{value} is not an eigenvalue")

    @property
    def smallest_group(self) -> int:
        return len(self.groups) - 1

    @property
    def lambda_min(self) -> float:
        return float(self.values[-1])

    @property
    def lambda_max(self) -> float:
        return float(self.values[0])

    def reconstruct(self) -> np.ndarray:
        return (self.vectors * self.values) @ self.vectors.T


def _ones_complement_basis(d: int) -> np.ndarray:
    """Gram-Schmidt on ``e_1 - e_2, e_2 - e_3, ...``; columns span ``1^perp``."""
    basis: list[np.ndarray] = []
    for j in range(d - 1):
        v = np.zeros(d)
        v[j], v[j + 1] = 1.0, -1.0
        for b in basis:
            v -= (b @ v) * b
        basis.append(v / np.linalg.norm(v))
    return np.array(basis).T.reshape(d, d - 1)


def q0_decomposition(coef: Coefficients, cfg: WaveConfig) -> SpectralDecomposition:
    """Eigenpairs of ``Q(0)`` assembled from the eigenpairs of ``K^T K``."""
    d = cfg.d
    sigma, W = symmetric_eig(cfg.K.T @ cfg.K)
    if sigma[-1] <= 0:
        raise InvalidParameterError("degenerate wavevector matrix")
    Z = _ones_complement_basis(d)

    cols = [np.ones(2 * d) / math.sqrt(2 * d)]
    vals = [2.0 * coef.a * d]
    for j in range(d - 1):
        cols.append(np.concatenate([Z[:, j], Z[:, j]]) / math.sqrt(2))
        vals.append(0.0)
    for j in range(d):
        cols.append(np.concatenate([W[:, j], -W[:, j]]) / math.sqrt(2))
        vals.append(-2.0 * coef.b * sigma[j])

    values = np.array(vals)
    vectors = canonical_sign(np.array(cols).T)
    order = np.argsort(-values, kind="stable")
    values, vectors = values[order], vectors[:, order]
    labels = tuple(h_label(vectors[:, i]) for i in range(2 * d))
    return SpectralDecomposition(
        values=values,
        vectors=vectors,
        groups=group_eigenvalues(values),
        labels=labels,
    )


def general_decomposition(coef: Coefficients, cfg: WaveConfig) -> SpectralDecomposition:
    """Same contract as :func:`q0_decomposition`, computed by Jacobi on the full ``Q(0)``."""
    values, vectors = symmetric_eig(q0_closed_form(coef, cfg))
    labels = tuple(h_label(vectors[:, i], atol=1e-9) for i in range(values.size))
    return SpectralDecomposition(
        values=values, vectors=vectors, groups=group_eigenvalues(values), labels=labels
    )


def eigenspace_contains(
    dec: SpectralDecomposition, group: int, w, tol: float = MEMBERSHIP_TOL
) -> bool:
    w = np.asarray(w)
    norm = np.linalg.norm(w)
    if norm == 0:
        raise InvalidParameterError("membership test needs a nonzero vector")
    B = dec.basis(group)
    residual = w - B @ (B.T @ w)
    return bool(np.linalg.norm(residual) <= tol * norm)


def min_eigenvector(dec: SpectralDecomposition) -> np.ndarray:
    """A unit eigenvector of the smallest eigenvalue, preferring one with no zero entries.

    Candidates are tried in a fixed order: the stored basis vectors, then
    normalized pairwise sums of them. The first candidate without zero
    entries wins; otherwise the first basis vector is returned.
    """
    B = dec.basis(dec.smallest_group)
    candidates = [B[:, i] for i in range(B.shape[1])]
    for i, j in itertools.combinations(range(B.shape[1]), 2):
        s = B[:, i] + B[:, j]
        candidates.append(s / np.linalg.norm(s))
    for c in candidates:
        if np.min(np.abs(c)) > 1e-9 * np.max(np.abs(c)):
            return c / np.linalg.norm(c)
    return B[:, 0] / np.linalg.norm(B[:, 0])
