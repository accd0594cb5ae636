"""Shape of the level set ``{x : psi(x; u) = lambda}`` for an eigenpair of ``Q(0)``.

A position ``x`` lies on the level set exactly when the phase-rotated vector
``exp(i [K, -K]^T x) * u`` stays in the lambda-eigenspace. For real
``u = [v; +-v]`` this reduces to testing finitely many sign flips of ``v``:

* flips ``s`` keeping ``[(-1)^s v; +-(-1)^s v]`` in the eigenspace give
  isolated points at atomic coordinates ``s/2`` (set ``T``),
* flips keeping ``[(-1)^s v; -+(-1)^s v]`` give lines with atomic
  direction ``(-1)^s`` (set ``T+-``),
* compatible pairs ``(s, r)`` give planes spanned by ``(-1)^s`` and
  ``(-1)^r`` (set ``R+-``),
* zero entries of ``v`` give subspaces spanned by the matching lattice vectors.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from .exceptions import InvalidParameterError, WavetrapError
from .spectral import MEMBERSHIP_TOL, MINUS, PLUS, SpectralDecomposition, eigenspace_contains
from .wavefield import WaveConfig

SignVector = tuple  # tuple of 0/1 ints, length d


class NotCanonicalError(WavetrapError):
    """The amplitude vector is not real of the form ``[v; v]`` or ``[v; -v]``."""


def sign_vectors(d: int) -> list[SignVector]:
    return list(itertools.product((0, 1), repeat=d))


def flips(s) -> np.ndarray:
    """``(-1)^s`` componentwise."""
    return 1.0 - 2.0 * np.asarray(s, dtype=float)


def canonical_form(u, tol: float = MEMBERSHIP_TOL) -> tuple[np.ndarray, int]:
    """Split a real ``u = [v; sign * v]`` into ``(v, sign)`` with ``sign`` in ``{+1, -1}``."""
    u = np.asarray(u)
    norm = np.linalg.norm(u)
    if norm == 0:
        raise InvalidParameterError("zero amplitude vector")
    if u.ndim != 1 or u.size % 2:
        raise InvalidParameterError(f"expected a vector of even length, got shape {u.shape}")
    if np.iscomplexobj(u):
        if np.max(np.abs(u.imag)) > tol * norm:
            raise NotCanonicalError("complex amplitudes cannot be classified")
        u = u.real
    d = u.size // 2
    v, w = u[:d], u[d:]
    if np.linalg.norm(v - w) <= tol * norm:
        return v.astype(float), 1
    if np.linalg.norm(v + w) <= tol * norm:
        return v.astype(float), -1
    raise NotCanonicalError("amplitudes are not of the form [v; v] or [v; -v]")


def _stack(v: np.ndarray, sign: int) -> np.ndarray:
    return np.concatenate([v, sign * v])


def t_set(dec: SpectralDecomposition, group: int, u, tol: float = MEMBERSHIP_TOL) -> list[SignVector]:
    """Sign flips ``s`` with ``[(-1)^s v; +-(-1)^s v]`` still in the eigenspace."""
    v, sign = canonical_form(u, tol)
    return [
        s for s in sign_vectors(v.size)
        if eigenspace_contains(dec, group, _stack(flips(s) * v, sign), tol)
    ]


def t_pm_set(dec: SpectralDecomposition, group: int, u, tol: float = MEMBERSHIP_TOL) -> list[SignVector]:
    """Sign flips ``s`` with ``[(-1)^s v; -+(-1)^s v]`` in the eigenspace (opposite ``H`` part)."""
    v, sign = canonical_form(u, tol)
    return [
        s for s in sign_vectors(v.size)
        if eigenspace_contains(dec, group, _stack(flips(s) * v, -sign), tol)
    ]


def is_degenerate_pair(s, r) -> bool:
    """``(-1)^s`` and ``(-1)^r`` are parallel, i.e. the plane collapses to a line."""
    t = flips(s) * flips(r)
    return bool(np.all(t == 1) or np.all(t == -1))


def r_set(
    dec: SpectralDecomposition, group: int, u, tol: float = MEMBERSHIP_TOL
) -> list[tuple[SignVector, SignVector]]:
    """Pairs ``(s, r)`` whose three derived vectors all lie in the eigenspace."""
    v, sign = canonical_form(u, tol)
    d = v.size
    opposite = {
        s: eigenspace_contains(dec, group, _stack(flips(s) * v, -sign), tol)
        for s in sign_vectors(d)
    }
    pairs = []
    for s, r in itertools.product(sign_vectors(d), repeat=2):
        if not (opposite[s] and opposite[r]):
            continue
        both = flips(s) * flips(r) * v
        if eigenspace_contains(dec, group, _stack(both, sign), tol):
            pairs.append((s, r))
    return pairs


def _periodic_distance(alpha: np.ndarray, directions: np.ndarray) -> np.ndarray:
    """Euclidean distance (atomic coordinates) from points to ``span(directions) + Z^d``.

    ``directions`` has shape ``(m, d)``; ``m = 0`` means the integer lattice itself.
    """
    alpha = np.atleast_2d(alpha)
    d = alpha.shape[1]
    reduced = alpha - np.round(alpha)
    if directions.shape[0]:
        Qb, _ = np.linalg.qr(directions.T)
        proj = np.eye(d) - Qb @ Qb.T
    else:
        proj = np.eye(d)
    best = np.full(alpha.shape[0], np.inf)
    for n in itertools.product((-1, 0, 1), repeat=d):
        r = (reduced - np.array(n)) @ proj.T
        best = np.minimum(best, np.linalg.norm(r, axis=1))
    return best


@dataclass(frozen=True)
class PointLatticeSet:
    """Isolated points ``A (n + s/2)`` for ``s`` in ``T``."""

    level: float
    A: np.ndarray = field(repr=False)
    signs: tuple
    kind: str = "points"

    @property
    def offsets(self) -> np.ndarray:
        """Atomic coordinates of the points inside the primitive cell."""
        return np.mod(np.array(self.signs, dtype=float) / 2.0, 1.0)

    def sample_points(self, n: int, rng: np.random.Generator) -> np.ndarray:
        d = self.A.shape[0]
        out = []
        for s in self.signs:
            shifts = rng.integers(-2, 3, size=(n, d))
            out.append((shifts + np.array(s) / 2.0) @ self.A.T)
        return np.vstack(out)

    def atomic_distance(self, alpha) -> np.ndarray:
        alpha = np.atleast_2d(alpha)
        d = alpha.shape[1]
        empty = np.zeros((0, d))
        return np.min(
            [_periodic_distance(alpha - off, empty) for off in self.offsets], axis=0
        )

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "level": self.level,
            "signs": [list(s) for s in self.signs],
            "offsets": self.offsets.tolist(),
            "points_per_cell": len(self.signs),
        }


@dataclass(frozen=True)
class LineFamilySet:
    """Lines ``K^{-T} (theta (-1)^s + 2 pi n)``; atomic direction ``(-1)^s``."""

    level: float
    K: np.ndarray = field(repr=False)
    signs: tuple
    kind: str = "lines"

    @property
    def directions(self) -> np.ndarray:
        return np.array([flips(s) for s in self.signs])

    def sample_points(self, n: int, rng: np.random.Generator) -> np.ndarray:
        d = self.K.shape[0]
        KinvT = np.linalg.inv(self.K.T)
        out = []
        for direction in self.directions:
            theta = rng.uniform(-2 * np.pi, 2 * np.pi, size=(n, 1))
            shifts = rng.integers(-2, 3, size=(n, d))
            out.append((theta * direction + 2 * np.pi * shifts) @ KinvT.T)
        return np.vstack(out)

    def atomic_distance(self, alpha) -> np.ndarray:
        return np.min(
            [_periodic_distance(alpha, direction[None, :]) for direction in self.directions],
            axis=0,
        )

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "level": self.level,
            "signs": [list(s) for s in self.signs],
            "directions": self.directions.tolist(),
            "complete": False,
        }


@dataclass(frozen=True)
class PlaneFamilySet:
    """Sets ``K^{-T} (theta (-1)^s + phi (-1)^r + 2 pi n)`` for ``(s, r)`` in ``R``."""

    level: float
    K: np.ndarray = field(repr=False)
    pairs: tuple
    kind: str = "planes"

    @property
    def is_plane(self) -> list[bool]:
        return [not is_degenerate_pair(s, r) for s, r in self.pairs]

    def sample_points(self, n: int, rng: np.random.Generator) -> np.ndarray:
        d = self.K.shape[0]
        KinvT = np.linalg.inv(self.K.T)
        out = []
        for s, r in self.pairs:
            theta = rng.uniform(-2 * np.pi, 2 * np.pi, size=(n, 1))
            phi = rng.uniform(-2 * np.pi, 2 * np.pi, size=(n, 1))
            shifts = rng.integers(-2, 3, size=(n, d))
            phases = theta * flips(s) + phi * flips(r) + 2 * np.pi * shifts
            out.append(phases @ KinvT.T)
        return np.vstack(out)

    def atomic_distance(self, alpha) -> np.ndarray:
        return np.min(
            [_periodic_distance(alpha, np.array([flips(s), flips(r)])) for s, r in self.pairs],
            axis=0,
        )

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "level": self.level,
            "pairs": [[list(s), list(r)] for s, r in self.pairs],
            "is_plane": self.is_plane,
            "complete": False,
        }


@dataclass(frozen=True)
class SubspaceSet:
    """``span{a_j : j in Z}`` (and its lattice translates) where ``v_j = 0`` for ``j`` in ``Z``."""

    level: float
    A: np.ndarray = field(repr=False)
    indices: tuple
    kind: str = "subspace"

    @property
    def generators(self) -> np.ndarray:
        return self.A[:, list(self.indices)].T

    def sample_points(self, n: int, rng: np.random.Generator) -> np.ndarray:
        d = self.A.shape[0]
        coeffs = np.zeros((n, d))
        coeffs[:, list(self.indices)] = rng.uniform(-2, 2, size=(n, len(self.indices)))
        coeffs += rng.integers(-2, 3, size=(n, d))
        return coeffs @ self.A.T

    def atomic_distance(self, alpha) -> np.ndarray:
        d = self.A.shape[0]
        return _periodic_distance(alpha, np.eye(d)[list(self.indices)])

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "level": self.level,
            "indices": list(self.indices),
            "generators": self.generators.tolist(),
            "complete": False,
        }


MinimaPrediction = Union[PointLatticeSet, LineFamilySet, PlaneFamilySet, SubspaceSet]


def zero_entry_subspace(
    u, cfg: WaveConfig, level: float, tol: float = MEMBERSHIP_TOL
) -> Optional[SubspaceSet]:
    v, _ = canonical_form(u, tol)
    zeros = tuple(int(j) for j in np.flatnonzero(np.abs(v) <= tol * np.linalg.norm(v)))
    if not zeros:
        return None
    return SubspaceSet(level=level, A=cfg.A, indices=zeros)


@dataclass(frozen=True)
class Classification:
    """Outcome of :func:`classify`.

    ``status`` is ``"ok"`` or ``"not-canonical"``; ``branches`` records which
    cases of the classification applied (``"zero-entries"``, ``"points"``,
    ``"straddle"``).
    """

    level: float
    status: str
    branches: tuple = ()
    predictions: tuple = ()
    notes: tuple = ()

    def to_dict(self) -> dict:
        return {
            "level": self.level,
            "status": self.status,
            "branches": list(self.branches),
            "predictions": [p.to_dict() for p in self.predictions],
            "notes": list(self.notes),
        }


def classify(
    dec: SpectralDecomposition,
    group: int,
    u,
    cfg: WaveConfig,
    tol: float = MEMBERSHIP_TOL,
) -> Classification:
    """Predict the level set of ``psi(.; u)`` at the eigenvalue of ``group``.

    Point lattices are the complete level set; line, plane and subspace
    families are only guaranteed to be contained in it.
    """
    level = dec.group_value(group)
    u = np.asarray(u)
    if np.linalg.norm(u) == 0:
        raise InvalidParameterError("zero amplitude vector")
    u = u / np.linalg.norm(u)
    try:
        canonical_form(u, tol)
    except NotCanonicalError as exc:
        return Classification(level=level, status="not-canonical", notes=(str(exc),))
    if not eigenspace_contains(dec, group, u, tol):
        raise InvalidParameterError(f"u is not an eigenvector for eigenvalue {level}")
    u = np.real(u)

    labels = dec.group_labels(group)
    inside = labels in ({PLUS}, {MINUS})
    branches, predictions, notes = [], [], []

    subspace = zero_entry_subspace(u, cfg, level, tol)
    if subspace is not None:
        branches.append("zero-entries")
        predictions.append(subspace)
    if inside and subspace is None:
        branches.append("points")
        predictions.append(
            PointLatticeSet(level=level, A=cfg.A, signs=tuple(t_set(dec, group, u, tol)))
        )
    if not inside:
        branches.append("straddle")
        lines = t_pm_set(dec, group, u, tol)
        if lines:
            predictions.append(LineFamilySet(level=level, K=cfg.K, signs=tuple(lines)))
        pairs = r_set(dec, group, u, tol)
        if pairs:
            predictions.append(PlaneFamilySet(level=level, K=cfg.K, pairs=tuple(pairs)))
        if lines and pairs:
            notes.append("line and plane families both present; each is a subset of the level set")
    if len(dec.groups[group]) > 1:
        notes.append("eigenvalue is degenerate; the arrangement depends on the chosen eigenvector")
    return Classification(
        level=level,
        status="ok",
        branches=tuple(branches),
        predictions=tuple(predictions),
        notes=tuple(notes),
    )


def find_eigen_group(dec: SpectralDecomposition, u, tol: float = MEMBERSHIP_TOL) -> Optional[int]:
    """Index of the eigenvalue group whose eigenspace contains ``u``, if any."""
    u = np.asarray(u)
    if np.linalg.norm(u) == 0:
        raise InvalidParameterError("zero amplitude vector")
    for group in range(len(dec.groups)):
        if eigenspace_contains(dec, group, u, tol):
            return group
    return None


def classify_amplitudes(
    dec: SpectralDecomposition, u, cfg: WaveConfig, tol: float = MEMBERSHIP_TOL
) -> Classification:
    """Like :func:`classify` but locates the eigenvalue of ``u`` itself.

    Amplitudes that are complex or not eigenvectors get a status instead of
    predictions.
    """
    u = np.asarray(u)
    try:
        canonical_form(u, tol)
    except NotCanonicalError as exc:
        return Classification(level=float("nan"), status="not-canonical", notes=(str(exc),))
    group = find_eigen_group(dec, u, tol)
    if group is None:
        return Classification(
            level=float("nan"),
            status="not-eigenvector",
            notes=("amplitudes are not an eigenvector of Q(0); no level set is predicted",),
        )
    return classify(dec, group, u, cfg, tol)
