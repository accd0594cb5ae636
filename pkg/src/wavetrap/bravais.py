"""Catalog of Bravais lattice classes reachable with equal-length wavevectors.

Every entry carries a generator for reciprocal vectors ``g_1..g_d`` of equal
length. When the equal-length constraint forces every member of a class into
a more symmetric class, the entry is flagged not achievable and names that
class in ``implied_class``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping, Optional

import numpy as np

from .exceptions import DegenerateBasisError, InvalidParameterError, UnknownClassError
from .wavefield import WaveConfig, wave_config_from_K

Generator = Callable[[Mapping[str, float]], np.ndarray]

ANGLE = (0.0, math.pi)
LENGTH = (0.0, math.inf)


@dataclass(frozen=True)
class BravaisEntry:
    name: str
    dimension: int
    schema: Mapping[str, tuple]
    generator: Generator = field(repr=False)
    implied_class: Optional[str] = None
    notes: str = ""
    conditional_implied: Optional[Callable[[Mapping[str, float]], str]] = field(
        default=None, repr=False
    )

    @property
    def achievable(self) -> bool:
        return self.implied_class is None

    @property
    def cli_name(self) -> str:
        return self.name.lower().replace(" ", "-")

    def implied_for(self, params: Mapping[str, float]) -> Optional[str]:
        """Implied class for specific parameters (some catalog entries depend on them)."""
        if self.conditional_implied is not None:
            return self.conditional_implied(params)
        return self.implied_class

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "cli_name": self.cli_name,
            "dimension": self.dimension,
            "parameters": sorted(self.schema),
            "achievable": self.achievable,
            "implied_class": self.implied_class,
            "notes": self.notes,
        }


def _vecs(*rows) -> np.ndarray:
    return np.array(rows, dtype=float)


def _mono_2d(p):
    g = p["gamma"]
    return _vecs((1.0, -1.0 / math.tan(g)), (0.0, 1.0 / math.sin(g)))


def _ortho_centred_2d(p):
    g = p["gamma"]
    x = math.sin(g / 2) / math.sin(g)
    y = 0.5 / math.sin(g / 2)
    return _vecs((x, y), (x, -y))


def _mono_primitive(p):
    g = p["gamma"]
    return _vecs((-math.cos(g), -math.sin(g), 0.0), (1, 0, 0), (0, 0, 1))


def _mono_base_centred(p):
    # c is fixed by |g_1| = |g_2|: 1/c^2 = csc^2(gamma) (1 - 1/a^2)
    g, a = p["gamma"], p["a"]
    csc = 1.0 / math.sin(g)
    c = 1.0 / (csc * math.sqrt(1.0 - 1.0 / a**2))
    return _vecs(
        (-1.0 / math.tan(g), -1.0, 0.0),
        (csc / a, 0.0, -1.0 / c),
        (csc / a, 0.0, 1.0 / c),
    )


def _ortho_base_centred(p):
    a, b = p["a"], p["b"]
    return _vecs((b, -a, 0), (b, a, 0), (0, 0, math.hypot(a, b)))


def _ortho_face_centred(p):
    a, b, c = 1.0 / p["a"], 1.0 / p["b"], 1.0 / p["c"]
    return _vecs((a, b, c), (-a, -b, c), (a, -b, -c))


def _trigonal(p):
    a, c = p["a"], p["c"]
    r3 = math.sqrt(3.0)
    return _vecs(
        (0.0, -2.0 / (3 * a), 1.0 / (3 * c)),
        (1.0 / (r3 * a), 1.0 / (3 * a), 1.0 / (3 * c)),
        (-1.0 / (r3 * a), 1.0 / (3 * a), 1.0 / (3 * c)),
    )


def _triclinic(p):
    vecs = np.asarray(p["vectors"], dtype=float)
    if vecs.shape != (3, 3):
        raise InvalidParameterError("triclinic primitive needs three 3-vectors under 'vectors'")
    norms = np.linalg.norm(vecs, axis=1)
    if np.min(norms) == 0:
        raise DegenerateBasisError("zero reciprocal vector")
    return vecs / norms[:, None]


def _fixed(*rows):
    arr = _vecs(*rows)
    return lambda p: arr.copy()


def _mono_primitive_implied(p):
    return "cubic primitive" if abs(math.cos(p["gamma"])) < 1e-12 else "tetragonal body-centred"


def _ortho_base_implied(p):
    return "cubic primitive" if math.isclose(p["a"], p["b"], rel_tol=1e-12) else "tetragonal body-centred"


R3 = math.sqrt(3.0)

_CATALOG_2D = (
    BravaisEntry("monoclinic", 2, {"gamma": ANGLE}, _mono_2d, "orthorhombic centred"),
    BravaisEntry("orthorhombic", 2, {}, _fixed((1, 0), (0, 1)), "tetragonal"),
    BravaisEntry("orthorhombic centred", 2, {"gamma": ANGLE}, _ortho_centred_2d),
    BravaisEntry("hexagonal", 2, {}, _fixed((1, 1 / R3), (0, 2 / R3))),
    BravaisEntry("tetragonal", 2, {}, _fixed((1, 0), (0, 1))),
)

_CATALOG_3D = (
    BravaisEntry(
        "triclinic primitive", 3, {"vectors": None}, _triclinic,
        notes="any three independent vectors, normalized to equal length",
    ),
    BravaisEntry(
        "monoclinic primitive", 3, {"gamma": ANGLE}, _mono_primitive,
        "tetragonal body-centred",
        notes="cubic primitive if cos(gamma) = 0, tetragonal body-centred otherwise",
        conditional_implied=_mono_primitive_implied,
    ),
    BravaisEntry(
        "monoclinic base-centred", 3, {"gamma": ANGLE, "a": (1.0, math.inf)},
        _mono_base_centred, "tetragonal body-centred",
        notes="side c is determined by a and gamma through the equal-length constraint",
    ),
    BravaisEntry(
        "orthorhombic primitive", 3, {}, _fixed((0, -1, 0), (1, 0, 0), (0, 0, 1)),
        "cubic primitive",
    ),
    BravaisEntry(
        "orthorhombic base-centred", 3, {"a": LENGTH, "b": LENGTH}, _ortho_base_centred,
        "tetragonal body-centred",
        notes="tetragonal body-centred if a != b, cubic primitive if a = b",
        conditional_implied=_ortho_base_implied,
    ),
    BravaisEntry(
        "orthorhombic body-centred", 3, {}, _fixed((1, 0, 1), (0, -1, 1), (1, -1, 0)),
        "cubic body-centred",
    ),
    BravaisEntry(
        "orthorhombic face-centred", 3, {"a": LENGTH, "b": LENGTH, "c": LENGTH},
        _ortho_face_centred,
    ),
    BravaisEntry(
        "tetragonal primitive", 3, {}, _fixed((1, 0, 0), (0, 1, 0), (0, 0, 1)),
        "cubic primitive",
    ),
    BravaisEntry(
        "tetragonal body-centred", 3, {}, _fixed((0, 1, 1), (1, 0, 1), (1, 1, 0)),
        "cubic body-centred",
    ),
    BravaisEntry("trigonal primitive", 3, {"a": LENGTH, "c": LENGTH}, _trigonal),
    BravaisEntry(
        "hexagonal primitive", 3, {},
        _fixed((1 / R3, -1, 0), (2 / R3, 0, 0), (0, 0, 2 / R3)),
        "tetragonal body-centred",
        notes="implied class also appears misspelled as 'Tegragonal body-centred'",
    ),
    BravaisEntry("cubic primitive", 3, {}, _fixed((1, 0, 0), (0, 1, 0), (0, 0, 1))),
    BravaisEntry("cubic face-centred", 3, {}, _fixed((-1, 1, 1), (1, -1, 1), (1, 1, -1))),
    BravaisEntry("cubic body-centred", 3, {}, _fixed((0, 1, 1), (1, 0, 1), (1, 1, 0))),
)


def catalog(dimension: int) -> list[BravaisEntry]:
    if dimension == 2:
        return list(_CATALOG_2D)
    if dimension == 3:
        return list(_CATALOG_3D)
    raise InvalidParameterError(f"no Bravais catalog for dimension {dimension}")


def all_entries() -> list[BravaisEntry]:
    return catalog(2) + catalog(3)


def lookup(name: str) -> BravaisEntry:
    """Find an entry by catalog name or by its hyphenated CLI name."""
    def norm(s):
        return s.strip().lower().replace("-", " ")

    for entry in all_entries():
        if norm(entry.name) == norm(name):
            return entry
    valid = ", ".join(e.cli_name for e in all_entries())
    raise UnknownClassError(f"unknown Bravais class {name!r}; valid names: {valid}")


def _check_params(entry: BravaisEntry, params: Mapping) -> dict:
    params = dict(params or {})
    missing = set(entry.schema) - set(params)
    if missing:
        raise InvalidParameterError(f"{entry.name} needs parameters {sorted(missing)}")
    for key, bounds in entry.schema.items():
        if bounds is None:
            continue
        lo, hi = bounds
        value = float(params[key])
        if not lo < value < hi:
            raise InvalidParameterError(f"{entry.name}: {key}={value} outside ({lo}, {hi})")
        params[key] = value
    return params


def reciprocal_vectors(entry: BravaisEntry, params: Optional[Mapping] = None) -> np.ndarray:
    """Rows are the reciprocal vectors ``g_j``, all of one length."""
    params = _check_params(entry, params or {})
    G = entry.generator(params)
    norms = np.linalg.norm(G, axis=1)
    if not np.all(np.isfinite(G)) or norms.min() == 0:
        raise InvalidParameterError(f"{entry.name}: parameters give a degenerate vector")
    if abs(np.linalg.det(G)) <= 1e-12 * np.prod(norms):
        raise DegenerateBasisError(f"{entry.name}: reciprocal vectors are linearly dependent")
    return G


@dataclass(frozen=True)
class DesignRequest:
    class_name: str
    k: float = 1.0
    params: Mapping = field(default_factory=dict)

    def __post_init__(self):
        if not self.k > 0:
            raise InvalidParameterError("target wavenumber must be positive")


def design(req: DesignRequest) -> WaveConfig:
    """Wavevectors of length ``k`` along the catalog's reciprocal vectors."""
    entry = lookup(req.class_name)
    G = reciprocal_vectors(entry, req.params)
    K = (req.k * G / np.linalg.norm(G, axis=1)[:, None]).T
    return wave_config_from_K(K)
