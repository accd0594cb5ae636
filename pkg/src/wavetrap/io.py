"""Run configuration parsing and output serialization for the command line."""
from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

import numpy as np

from . import bravais
from .exceptions import InvalidParameterError
from .levelsets import find_eigen_group
from .spectral import SpectralDecomposition, min_eigenvector, q0_decomposition
from .wavefield import (
    Coefficients,
    MediumParams,
    ParticleParams,
    WaveConfig,
    check_amplitudes,
    derive_coefficients,
    wave_config_from_K,
)


def complex_to_json(z) -> dict:
    z = complex(z)
    return {"re": z.real, "im": z.imag}


def complex_from_json(obj) -> complex:
    if isinstance(obj, dict):
        return complex(float(obj.get("re", 0.0)), float(obj.get("im", 0.0)))
    if isinstance(obj, (list, tuple)) and len(obj) == 2:
        return complex(float(obj[0]), float(obj[1]))
    return complex(float(obj))


def to_jsonable(obj: Any) -> Any:
    """Recursively convert numpy types; complex numbers become ``{re, im}``, NaN becomes null."""
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, (complex, np.complexfloating)):
        return complex_to_json(obj)
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        value = float(obj)
        return None if not math.isfinite(value) else value
    return obj


def write_json(path, payload) -> None:
    # repr of a float round-trips exactly, so no precision is lost
    text = json.dumps(to_jsonable(payload), indent=2)
    Path(path).write_text(text + "\n", encoding="utf-8")


def write_csv(path, header: list[str], rows: np.ndarray, int_columns=()) -> None:
    rows = np.asarray(rows, dtype=float)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fields = [
                str(int(v)) if i in int_columns else format(v, ".17g")
                for i, v in enumerate(row)
            ]
            fh.write(",".join(fields) + "\n")


@dataclass
class RunConfig:
    """Parsed configuration: one wave source, one coefficient path, one amplitude source."""

    wave: dict
    coefficients: dict
    amplitudes: Any = "min-eigenvector"
    dimension: Optional[int] = None
    wavenumber: Optional[float] = None
    resolution: Optional[int] = None
    seed: int = 0
    relax: dict = field(default_factory=dict)
    base_dir: Path = Path(".")

    @classmethod
    def from_dict(cls, data: dict, base_dir=".") -> "RunConfig":
        if not isinstance(data, dict):
            raise InvalidParameterError("configuration must be a JSON object")
        unknown = set(data) - {
            "wave", "coefficients", "amplitudes", "dimension", "wavenumber",
            "resolution", "seed", "relax",
        }
        if unknown:
            raise InvalidParameterError(f"unknown configuration keys {sorted(unknown)}")
        if "wave" not in data:
            raise InvalidParameterError("configuration needs a 'wave' source")
        wave = data["wave"]
        if isinstance(wave, str):
            wave = {"file": wave}
        if not isinstance(wave, dict):
            raise InvalidParameterError("'wave' must be an object or a path to wave.json")
        sources = [k for k in ("K", "bravais", "file") if k in wave]
        if len(sources) != 1:
            raise InvalidParameterError("'wave' needs exactly one of 'K', 'bravais', 'file'")
        coefs = data.get("coefficients", {"a": 1.0, "b": 1.0})
        direct = "a" in coefs or "b" in coefs
        physical = any(k in coefs for k in ("medium", "particle", "frequency"))
        if direct == physical:
            raise InvalidParameterError(
                "'coefficients' needs either {a, b} or {medium, particle, frequency}"
            )
        amps = data.get("amplitudes", "min-eigenvector")
        if isinstance(amps, dict):
            kinds = [k for k in ("vector", "eigenvalue_index") if k in amps]
            if len(kinds) != 1:
                raise InvalidParameterError(
                    "'amplitudes' needs exactly one of 'vector' or 'eigenvalue_index'"
                )
        elif amps != "min-eigenvector":
            raise InvalidParameterError(f"unknown amplitude source {amps!r}")
        return cls(
            wave=wave,
            coefficients=coefs,
            amplitudes=amps,
            dimension=data.get("dimension"),
            wavenumber=data.get("wavenumber"),
            resolution=data.get("resolution"),
            seed=int(data.get("seed", 0)),
            relax=dict(data.get("relax", {})),
            base_dir=Path(base_dir),
        )

    @classmethod
    def load(cls, path) -> "RunConfig":
        path = Path(path)
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise InvalidParameterError(f"cannot read configuration {path}: {exc}") from exc
        return cls.from_dict(data, base_dir=path.parent)


@dataclass
class RunSetup:
    cfg: WaveConfig
    coef: Coefficients
    dec: SpectralDecomposition
    u: np.ndarray
    amplitude_source: str
    group: Optional[int]
    wave_meta: dict


def build_coefficients(spec: dict, k_default: Optional[float]) -> Coefficients:
    if "a" in spec or "b" in spec:
        k = spec.get("k", k_default if k_default is not None else 1.0)
        return Coefficients.direct(float(spec.get("a", 0.0)), float(spec.get("b", 0.0)), float(k))
    try:
        medium = MediumParams(**spec["medium"])
        particle = ParticleParams(**spec["particle"])
        frequency = float(spec["frequency"])
    except (KeyError, TypeError) as exc:
        raise InvalidParameterError(f"incomplete physical coefficients: {exc}") from exc
    return derive_coefficients(medium, particle, frequency, spec.get("sound_speed"))


def build_wave(run: RunConfig, k_hint: Optional[float]) -> tuple[WaveConfig, dict]:
    wave = run.wave
    if "file" in wave:
        path = Path(wave["file"])
        if not path.is_absolute():
            path = run.base_dir / path
        try:
            loaded = json.loads(path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise InvalidParameterError(f"cannot read wave file {path}: {exc}") from exc
        if "K" not in loaded:
            raise InvalidParameterError(f"wave file {path} has no 'K'")
        wave = loaded
    if "K" in wave:
        cfg = wave_config_from_K(np.asarray(wave["K"], dtype=float))
        meta = {"source": "K", "class": wave.get("class")}
    else:
        spec = wave["bravais"]
        entry = bravais.lookup(spec["class"])
        k = run.wavenumber if run.wavenumber is not None else (k_hint or 1.0)
        req = bravais.DesignRequest(entry.name, k=float(k), params=spec.get("params", {}))
        cfg = bravais.design(req)
        meta = {
            "source": "bravais",
            "class": entry.cli_name,
            "params": dict(spec.get("params", {})),
            "achievable": entry.achievable,
            "implied_class": entry.implied_for(req.params),
            "reciprocal_vectors": bravais.reciprocal_vectors(entry, req.params),
        }
    if run.dimension is not None and run.dimension != cfg.d:
        raise InvalidParameterError(f"dimension {run.dimension} does not match the wave source ({cfg.d})")
    return cfg, meta


def build_run(run: RunConfig) -> RunSetup:
    if "a" in run.coefficients or "b" in run.coefficients:
        cfg, meta = build_wave(run, None)
        coef = build_coefficients(run.coefficients, cfg.k)
    else:
        coef = build_coefficients(run.coefficients, None)
        cfg, meta = build_wave(run, coef.k)
    dec = q0_decomposition(coef, cfg)

    amps = run.amplitudes
    if amps == "min-eigenvector":
        u = min_eigenvector(dec)
        group = dec.smallest_group
        source = "min-eigenvector"
    elif "eigenvalue_index" in amps:
        group = int(amps["eigenvalue_index"])
        basis = int(amps.get("basis_index", 0))
        if not 0 <= group < len(dec.groups) or not 0 <= basis < len(dec.groups[group]):
            raise InvalidParameterError("eigenvalue_index/basis_index out of range")
        u = dec.basis(group)[:, basis].copy()
        source = f"eigenvalue {group}, basis vector {basis}"
    else:
        u = check_amplitudes([complex_from_json(z) for z in amps["vector"]], cfg.d)
        if not np.any(u.imag):
            u = u.real
        group = find_eigen_group(dec, u) if np.linalg.norm(u) > 0 else None
        source = "explicit"
    return RunSetup(cfg=cfg, coef=coef, dec=dec, u=u, amplitude_source=source,
                    group=group, wave_meta=meta)


def ensure_dir(path) -> Path:
    path = Path(path)
    os.makedirs(path, exist_ok=True)
    return path
