import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_K
from wavetrap import (
    MediumParams,
    ParticleParams,
    derive_coefficients,
    pressure,
    pressure_gradient,
    pressure_hessian,
    wave_config_from_K,
)
from wavetrap.exceptions import (
    DegenerateBasisError,
    DimensionMismatchError,
    InvalidParameterError,
    UnequalWavenumberError,
    WavetrapError,
)

WATER = MediumParams(compressibility=4.5e-10, mass_density=1000.0)


def test_matched_particle_has_zero_coefficients():
    coef = derive_coefficients(WATER, ParticleParams(4.5e-10, 1000.0), 40e3)
    assert coef.f1 == 0 and coef.f2 == 0
    assert coef.a == 0 and coef.b == 0


def test_incompressible_particle():
    coef = derive_coefficients(WATER, ParticleParams(0.0, 1050.0), 40e3)
    assert coef.f1 == 1.0
    assert coef.a == pytest.approx(WATER.compressibility / 4, rel=1e-15)


def test_heavy_particle_density_factor_limit():
    coef = derive_coefficients(WATER, ParticleParams(1e-10, 1e9), 40e3)
    assert 0.9999 < coef.f2 < 1


def test_coefficient_formulas():
    part = ParticleParams(2.4e-10, 1050.0)
    coef = derive_coefficients(WATER, part, 40e3)
    omega = 2 * math.pi * 40e3
    c = 1 / math.sqrt(WATER.compressibility * WATER.mass_density)
    f1 = 1 - part.compressibility / WATER.compressibility
    f2 = 2 * (part.mass_density - 1000.0) / (2 * part.mass_density + 1000.0)
    assert coef.f1 == pytest.approx(f1, rel=1e-14)
    assert coef.f2 == pytest.approx(f2, rel=1e-14)
    assert coef.a == pytest.approx(f1 * WATER.compressibility / 4, rel=1e-14)
    assert coef.b == pytest.approx(f2 * 3 / (8 * 1000.0 * omega**2), rel=1e-14)
    assert coef.k == pytest.approx(omega / c, rel=1e-14)
    assert coef.wavelength == pytest.approx(c / 40e3, rel=1e-14)
    assert -2 < coef.f2 < 1


def test_sound_speed_override():
    coef = derive_coefficients(WATER, ParticleParams(2.4e-10, 1050.0), 40e3, sound_speed=343.0)
    assert coef.k == pytest.approx(2 * math.pi * 40e3 / 343.0)


@pytest.mark.parametrize("freq", [0.0, -1.0])
def test_nonpositive_frequency_rejected(freq):
    with pytest.raises(InvalidParameterError):
        derive_coefficients(WATER, ParticleParams(2e-10, 1000.0), freq)


def test_bad_physical_parameters_rejected():
    with pytest.raises(InvalidParameterError):
        MediumParams(compressibility=-1.0, mass_density=1000.0)
    with pytest.raises(InvalidParameterError):
        ParticleParams(compressibility=1e-10, mass_density=0.0)


def test_identity_K_gives_2pi_lattice():
    cfg = wave_config_from_K(np.eye(2))
    np.testing.assert_allclose(cfg.A, 2 * np.pi * np.eye(2), atol=1e-15)


def test_hexagonal_duality():
    K = np.array([[1, 0.5], [0, np.sqrt(3) / 2]])
    cfg = wave_config_from_K(K)
    np.testing.assert_allclose(cfg.K.T @ cfg.A, 2 * np.pi * np.eye(2), atol=1e-12)


def test_K_validation():
    with pytest.raises(DegenerateBasisError):
        wave_config_from_K([[1, 1], [0, 0]])
    with pytest.raises(UnequalWavenumberError):
        wave_config_from_K([[1, 0], [0, 2]])
    with pytest.raises(DimensionMismatchError):
        wave_config_from_K(np.eye(4))
    with pytest.raises(WavetrapError):
        wave_config_from_K(np.ones((2, 3)))


def test_atomic_coordinates_round_trip(rng):
    cfg = wave_config_from_K(random_K(rng, 3))
    alpha = rng.random((20, 3))
    np.testing.assert_allclose(cfg.to_atomic(cfg.from_atomic(alpha)), alpha, atol=1e-12)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**31), st.sampled_from([2, 3]))
def test_pressure_is_lattice_periodic(seed, d):
    rng = np.random.default_rng(seed)
    cfg = wave_config_from_K(random_K(rng, d))
    u = rng.normal(size=2 * d) + 1j * rng.normal(size=2 * d)
    x = rng.normal(size=(5, d))
    n = rng.integers(-3, 4, size=d)
    shifted = x + cfg.A @ n
    np.testing.assert_allclose(pressure(shifted, u, cfg), pressure(x, u, cfg), atol=1e-10)


def test_pressure_at_origin_is_amplitude_sum(rng):
    cfg = wave_config_from_K(random_K(rng, 2))
    u = rng.normal(size=4) + 1j * rng.normal(size=4)
    assert pressure(np.zeros(2), u, cfg) == pytest.approx(u.sum(), abs=1e-14)


def test_gradient_and_hessian_match_finite_differences(rng):
    cfg = wave_config_from_K(random_K(rng, 3))
    u = rng.normal(size=6) + 1j * rng.normal(size=6)
    x = rng.normal(size=3)
    h = 1e-6
    eye = np.eye(3)
    fd_g = np.array([(pressure(x + h * e, u, cfg) - pressure(x - h * e, u, cfg)) / (2 * h) for e in eye])
    np.testing.assert_allclose(pressure_gradient(x, u, cfg), fd_g, rtol=1e-6, atol=1e-8)
    fd_H = np.array([
        (pressure_gradient(x + h * e, u, cfg) - pressure_gradient(x - h * e, u, cfg)) / (2 * h)
        for e in eye
    ])
    np.testing.assert_allclose(pressure_hessian(x, u, cfg), fd_H, rtol=1e-6, atol=1e-8)


def test_amplitude_length_checked():
    cfg = wave_config_from_K(np.eye(2))
    with pytest.raises(DimensionMismatchError):
        pressure(np.zeros(2), np.ones(3), cfg)
    with pytest.raises(DimensionMismatchError):
        pressure(np.zeros(3), np.ones(4), cfg)
