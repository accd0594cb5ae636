import numpy as np
import pytest

from conftest import random_K
from wavetrap import Coefficients, ParticleEnsemble, classify, grad_psi, psi_direct, relax, wave_config_from_K
from wavetrap.dynamics import lipschitz_estimate
from wavetrap.exceptions import DivergenceError, InvalidParameterError


def fd_gradient(x, u, coef, cfg, h=1e-5):
    out = np.zeros_like(x)
    for i in range(x.shape[1]):
        e = np.zeros(x.shape[1])
        e[i] = h
        out[:, i] = (psi_direct(x + e, u, coef, cfg) - psi_direct(x - e, u, coef, cfg)) / (2 * h)
    return out


def test_gradient_matches_finite_differences(rng):
    for d in (2, 3):
        cfg = wave_config_from_K(random_K(rng, d))
        coef = Coefficients.direct(rng.normal(), rng.normal(), k=cfg.k)
        u = rng.normal(size=2 * d) + 1j * rng.normal(size=2 * d)
        x = rng.normal(size=(50, d)) * 3
        g, fd = grad_psi(x, u, coef, cfg), fd_gradient(x, u, coef, cfg)
        scale = cfg.k * (abs(coef.a) + abs(coef.b) * cfg.k**2) * np.vdot(u, u).real
        err = np.linalg.norm(g - fd, axis=1) / (np.linalg.norm(g, axis=1) + scale)
        assert err.max() < 1e-6


def test_gradient_vanishes_at_predicted_points(em2):
    pred = classify(em2.dec, em2.group, em2.u, em2.cfg).predictions[0]
    g = grad_psi(em2.cfg.from_atomic(pred.offsets), em2.u, em2.coef, em2.cfg)
    assert np.max(np.linalg.norm(g, axis=1)) < 1e-9


def test_gradient_periodic(em2, rng):
    x = rng.normal(size=2)
    np.testing.assert_allclose(
        grad_psi(x + em2.cfg.A @ np.array([2, -1]), em2.u, em2.coef, em2.cfg),
        grad_psi(x, em2.u, em2.coef, em2.cfg),
        atol=1e-10,
    )


def test_relax_em2_reaches_predicted_points(em2, rng):
    start = em2.cfg.from_atomic(rng.random((40, 2)))
    res = relax(ParticleEnsemble(start), em2.u, em2.coef, em2.cfg, record_trajectory=True)
    offsets = np.array([[0, 0], [0, 0.5], [0.5, 0], [0.5, 0.5]])
    assert res.converged.sum() >= 38
    for a in res.alpha[res.converged]:
        diff = a - offsets
        diff -= np.round(diff)
        assert np.min(np.max(np.abs(diff), axis=1)) < 1e-3
    np.testing.assert_allclose(res.psi[res.converged], em2.dec.lambda_min, atol=1e-6)


def test_relax_is_monotone(em2, rng):
    start = em2.cfg.from_atomic(rng.random((10, 2)))
    res = relax(ParticleEnsemble(start), em2.u, em2.coef, em2.cfg, record_trajectory=True)
    traj = np.array(res.trajectory)
    for pid in range(10):
        vals = traj[traj[:, 1] == pid, -1]
        assert np.all(np.diff(vals) <= 0)


def test_relax_at_minimum_does_not_move(em2):
    x = em2.cfg.from_atomic(np.array([[0.5, 0.5]]))
    res = relax(ParticleEnsemble(x), em2.u, em2.coef, em2.cfg)
    np.testing.assert_array_equal(res.positions, x)
    assert res.converged[0] and res.iterations[0] == 0


def test_relax_lom_lands_on_lines(lom, rng):
    pred = [p for p in classify(lom.dec, lom.group, lom.u, lom.cfg).predictions if p.kind == "lines"][0]
    start = lom.cfg.from_atomic(rng.random((30, 2)))
    res = relax(ParticleEnsemble(start), lom.u, lom.coef, lom.cfg)
    assert res.converged.any()
    assert np.max(pred.atomic_distance(res.alpha[res.converged])) < 1e-3


def test_step_bound_enforced(em2):
    L = lipschitz_estimate(em2.coef, em2.cfg, em2.u)
    with pytest.raises(InvalidParameterError):
        relax(ParticleEnsemble(np.zeros((1, 2)), step=2.0 / L), em2.u, em2.coef, em2.cfg)
    with pytest.raises(InvalidParameterError):
        ParticleEnsemble(np.zeros((1, 2)), step=0.0)


def test_divergence_detected(em2, monkeypatch):
    import wavetrap.dynamics as dyn

    monkeypatch.setattr(dyn, "grad_psi", lambda x, *a: np.full(np.shape(x), 1e6))
    with pytest.raises(DivergenceError):
        relax(ParticleEnsemble(np.array([[0.3, 0.1]])), em2.u, em2.coef, em2.cfg)
    monkeypatch.setattr(dyn, "grad_psi", lambda x, *a: np.full(np.shape(x), np.nan))
    with pytest.raises(DivergenceError):
        relax(ParticleEnsemble(np.array([[0.3, 0.1]])), em2.u, em2.coef, em2.cfg)
