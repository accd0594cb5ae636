import math

import numpy as np
import pytest

from wavetrap import DesignRequest, catalog, design, lookup, reciprocal_vectors
from wavetrap.exceptions import InvalidParameterError, UnknownClassError


def random_params(entry, rng):
    params = {}
    for key, bounds in entry.schema.items():
        if key == "vectors":
            params[key] = rng.normal(size=(3, 3)) + 2 * np.eye(3)
        elif key == "gamma":
            params[key] = rng.uniform(0.2, math.pi - 0.2)
        elif bounds[0] >= 1.0:
            params[key] = rng.uniform(bounds[0] + 0.1, bounds[0] + 3.0)
        else:
            params[key] = rng.uniform(0.3, 3.0)
    return params


def test_catalog_counts():
    for d, total, achievable in [(2, 5, 3), (3, 14, 6)]:
        entries = catalog(d)
        assert len(entries) == total
        assert sum(e.achievable for e in entries) == achievable


def test_achievable_names():
    assert {e.name for e in catalog(2) if e.achievable} == {"orthorhombic centred", "hexagonal", "tetragonal"}
    assert {e.name for e in catalog(3) if e.achievable} == {
        "triclinic primitive", "orthorhombic face-centred", "trigonal primitive",
        "cubic primitive", "cubic face-centred", "cubic body-centred",
    }


@pytest.mark.parametrize("entry", catalog(2) + catalog(3), ids=lambda e: e.cli_name)
def test_generators_have_equal_norms(entry, rng):
    for _ in range(50):
        G = entry.generator(random_params(entry, rng))
        norms = np.linalg.norm(G, axis=1)
        assert np.max(np.abs(norms - norms[0])) <= 1e-12 * norms[0]


def test_implied_classes():
    assert lookup("monoclinic").implied_class == "orthorhombic centred"
    assert lookup("hexagonal-primitive").implied_class == "tetragonal body-centred"
    mono = lookup("monoclinic-primitive")
    assert mono.implied_for({"gamma": math.pi / 2}) == "cubic primitive"
    assert mono.implied_for({"gamma": 1.0}) == "tetragonal body-centred"
    base = lookup("orthorhombic-base-centred")
    assert base.implied_for({"a": 2.0, "b": 2.0}) == "cubic primitive"
    assert base.implied_for({"a": 1.0, "b": 2.0}) == "tetragonal body-centred"


def test_gram_spot_checks():
    G = reciprocal_vectors(lookup("orthorhombic"))
    gram = G @ G.T
    np.testing.assert_allclose(gram, gram[0, 0] * np.eye(2), atol=1e-10)
    G = reciprocal_vectors(lookup("orthorhombic-primitive"))
    np.testing.assert_allclose(G @ G.T, np.eye(3), atol=1e-10)


def test_cubic_primitive_design_is_identity():
    cfg = design(DesignRequest("cubic-primitive", k=1.0))
    np.testing.assert_allclose(cfg.K, np.eye(3), atol=1e-15)


def test_fcc_design_gram():
    cfg = design(DesignRequest("cubic-face-centred", k=math.sqrt(3)))
    gram = cfg.A.T @ cfg.A
    expected = np.pi**2 * np.array([[2, 1, 1], [1, 2, 1], [1, 1, 2]])
    np.testing.assert_allclose(gram, expected, atol=1e-12)


def test_monoclinic_primitive_right_angle_is_cubic():
    cfg = design(DesignRequest("monoclinic-primitive", params={"gamma": math.pi / 2}))
    np.testing.assert_allclose(cfg.K.T @ cfg.K, np.eye(3), atol=1e-12)


def test_design_norms(rng):
    for entry in catalog(2) + catalog(3):
        cfg = design(DesignRequest(entry.cli_name, k=2.5, params=random_params(entry, rng)))
        np.testing.assert_allclose(np.linalg.norm(cfg.K, axis=0), 2.5, rtol=1e-12)


def test_lookup_is_forgiving_about_hyphens_and_case():
    assert lookup("Cubic-Face-Centred") is lookup("cubic face-centred")
    assert lookup("monoclinic-base-centred").name == "monoclinic base-centred"


def test_unknown_class_lists_names():
    with pytest.raises(UnknownClassError, match="cubic-primitive"):
        lookup("quasicrystal")


def test_parameter_validation():
    with pytest.raises(InvalidParameterError):
        design(DesignRequest("monoclinic"))
    with pytest.raises(InvalidParameterError):
        design(DesignRequest("monoclinic", params={"gamma": 4.0}))
    with pytest.raises(InvalidParameterError):
        design(DesignRequest("monoclinic-base-centred", params={"gamma": 1.0, "a": 0.5}))
    with pytest.raises(InvalidParameterError):
        DesignRequest("tetragonal", k=0.0)
