import numpy as np
import pytest

from twinsurf.errors import DegenerateFit, NotUnimodular, ValidationError
from twinsurf.fields import GridDomain, HeightMap, ScalarField
from twinsurf.gauss import (
    gauss_map,
    gauss_map_alt,
    hyperplane_fit,
    jorgens_gauss,
    normalize_projective,
    planarity_score,
    quadric_residual,
)

from conftest import random_heightmap, surface


def test_flat_graph_gauss_map(square_domain):
    f = HeightMap(square_domain, [np.zeros(square_domain.shape)])
    g = gauss_map(f)
    assert g.n_plus_2 == 3
    assert quadric_residual(g) < 1e-14
    assert planarity_score(g) < 1e-14


def test_quadric_membership_random_maps(square_domain):
    rng = np.random.default_rng(99)
    for _ in range(5):
        f = random_heightmap(rng, square_domain, n=2, amplitude=0.8)
        assert quadric_residual(gauss_map(f)) < 1e-12
        assert quadric_residual(gauss_map_alt(f)) < 1e-12


def test_two_chart_forms_agree_projectively():
    f = surface("catenoid", 33, 33)
    a = gauss_map(f).stack()
    b = gauss_map_alt(f).stack()
    inner = np.abs(np.einsum("yxk,yxk->yx", a.conj(), b))
    assert np.abs(inner - 1.0).max() < 1e-10


def test_normalize_projective_gauge():
    comps = normalize_projective([np.full((5, 5), 2j), np.full((5, 5), 2.0)])
    norm = sum(np.abs(c) ** 2 for c in comps)
    assert np.abs(norm - 1.0).max() < 1e-14
    # first non-negligible component is rotated to the positive real axis
    assert np.abs(comps[0].imag).max() < 1e-14
    assert comps[0].real.min() > 0


def test_jorgens_field_of_rotational_quadratic(square_domain):
    X, Y = square_domain.meshgrid()
    F = ScalarField(square_domain, (X * X + Y * Y) / 2)
    g = jorgens_gauss(F)
    # field is constant [1, i, 1, i] up to gauge
    assert planarity_score(g) < 1e-12
    fit = hyperplane_fit(g, 2, 1)
    assert abs(fit.lam - 1j) < 1e-12 and fit.residual < 1e-12
    assert fit.is_nonreal


def test_jorgens_rejects_non_unimodular(square_domain):
    X, _ = square_domain.meshgrid()
    with pytest.raises(NotUnimodular):
        jorgens_gauss(ScalarField(square_domain, X * X))


def test_hyperplane_fit_degenerate_direction(square_domain):
    f = HeightMap(square_domain, [np.zeros(square_domain.shape)])
    g = gauss_map(f)  # third component vanishes identically
    with pytest.raises(DegenerateFit):
        hyperplane_fit(g, 1, 3)


def test_holomorphic_graph_has_nonreal_hyperplane_relation():
    g = gauss_map(surface("holomorphic", 65, 65))
    fit = hyperplane_fit(g, 3, 4)
    h = 0.6 / 64
    assert fit.residual <= 100 * h * h
    assert abs(fit.lam.imag) > 0.1


def test_catenoid_has_no_hyperplane_relation():
    g = gauss_map(surface("catenoid", 65, 33))
    fit = hyperplane_fit(g, 1, 3)
    assert fit.residual > 0.1  # honest O(1) residual, no degeneracy
    assert planarity_score(g) > 0.2  # and the map is genuinely non-constant


def test_component_indexing_is_one_based(square_domain):
    f = HeightMap(square_domain, [np.zeros(square_domain.shape)])
    g = gauss_map(f)
    assert g.component(1) is g.components[0]
    with pytest.raises(ValidationError):
        hyperplane_fit(g, 0, 1)
