import numpy as np
import pytest

from twinsurf.errors import ValidationError
from twinsurf.fields import GridDomain, HeightMap
from twinsurf.systems import (
    closedness_identities,
    divergence_residual,
    maximal_residual,
    minimal_residual,
)

from conftest import surface


def test_affine_graph_is_exactly_minimal(square_domain):
    X, Y = square_domain.meshgrid()
    f = HeightMap(square_domain, [0.3 * X - 0.2 * Y + 1.0, 0.1 * X])
    assert minimal_residual(f).max_abs("scaled") < 1e-13
    assert divergence_residual(f).max_abs("scaled") < 1e-13
    assert closedness_identities(f).max_abs("scaled") < 1e-13


def test_affine_spacelike_graph_is_exactly_maximal(square_domain):
    X, Y = square_domain.meshgrid()
    g = HeightMap(square_domain, [0.3 * X - 0.2 * Y])
    assert maximal_residual(g).max_abs("scaled") < 1e-13


@pytest.mark.parametrize("name", ["catenoid", "helicoid", "scherk", "holomorphic"])
def test_catalog_surfaces_satisfy_minimal_system(name):
    f = surface(name, 65, 65)
    tol = 50 * f.domain.h**2
    assert minimal_residual(f).max_abs("scaled") <= tol
    assert divergence_residual(f).max_abs("scaled") <= tol
    assert closedness_identities(f).max_abs("scaled") <= tol


def test_non_minimal_graph_is_flagged(square_domain):
    X, _ = square_domain.meshgrid()
    f = HeightMap(square_domain, [X**3])
    assert minimal_residual(f).max_abs("scaled") > 0.1


def test_residual_second_order_on_catenoid():
    errs = [
        minimal_residual(surface("catenoid", nx, ny)).max_abs("scaled")
        for nx, ny in ((65, 33), (129, 65))
    ]
    assert 3.0 <= errs[0] / errs[1] <= 5.0


def test_report_schema(square_domain):
    f = HeightMap(square_domain, [np.zeros(square_domain.shape)])
    rep = minimal_residual(f).to_report()
    assert rep["excluded_boundary"] is True
    assert rep["normalization"] == "scaled"
    assert rep["grid"]["nx"] == square_domain.nx
    assert set(rep) >= {"op", "signature", "max_abs", "l2"}


def test_maximal_residual_masks_non_spacelike_nodes():
    # spacelike only on part of the domain: masked nodes must not poison the max
    dom = GridDomain.from_bounds(-1.0, -1.0, 1.0, 1.0, 33, 33)
    X, Y = dom.meshgrid()
    g = HeightMap(dom, [0.8 * X * X])  # |g_x| > 1 where |x| > 0.625
    res = maximal_residual(g)
    assert np.isfinite(res.max_abs("scaled"))


def test_unknown_normalization_rejected(square_domain):
    f = HeightMap(square_domain, [np.zeros(square_domain.shape)])
    with pytest.raises(ValidationError):
        minimal_residual(f).max_abs("percent")
