import numpy as np
import pytest

from twinsurf.catalog import default_domain, make_surface
from twinsurf.fields import GridDomain, HeightMap


def surface(name, nx, ny, params=None):
    dom = default_domain(name, params, nx, ny)
    return make_surface(name, params, dom)


def random_heightmap(rng, domain, n=1, amplitude=0.3):
    """Smooth but otherwise arbitrary height map (no PDE satisfied)."""
    X, Y = domain.meshgrid()
    comps = []
    for _ in range(n):
        a, b = rng.uniform(-amplitude, amplitude, 2)
        kx, ky = rng.uniform(-2.0, 2.0, 2)
        ph = rng.uniform(0, 2 * np.pi)
        comps.append(a * np.sin(kx * X + ky * Y + ph) + b * X * Y)
    return HeightMap(domain, comps)


@pytest.fixture
def square_domain():
    return GridDomain.from_bounds(-1.0, -1.0, 1.0, 1.0, 33, 33)
