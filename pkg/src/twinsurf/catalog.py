"""Closed-form surfaces and potentials with analytic derivatives: the
ground-truth corpus for the verification suite.

Component expressions are written symbolically once; values, gradients and
Hessians are lambdified from the same expression, so the analytic
derivatives cannot drift from the evaluators.  Inverse hyperbolics are
spelled as logarithms (arcosh x = log(x + sqrt(x^2 - 1)), arsinh x =
log(x + sqrt(x^2 + 1))) for reproducible double-precision behavior.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import sympy as sp

from .errors import DomainNotAdmissible, ValidationError
from .fields import GridDomain, HeightMap

_x, _y = sp.symbols("x y", real=True)


def _acosh(t):
    return sp.log(t + sp.sqrt(t * t - 1))


def _asinh(t):
    return sp.log(t + sp.sqrt(t * t + 1))


@dataclass
class CatalogEntry:
    name: str
    params: dict
    n: int
    exprs: list  # sympy expressions in (x, y), one per component
    admissible: callable  # (X, Y) -> bool array
    lift: tuple | None = None  # sympy (M, N) expressions, when a closed form exists

    def __post_init__(self):
        self._value = [sp.lambdify((_x, _y), e, "numpy") for e in self.exprs]
        self._grad = [
            (
                sp.lambdify((_x, _y), sp.diff(e, _x), "numpy"),
                sp.lambdify((_x, _y), sp.diff(e, _y), "numpy"),
            )
            for e in self.exprs
        ]
        self._hess = [
            (
                sp.lambdify((_x, _y), sp.diff(e, _x, 2), "numpy"),
                sp.lambdify((_x, _y), sp.diff(e, _x, _y), "numpy"),
                sp.lambdify((_x, _y), sp.diff(e, _y, 2), "numpy"),
            )
            for e in self.exprs
        ]

    def _eval(self, fn, X, Y):
        out = fn(X, Y)
        return np.broadcast_to(np.asarray(out, dtype=float), X.shape).copy()

    def value(self, k, X, Y):
        return self._eval(self._value[k], X, Y)

    def gradient(self, k, X, Y):
        gx, gy = self._grad[k]
        return self._eval(gx, X, Y), self._eval(gy, X, Y)

    def hessian(self, k, X, Y):
        hxx, hxy, hyy = self._hess[k]
        return (
            self._eval(hxx, X, Y),
            self._eval(hxy, X, Y),
            self._eval(hyy, X, Y),
        )


def _holomorphic_exprs(params):
    """Polynomials phi_m(z); params c{m}_{j}_re / c{m}_{j}_im are the
    coefficients of z^j in phi_m (m, j 0-based)."""
    coeffs = {}
    for key, val in params.items():
        parts = key.split("_")
        if len(parts) != 3 or not parts[0].startswith("c"):
            raise ValidationError(f"bad holomorphic param {key!r}")
        m, j, which = int(parts[0][1:]), int(parts[1]), parts[2]
        coeffs.setdefault(m, {}).setdefault(j, [0.0, 0.0])
        coeffs[m][j][0 if which == "re" else 1] = float(val)
    if not coeffs or sorted(coeffs) != list(range(len(coeffs))):
        raise ValidationError("holomorphic components must be c0..c{k-1}")
    z = _x + sp.I * _y
    exprs = []
    for m in sorted(coeffs):
        phi = sum(
            (re + sp.I * im) * z**j for j, (re, im) in sorted(coeffs[m].items())
        )
        exprs.append(sp.re(sp.expand(phi)))
        exprs.append(sp.im(sp.expand(phi)))
    return exprs


def _poly_in_x(params, prefix="f"):
    terms = []
    for key, val in params.items():
        if not key.startswith(prefix):
            raise ValidationError(f"bad param {key!r}")
        terms.append(float(val) * _x ** int(key[len(prefix):]))
    return sum(terms) if terms else sp.Integer(0)


def make_entry(name: str, params: dict | None = None) -> CatalogEntry:
    params = dict(params or {})
    if name == "plane":
        # f_k = a{k} + b{k} x + c{k} y, k = 1..n
        n = max((int(k[1:]) for k in params), default=1)
        exprs = []
        for k in range(1, n + 1):
            exprs.append(
                params.get(f"a{k}", 0.0)
                + params.get(f"b{k}", 0.0) * _x
                + params.get(f"c{k}", 0.0) * _y
            )
        return CatalogEntry(name, params, n, exprs, lambda X, Y: np.ones_like(X, bool))
    if name == "catenoid":
        rho = float(params.get("rho", 1.0))
        r = sp.sqrt(_x**2 + _y**2)
        expr = rho * _acosh(r / rho)
        lift = (
            sp.sqrt(1 - rho**2 / (_x**2 + _y**2)) * _x,
            sp.sqrt(1 - rho**2 / (_x**2 + _y**2)) * _y,
        )
        return CatalogEntry(
            name,
            {"rho": rho},
            1,
            [expr],
            lambda X, Y: X**2 + Y**2 > rho**2,
            lift,
        )
    if name == "helicoid":
        rho = float(params.get("rho", 1.0))
        expr = rho * sp.atan(_y / _x)  # x > 0 branch only
        lift = (
            sp.sqrt(1 + rho**2 / (_x**2 + _y**2)) * _x,
            sp.sqrt(1 + rho**2 / (_x**2 + _y**2)) * _y,
        )
        return CatalogEntry(
            name, {"rho": rho}, 1, [expr], lambda X, Y: X > 0, lift
        )
    if name == "scherk":
        rho = float(params.get("rho", 1.0))
        expr = (sp.log(sp.cos(rho * _x)) - sp.log(sp.cos(rho * _y))) / rho
        lift = (
            _asinh(sp.tan(rho * _x) * sp.cos(rho * _y)) / rho,
            _asinh(sp.tan(rho * _y) * sp.cos(rho * _x)) / rho,
        )
        lim = np.pi / 2 / rho
        return CatalogEntry(
            name,
            {"rho": rho},
            1,
            [expr],
            lambda X, Y: (np.abs(X) < lim) & (np.abs(Y) < lim),
            lift,
        )
    if name == "holomorphic":
        if not params:
            params = {"c0_2_re": 1.0}  # phi = z^2 by default
        exprs = _holomorphic_exprs(params)
        return CatalogEntry(
            name, params, len(exprs), exprs, lambda X, Y: np.ones_like(X, bool)
        )
    if name == "quadratic_gradient":
        a = float(params.get("a", 1.0))
        b = float(params.get("b", 1.0))
        c = float(params.get("c", 0.0))
        # gradient graph of F = (a x^2 + 2 c x y + b y^2)/2
        exprs = [a * _x + c * _y, c * _x + b * _y]
        return CatalogEntry(
            name,
            {"a": a, "b": b, "c": c},
            2,
            exprs,
            lambda X, Y: np.ones_like(X, bool),
        )
    if name == "lagrangian_catenoid":
        rho = float(params.get("rho", 1.0))
        s = sp.sqrt(1 - rho**2 / (_x**2 + _y**2))
        return CatalogEntry(
            name,
            {"rho": rho},
            2,
            [s * _x, s * _y],
            lambda X, Y: X**2 + Y**2 > rho**2,
        )
    if name == "chamberland_reverse":
        # gradient graph of h = x y + f(x): components (y + f'(x), x)
        fpoly = _poly_in_x(params) if params else _x**4
        exprs = [_y + sp.diff(fpoly, _x), _x]
        return CatalogEntry(
            name, params, 2, exprs, lambda X, Y: np.ones_like(X, bool)
        )
    raise ValidationError(f"unknown catalog surface {name!r}")


SURFACES = (
    "plane",
    "catenoid",
    "helicoid",
    "scherk",
    "holomorphic",
    "quadratic_gradient",
    "lagrangian_catenoid",
    "chamberland_reverse",
)

MINIMAL_SURFACES = ("plane", "catenoid", "helicoid", "scherk", "holomorphic")


def default_domain(name: str, params: dict | None, nx: int, ny: int) -> GridDomain:
    """A representative admissible rectangle for each surface family."""
    params = dict(params or {})
    rho = float(params.get("rho", 1.0))
    bounds = {
        "plane": (-1.0, -1.0, 1.0, 1.0),
        "catenoid": (1.5 * rho, -0.75 * rho, 3.0 * rho, 0.75 * rho),
        "helicoid": (rho, rho, 2.0 * rho, 2.0 * rho),
        "scherk": (-0.6 / rho, -0.6 / rho, 0.6 / rho, 0.6 / rho),
        "holomorphic": (-0.3, -0.3, 0.3, 0.3),
        "quadratic_gradient": (-0.5, -0.5, 0.5, 0.5),
        "lagrangian_catenoid": (1.5 * rho, -0.75 * rho, 3.0 * rho, 0.75 * rho),
        "chamberland_reverse": (-0.5, -0.5, 0.5, 0.5),
    }
    if name not in bounds:
        raise ValidationError(f"unknown catalog surface {name!r}")
    return GridDomain.from_bounds(*bounds[name], nx, ny)


def make_surface(name: str, params: dict | None, domain: GridDomain) -> HeightMap:
    """Sample a catalog surface with analytic gradients attached."""
    entry = make_entry(name, params)
    X, Y = domain.meshgrid()
    ok = entry.admissible(X, Y)
    if not np.all(ok):
        raise DomainNotAdmissible(
            f"{name}: domain leaves the admissible region", nodes=np.argwhere(~ok)
        )
    comps = [entry.value(k, X, Y) for k in range(entry.n)]
    grads = [entry.gradient(k, X, Y) for k in range(entry.n)]
    return HeightMap(domain, comps, grads)


def known_lift(name: str, params: dict | None = None):
    """Closed-form (M, N) evaluators for entries with a stated lift, else None."""
    entry = make_entry(name, params)
    if entry.lift is None:
        return None
    fM = sp.lambdify((_x, _y), entry.lift[0], "numpy")
    fN = sp.lambdify((_x, _y), entry.lift[1], "numpy")
    return (lambda X, Y: np.asarray(fM(X, Y), dtype=float),
            lambda X, Y: np.asarray(fN(X, Y), dtype=float))
