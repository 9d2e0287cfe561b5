"""Special Lagrangian side: lifts of minimal graphs to unimodular-Hessian
potentials, symplectic graph rotations, and residuals / angle detection
for the special and split special Lagrangian equations.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DenominatorVanishes,
    NotMinimal,
    NotSpacelike,
    ParamConstraintViolation,
    PhiOutOfRange,
    ValidationError,
)
from .fields import (
    GridDomain,
    HeightMap,
    ScalarField,
    diff2_x,
    diff2_y,
    diff_x,
    diff_xy,
    diff_y,
    first_fundamental_form,
    integrate_exact_form,
)
from .systems import ResidualReport, minimal_residual
from .twin import default_tol, integrate_scaled

PARAM_TOL = 1e-12


@dataclass
class SLLift:
    """Gradient-graph lift of a minimal graph: potentials M, N with
    (M_x, M_y, N_x, N_y) = (E/w, F/w, F/w, G/w) and h with (h_x, h_y) = (M, N)."""

    M: ScalarField
    N: ScalarField
    h: ScalarField
    gradient_symmetry_residual: float  # max |M_y - N_x|
    hessian_det_residual: float  # max |h_xx h_yy - h_xy^2 - 1|
    area_preservation_residual: float  # max |d(M,N)/d(x,y) - 1|
    basepoint: tuple

    def to_report(self):
        return {
            "gradient_symmetry_residual": self.gradient_symmetry_residual,
            "hessian_det_residual": self.hessian_det_residual,
            "area_preservation_residual": self.area_preservation_residual,
        }


@dataclass
class SLParams:
    """Coefficients of a symplectic Monge-Ampere equation.

    standard mode requires lambda1^2 + eps*lambda2^2 = 1; reverse mode
    requires -eps*lambda1^2 + lambda2^2 = 1.
    """

    lambda1: float
    lambda2: float
    epsilon: int
    theta: float = 0.0

    def __post_init__(self):
        if self.epsilon not in (-1, 1):
            raise ParamConstraintViolation("epsilon must be -1 or +1")

    def check(self, mode: str):
        l1, l2, eps = self.lambda1, self.lambda2, self.epsilon
        if mode == "standard":
            err = abs(l1 * l1 + eps * l2 * l2 - 1.0)
        elif mode == "reverse":
            err = abs(-eps * l1 * l1 + l2 * l2 - 1.0)
        else:
            raise ValidationError(f"unknown mode {mode!r}")
        if err > PARAM_TOL:
            raise ParamConstraintViolation(
                f"{mode} constraint violated by {err:.3e}"
            )


def _hessian(values: np.ndarray, dom: GridDomain):
    return (
        diff2_x(values, dom.dx),
        diff_xy(values, dom.dx, dom.dy),
        diff2_y(values, dom.dy),
    )


def _interior_max(arr):
    return float(np.abs(arr[1:-1, 1:-1]).max())


def sl_lift(f: HeightMap, basepoint=(0, 0), tol: float | None = None) -> SLLift:
    """Lift a minimal graph to its area-preserving gradient map (M, N)
    and the unimodular-Hessian potential h."""
    if tol is None:
        tol = default_tol(f.domain)
    res = minimal_residual(f)
    if res.max_abs("scaled") > tol:
        raise NotMinimal(
            f"scaled minimal residual {res.max_abs('scaled'):.3e} > tol {tol:.3e}"
        )
    dom = f.domain
    metric = first_fundamental_form(f, "euclidean")
    E, F, G, w = metric.E, metric.F, metric.G, metric.omega
    M = integrate_scaled(E / w, F / w, dom, basepoint, tol, res.scale).potential
    N = integrate_scaled(F / w, G / w, dom, basepoint, tol, res.scale).potential
    h = integrate_scaled(
        M.values, N.values, dom, basepoint, tol, res.scale
    ).potential

    Mx, My = diff_x(M.values, dom.dx), diff_y(M.values, dom.dy)
    Nx, Ny = diff_x(N.values, dom.dx), diff_y(N.values, dom.dy)
    sym = _interior_max(My - Nx)
    area = _interior_max(Mx * Ny - My * Nx - 1.0)
    hxx, hxy, hyy = _hessian(h.values, dom)
    det = _interior_max(hxx * hyy - hxy * hxy - 1.0)
    return SLLift(M, N, h, sym, det, area, basepoint)


def graph_rotate(F: ScalarField, params: SLParams, mode: str = "standard") -> ScalarField:
    """Pointwise symplectic graph rotation.

    standard: h = l2*F - eps*l1*(x^2+y^2)/2  (det D^2 h = +1 when F solves
    the matching Monge-Ampere equation);
    reverse:  h = l2*F + l1*(x^2+eps*y^2)/2  (det D^2 h = -1 likewise).
    No PDE precondition is checked here; this is pure algebra.
    """
    params.check(mode)
    X, Y = F.domain.meshgrid()
    l1, l2, eps = params.lambda1, params.lambda2, params.epsilon
    if mode == "standard":
        h = l2 * F.values - eps * l1 * (X * X + Y * Y) / 2.0
    else:
        h = l2 * F.values + l1 * (X * X + eps * Y * Y) / 2.0
    return ScalarField(F.domain, h)


def sl_residual(h: ScalarField, theta: float) -> ResidualReport:
    """cos(theta)(h_xx + h_yy) + sin(theta)(1 - h_xx h_yy + h_xy^2)."""
    dom = h.domain
    hxx, hxy, hyy = _hessian(h.values, dom)
    res = np.cos(theta) * (hxx + hyy) + np.sin(theta) * (
        1.0 - hxx * hyy + hxy * hxy
    )
    scale = np.maximum(
        1.0, np.maximum(np.abs(hxx), np.maximum(np.abs(hxy), np.abs(hyy)))
    ) ** 2
    return ResidualReport("sl_residual", "euclidean", [res], scale, dom, "raw")


def _split_spacelike(hxx, hxy, hyy):
    return (1.0 + hxx * hyy - hxy * hxy) ** 2 - (hxx + hyy) ** 2


def split_sl_residual(h: ScalarField, theta: float) -> ResidualReport:
    """cosh(theta)(h_xx + h_yy) + sinh(theta)(1 + h_xx h_yy - h_xy^2)."""
    dom = h.domain
    hxx, hxy, hyy = _hessian(h.values, dom)
    space = _split_spacelike(hxx, hxy, hyy)[1:-1, 1:-1]
    if space.min() <= 0:
        raise NotSpacelike(
            "split spacelike condition fails",
            nodes=np.argwhere(_split_spacelike(hxx, hxy, hyy) <= 0),
        )
    res = np.cosh(theta) * (hxx + hyy) + np.sinh(theta) * (
        1.0 + hxx * hyy - hxy * hxy
    )
    scale = np.maximum(
        1.0, np.maximum(np.abs(hxx), np.maximum(np.abs(hxy), np.abs(hyy)))
    ) ** 2
    return ResidualReport("split_sl_residual", "split", [res], scale, dom, "raw")


def detect_angle(h: ScalarField, mode: str = "euclidean"):
    """Estimate the constant angle of the (split) special Lagrangian
    equation satisfied by ``h`` and report how constant it really is.

    split mode: phi = (h_xx+h_yy)/(1 + h_xx h_yy - h_xy^2) must take values
    in (-1, 1); theta = -artanh(mean phi), residual = max |phi - mean phi|.

    euclidean mode: the defining quotient (h_xx+h_yy)/(1 - h_xx h_yy +
    h_xy^2) degenerates exactly at theta = +-pi/2 (unimodular Hessian), so
    the angle is computed from the direction of the vector (trace,
    1 - det'): theta_node = atan2(-trace, 1 - det') taken mod pi in
    (-pi/2, pi/2], averaged circularly; the residual is the max angular
    spread mod pi.  theta = pi/2 (not -pi/2) is the reported representative
    for lifted potentials.
    """
    dom = h.domain
    hxx, hxy, hyy = _hessian(h.values, dom)
    sl = slice(1, -1)
    trace = (hxx + hyy)[sl, sl]
    if mode == "split":
        den = (1.0 + hxx * hyy - hxy * hxy)[sl, sl]
        if np.abs(den).min() < 1e-8:
            raise DenominatorVanishes("1 + det D^2 h vanishes on the grid")
        phi = trace / den
        if np.abs(phi).max() >= 1.0:
            raise PhiOutOfRange("|phi| >= 1 somewhere", nodes=np.argwhere(np.abs(phi) >= 1))
        mean = float(phi.mean())
        return -float(np.arctanh(mean)), float(np.abs(phi - mean).max())
    if mode != "euclidean":
        raise ValidationError(f"unknown mode {mode!r}")
    den = (1.0 - hxx * hyy + hxy * hxy)[sl, sl]
    vec = np.hypot(trace, den)
    if vec.min() < 1e-8:
        raise DenominatorVanishes("(trace, 1 - det) vanishes on the grid")
    # angle defined mod pi; work on the doubled angle for circular averaging
    theta_node = np.arctan2(-trace, den)
    c2, s2 = np.cos(2 * theta_node).mean(), np.sin(2 * theta_node).mean()
    theta = 0.5 * np.arctan2(s2, c2)
    if theta <= -np.pi / 2 + 1e-15:
        theta += np.pi
    # angular deviation mod pi
    dev = np.abs(np.angle(np.exp(2j * (theta_node - theta)))) / 2.0
    return float(theta), float(dev.max())
