"""Conformal coordinate transformation, resampling onto the isothermal
xi-grid, holomorphic null curves, and the Weierstrass twin relation.

The transformation is Psi(x, y) = (x + M, y + N) with M, N integrated from
(E/w, F/w) and (F/w, G/w); its Jacobian 2 + (E+G)/w exceeds 2.  Resampled
quantities only carry first-order accuracy: bilinear interpolation plus
Newton inversion each cost one order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    JacobianBoundViolation,
    NewtonDiverged,
    NotMinimal,
    TargetOutsideImage,
    ValidationError,
)
from .fields import (
    GridDomain,
    HeightMap,
    ScalarField,
    diff_x,
    diff_y,
    first_fundamental_form,
    integrate_exact_form,
)
from .systems import minimal_residual
from .twin import TwinPair, default_tol, integrate_scaled


@dataclass
class ConformalChart:
    source: HeightMap
    M: ScalarField
    N: ScalarField
    xi1: ScalarField  # x + M
    xi2: ScalarField  # y + N
    J_psi: ScalarField  # 2 + (E+G)/w
    conformal_factor: ScalarField  # w / J_psi
    basepoint: tuple


@dataclass
class NullCurveField:
    domain: GridDomain  # the uniform xi-grid
    phi: list  # complex arrays phi_1..phi_{n+2}
    holomorphy_residual: float
    nullity_residual: float
    signature: str


def build_chart(
    f: HeightMap, basepoint=(0, 0), tol: float | None = None
) -> ConformalChart:
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
    X, Y = dom.meshgrid()
    jpsi = 2.0 + (E + G) / w
    if jpsi.min() <= 2.0 - 1e-9:
        raise JacobianBoundViolation(
            f"J_psi min {jpsi.min():.6f} <= 2", nodes=np.argwhere(jpsi <= 2.0 - 1e-9)
        )
    return ConformalChart(
        f,
        M,
        N,
        ScalarField(dom, X + M.values),
        ScalarField(dom, Y + N.values),
        ScalarField(dom, jpsi),
        ScalarField(dom, w / jpsi),
        basepoint,
    )


def _bilinear(values: np.ndarray, dom: GridDomain, x: np.ndarray, y: np.ndarray):
    """Bilinear interpolation at points (x, y), clamped to the grid."""
    fx = np.clip((x - dom.x0) / dom.dx, 0.0, dom.nx - 1.000001)
    fy = np.clip((y - dom.y0) / dom.dy, 0.0, dom.ny - 1.000001)
    i0 = fx.astype(int)
    j0 = fy.astype(int)
    tx = fx - i0
    ty = fy - j0
    v00 = values[j0, i0]
    v01 = values[j0, i0 + 1]
    v10 = values[j0 + 1, i0]
    v11 = values[j0 + 1, i0 + 1]
    return (
        v00 * (1 - tx) * (1 - ty)
        + v01 * tx * (1 - ty)
        + v10 * (1 - tx) * ty
        + v11 * tx * ty
    )


def default_target_grid(chart: ConformalChart, margin_cells: int = 2) -> GridDomain:
    """Largest safe axis-aligned xi-rectangle: inscribed in the forward
    image of the interior, shrunk by ``margin_cells`` grid cells.

    xi1 is monotone along rows and xi2 along columns (J_psi > 2), so the
    rectangle [max over left edge, min over right edge] x [bottom, top]
    of the shrunk grid lies inside the image.
    """
    m = margin_cells
    xi1 = chart.xi1.values[m:-m, m:-m]
    xi2 = chart.xi2.values[m:-m, m:-m]
    lo1, hi1 = xi1[:, 0].max(), xi1[:, -1].min()
    lo2, hi2 = xi2[0, :].max(), xi2[-1, :].min()
    if not (hi1 > lo1 and hi2 > lo2):
        raise TargetOutsideImage("image of the interior has no inscribed rectangle")
    dom = chart.source.domain
    return GridDomain.from_bounds(lo1, lo2, hi1, hi2, dom.nx, dom.ny)


def _invert_chart(chart: ConformalChart, target: GridDomain):
    """Newton-invert Psi at every target node; returns preimages (x, y)."""
    dom = chart.source.domain
    metric = first_fundamental_form(chart.source, "euclidean")
    Ew = metric.E / metric.omega
    Fw = metric.F / metric.omega
    Gw = metric.G / metric.omega
    t1, t2 = target.meshgrid()
    xi1, xi2 = chart.xi1.values, chart.xi2.values

    # seed from the nearest forward-image node
    pts = np.stack([xi1.ravel(), xi2.ravel()], axis=1)
    X, Y = dom.meshgrid()
    from scipy.spatial import cKDTree

    tree = cKDTree(pts)
    _, nearest = tree.query(np.stack([t1.ravel(), t2.ravel()], axis=1))
    x = X.ravel()[nearest].reshape(target.shape).copy()
    y = Y.ravel()[nearest].reshape(target.shape).copy()

    tol = 1e-12
    for _ in range(50):
        r1 = x + _bilinear(chart.M.values, dom, x, y) - t1
        r2 = y + _bilinear(chart.N.values, dom, x, y) - t2
        rnorm = np.hypot(r1, r2)
        if rnorm.max() <= tol:
            break
        a = 1.0 + _bilinear(Ew, dom, x, y)
        b = _bilinear(Fw, dom, x, y)
        d = 1.0 + _bilinear(Gw, dom, x, y)
        det = a * d - b * b
        sx = (d * r1 - b * r2) / det
        sy = (-b * r1 + a * r2) / det
        # damped step: halve while the residual does not decrease
        lam = np.ones_like(x)
        for _damp in range(20):
            xn, yn = x - lam * sx, y - lam * sy
            r1n = xn + _bilinear(chart.M.values, dom, xn, yn) - t1
            r2n = yn + _bilinear(chart.N.values, dom, xn, yn) - t2
            bad = np.hypot(r1n, r2n) > rnorm
            if not bad.any():
                break
            lam = np.where(bad, lam / 2.0, lam)
        x, y = x - lam * sx, y - lam * sy
    else:
        r1 = x + _bilinear(chart.M.values, dom, x, y) - t1
        r2 = y + _bilinear(chart.N.values, dom, x, y) - t2
        if np.hypot(r1, r2).max() > 1e-9:
            raise NewtonDiverged(
                f"max residual {np.hypot(r1, r2).max():.3e} after 50 iterations"
            )

    eps = 1e-9
    if (
        x.min() < dom.x0 - eps
        or x.max() > dom.x1 + eps
        or y.min() < dom.y0 - eps
        or y.max() > dom.y1 + eps
    ):
        raise TargetOutsideImage("inverted points leave the source rectangle")
    return x, y


def resample_to_chart(
    chart: ConformalChart, h: HeightMap, target: GridDomain | None = None
) -> HeightMap:
    """Immersion components on a uniform xi-grid.

    The output height map has n+2 components: ambient x(xi), y(xi) first,
    then the components of ``h`` evaluated at the preimage (bilinear).
    """
    if h.domain != chart.source.domain:
        raise ValidationError("height map and chart must share the source grid")
    if target is None:
        target = default_target_grid(chart)
    else:
        safe = default_target_grid(chart)
        if (
            target.x0 < safe.x0 - 1e-12
            or target.x1 > safe.x1 + 1e-12
            or target.y0 < safe.y0 - 1e-12
            or target.y1 > safe.y1 + 1e-12
        ):
            raise TargetOutsideImage("requested xi-rectangle leaves the safe image")
    x, y = _invert_chart(chart, target)
    dom = chart.source.domain
    comps = [x, y]
    comps.extend(_bilinear(c, dom, x, y) for c in h.components)
    return HeightMap(target, comps)


def null_curve(X: HeightMap, signature: str = "euclidean") -> NullCurveField:
    """phi_k = dF_k/dxi1 - i dF_k/dxi2 on the xi-grid, with discrete
    holomorphy (Cauchy-Riemann) and nullity residuals."""
    dom = X.domain
    phi = []
    for c in X.components:
        phi.append(diff_x(c, dom.dx) - 1j * diff_y(c, dom.dy))
    holo = 0.0
    sl = slice(2, -2)  # two derivative passes widen the noisy border
    for p in phi:
        cr = diff_x(p, dom.dx) + 1j * diff_y(p, dom.dy)
        holo = max(holo, float(np.abs(cr[sl, sl]).max()))
    if signature == "euclidean":
        null = sum(p * p for p in phi)
    elif signature == "split":
        null = phi[0] ** 2 + phi[1] ** 2 - sum(p * p for p in phi[2:])
    else:
        raise ValidationError(f"unknown signature {signature!r}")
    nullity = float(np.abs(null[1:-1, 1:-1]).max())
    return NullCurveField(dom, phi, holo, nullity, signature)


def verify_weierstrass_twin(
    pair: TwinPair, chart: ConformalChart, target: GridDomain | None = None
) -> dict:
    """Residuals of phi_1 = phihat_1, phi_2 = phihat_2 and
    phihat_{k+2} = -i phi_{k+2} on a shared xi-grid."""
    if chart.source is not pair.f and chart.source.components is not pair.f.components:
        # charts are expected to come from the pair's minimal side
        if chart.source.domain != pair.f.domain:
            raise ValidationError("chart must be built from the pair's minimal side")
    Xf = resample_to_chart(chart, pair.f, target)
    Xg = resample_to_chart(chart, pair.g, Xf.domain)
    nf = null_curve(Xf, "euclidean")
    ng = null_curve(Xg, "split")
    sl = slice(1, -1)
    r1 = float(np.abs((nf.phi[0] - ng.phi[0])[sl, sl]).max())
    r2 = float(np.abs((nf.phi[1] - ng.phi[1])[sl, sl]).max())
    r3 = 0.0
    for k in range(2, len(nf.phi)):
        r3 = max(r3, float(np.abs((ng.phi[k] + 1j * nf.phi[k])[sl, sl]).max()))
    return {
        "phi1_residual": r1,
        "phi2_residual": r2,
        "height_residual": r3,
        "max_residual": max(r1, r2, r3),
        "holomorphy_residual_min_side": nf.holomorphy_residual,
        "nullity_residual_min_side": nf.nullity_residual,
        "nullity_residual_max_side": ng.nullity_residual,
    }
