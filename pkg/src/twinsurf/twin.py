"""Twin correspondence between minimal graphs in R^{n+2} and maximal
graphs in R^{n+2}_n with the same positive area-angle.

Forward direction: for each height component f_k with (a_k, b_k) =
(df_k/dx, df_k/dy) the twin gradient

    (dg_k/dx, dg_k/dy) = (-(E/w) b_k + (F/w) a_k, (G/w) a_k - (F/w) b_k)

is a closed 1-form exactly when the minimal surface system holds in
divergence form; it is integrated to g_k anchored at the basepoint.
The backward direction inverts with the hatted coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import AreaAngleViolation, NotClosed, NotMinimal, NotSpacelike
from .fields import (
    HeightMap,
    JacobianData,
    MetricData,
    ScalarField,
    first_fundamental_form,
    integrate_exact_form,
    jacobian_data,
)
from .systems import maximal_residual, minimal_residual


def default_tol(domain) -> float:
    """Declared slack for residual preconditions: 50 h^2 (scaled)."""
    return 50.0 * domain.h**2


@dataclass
class TwinDiagnostics:
    c1_residual: float  # integrability: FD gradient of g vs twin relation
    c2_residual: float  # Jacobian preservation
    c3_residual: float  # angle duality  |w^ w - sin^2(Theta)|
    c4_residual: float  # conformal equivalence of the metric ratios
    involution_residual: float  # |f - twin(twin(f))| after re-anchoring

    def to_report(self):
        return {
            "c1_residual": self.c1_residual,
            "c2_residual": self.c2_residual,
            "c3_residual": self.c3_residual,
            "c4_residual": self.c4_residual,
            "involution_residual": self.involution_residual,
        }


@dataclass
class TwinPair:
    f: HeightMap
    g: HeightMap
    metric_f: MetricData
    metric_g: MetricData
    jac_f: JacobianData
    jac_g: JacobianData
    diagnostics: TwinDiagnostics
    basepoint: tuple
    tol: float


def _twin_gradient_forward(f: HeightMap, metric: MetricData, k: int):
    E, F, G, w = metric.E, metric.F, metric.G, metric.omega
    a, b = f.alpha(k), f.beta(k)
    return (-(E / w) * b + (F / w) * a, (G / w) * a - (F / w) * b)


def _twin_gradient_backward(g: HeightMap, metric: MetricData, k: int):
    E, F, G, w = metric.E, metric.F, metric.G, metric.omega
    a, b = g.alpha(k), g.beta(k)
    return ((E / w) * b - (F / w) * a, -(G / w) * a + (F / w) * b)


def _interior_max(arr):
    return float(np.abs(arr[1:-1, 1:-1]).max())


def check_closed_scaled(P, Q, domain, tol, scale):
    """Closedness guard in scaled form: for twin/lift gradient fields the
    closedness defect is the surface system in divergence form, so it is
    budgeted with the same nodewise scale as the residual evaluators."""
    from .fields import closedness_residual_field

    res = closedness_residual_field(P, Q, domain) / scale
    worst = _interior_max(res)
    if worst > tol:
        raise NotClosed(
            f"scaled closedness residual {worst:.3e} > tol {tol:.3e}"
        )


def integrate_scaled(P, Q, domain, basepoint, tol, scale):
    check_closed_scaled(P, Q, domain, tol, scale)
    return integrate_exact_form(
        ScalarField(domain, P), ScalarField(domain, Q), basepoint, tol=None
    )


def _diagnostics(f, g, metric_f, metric_g, jac_f, jac_g):
    wf, wg = metric_f.omega, metric_g.omega
    c2 = 0.0
    for key in jac_f.pairs:
        c2 = max(c2, _interior_max(jac_f.pairs[key] - jac_g.pairs[key]))
    sin2 = 1.0 - np.minimum(jac_f.norm, 1.0) ** 2  # sin^2(arccos ||J||)
    c3 = _interior_max(wf * wg - sin2)
    c4 = max(
        _interior_max(metric_f.E / wf - metric_g.E / wg),
        _interior_max(metric_f.F / wf - metric_g.F / wg),
        _interior_max(metric_f.G / wf - metric_g.G / wg),
    )
    return c2, c3, c4


def _anchored_difference(a: HeightMap, b: HeightMap, basepoint):
    """Max deviation after removing one additive constant per component."""
    ix, iy = basepoint
    out = 0.0
    for ca, cb in zip(a.components, b.components):
        d = ca - cb
        out = max(out, float(np.abs(d - d[iy, ix]).max()))
    return out


def twin_forward(
    f: HeightMap,
    basepoint: tuple = (0, 0),
    tol: float | None = None,
    _with_involution: bool = True,
) -> TwinPair:
    """Build the twin maximal graph of the minimal graph ``f``."""
    if tol is None:
        tol = default_tol(f.domain)
    res = minimal_residual(f)
    jac_f = jacobian_data(f)
    if not jac_f.has_positive_area_angle:
        raise AreaAngleViolation("||J|| >= 1", nodes=jac_f.violations)
    metric_f = first_fundamental_form(f, "euclidean")

    # closedness of the twin gradient fields is the primary garbage-in
    # guard (it is the minimal system in divergence form), so it is
    # checked before the residual precondition
    twin_grads = [_twin_gradient_forward(f, metric_f, k) for k in range(f.n)]
    for P, Q in twin_grads:
        check_closed_scaled(P, Q, f.domain, tol, res.scale)
    if res.max_abs("scaled") > tol:
        raise NotMinimal(
            f"scaled minimal residual {res.max_abs('scaled'):.3e} > tol {tol:.3e}"
        )

    comps, grads, c1 = [], [], 0.0
    for k in range(f.n):
        P, Q = twin_grads[k]
        pot = integrate_scaled(P, Q, f.domain, basepoint, tol, res.scale)
        comps.append(pot.potential.values)
        grads.append((P, Q))
    # diagnostics are computed from the raw node values (finite-difference
    # gradients), so the identities are checked honestly ...
    g_raw = HeightMap(f.domain, comps)
    for k in range(f.n):
        c1 = max(
            c1,
            _interior_max(g_raw.alpha(k) - grads[k][0]),
            _interior_max(g_raw.beta(k) - grads[k][1]),
        )

    metric_g = first_fundamental_form(g_raw, "split")
    if not metric_g.mask.all():
        raise NotSpacelike(
            "twin output not spacelike", nodes=metric_g.invalid_nodes
        )
    jac_g = jacobian_data(g_raw)
    c2, c3, c4 = _diagnostics(f, g_raw, metric_f, metric_g, jac_f, jac_g)

    # ... but the returned map carries the twin-relation gradients, which
    # define g exactly; re-differencing the integrated values would stack
    # one-sided stencils twice near the boundary
    g = HeightMap(f.domain, comps, grads)

    inv = float("nan")
    if _with_involution:
        back = twin_backward(g, basepoint, tol=tol, _with_involution=False)
        inv = _anchored_difference(f, back.f, basepoint)

    diag = TwinDiagnostics(c1, c2, c3, c4, inv)
    return TwinPair(f, g, metric_f, metric_g, jac_f, jac_g, diag, basepoint, tol)


def twin_backward(
    g: HeightMap,
    basepoint: tuple = (0, 0),
    tol: float | None = None,
    _with_involution: bool = True,
) -> TwinPair:
    """Recover the minimal graph whose twin is the maximal graph ``g``."""
    if tol is None:
        tol = default_tol(g.domain)
    metric_g = first_fundamental_form(g, "split")
    if not metric_g.mask.all():
        raise NotSpacelike("input not spacelike", nodes=metric_g.invalid_nodes)
    res = maximal_residual(g)
    if res.max_abs("scaled") > tol:
        raise NotMinimal(
            f"scaled maximal residual {res.max_abs('scaled'):.3e} > tol {tol:.3e}"
        )
    jac_g = jacobian_data(g)
    if not jac_g.has_positive_area_angle:
        raise AreaAngleViolation("||J|| >= 1", nodes=jac_g.violations)

    comps, grads, c1 = [], [], 0.0
    for k in range(g.n):
        P, Q = _twin_gradient_backward(g, metric_g, k)
        pot = integrate_scaled(P, Q, g.domain, basepoint, tol, res.scale)
        comps.append(pot.potential.values)
        grads.append((P, Q))
    f_raw = HeightMap(g.domain, comps)
    for k in range(g.n):
        c1 = max(
            c1,
            _interior_max(f_raw.alpha(k) - grads[k][0]),
            _interior_max(f_raw.beta(k) - grads[k][1]),
        )

    metric_f = first_fundamental_form(f_raw, "euclidean")
    jac_f = jacobian_data(f_raw)
    c2, c3, c4 = _diagnostics(f_raw, g, metric_f, metric_g, jac_f, jac_g)
    f = HeightMap(g.domain, comps, grads)

    inv = float("nan")
    if _with_involution:
        fwd = twin_forward(f, basepoint, tol=tol, _with_involution=False)
        inv = _anchored_difference(g, fwd.g, basepoint)

    diag = TwinDiagnostics(c1, c2, c3, c4, inv)
    return TwinPair(f, g, metric_f, metric_g, jac_f, jac_g, diag, basepoint, tol)


def verify_twin(pair: TwinPair) -> TwinDiagnostics:
    """Recompute every diagnostic from the raw node values of the pair."""
    f = HeightMap(pair.f.domain, pair.f.components)
    g = HeightMap(pair.g.domain, pair.g.components)
    metric_f = first_fundamental_form(f, "euclidean")
    metric_g = first_fundamental_form(g, "split")
    jac_f, jac_g = jacobian_data(f), jacobian_data(g)
    c1 = 0.0
    for k in range(f.n):
        P, Q = _twin_gradient_forward(f, metric_f, k)
        c1 = max(c1, _interior_max(g.alpha(k) - P), _interior_max(g.beta(k) - Q))
    c2, c3, c4 = _diagnostics(f, g, metric_f, metric_g, jac_f, jac_g)
    back = twin_backward(g, pair.basepoint, tol=pair.tol, _with_involution=False)
    inv = _anchored_difference(f, back.f, pair.basepoint)
    return TwinDiagnostics(c1, c2, c3, c4, inv)
