"""Dirichlet solvers for the minimal and maximal graph systems.

Both systems are quasilinear: at fixed coefficients E, F, G each component
satisfies a linear second-order equation.  We therefore iterate Picard
(freeze coefficients, relax the linear problem, refresh coefficients).
The inner linear solve is point red-black SOR on the standard 9-point
stencil of G f_xx - 2 F f_xy + E f_yy with the mixed term handled by the
four diagonal neighbors.  The maximal variant damps each Picard update by
bisection so the iterate stays strictly spacelike.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    Diverged,
    MaxIterations,
    SpacelikeUnreachable,
    ValidationError,
)
from .fields import GridDomain, HeightMap, first_fundamental_form
from .systems import maximal_residual, minimal_residual


@dataclass
class SolveOptions:
    max_outer: int = 200
    max_inner: int = 500
    inner_tol: float = 1e-10
    outer_tol: float = 1e-9
    relaxation: float = 1.5
    spacelike_margin: float = 0.05


@dataclass
class SolveResult:
    surface: HeightMap
    outer_iterations: int
    residual_report: object
    update_history: list = field(default_factory=list)


def _transfinite(domain: GridDomain, bc: np.ndarray) -> np.ndarray:
    """Initial guess: transfinite interpolation of the boundary values."""
    ny, nx = domain.shape
    s = np.linspace(0.0, 1.0, nx)[None, :]
    t = np.linspace(0.0, 1.0, ny)[:, None]
    u = np.zeros_like(bc)
    u += (1 - t) * bc[0, :][None, :] + t * bc[-1, :][None, :]
    u += (1 - s) * bc[:, 0][:, None] + s * bc[:, -1][:, None]
    u -= (1 - s) * (1 - t) * bc[0, 0] + s * (1 - t) * bc[0, -1]
    u -= (1 - s) * t * bc[-1, 0] + s * t * bc[-1, -1]
    return u


def _sor_sweep(u, E, F, G, dx, dy, omega_relax, color):
    """One red-black half sweep of G u_xx - 2 F u_xy + E u_yy = 0."""
    ny, nx = u.shape
    cx = G / dx**2
    cy = E / dy**2
    cxy = F / (2.0 * dx * dy)
    jj, ii = np.meshgrid(
        np.arange(1, ny - 1), np.arange(1, nx - 1), indexing="ij"
    )
    mask = ((jj + ii) % 2) == color
    j, i = jj[mask], ii[mask]
    rhs = (
        cx[j, i] * (u[j, i + 1] + u[j, i - 1])
        + cy[j, i] * (u[j + 1, i] + u[j - 1, i])
        - cxy[j, i]
        * (u[j + 1, i + 1] + u[j - 1, i - 1] - u[j + 1, i - 1] - u[j - 1, i + 1])
    )
    diag = 2.0 * (cx[j, i] + cy[j, i])
    gs = rhs / diag
    u[j, i] = (1.0 - omega_relax) * u[j, i] + omega_relax * gs


def _linear_relax(u, E, F, G, dx, dy, opts: SolveOptions):
    for sweep in range(opts.max_inner):
        before = u.copy()
        _sor_sweep(u, E, F, G, dx, dy, opts.relaxation, 0)
        _sor_sweep(u, E, F, G, dx, dy, opts.relaxation, 1)
        if np.max(np.abs(u - before)) < opts.inner_tol:
            break
    return u


def _check_boundary(boundary, domain, ncomp):
    bcs = [np.asarray(b, dtype=float) for b in boundary]
    if len(bcs) != ncomp:
        raise ValidationError("one boundary array per component required")
    for b in bcs:
        if b.shape != domain.shape:
            raise ValidationError(
                f"boundary shape {b.shape} != domain shape {domain.shape}"
            )
    return bcs


def solve_minimal(
    domain: GridDomain,
    boundary: list,
    options: SolveOptions | None = None,
    initial: HeightMap | None = None,
) -> SolveResult:
    """Solve the minimal graph system with Dirichlet data.

    `boundary` holds one (ny, nx) array per component; only its edge
    values are used.  Interior values of `initial`, when given, seed the
    Picard iteration; otherwise transfinite interpolation of the edges.
    """
    opts = options or SolveOptions()
    bcs = _check_boundary(boundary, domain, len(boundary))
    if initial is not None:
        us = [c.copy() for c in initial.components]
    else:
        us = [_transfinite(domain, b) for b in bcs]
    for u, b in zip(us, bcs):
        u[0, :], u[-1, :] = b[0, :], b[-1, :]
        u[:, 0], u[:, -1] = b[:, 0], b[:, -1]

    history = []
    for outer in range(1, opts.max_outer + 1):
        f = HeightMap(domain, [u.copy() for u in us])
        met = first_fundamental_form(f, "euclidean")
        delta = 0.0
        for u in us:
            before = u.copy()
            _linear_relax(u, met.E, met.F, met.G, domain.dx, domain.dy, opts)
            delta = max(delta, float(np.max(np.abs(u - before))))
        history.append(delta)
        if delta > 1e6:
            raise Diverged(f"Picard update grew to {delta:.3e}")
        if delta < opts.outer_tol:
            f = HeightMap(domain, us)
            return SolveResult(f, outer, minimal_residual(f), history)
    raise MaxIterations(
        f"no convergence in {opts.max_outer} Picard iterations "
        f"(last update {history[-1]:.3e})"
    )


def solve_maximal(
    domain: GridDomain,
    boundary: list,
    options: SolveOptions | None = None,
    initial: HeightMap | None = None,
) -> SolveResult:
    """Maximal-graph Dirichlet solver; iterates stay strictly spacelike.

    Each Picard step is damped toward the previous iterate until the
    spacelike discriminant keeps a relative margin of
    `options.spacelike_margin`.
    """
    opts = options or SolveOptions()
    bcs = _check_boundary(boundary, domain, len(boundary))
    if initial is not None:
        us = [c.copy() for c in initial.components]
    else:
        us = [_transfinite(domain, b) for b in bcs]
    for u, b in zip(us, bcs):
        u[0, :], u[-1, :] = b[0, :], b[-1, :]
        u[:, 0], u[:, -1] = b[:, 0], b[:, -1]

    def margin(comps):
        g = HeightMap(domain, comps)
        met = first_fundamental_form(g, "split")
        return float(np.min(met.E * met.G - met.F**2)), met

    m0, met = margin(us)
    if m0 <= 0.0:
        raise SpacelikeUnreachable(
            f"initial guess is not spacelike (min discriminant {m0:.3e})"
        )

    history = []
    for outer in range(1, opts.max_outer + 1):
        # maximal operator is G_hat g_xx - 2 F_hat g_xy + E_hat g_yy: same
        # stencil as the minimal one with hatted coefficients
        proposals = []
        for u in us:
            v = u.copy()
            _linear_relax(v, met.E, met.F, met.G, domain.dx, domain.dy, opts)
            proposals.append(v)
        step = 1.0
        for _ in range(40):
            trial = [u + step * (v - u) for u, v in zip(us, proposals)]
            m, _ = margin(trial)
            if m > opts.spacelike_margin * m0:
                break
            step *= 0.5
        else:
            raise SpacelikeUnreachable(
                "could not keep the iterate spacelike at any step size"
            )
        delta = max(
            float(np.max(np.abs(step * (v - u)))) for u, v in zip(us, proposals)
        )
        us = trial
        _, met = margin(us)
        history.append(delta)
        if delta > 1e6:
            raise Diverged(f"Picard update grew to {delta:.3e}")
        if delta < opts.outer_tol:
            g = HeightMap(domain, us)
            return SolveResult(g, outer, maximal_residual(g), history)
    raise MaxIterations(
        f"no convergence in {opts.max_outer} Picard iterations "
        f"(last update {history[-1]:.3e})"
    )
