"""Generalized Gauss map into the complex hyperquadric, quadric membership,
hyperplane-degeneracy fits, planarity scoring, and the closed-form Gauss
field of unimodular-Hessian gradient graphs.

Projective points are stored as concrete unit vectors with a fixed
representative: unit norm and positive real part of the first component
whose modulus exceeds a small threshold.  That gauge makes fields
continuous wherever the underlying map is and comparable nodewise.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateFit,
    NotUnimodular,
    SignChange,
    ValidationError,
)
from .fields import (
    GridDomain,
    HeightMap,
    ScalarField,
    diff2_x,
    diff2_y,
    diff_xy,
    first_fundamental_form,
)

_FIRST_NONZERO_TOL = 1e-13


@dataclass
class ProjectivePointField:
    """Normalized homogeneous coordinates per node; components[k] is the
    complex array of z_{k+1} (1-based indexing in the API)."""

    domain: GridDomain
    components: list  # complex arrays

    def __post_init__(self):
        self.components = [np.asarray(c, dtype=complex) for c in self.components]
        for c in self.components:
            if c.shape != self.domain.shape:
                raise ValidationError("component shape mismatch")

    @property
    def n_plus_2(self):
        return len(self.components)

    def stack(self):
        """(ny, nx, n+2) complex array."""
        return np.stack(self.components, axis=-1)

    def component(self, index_1based: int):
        if not 1 <= index_1based <= len(self.components):
            raise ValidationError(
                f"component index {index_1based} out of range 1..{len(self.components)}"
            )
        return self.components[index_1based - 1]


@dataclass
class HyperplaneFit:
    i: int
    j: int
    lam: complex
    residual: float
    is_nonreal: bool


def normalize_projective(components) -> list:
    """Unit norm + positive-real first non-negligible component."""
    z = np.stack([np.asarray(c, dtype=complex) for c in components], axis=-1)
    norm = np.sqrt(np.sum(np.abs(z) ** 2, axis=-1))
    if np.any(norm == 0):
        raise ValidationError("zero homogeneous vector")
    z = z / norm[..., None]
    # phase gauge from the first component with |z_k| > tol
    phase = np.ones(z.shape[:-1], dtype=complex)
    fixed = np.zeros(z.shape[:-1], dtype=bool)
    for k in range(z.shape[-1]):
        sel = (~fixed) & (np.abs(z[..., k]) > _FIRST_NONZERO_TOL)
        zk = z[..., k][sel]
        phase[sel] = np.conj(zk) / np.abs(zk)
        fixed |= sel
    return list(np.moveaxis(z * phase[..., None], -1, 0))


def gauss_map(f: HeightMap) -> ProjectivePointField:
    """[G/w, i - F/w, (G/w) f_k,x + (i - F/w) f_k,y, ...] normalized.

    The formula is evaluated for any height map; it lands on the
    hyperquadric identically (an algebraic identity), minimality is only
    needed for the geometric interpretation.
    """
    metric = first_fundamental_form(f, "euclidean")
    z1 = metric.G / metric.omega + 0j
    z2 = 1j - metric.F / metric.omega
    comps = [z1, z2]
    for k in range(f.n):
        comps.append(z1 * f.alpha(k) + z2 * f.beta(k))
    return ProjectivePointField(f.domain, normalize_projective(comps))


def gauss_map_alt(f: HeightMap) -> ProjectivePointField:
    """The equivalent [1 - iF/w, iE/w, ...] form; cross-oracle for gauss_map."""
    metric = first_fundamental_form(f, "euclidean")
    z1 = 1.0 - 1j * metric.F / metric.omega
    z2 = 1j * metric.E / metric.omega
    comps = [z1, z2]
    for k in range(f.n):
        comps.append(z1 * f.alpha(k) + z2 * f.beta(k))
    return ProjectivePointField(f.domain, normalize_projective(comps))


def quadric_residual(g: ProjectivePointField) -> float:
    """max nodewise |sum_k z_k^2| (0 exactly on the hyperquadric)."""
    s = sum(c * c for c in g.components)
    return float(np.abs(s).max())


def hyperplane_fit(
    g: ProjectivePointField,
    i: int,
    j: int,
    min_valid_fraction: float = 0.99,
    nonreal_threshold: float = 1e-8,
) -> HyperplaneFit:
    """Least-squares lambda with z_i ~ lambda z_j over nodes where z_j is
    bounded away from zero (1-based component indices)."""
    zi, zj = g.component(i), g.component(j)
    valid = np.abs(zj) > _FIRST_NONZERO_TOL
    if valid.mean() < min_valid_fraction:
        raise DegenerateFit(
            f"z_{j} negligible on {(1 - valid.mean()) * 100:.1f}% of nodes"
        )
    zi_v, zj_v = zi[valid], zj[valid]
    lam = complex(np.vdot(zj_v, zi_v) / np.vdot(zj_v, zj_v))
    residual = float(np.abs(zi_v - lam * zj_v).max())
    return HyperplaneFit(i, j, lam, residual, abs(lam.imag) > nonreal_threshold)


def planarity_score(g: ProjectivePointField, max_nodes: int = 4096) -> float:
    """Max pairwise Fubini-Study chordal distance sqrt(1 - |<z_p, z_q>|^2).

    All node pairs when the grid has at most ``max_nodes`` nodes; otherwise
    a fixed-seed subsample of ``max_nodes`` nodes (all pairs among them),
    deterministic across runs and thread counts.
    """
    z = g.stack().reshape(-1, g.n_plus_2)
    if z.shape[0] > max_nodes:
        rng = np.random.default_rng(2024)
        idx = rng.choice(z.shape[0], size=max_nodes, replace=False)
        idx.sort()
        z = z[idx]
    worst = 0.0
    chunk = 128
    for start in range(0, z.shape[0], chunk):
        block = z[start : start + chunk]
        inner = block.conj() @ z.T  # (chunk, m)
        # sqrt(1 - |<p,q>|^2) == ||q - <p,q> p|| for unit vectors; the
        # rejection form stays accurate for nearly parallel points where
        # 1 - |<p,q>|^2 cancels catastrophically.
        rej = z[None, :, :] - inner[:, :, None] * block[:, None, :]
        dist = np.linalg.norm(rej, axis=-1)
        worst = max(worst, float(dist.max()))
    return worst


def jorgens_gauss(F: ScalarField, tol: float = 1e-6) -> ProjectivePointField:
    """Closed-form Gauss field [eps F_yy, i - eps F_xy, eps + i F_xy, i F_yy]
    of the gradient graph of a unimodular-Hessian potential F.

    eps is the constant sign of F_xx + F_yy, which the unimodular Hessian
    equation forces to vanish nowhere.
    """
    dom = F.domain
    Fxx = diff2_x(F.values, dom.dx)
    Fyy = diff2_y(F.values, dom.dy)
    Fxy = diff_xy(F.values, dom.dx, dom.dy)
    det_err = np.abs(Fxx * Fyy - Fxy * Fxy - 1.0)[1:-1, 1:-1].max()
    if det_err > tol:
        raise NotUnimodular(f"max |det D^2 F - 1| = {det_err:.3e} > tol {tol:.3e}")
    trace = Fxx + Fyy
    if trace.max() > 0 and trace.min() < 0:
        raise SignChange(
            "F_xx + F_yy changes sign", nodes=np.argwhere(trace == 0)
        )
    eps = 1.0 if trace.flat[0] > 0 else -1.0
    comps = [
        eps * Fyy + 0j,
        1j - eps * Fxy,
        eps + 1j * Fxy,
        1j * Fyy,
    ]
    return ProjectivePointField(dom, normalize_projective(comps))
