"""Grid domains, fields, finite differences and exact 1-form integration.

Arrays are stored with shape ``(ny, nx)``: the y index is the slow (row)
axis, so a row-major flatten runs through x fastest.  All derivative
stencils are second order: central in the interior, one-sided three/four
point stencils on the boundary rows and columns.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import cumulative_trapezoid

from .errors import NotClosed, ValidationError


@dataclass(frozen=True)
class GridDomain:
    """Closed axis-aligned rectangle sampled on a uniform lattice.

    Rectangles are simply connected, which every path integration here
    relies on; that is why no other domain shape is supported.
    """

    x0: float
    y0: float
    dx: float
    dy: float
    nx: int
    ny: int

    def __post_init__(self):
        if not (self.dx > 0 and self.dy > 0):
            raise ValidationError("grid spacings must be positive")
        if self.nx < 5 or self.ny < 5:
            raise ValidationError("need at least 5 nodes per axis")

    @classmethod
    def from_bounds(cls, x0, y0, x1, y1, nx, ny):
        if not (x1 > x0 and y1 > y0):
            raise ValidationError("degenerate rectangle")
        return cls(x0, y0, (x1 - x0) / (nx - 1), (y1 - y0) / (ny - 1), nx, ny)

    @property
    def x1(self):
        return self.x0 + self.dx * (self.nx - 1)

    @property
    def y1(self):
        return self.y0 + self.dy * (self.ny - 1)

    @property
    def shape(self):
        return (self.ny, self.nx)

    @property
    def xs(self):
        return self.x0 + self.dx * np.arange(self.nx)

    @property
    def ys(self):
        return self.y0 + self.dy * np.arange(self.ny)

    def meshgrid(self):
        return np.meshgrid(self.xs, self.ys)

    @property
    def h(self):
        """Largest spacing; the scale used for default tolerances."""
        return max(self.dx, self.dy)


@dataclass
class ScalarField:
    domain: GridDomain
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != self.domain.shape:
            raise ValidationError(
                f"values shape {self.values.shape} != grid {self.domain.shape}"
            )
        if not np.all(np.isfinite(self.values)):
            raise ValidationError("field contains non-finite values")


def diff_x(values: np.ndarray, dx: float) -> np.ndarray:
    d = np.empty_like(values, dtype=np.result_type(values, float))
    d[:, 1:-1] = (values[:, 2:] - values[:, :-2]) / (2.0 * dx)
    d[:, 0] = (-3.0 * values[:, 0] + 4.0 * values[:, 1] - values[:, 2]) / (2.0 * dx)
    d[:, -1] = (3.0 * values[:, -1] - 4.0 * values[:, -2] + values[:, -3]) / (2.0 * dx)
    return d


def diff_y(values: np.ndarray, dy: float) -> np.ndarray:
    d = np.empty_like(values, dtype=np.result_type(values, float))
    d[1:-1, :] = (values[2:, :] - values[:-2, :]) / (2.0 * dy)
    d[0, :] = (-3.0 * values[0, :] + 4.0 * values[1, :] - values[2, :]) / (2.0 * dy)
    d[-1, :] = (3.0 * values[-1, :] - 4.0 * values[-2, :] + values[-3, :]) / (2.0 * dy)
    return d


def diff2_x(values: np.ndarray, dx: float) -> np.ndarray:
    d = np.empty_like(values, dtype=np.result_type(values, float))
    d[:, 1:-1] = (values[:, 2:] - 2.0 * values[:, 1:-1] + values[:, :-2]) / dx**2
    d[:, 0] = (
        2.0 * values[:, 0] - 5.0 * values[:, 1] + 4.0 * values[:, 2] - values[:, 3]
    ) / dx**2
    d[:, -1] = (
        2.0 * values[:, -1] - 5.0 * values[:, -2] + 4.0 * values[:, -3] - values[:, -4]
    ) / dx**2
    return d


def diff2_y(values: np.ndarray, dy: float) -> np.ndarray:
    d = np.empty_like(values, dtype=np.result_type(values, float))
    d[1:-1, :] = (values[2:, :] - 2.0 * values[1:-1, :] + values[:-2, :]) / dy**2
    d[0, :] = (
        2.0 * values[0, :] - 5.0 * values[1, :] + 4.0 * values[2, :] - values[3, :]
    ) / dy**2
    d[-1, :] = (
        2.0 * values[-1, :] - 5.0 * values[-2, :] + 4.0 * values[-3, :] - values[-4, :]
    ) / dy**2
    return d


def diff_xy(values: np.ndarray, dx: float, dy: float) -> np.ndarray:
    return diff_y(diff_x(values, dx), dy)


def partial_x(f: ScalarField) -> ScalarField:
    return ScalarField(f.domain, diff_x(f.values, f.domain.dx))


def partial_y(f: ScalarField) -> ScalarField:
    return ScalarField(f.domain, diff_y(f.values, f.domain.dy))


@dataclass
class HeightMap:
    """An n-component map on a grid with (optionally analytic) gradients.

    ``gradients[k]`` holds the pair (df_k/dx, df_k/dy); when absent the
    derivatives fall back to finite differences of the sampled values.
    """

    domain: GridDomain
    components: list
    gradients: list | None = None

    def __post_init__(self):
        if not self.components:
            raise ValidationError("height map needs at least one component")
        self.components = [np.asarray(c, dtype=float) for c in self.components]
        for c in self.components:
            if c.shape != self.domain.shape:
                raise ValidationError("component shape mismatch")
            if not np.all(np.isfinite(c)):
                raise ValidationError("component contains non-finite values")
        if self.gradients is not None:
            if len(self.gradients) != len(self.components):
                raise ValidationError("one gradient pair per component required")
            self.gradients = [
                (np.asarray(gx, dtype=float), np.asarray(gy, dtype=float))
                for gx, gy in self.gradients
            ]

    @property
    def n(self):
        return len(self.components)

    def alpha(self, k: int) -> np.ndarray:
        """df_k/dx (0-based k)."""
        if self.gradients is not None:
            return self.gradients[k][0]
        return diff_x(self.components[k], self.domain.dx)

    def beta(self, k: int) -> np.ndarray:
        """df_k/dy (0-based k)."""
        if self.gradients is not None:
            return self.gradients[k][1]
        return diff_y(self.components[k], self.domain.dy)

    def alphas(self):
        return [self.alpha(k) for k in range(self.n)]

    def betas(self):
        return [self.beta(k) for k in range(self.n)]


@dataclass
class MetricData:
    """First fundamental form coefficients; hatted flavor under 'split'.

    In the split signature the data is only meaningful where the spacelike
    condition E*G - F^2 > 0 holds; ``mask`` records validity and ``omega``
    is NaN-free (zeroed) outside it.
    """

    signature: str
    domain: GridDomain
    E: np.ndarray
    F: np.ndarray
    G: np.ndarray
    omega: np.ndarray
    mask: np.ndarray

    @property
    def invalid_nodes(self):
        return np.argwhere(~self.mask)


@dataclass
class JacobianData:
    domain: GridDomain
    pairs: dict  # {(i, j): array}, 1-based component indices, i < j
    norm: np.ndarray
    theta: np.ndarray
    violations: np.ndarray = field(default=None)  # nodes with ||J|| >= 1

    @property
    def has_positive_area_angle(self):
        return self.violations is None or len(self.violations) == 0


@dataclass
class PotentialResult:
    potential: ScalarField
    closedness_residual: ScalarField
    basepoint: tuple  # (ix, iy)


def first_fundamental_form(h: HeightMap, signature: str = "euclidean") -> MetricData:
    """Metric coefficients of the graph of ``h`` in either ambient signature."""
    if signature not in ("euclidean", "split"):
        raise ValidationError(f"unknown signature {signature!r}")
    alphas, betas = h.alphas(), h.betas()
    sa2 = sum(a * a for a in alphas)
    sab = sum(a * b for a, b in zip(alphas, betas))
    sb2 = sum(b * b for b in betas)
    if signature == "euclidean":
        E, F, G = 1.0 + sa2, sab, 1.0 + sb2
    else:
        E, F, G = 1.0 - sa2, -sab, 1.0 - sb2
    disc = E * G - F * F
    mask = disc > 0
    omega = np.sqrt(np.where(mask, disc, 0.0))
    if signature == "euclidean" and not mask.all():
        # cannot happen analytically (EG - F^2 >= 1); numerical garbage in
        raise ValidationError("euclidean metric with non-positive discriminant")
    return MetricData(signature, h.domain, E, F, G, omega, mask)


def jacobian_data(h: HeightMap) -> JacobianData:
    """All pairwise Jacobians, their norm and the area-angle field.

    ||J|| >= 1 nodes are recorded in ``violations`` rather than raised:
    callers that require a positive area-angle decide fatality.
    """
    alphas, betas = h.alphas(), h.betas()
    pairs = {}
    for i in range(h.n):
        for j in range(i + 1, h.n):
            pairs[(i + 1, j + 1)] = alphas[i] * betas[j] - alphas[j] * betas[i]
    if pairs:
        norm = np.sqrt(sum(J * J for J in pairs.values()))
    else:
        norm = np.zeros(h.domain.shape)
    theta = np.arccos(np.minimum(norm, 1.0))
    violations = np.argwhere(norm >= 1.0)
    return JacobianData(h.domain, pairs, norm, theta, violations)


def closedness_residual_field(P: np.ndarray, Q: np.ndarray, domain: GridDomain):
    """Pointwise |dP/dy - dQ/dx| of the 1-form P dx + Q dy."""
    return np.abs(diff_y(P, domain.dy) - diff_x(Q, domain.dx))


def integrate_exact_form(
    P: ScalarField,
    Q: ScalarField,
    basepoint: tuple = (0, 0),
    tol: float | None = None,
) -> PotentialResult:
    """Potential u with (u_x, u_y) ~ (P, Q), u(basepoint) = 0.

    Trapezoid integration along the two axis-aligned L-paths from the
    basepoint (x-first and y-first), averaged; averaging symmetrizes the
    O(h^2) error and makes path independence a testable property.

    ``tol``, when given, bounds the max closedness residual on interior
    nodes; beyond it the form is rejected as NOT_CLOSED.
    """
    dom = P.domain
    if Q.domain != dom:
        raise ValidationError("P and Q must share a domain")
    ix, iy = basepoint
    if not (0 <= ix < dom.nx and 0 <= iy < dom.ny):
        raise ValidationError(f"basepoint {basepoint} outside grid")

    res = closedness_residual_field(P.values, Q.values, dom)
    if tol is not None and res[1:-1, 1:-1].max() > tol:
        raise NotClosed(
            f"max closedness residual {res[1:-1, 1:-1].max():.3e} > tol {tol:.3e}"
        )

    cumx = cumulative_trapezoid(P.values, dx=dom.dx, axis=1, initial=0.0)
    cumx -= cumx[:, ix][:, None]
    cumy = cumulative_trapezoid(Q.values, dx=dom.dy, axis=0, initial=0.0)
    cumy -= cumy[iy, :][None, :]

    u_xfirst = cumx[iy, :][None, :] + cumy
    u_yfirst = cumy[:, ix][:, None] + cumx
    u = 0.5 * (u_xfirst + u_yfirst)
    u[iy, ix] = 0.0  # exact by construction; enforce against rounding
    return PotentialResult(
        ScalarField(dom, u), ScalarField(dom, res), (ix, iy)
    )
