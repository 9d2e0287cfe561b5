"""Residual evaluators for the minimal and maximal surface systems.

These are the correctness oracles every other module calls: the
quasilinear second-order forms, the divergence-zero forms, and the two
closedness identities of the metric-over-area fields.

Boundary nodes are excluded from max/l2 aggregation (one-sided second
derivatives are noisier); the residual fields still cover the full grid.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .fields import (
    GridDomain,
    HeightMap,
    MetricData,
    diff_x,
    diff_y,
    first_fundamental_form,
)


def _second_derivatives(h: HeightMap, k: int):
    """(f_xx, f_xy, f_yy) of component k, differentiating the gradient
    fields so analytic first derivatives are honored when present."""
    dom = h.domain
    a, b = h.alpha(k), h.beta(k)
    return diff_x(a, dom.dx), diff_y(a, dom.dy), diff_y(b, dom.dy)


@dataclass
class ResidualReport:
    op: str
    signature: str
    fields: list  # raw residual per component
    scale: np.ndarray  # nodewise scaling divisor
    domain: GridDomain
    normalization: str = "scaled"
    mask: np.ndarray | None = None  # nodes included in aggregation (interior)

    def _agg_mask(self):
        m = np.zeros(self.domain.shape, dtype=bool)
        m[1:-1, 1:-1] = True
        if self.mask is not None:
            m &= self.mask
        return m

    def _values(self, normalization):
        if normalization == "raw":
            return self.fields
        if normalization != "scaled":
            raise ValidationError(f"unknown normalization {normalization!r}")
        return [f / self.scale for f in self.fields]

    def max_abs(self, normalization=None):
        m = self._agg_mask()
        if not m.any():
            raise ValidationError("no interior nodes left to aggregate")
        vals = self._values(normalization or self.normalization)
        return max(float(np.abs(v[m]).max()) for v in vals)

    def l2(self, normalization=None):
        m = self._agg_mask()
        if not m.any():
            raise ValidationError("no interior nodes left to aggregate")
        vals = self._values(normalization or self.normalization)
        return float(
            np.sqrt(sum(np.mean(np.square(v[m])) for v in vals) / len(vals))
        )

    def to_report(self):
        dom = self.domain
        return {
            "op": self.op,
            "signature": self.signature,
            "max_abs": self.max_abs(),
            "l2": self.l2(),
            "normalization": self.normalization,
            "excluded_boundary": True,
            "grid": {"nx": dom.nx, "ny": dom.ny, "dx": dom.dx, "dy": dom.dy},
        }


def _residual_scale(metric: MetricData, seconds):
    """(E + G) * max(1, ||second derivatives||_inf) nodewise.

    E + G is clamped away from 0 so split-signature data near the light
    cone cannot blow the scaled residual up to inf.
    """
    m = np.ones(metric.domain.shape)
    for fxx, fxy, fyy in seconds:
        m = np.maximum(m, np.abs(fxx))
        m = np.maximum(m, np.abs(fxy))
        m = np.maximum(m, np.abs(fyy))
    return np.maximum(np.abs(metric.E + metric.G), 1e-12) * m


def minimal_residual(f: HeightMap, normalization="scaled") -> ResidualReport:
    """G f_xx - 2 F f_xy + E f_yy per component."""
    metric = first_fundamental_form(f, "euclidean")
    seconds = [_second_derivatives(f, k) for k in range(f.n)]
    fields = [
        metric.G * fxx - 2.0 * metric.F * fxy + metric.E * fyy
        for fxx, fxy, fyy in seconds
    ]
    return ResidualReport(
        "minimal_residual",
        "euclidean",
        fields,
        _residual_scale(metric, seconds),
        f.domain,
        normalization,
    )


def maximal_residual(g: HeightMap, normalization="scaled") -> ResidualReport:
    """Hatted quasilinear form; non-spacelike nodes are masked out of the
    aggregates instead of raising."""
    metric = first_fundamental_form(g, "split")
    seconds = [_second_derivatives(g, k) for k in range(g.n)]
    fields = [
        metric.G * gxx - 2.0 * metric.F * gxy + metric.E * gyy
        for gxx, gxy, gyy in seconds
    ]
    return ResidualReport(
        "maximal_residual",
        "split",
        fields,
        _residual_scale(metric, seconds),
        g.domain,
        normalization,
        mask=metric.mask,
    )


def divergence_residual(f: HeightMap, normalization="scaled") -> ResidualReport:
    """d/dx((G a_k - F b_k)/w) + d/dy((E b_k - F a_k)/w)."""
    dom = f.domain
    metric = first_fundamental_form(f, "euclidean")
    E, F, G, w = metric.E, metric.F, metric.G, metric.omega
    fields = []
    for k in range(f.n):
        a, b = f.alpha(k), f.beta(k)
        fields.append(
            diff_x((G * a - F * b) / w, dom.dx) + diff_y((E * b - F * a) / w, dom.dy)
        )
    seconds = [_second_derivatives(f, k) for k in range(f.n)]
    return ResidualReport(
        "divergence_residual",
        "euclidean",
        fields,
        _residual_scale(metric, seconds),
        dom,
        normalization,
    )


def closedness_identities(
    f: HeightMap, signature="euclidean", normalization="scaled"
) -> ResidualReport:
    """|d/dx(G/w) - d/dy(F/w)| and |d/dx(F/w) - d/dy(E/w)| (hatted under split)."""
    dom = f.domain
    metric = first_fundamental_form(f, signature)
    w = np.where(metric.mask, metric.omega, np.inf)  # masked nodes contribute 0
    E, F, G = metric.E / w, metric.F / w, metric.G / w
    fields = [
        np.abs(diff_x(G, dom.dx) - diff_y(F, dom.dy)),
        np.abs(diff_x(F, dom.dx) - diff_y(E, dom.dy)),
    ]
    seconds = [_second_derivatives(f, k) for k in range(f.n)]
    scale = _residual_scale(metric, seconds)
    return ResidualReport(
        "closedness_identities",
        signature,
        fields,
        scale,
        dom,
        normalization,
        mask=metric.mask,
    )
