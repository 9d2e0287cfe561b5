"""GFIELD text format: the grid-field file every module and the CLI share.

Layout::

    GFIELD 1
    nx ny ncomp
    x0 y0 dx dy
    <ncomp blocks, each ny lines of nx decimals, y ascending per block>

Values are written with 17 significant digits, which round-trips IEEE
doubles exactly.
"""

from __future__ import annotations

import numpy as np

from .errors import ValidationError
from .fields import GridDomain, HeightMap


def _fmt(v: float) -> str:
    return format(float(v), ".17g")


def write_gfield(path, domain: GridDomain, components) -> None:
    components = [np.asarray(c, dtype=float) for c in components]
    for c in components:
        if c.shape != domain.shape:
            raise ValidationError("component shape mismatch")
    with open(path, "w") as fh:
        fh.write("GFIELD 1\n")
        fh.write(f"{domain.nx} {domain.ny} {len(components)}\n")
        fh.write(
            f"{_fmt(domain.x0)} {_fmt(domain.y0)} {_fmt(domain.dx)} {_fmt(domain.dy)}\n"
        )
        for c in components:
            for row in c:  # y ascending: row 0 is y0
                fh.write(" ".join(_fmt(v) for v in row) + "\n")


def read_gfield(path):
    """Returns (GridDomain, [arrays])."""
    with open(path) as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    if not lines or lines[0].split() != ["GFIELD", "1"]:
        raise ValidationError(f"{path}: not a GFIELD 1 file")
    try:
        nx, ny, ncomp = (int(t) for t in lines[1].split())
        x0, y0, dx, dy = (float(t) for t in lines[2].split())
    except (IndexError, ValueError) as exc:
        raise ValidationError(f"{path}: malformed header") from exc
    domain = GridDomain(x0, y0, dx, dy, nx, ny)
    expected = 3 + ncomp * ny
    if len(lines) != expected:
        raise ValidationError(
            f"{path}: expected {expected} lines, found {len(lines)}"
        )
    comps = []
    pos = 3
    for _ in range(ncomp):
        block = np.array(
            [[float(t) for t in lines[pos + j].split()] for j in range(ny)]
        )
        if block.shape != (ny, nx):
            raise ValidationError(f"{path}: block shape mismatch")
        comps.append(block)
        pos += ny
    return domain, comps


def read_heightmap(path) -> HeightMap:
    domain, comps = read_gfield(path)
    return HeightMap(domain, comps)


def write_heightmap(path, h: HeightMap) -> None:
    write_gfield(path, h.domain, h.components)
