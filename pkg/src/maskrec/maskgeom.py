"""Binary masks on the time-frequency torus: construction, geometry, errors.

Conventions: masks are boolean n x n arrays indexed ``cells[x, xi]`` (time,
frequency).  Measure counts cells times the cell measure 1/n.  The perimeter
counts boundary edges in the 4-neighborhood times the cell side 1/sqrt(n);
this edge-count convention is exact for axis-aligned sets and overshoots the
Euclidean length of smooth curves by at most a factor sqrt(2) (4/pi for a
disc).  Distances between cells are center-to-center torus distances in
continuous units.  Neighborhoods of a set use a strict inequality
``dist < r``; containment-radius comparisons are non-strict so that a
reported radius certifies containment at that exact value.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.ndimage import distance_transform_edt

from .errors import ConfigurationError, DimensionError
from .tfcore import TFGrid


@dataclass(frozen=True)
class Mask:
    """A binary region of the time-frequency plane."""

    cells: np.ndarray
    grid: TFGrid

    def __post_init__(self) -> None:
        cells = np.asarray(self.cells, dtype=bool)
        if cells.shape != (self.grid.n, self.grid.n):
            raise DimensionError(
                f"mask shape {cells.shape} does not match grid {self.grid.n}"
            )
        object.__setattr__(self, "cells", cells)


def measure(mask: Mask) -> float:
    """Plane measure of the mask: (number of cells) / n."""
    return float(np.count_nonzero(mask.cells)) * mask.grid.cell_measure


def perimeter(mask: Mask) -> float:
    """Boundary length: 4-neighborhood edge count on the torus times 1/sqrt(n)."""
    cells = mask.cells
    edges = 0
    for axis in (0, 1):
        edges += int(np.count_nonzero(cells != np.roll(cells, 1, axis=axis)))
    return edges * mask.grid.cell_side


def boundary_cells(mask: Mask) -> np.ndarray:
    """Cells of the mask adjacent to at least one cell outside it."""
    cells = mask.cells
    outside_neighbor = np.zeros_like(cells)
    for axis in (0, 1):
        for shift in (1, -1):
            outside_neighbor |= ~np.roll(cells, shift, axis=axis)
    return cells & outside_neighbor


def distance_field(source: np.ndarray, grid: TFGrid) -> np.ndarray:
    """Exact Euclidean torus distance from every cell to the source set.

    Returns distances in continuous units; +inf everywhere if the source is
    empty.  The torus metric is obtained by running the exact Euclidean
    distance transform on a 3 x 3 tiling, which captures every minimal
    image.
    """
    source = np.asarray(source, dtype=bool)
    n = grid.n
    if source.shape != (n, n):
        raise DimensionError("source shape does not match grid")
    if not source.any():
        return np.full((n, n), np.inf)
    tiled = np.tile(~source, (3, 3))
    dist = distance_transform_edt(tiled)
    return dist[n : 2 * n, n : 2 * n] * grid.cell_side


def boundary_neighborhood(mask: Mask, r: float) -> np.ndarray:
    """Cells whose torus distance to the mask's boundary cells is < r."""
    if r < 0:
        raise ConfigurationError(f"neighborhood radius must be >= 0, got {r}")
    return distance_field(boundary_cells(mask), mask.grid) < r


def dilate(mask: Mask, r: float) -> Mask:
    """Open r-neighborhood of the mask (the mask itself is always included)."""
    if r < 0:
        raise ConfigurationError(f"dilation radius must be >= 0, got {r}")
    grown = mask.cells | (distance_field(mask.cells, mask.grid) < r)
    return Mask(cells=grown, grid=mask.grid)


@dataclass(frozen=True)
class ErrorReport:
    """Error metrics between a true mask and an estimate."""

    sym_diff_measure: float
    perimeter: float
    containment_radius: float
    ratio: float


def _estimate_cells(estimate) -> np.ndarray:
    cells = getattr(estimate, "cells", estimate)
    return np.asarray(cells, dtype=bool)


def error_report(truth: Mask, estimate) -> ErrorReport:
    """Compare an estimate (a Mask, a mask estimate, or a bool array) to truth.

    ``containment_radius`` is the largest torus distance from an error cell
    to the boundary cells of the truth: 0 for a perfect estimate, +inf when
    the truth has no boundary but the error set is non-empty.  An error set
    lying exactly on boundary cells is floored at half a cell side so that
    a zero radius certifies a perfect estimate.  ``ratio`` is the error
    measure over the truth perimeter (+inf for a zero perimeter with a
    non-empty error set, 0 for a perfect estimate).
    """
    est = _estimate_cells(estimate)
    if est.shape != truth.cells.shape:
        raise DimensionError("estimate shape does not match the truth mask")
    err = truth.cells ^ est
    sym = float(np.count_nonzero(err)) * truth.grid.cell_measure
    perim = perimeter(truth)
    if not err.any():
        radius = 0.0
    else:
        dist = distance_field(boundary_cells(truth), truth.grid)
        radius = max(float(dist[err].max()), 0.5 * truth.grid.cell_side)
    if sym == 0.0:
        ratio = 0.0
    elif perim == 0.0:
        ratio = np.inf
    else:
        ratio = sym / perim
    return ErrorReport(
        sym_diff_measure=sym,
        perimeter=perim,
        containment_radius=radius,
        ratio=ratio,
    )


# ---------------------------------------------------------------------------
# Mask construction


def _cell_distances_sq(grid: TFGrid, center: tuple[float, float]) -> np.ndarray:
    """Squared torus distance (in cells) from each cell to an arbitrary center."""
    n = grid.n
    i = np.arange(n, dtype=float)
    dx = np.abs(i - center[0])
    dx = np.minimum(dx, n - dx)
    df = np.abs(i - center[1])
    df = np.minimum(df, n - df)
    return dx[:, None] ** 2 + df[None, :] ** 2


def _closest_cells(grid: TFGrid, center: tuple[float, float], count: int) -> np.ndarray:
    d2 = _cell_distances_sq(grid, center).ravel()
    # stable sort keeps the tie-breaking order deterministic
    order = np.argsort(d2, kind="stable")
    cells = np.zeros(grid.n * grid.n, dtype=bool)
    cells[order[:count]] = True
    return cells.reshape(grid.n, grid.n)


def disc_mask(grid: TFGrid, target_measure: float, center: tuple[float, float] | None = None) -> Mask:
    """Disc of the given measure, built by torus-distance thresholding.

    The resulting measure is within one cell of the target.
    """
    if target_measure < 0 or target_measure > grid.plane_measure:
        raise ConfigurationError(
            f"disc measure {target_measure} outside [0, {grid.plane_measure}]"
        )
    if center is None:
        center = (grid.n / 2, grid.n / 2)
    count = int(round(target_measure * grid.n))
    return Mask(cells=_closest_cells(grid, center, count), grid=grid)


def rect_mask(grid: TFGrid, x0: int, f0: int, width: int, height: int) -> Mask:
    """Axis-aligned rectangle of width x height cells with corner (x0, f0)."""
    if width < 0 or height < 0:
        raise ConfigurationError("rectangle sides must be non-negative")
    if width > grid.n or height > grid.n:
        raise ConfigurationError("rectangle exceeds the grid")
    cells = np.zeros((grid.n, grid.n), dtype=bool)
    xs = (x0 + np.arange(width)) % grid.n
    fs = (f0 + np.arange(height)) % grid.n
    cells[np.ix_(xs, fs)] = True
    return Mask(cells=cells, grid=grid)


def annulus_mask(
    grid: TFGrid,
    target_measure: float,
    hole_measure: float,
    center: tuple[float, float] | None = None,
) -> Mask:
    """Annulus: a disc of measure (target + hole) minus the inner disc."""
    if hole_measure < 0 or target_measure < 0:
        raise ConfigurationError("annulus measures must be non-negative")
    outer = disc_mask(grid, target_measure + hole_measure, center)
    inner = disc_mask(grid, hole_measure, center)
    return Mask(cells=outer.cells & ~inner.cells, grid=grid)


def union_of_discs(grid: TFGrid, discs: list[tuple[tuple[float, float], float]]) -> Mask:
    """Union of discs given as (center, measure) pairs; overlaps are not compensated."""
    cells = np.zeros((grid.n, grid.n), dtype=bool)
    for center, m in discs:
        cells |= disc_mask(grid, m, center).cells
    return Mask(cells=cells, grid=grid)


_KV_RE = re.compile(r"^\s*([A-Za-z_][A-Za-z_0-9]*)\s*=\s*([^,]+?)\s*$")


def _parse_kv(body: str) -> dict[str, float]:
    params: dict[str, float] = {}
    if not body:
        return params
    for item in body.split(","):
        m = _KV_RE.match(item)
        if not m:
            raise ConfigurationError(f"cannot parse shape parameter {item!r}")
        params[m.group(1)] = float(m.group(2))
    return params


def make_mask(grid: TFGrid, spec: str) -> Mask:
    """Build a mask from a shape spec string.

    Supported forms (parameters are ``key=value`` pairs):

    - ``full`` / ``empty``
    - ``disc:measure=100`` with optional ``cx=..,cf=..`` (cell coordinates)
    - ``rect:x0=0,f0=0,w=8,h=4``
    - ``annulus:measure=8,hole=2`` with optional center
    - ``discs:(cx=..,cf=..,measure=..)+(...)`` for a union of discs
    - ``image:PATH`` to load a PGM file (see :func:`read_mask_pgm`)
    - ``not:SPEC`` for the complement of any of the above
    """
    spec = spec.strip()
    if spec.startswith("not:"):
        inner = make_mask(grid, spec[4:])
        return Mask(cells=~inner.cells, grid=grid)
    kind, _, body = spec.partition(":")
    kind = kind.strip().lower()
    if kind == "full":
        return Mask(cells=np.ones((grid.n, grid.n), bool), grid=grid)
    if kind == "empty":
        return Mask(cells=np.zeros((grid.n, grid.n), bool), grid=grid)
    if kind == "image":
        return read_mask_pgm(body.strip(), grid)
    if kind == "disc":
        p = _parse_kv(body)
        if "measure" not in p:
            raise ConfigurationError("disc spec requires measure=")
        center = (p["cx"], p["cf"]) if "cx" in p or "cf" in p else None
        if center is not None and ("cx" not in p or "cf" not in p):
            raise ConfigurationError("disc center requires both cx= and cf=")
        return disc_mask(grid, p["measure"], center)
    if kind == "rect":
        p = _parse_kv(body)
        try:
            return rect_mask(grid, int(p["x0"]), int(p["f0"]), int(p["w"]), int(p["h"]))
        except KeyError as exc:
            raise ConfigurationError(f"rect spec missing {exc}") from exc
    if kind == "annulus":
        p = _parse_kv(body)
        if "measure" not in p:
            raise ConfigurationError("annulus spec requires measure=")
        center = (p["cx"], p["cf"]) if "cx" in p else None
        return annulus_mask(grid, p["measure"], p.get("hole", 0.0), center)
    if kind == "discs":
        discs = []
        for part in body.split("+"):
            part = part.strip()
            if not (part.startswith("(") and part.endswith(")")):
                raise ConfigurationError(f"bad union-of-discs term {part!r}")
            p = _parse_kv(part[1:-1])
            discs.append(((p["cx"], p["cf"]), p["measure"]))
        return union_of_discs(grid, discs)
    raise ConfigurationError(f"unknown shape spec {spec!r}")


def scaled_shape_spec(spec: str, target_measure: float) -> str:
    """Rewrite the measure parameter of a disc/annulus spec (used by sweeps)."""
    kind, _, body = spec.partition(":")
    if kind.strip().lower() not in ("disc", "annulus"):
        raise ConfigurationError(
            f"measure sweeps need a disc or annulus shape, got {spec!r}"
        )
    params = _parse_kv(body)
    params["measure"] = target_measure
    body = ",".join(f"{k}={v:g}" for k, v in params.items())
    return f"{kind}:{body}"


# ---------------------------------------------------------------------------
# PGM serialization (binary P5, one byte per cell, 255 = inside the mask;
# row = time index, column = frequency index)


def write_mask_pgm(path: str | Path, mask: Mask) -> None:
    data = np.where(mask.cells, 255, 0).astype(np.uint8)
    _write_pgm(path, data)


def write_field_pgm(path: str | Path, values: np.ndarray, max_value: float | None = None) -> float:
    """Quantize a non-negative field linearly to 8 bits and write it as P5.

    Returns the maximum used for quantization so callers can record it in a
    sidecar file and invert the image to band precision.
    """
    values = np.asarray(values, dtype=float)
    if max_value is None:
        max_value = float(values.max()) if values.size else 0.0
    if max_value <= 0:
        data = np.zeros(values.shape, dtype=np.uint8)
    else:
        data = np.clip(np.round(values / max_value * 255.0), 0, 255).astype(np.uint8)
    _write_pgm(path, data)
    return max_value


def _write_pgm(path: str | Path, data: np.ndarray) -> None:
    height, width = data.shape
    with open(path, "wb") as fh:
        fh.write(f"P5\n{width} {height}\n255\n".encode("ascii"))
        fh.write(data.tobytes())


def read_mask_pgm(path: str | Path, grid: TFGrid | None = None) -> Mask:
    """Read a binary P5 image back into a mask (values >= 128 count as inside)."""
    raw = Path(path).read_bytes()
    if not raw.startswith(b"P5"):
        raise ConfigurationError(f"{path}: not a binary P5 PGM file")
    # header = magic, width, height, maxval; tokens may be separated by
    # arbitrary whitespace and #-comments
    tokens: list[bytes] = []
    pos = 2
    while len(tokens) < 3:
        while pos < len(raw) and raw[pos : pos + 1].isspace():
            pos += 1
        if raw[pos : pos + 1] == b"#":
            while pos < len(raw) and raw[pos : pos + 1] != b"\n":
                pos += 1
            continue
        start = pos
        while pos < len(raw) and not raw[pos : pos + 1].isspace():
            pos += 1
        tokens.append(raw[start:pos])
    pos += 1  # single whitespace byte after maxval
    width, height, maxval = (int(t) for t in tokens)
    if maxval > 255:
        raise ConfigurationError(f"{path}: 16-bit PGM not supported")
    data = np.frombuffer(raw, dtype=np.uint8, count=width * height, offset=pos)
    cells = data.reshape(height, width) >= 128
    if grid is None:
        if height != width:
            raise DimensionError(f"{path}: mask image must be square")
        grid = TFGrid(height)
    return Mask(cells=cells, grid=grid)
