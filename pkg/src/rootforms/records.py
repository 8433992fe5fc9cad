"""Batch record ingestion, 3D-to-2D projections and density grids.

Record files are UTF-8 text, one record per line:

    id,kind,param1,param2,...

with ``#`` starting a comment and blank lines ignored. Kinds:

- ``basis`` (x1, y1, x2, y2): explicit 2D basis vectors.
- ``cell2`` (a, b, gamma): 2D unit cell, gamma in degrees.
- ``ortho3`` (a, b, c): orthorhombic 3D cell, projected along its longest
  side onto the remaining rectangular 2D cell (sides ascending).
- ``mono3`` (a, b, c, beta): monoclinic 3D cell, projected along the unique
  axis b, leaving the general cell (a, c, beta).

Density grids bin (x, y) points into resolution x resolution pixels with the
floor rule; points exactly on the upper bound land in the last pixel, points
outside the bounds only bump ``overflow_count``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateBasis, InvalidGridSpec, ParseError
from .lattice import Basis2, Vec2

KINDS = {"basis": 4, "cell2": 3, "ortho3": 3, "mono3": 4}

# Angles this close to 0 or 180 degrees make the projected cell degenerate.
ANGLE_TOL_DEG = 1e-9


@dataclass(frozen=True)
class LatticeRecord:
    """One parsed input line; ``line`` is kept for error reporting."""

    id: str
    kind: str
    params: tuple[float, ...]
    line: int = 0


def parse_record_line(text: str, line: int) -> LatticeRecord | None:
    """Parse one line; returns None for blank/comment lines.

    Raises ParseError carrying the line number on malformed input.
    """
    body = text.split("#", 1)[0].strip()
    if not body:
        return None
    fields = [f.strip() for f in body.split(",")]
    if len(fields) < 2:
        raise ParseError(line, "expected id,kind,params...")
    rec_id, kind = fields[0], fields[1]
    if not rec_id:
        raise ParseError(line, "empty record id")
    if kind not in KINDS:
        raise ParseError(line, f"unknown kind {kind!r}")
    arity = KINDS[kind]
    raw = fields[2:]
    if len(raw) != arity:
        raise ParseError(line, f"kind {kind!r} takes {arity} parameters, got {len(raw)}")
    try:
        params = tuple(float(f) for f in raw)
    except ValueError:
        raise ParseError(line, f"non-numeric parameter in {raw}") from None
    if not all(math.isfinite(p) for p in params):
        raise ParseError(line, "non-finite parameter")

    if kind == "cell2":
        _check_lengths(params[:2], line)
        _check_angle(params[2], line)
    elif kind == "ortho3":
        _check_lengths(params, line)
    elif kind == "mono3":
        _check_lengths(params[:3], line)
        _check_angle(params[3], line)
    return LatticeRecord(rec_id, kind, params, line)


def _check_lengths(values, line: int) -> None:
    for v in values:
        if v <= 0.0:
            raise ParseError(line, f"nonpositive length {v:g}")


def _check_angle(angle: float, line: int) -> None:
    if not 0.0 < angle < 180.0:
        raise ParseError(line, f"angle {angle:g} outside (0, 180) degrees")


def parse_records(stream: str) -> list[LatticeRecord]:
    """Parse a whole record file; raises ParseError on the first bad line."""
    records = []
    for i, text in enumerate(stream.splitlines(), start=1):
        rec = parse_record_line(text, i)
        if rec is not None:
            records.append(rec)
    return records


def _cos_sin_deg(angle: float) -> tuple[float, float]:
    """Cosine and sine of an angle in degrees, exact at quadrant multiples."""
    rem = math.fmod(angle, 360.0)
    if rem < 0.0:
        rem += 360.0
    exact = {0.0: (1.0, 0.0), 90.0: (0.0, 1.0), 180.0: (-1.0, 0.0), 270.0: (0.0, -1.0)}
    if rem in exact:
        return exact[rem]
    rad = math.radians(angle)
    return math.cos(rad), math.sin(rad)


def project_to_2d(rec: LatticeRecord) -> Basis2:
    """2D basis of a record, applying the kind's projection rule."""
    p = rec.params
    if rec.kind == "basis":
        return Basis2(Vec2(p[0], p[1]), Vec2(p[2], p[3]))
    if rec.kind == "ortho3":
        keep = sorted(p)[:2]
        return Basis2(Vec2(keep[0], 0.0), Vec2(0.0, keep[1]))
    if rec.kind == "cell2":
        a, b, gamma = p
    else:  # mono3: drop the unique axis length, keep (a, c, beta)
        a, b, gamma = p[0], p[2], p[3]
    if min(gamma, 180.0 - gamma) < ANGLE_TOL_DEG:
        raise DegenerateBasis(f"cell angle {gamma:g} degrees is degenerate")
    cos_g, sin_g = _cos_sin_deg(gamma)
    return Basis2(Vec2(a, 0.0), Vec2(b * cos_g, b * sin_g))


@dataclass(frozen=True)
class GridSpec:
    """Bounds and resolution of a density grid."""

    x_min: float
    x_max: float
    y_min: float
    y_max: float
    resolution: int

    def __post_init__(self):
        vals = (self.x_min, self.x_max, self.y_min, self.y_max)
        if not all(math.isfinite(v) for v in vals):
            raise InvalidGridSpec("grid bounds must be finite")
        if self.x_max <= self.x_min or self.y_max <= self.y_min:
            raise InvalidGridSpec("grid bounds must satisfy max > min on both axes")
        if int(self.resolution) != self.resolution or self.resolution < 1:
            raise InvalidGridSpec(f"resolution must be a positive integer, got {self.resolution}")


@dataclass(frozen=True)
class DensityGrid:
    """Pixel counts over a GridSpec; counts[ix, iy] with ix along x.

    sum(counts) + overflow_count equals the number of ingested points.
    """

    spec: GridSpec
    counts: np.ndarray
    overflow_count: int


def accumulate_grid(points, spec: GridSpec) -> DensityGrid:
    """Bin (x, y) pairs into a DensityGrid with the clamped floor rule."""
    res = spec.resolution
    counts = np.zeros((res, res), dtype=np.int64)
    overflow = 0
    x_span = spec.x_max - spec.x_min
    y_span = spec.y_max - spec.y_min
    for x, y in points:
        if not (spec.x_min <= x <= spec.x_max and spec.y_min <= y <= spec.y_max):
            overflow += 1
            continue
        ix = min(int(math.floor((x - spec.x_min) / x_span * res)), res - 1)
        iy = min(int(math.floor((y - spec.y_min) / y_span * res)), res - 1)
        counts[ix, iy] += 1
    return DensityGrid(spec, counts, overflow)


def format_number(value: float) -> str:
    """12 significant digits, '.' decimal separator, no locale dependence."""
    if value == 0.0:
        value = 0.0  # normalise -0.0
    return format(float(value), ".12g")


def emit_grid(grid: DensityGrid, fmt: str) -> bytes:
    """Serialise a grid as 'csv' or 'pgm' bytes.

    CSV: one header row with the values x_min,x_max,y_min,y_max,resolution,
    then resolution rows of resolution counts, top row = largest y bin.
    PGM: binary P5, same row order, maxval = min(65535, max count) with
    counts scaled linearly when they exceed 65535.
    """
    if fmt == "csv":
        return _emit_csv(grid)
    if fmt == "pgm":
        return _emit_pgm(grid)
    raise ValueError(f"unknown grid format {fmt!r}")


def _rows_top_down(grid: DensityGrid):
    res = grid.spec.resolution
    for iy in range(res - 1, -1, -1):
        yield grid.counts[:, iy]


def _emit_csv(grid: DensityGrid) -> bytes:
    s = grid.spec
    lines = [
        ",".join(
            [format_number(s.x_min), format_number(s.x_max),
             format_number(s.y_min), format_number(s.y_max), str(s.resolution)]
        )
    ]
    for row in _rows_top_down(grid):
        lines.append(",".join(str(int(c)) for c in row))
    return ("\n".join(lines) + "\n").encode("ascii")


def _emit_pgm(grid: DensityGrid) -> bytes:
    res = grid.spec.resolution
    max_count = int(grid.counts.max()) if grid.counts.size else 0
    maxval = min(65535, max(max_count, 1))
    header = f"P5\n{res} {res}\n{maxval}\n".encode("ascii")
    image = np.stack([np.asarray(row) for row in _rows_top_down(grid)])
    if max_count > maxval:
        image = np.rint(image * (maxval / max_count)).astype(np.int64)
    dtype = ">u2" if maxval > 255 else np.uint8
    return header + image.astype(dtype).tobytes()
