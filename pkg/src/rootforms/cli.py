"""Command-line interface.

Subcommands: reduce, rootform, dist, qt, grid, voronoi. File-processing
commands parallelise per record with worker threads capped by the
LATTICE_THREADS environment variable; results are merged in input order, so
output bytes are identical for any thread count. All numbers print with 12
significant digits.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor

from .errors import LatticeError, ParseError
from .lattice import (
    Basis2,
    Vec2,
    MAX_ITER,
    NEG_TOL,
    conorms,
    oriented_root_form,
    reduce_to_obtuse,
    root_form,
    root_form_from_values,
    superbase_from_basis,
)
from .metrics import root_metric, root_metric_oriented
from .projection import to_quotient_triangle_oriented
from .records import (
    GridSpec,
    LatticeRecord,
    accumulate_grid,
    emit_grid,
    format_number as fmt,
    parse_record_line,
    project_to_2d,
)
from .voronoi import voronoi_domain, voronoi_vectors


def _worker_count() -> int:
    env = os.environ.get("LATTICE_THREADS")
    if env:
        try:
            n = int(env)
            if n >= 1:
                return n
        except ValueError:
            pass
    return os.cpu_count() or 1


def _map_in_order(fn, items):
    """Apply a pure function to every item, preserving input order."""
    workers = _worker_count()
    if workers == 1 or len(items) < 2:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _parse_floats(text: str, count: int, what: str) -> tuple[float, ...]:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != count:
        raise LatticeError(f"{what} needs {count} comma-separated numbers, got {len(parts)}")
    try:
        return tuple(float(p) for p in parts)
    except ValueError:
        raise LatticeError(f"{what}: non-numeric value in {text!r}") from None


def _basis_from_flag(text: str) -> Basis2:
    x1, y1, x2, y2 = _parse_floats(text, 4, "--basis")
    return Basis2(Vec2(x1, y1), Vec2(x2, y2))


def _parse_q(text: str) -> float:
    t = text.strip().lower()
    if t in ("inf", "+inf", "infinity"):
        return math.inf
    try:
        return float(t)
    except ValueError:
        raise LatticeError(f"--q must be a number >= 1 or 'inf', got {text!r}") from None


def _read_records(path: str, lenient: bool) -> list[LatticeRecord]:
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    out: list[LatticeRecord] = []
    for i, line in enumerate(text.splitlines(), start=1):
        try:
            rec = parse_record_line(line, i)
        except ParseError as exc:
            if not lenient:
                raise
            print(f"warning: skipped {exc}", file=sys.stderr)
            continue
        if rec is not None:
            out.append(rec)
    return out


def _process_records(recs, fn, lenient: bool):
    """Run fn over records in order; errors skip (lenient) or abort."""

    def safe(rec):
        try:
            return fn(rec)
        except LatticeError as exc:
            if lenient:
                return exc
            raise LatticeError(f"record {rec.id!r} (line {rec.line}): {exc}") from exc

    results = []
    for rec, res in zip(recs, _map_in_order(safe, recs)):
        if isinstance(res, LatticeError):
            print(f"warning: skipped record {rec.id!r} (line {rec.line}): {res}", file=sys.stderr)
        else:
            results.append(res)
    return results


def _write_text(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="ascii", newline="\n") as fh:
            fh.write(text)


def _cmd_reduce(args) -> int:
    basis = _basis_from_flag(args.basis)
    obt = reduce_to_obtuse(superbase_from_basis(basis), args.tol, args.max_iter)
    rf = root_form(obt)
    _, sign = oriented_root_form(basis, args.tol, args.max_iter)
    p = [max(v, 0.0) for v in conorms(obt)]
    cells = [obt.v0.x, obt.v0.y, obt.v1.x, obt.v1.y, obt.v2.x, obt.v2.y, *p, *rf]
    print("v0x,v0y,v1x,v1y,v2x,v2y,p12,p01,p02,r12,r01,r02,sign,steps")
    print(",".join([*(fmt(c) for c in cells), sign.value, str(obt.reduction_steps)]))
    return 0


def _record_forms(rec: LatticeRecord):
    basis = project_to_2d(rec)
    orf, sign = oriented_root_form(basis)
    return rec.id, orf, sign


def _cmd_rootform(args) -> int:
    recs = _read_records(args.input, args.lenient)
    rows = _process_records(recs, _record_forms, args.lenient)
    lines = ["id,r12,r01,r02,sign"]
    for rec_id, orf, sign in rows:
        triple = tuple(orf) if args.oriented else tuple(sorted(orf))
        lines.append(",".join([rec_id, *(fmt(v) for v in triple), sign.value]))
    _write_text(args.output, "\n".join(lines) + "\n")
    return 0


def _cmd_dist(args) -> int:
    q = _parse_q(args.q)
    if (args.rf is None) != (args.rf2 is None) or (args.basis is None) != (args.basis2 is None):
        raise LatticeError("provide both --rf and --rf2, or both --basis and --basis2")
    if args.rf is not None and args.basis is not None:
        raise LatticeError("choose either root-form or basis inputs, not both")
    if args.rf is not None:
        a = _parse_floats(args.rf, 3, "--rf")
        b = _parse_floats(args.rf2, 3, "--rf2")
        if not args.oriented:
            a = root_form_from_values(*a)
            b = root_form_from_values(*b)
    elif args.basis is not None:
        orf_a, _ = oriented_root_form(_basis_from_flag(args.basis))
        orf_b, _ = oriented_root_form(_basis_from_flag(args.basis2))
        a, b = tuple(orf_a), tuple(orf_b)
    else:
        raise LatticeError("provide --rf/--rf2 or --basis/--basis2")
    d = root_metric_oriented(a, b, q) if args.oriented else root_metric(a, b, q)
    print(fmt(d))
    return 0


def _cmd_qt(args) -> int:
    recs = _read_records(args.input, args.lenient)
    rows = _process_records(recs, _record_forms, args.lenient)
    lines = ["id,x,y"]
    for rec_id, orf, sign in rows:
        pt = to_quotient_triangle_oriented(orf, sign)
        x = pt.signed_x if args.signed else pt.x
        lines.append(",".join([rec_id, fmt(x), fmt(pt.y)]))
    _write_text(args.output, "\n".join(lines) + "\n")
    return 0


_GRID_DEFAULTS = {
    "rootpair": (0.0, 25.0, 0.0, 25.0),
    "qt": (0.0, 0.5, 0.0, 1.0 / 3.0),
}


def _cmd_grid(args) -> int:
    recs = _read_records(args.input, args.lenient)
    rows = _process_records(recs, _record_forms, args.lenient)
    if args.mode == "rootpair":
        points = [(sorted(orf)[1], sorted(orf)[2]) for _, orf, _ in rows]
    else:
        points = []
        for _, orf, sign in rows:
            pt = to_quotient_triangle_oriented(orf, sign)
            points.append((pt.x, pt.y))
    dx0, dx1, dy0, dy1 = _GRID_DEFAULTS[args.mode]
    spec = GridSpec(
        args.xmin if args.xmin is not None else dx0,
        args.xmax if args.xmax is not None else dx1,
        args.ymin if args.ymin is not None else dy0,
        args.ymax if args.ymax is not None else dy1,
        args.res,
    )
    grid = accumulate_grid(points, spec)
    with open(args.output, "wb") as fh:
        fh.write(emit_grid(grid, "csv"))
    if args.pgm:
        with open(args.pgm, "wb") as fh:
            fh.write(emit_grid(grid, "pgm"))
    return 0


def _cmd_voronoi(args) -> int:
    basis = _basis_from_flag(args.basis)
    vvs = voronoi_vectors(basis)
    poly = voronoi_domain(basis)
    lines = ["c1,c2,x,y,strict"]
    for v in vvs:
        lines.append(
            ",".join(
                [str(v.coeffs[0]), str(v.coeffs[1]), fmt(v.vector.x), fmt(v.vector.y),
                 "true" if v.strict else "false"]
            )
        )
    lines.append("")
    lines.append("x,y")
    for p in poly.vertices:
        lines.append(f"{fmt(p.x)},{fmt(p.y)}")
    print("\n".join(lines))
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rootforms",
        description="Isometry invariants, metrics and density maps of 2D lattices.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("reduce", help="obtuse superbase, conorms, root form of one basis")
    p.add_argument("--basis", required=True, metavar="X1,Y1,X2,Y2")
    p.add_argument("--tol", type=float, default=NEG_TOL,
                   help="relative conorm negativity tolerance")
    p.add_argument("--max-iter", type=int, default=MAX_ITER)
    p.set_defaults(func=_cmd_reduce)

    p = sub.add_parser("rootform", help="root forms of a record file")
    p.add_argument("-i", "--input", required=True)
    p.add_argument("-o", "--output", default=None, help="output CSV (default stdout)")
    p.add_argument("--oriented", action="store_true",
                   help="emit the cyclic-canonical oriented triple")
    p.add_argument("--lenient", action="store_true")
    p.set_defaults(func=_cmd_rootform)

    p = sub.add_parser("dist", help="root metric between two lattices")
    p.add_argument("--q", required=True, help="Minkowski order (>= 1 or 'inf')")
    p.add_argument("--rf", metavar="A12,A01,A02")
    p.add_argument("--rf2", metavar="B12,B01,B02")
    p.add_argument("--basis", metavar="X1,Y1,X2,Y2")
    p.add_argument("--basis2", metavar="X1,Y1,X2,Y2")
    p.add_argument("--oriented", action="store_true")
    p.set_defaults(func=_cmd_dist)

    p = sub.add_parser("qt", help="quotient-triangle coordinates of a record file")
    p.add_argument("-i", "--input", required=True)
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--signed", action="store_true",
                   help="negate x for negative (mirror) lattices")
    p.add_argument("--lenient", action="store_true")
    p.set_defaults(func=_cmd_qt)

    p = sub.add_parser("grid", help="density grid over root pairs or QT points")
    p.add_argument("-i", "--input", required=True)
    p.add_argument("-o", "--output", required=True, help="output CSV path")
    p.add_argument("--pgm", default=None, help="also write a binary PGM image")
    p.add_argument("--xmin", type=float, default=None)
    p.add_argument("--xmax", type=float, default=None)
    p.add_argument("--ymin", type=float, default=None)
    p.add_argument("--ymax", type=float, default=None)
    p.add_argument("--res", type=int, default=200)
    p.add_argument("--mode", choices=("rootpair", "qt"), default="rootpair")
    p.add_argument("--lenient", action="store_true")
    p.set_defaults(func=_cmd_grid)

    p = sub.add_parser("voronoi", help="Voronoi vectors and domain of one basis")
    p.add_argument("--basis", required=True, metavar="X1,Y1,X2,Y2")
    p.set_defaults(func=_cmd_voronoi)

    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:  # LatticeError and friends
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
