"""Command-line interface.

Subcommands generate strip and plane documents, subdivide plane documents
into quadrangle documents, verify documents against the invariant checks,
and render documents to SVG.

Exit codes: 0 success, 1 verification failure, 2 usage or I/O error,
3 generation failure.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys

from . import assembly, document, pipeline, render, verify
from .errors import DocumentError, FairtileError, InvalidParameter
from .geometry import tile_label
from .strip import deviations, strip_tiling

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_USAGE = 2
EXIT_GENERATION = 3

_CHECK_NAMES = ("area", "perimeter", "v2v", "incongruent", "halfturn",
                "contraction", "closeness", "convex", "identity")


class _UsageError(Exception):
    pass


def _thread_cap() -> int | None:
    """Worker-parallelism cap from FAIRTILE_THREADS (all cores when unset).

    Verification sweeps are vectorized and stay within budget on one
    worker, so the cap currently only bounds, never spawns.
    """
    raw = os.environ.get("FAIRTILE_THREADS")
    if raw is None:
        return None
    try:
        value = int(raw)
    except ValueError:
        raise _UsageError(f"FAIRTILE_THREADS must be a positive integer, got {raw!r}")
    if value < 1:
        raise _UsageError(f"FAIRTILE_THREADS must be >= 1, got {value}")
    return value


def _report_dict(r: verify.VerificationReport) -> dict:
    return {
        "check_name": r.check_name,
        "passed": r.passed,
        "worst_residual": r.worst_residual,
        "margin": r.margin,
        "offenders": [list(pair) for pair in r.offenders],
        "tiles_checked": r.tiles_checked,
        "tolerance_used": r.tolerance_used,
        "note": r.note,
        "subchecks": [_report_dict(s) for s in r.subchecks],
    }


def _closeness_dict(c: verify.ClosenessReport) -> dict:
    return {
        "check_name": "closeness",
        "passed": c.passed,
        "epsilon_target": c.epsilon_target,
        "max_coord_deviation": c.max_coord_deviation,
        "reference": c.reference,
        "tiles_checked": c.tiles_checked,
    }


def _print_report(r: verify.VerificationReport) -> None:
    status = "PASS" if r.passed else "FAIL"
    detail = []
    if r.worst_residual is not None:
        detail.append(f"worst residual {r.worst_residual:.3e} (tol {r.tolerance_used:.0e})")
    if r.margin is not None:
        detail.append(f"margin {r.margin:.3e}")
    if r.offenders:
        detail.append("offenders " + ", ".join(f"{a}|{b}" for a, b in r.offenders))
    if r.note:
        detail.append(r.note)
    print(f"[{status}] {r.check_name}: " + ("; ".join(detail) if detail else "ok"))
    for s in r.subchecks:
        _print_report(s)


def _print_closeness(c: verify.ClosenessReport) -> None:
    status = "PASS" if c.passed else "FAIL"
    print(f"[{status}] closeness: max per-coordinate deviation "
          f"{c.max_coord_deviation:.3e} vs bound {2 * c.epsilon_target:.3e} "
          f"({c.reference})")


def _cmd_gen_strip(args) -> int:
    cols = args.cols
    if cols < 1:
        raise _UsageError(f"--cols must be >= 1, got {cols}")
    if args.y0 == "auto":
        rng = random.Random(args.seed)
        y0, tiling = pipeline.sample_certified_y0(rng, cols)
        mode, seed = "auto", args.seed
    else:
        try:
            y0 = float(args.y0)
        except ValueError:
            raise _UsageError(f"--y0 must be a number or 'auto', got {args.y0!r}")
        if not 0.0 < y0 < 1.0:
            raise _UsageError(f"--y0 must lie in (0, 1), got {y0}")
        tiling = strip_tiling(y0, cols)
        mode, seed = "fixed", None
    doc = pipeline.strip_document(tiling, cols, seed=seed, mode=mode)
    document.write_document(doc, args.out)
    print(f"strip document: y0={document.fmt17(y0)}, cols={cols}, "
          f"{len(doc.tiles)} tiles -> {args.out}")
    return EXIT_OK


def _cmd_gen_plane(args) -> int:
    if not 0.0 < args.epsilon <= 0.05:
        raise _UsageError(f"--epsilon must lie in (0, 0.05], got {args.epsilon}")
    # beyond ~16 rows the nested shear intervals drop below the congruence
    # quantum and the finite-precision incongruence certificate saturates
    if not 1 <= args.rows <= 16:
        raise _UsageError(f"--rows must lie in [1, 16], got {args.rows}")
    if not 1 <= args.cols <= 2000:
        raise _UsageError(f"--cols must lie in [1, 2000], got {args.cols}")
    build = pipeline.build_plane(args.epsilon, args.seed, args.rows, args.cols)
    for r in build.reports:
        _print_report(r)
    _print_closeness(build.closeness)
    if not build.passed:
        print("generation failed verification; no document written", file=sys.stderr)
        return EXIT_GENERATION
    doc = pipeline.plane_document(build, args.epsilon, args.seed, args.rows, args.cols)
    document.write_document(doc, args.out)
    print(f"plane document: epsilon={document.fmt17(args.epsilon)}, seed={args.seed}, "
          f"{len(doc.tiles)} tiles -> {args.out}")
    return EXIT_OK


def _cmd_quadify(args) -> int:
    doc = document.read_document(args.infile)
    if doc.kind != "plane":
        raise _UsageError(f"quadify needs a plane document, got kind {doc.kind!r}")
    quads, reports, passed = pipeline.quadify_checked(doc)
    for r in reports:
        _print_report(r)
    if not passed:
        print("quadify refused: input or output failed verification", file=sys.stderr)
        return EXIT_GENERATION
    out_doc = pipeline.quad_document(quads, doc)
    document.write_document(out_doc, args.out)
    print(f"quad document: {len(quads)} tiles -> {args.out}")
    return EXIT_OK


def _default_checks(doc: document.TilingDocument) -> list[str]:
    if doc.kind == "strip":
        checks = ["area", "v2v", "halfturn", "identity"]
        if doc.float_param("y0") <= pipeline.Y0_RANGE[1]:
            checks.append("contraction")
        return checks
    if doc.kind == "plane":
        return ["area", "v2v", "incongruent", "closeness"]
    return ["area", "perimeter", "convex", "incongruent"]


def _run_check(name: str, doc: document.TilingDocument):
    tiles = doc.tiles
    if name == "area":
        if doc.kind == "strip":
            target = 1.0
        elif doc.kind == "plane":
            target = assembly.SQRT3
        else:
            s = doc.float_param("scale")
            target = assembly.SQRT3 * s * s / 3.0
        tol = 1e-10 if doc.kind != "quad" else 1e-9
        return verify.check_equal_area(tiles, target, tol)
    if name == "perimeter":
        return verify.check_equal_perimeter(tiles, doc.float_param("p0"), 1e-9)
    if name == "v2v":
        return verify.check_vertex_to_vertex(tiles, 1e-9)
    if name == "incongruent":
        return verify.check_pairwise_incongruent(tiles, 1e-9)
    if name == "halfturn":
        return verify.check_halfturn_incongruent(tiles, 1e-9)
    if name == "contraction":
        tiling = strip_tiling(doc.float_param("y0"), doc.int_param("cols"))
        return verify.check_contraction(deviations(tiling))
    if name == "identity":
        tiling = strip_tiling(doc.float_param("y0"), doc.int_param("cols"))
        return verify.check_identity(tiling)
    if name == "convex":
        bad = tuple((tile_label(q), tile_label(q))
                    for q in tiles if not verify.check_convex(q))
        return verify.VerificationReport(
            check_name="convex", passed=not bad, worst_residual=None, margin=None,
            offenders=bad[:10], tiles_checked=len(tiles), tolerance_used=1e-12)
    if name == "closeness":
        return verify.check_closeness(tiles, doc.float_param("epsilon"))
    raise _UsageError(f"unknown check {name!r} (choose from {', '.join(_CHECK_NAMES)})")


def _cmd_verify(args) -> int:
    doc = document.read_document(args.infile)
    names = args.check if args.check else _default_checks(doc)
    for name in names:
        if name not in _CHECK_NAMES:
            raise _UsageError(f"unknown check {name!r} (choose from {', '.join(_CHECK_NAMES)})")
    results = [_run_check(name, doc) for name in names]
    payload = []
    ok = True
    for res in results:
        if isinstance(res, verify.ClosenessReport):
            _print_closeness(res)
            payload.append(_closeness_dict(res))
        else:
            _print_report(res)
            payload.append(_report_dict(res))
        ok = ok and res.passed
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")
    return EXIT_OK if ok else EXIT_VERIFY


def _cmd_render(args) -> int:
    doc = document.read_document(args.infile)
    viewbox = None
    if args.viewbox:
        parts = args.viewbox.split(",")
        if len(parts) != 4:
            raise _UsageError("--viewbox needs 'x,y,w,h'")
        viewbox = tuple(float(v) for v in parts)
    options = render.RenderOptions(stroke_width=args.stroke_width, viewbox=viewbox,
                                   label_tiles=args.labels, scale=args.scale)
    svg = render.render_svg(doc.tiles, options)
    with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(svg)
    print(f"rendered {len(doc.tiles)} tiles -> {args.out}")
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fairtile",
        description="Construct, verify and render distorted strip tilings, "
                    "incongruent plane tilings and their fair quadrangle subdivisions.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-strip", help="generate a distorted strip tiling document")
    p.add_argument("--y0", required=True, help="strip height in (0,1), or 'auto'")
    p.add_argument("--seed", type=int, default=0, help="sampling seed for --y0 auto")
    p.add_argument("--cols", type=int, required=True, help="columns on each side of the axis")
    p.add_argument("--out", required=True, help="output document path")
    p.set_defaults(func=_cmd_gen_strip)

    p = sub.add_parser("gen-plane", help="generate a verified plane tiling document")
    p.add_argument("--epsilon", type=float, required=True, help="closeness budget in (0, 0.05]")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--rows", type=int, required=True, help="number of strip rows")
    p.add_argument("--cols", type=int, required=True, help="columns on each side of the axis")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_gen_plane)

    p = sub.add_parser("quadify", help="subdivide a plane document into fair quadrangles")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_quadify)

    p = sub.add_parser("verify", help="run invariant checks on a document")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--check", action="append", metavar="NAME",
                   help=f"check to run (repeatable); default depends on kind; "
                        f"one of: {', '.join(_CHECK_NAMES)}")
    p.add_argument("--json", help="also write a machine-readable report to this path")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("render", help="render a document to SVG")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--stroke-width", type=float, default=0.02)
    p.add_argument("--scale", type=float, default=40.0)
    p.add_argument("--labels", action="store_true", help="draw tile id labels")
    p.add_argument("--viewbox", help="explicit viewBox as 'x,y,w,h' (render coordinates)")
    p.set_defaults(func=_cmd_render)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        _thread_cap()
        return args.func(args)
    except _UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (DocumentError, FileNotFoundError, IsADirectoryError, PermissionError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except InvalidParameter as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except FairtileError as e:
        print(f"generation failed: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_GENERATION


if __name__ == "__main__":
    sys.exit(main())
