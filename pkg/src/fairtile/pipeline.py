"""End-to-end construction pipelines shared by the library and the CLI.

Building a plane tiling composes the individual stages: sample a strip
height, gate it through the contraction suite and the strip-level
incongruence check, stretch to the equilateral regime, certify shears,
stack, and verify the finished window.  Everything is driven by one seeded
generator, so a fixed seed reproduces the construction byte for byte.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from . import assembly, document, quadsplit, verify
from .errors import ExhaustedRetries, InvalidParameter
from .geometry import Quadrangle, TileId, Triangle, tile_label
from .strip import StripTiling, deviations, strip_tiling, tile_ids, triangle_at

__all__ = [
    "Y0_RANGE",
    "PlaneBuild",
    "sample_certified_y0",
    "build_plane",
    "quadify_checked",
    "strip_document",
    "plane_document",
    "quad_document",
    "plane_tiles_from_document",
]

# default sampling window for the strip height; with a closeness budget the
# upper end shrinks so the strip-level deviations (about sqrt(3)*y0 in the
# second coordinate after scaling) stay under epsilon
Y0_RANGE = (0.001, 0.01)

_SAMPLE_TRIES = 50


def _y0_window(epsilon: float | None) -> tuple[float, float]:
    hi = Y0_RANGE[1]
    if epsilon is not None:
        hi = min(hi, epsilon / (2.0 * assembly.SQRT3))
    return (hi / 10.0, hi)


def sample_certified_y0(rng: random.Random, cols: int,
                        epsilon: float | None = None) -> tuple[float, StripTiling]:
    """Draw strip heights until one passes the gates on the window.

    A candidate is accepted when the contraction suite holds for its
    deviation series and no two window tiles agree up to translation or
    half-turn.  Resampling is deterministic for a fixed generator state.
    """
    lo, hi = _y0_window(epsilon)
    last = None
    for _ in range(_SAMPLE_TRIES):
        y0 = rng.uniform(lo, hi)
        tiling = strip_tiling(y0, cols)
        gate = verify.check_contraction(deviations(tiling))
        if not gate.passed:
            last = f"contraction gate failed for y0={y0!r}"
            continue
        tiles = [triangle_at(tiling, tid.col, tid.slot) for tid in tile_ids(cols)]
        sep = verify.check_halfturn_incongruent(tiles)
        if not sep.passed:
            last = f"strip-level congruence for y0={y0!r} (margin {sep.margin:.3e})"
            continue
        return y0, tiling
    raise ExhaustedRetries(f"no certified strip height in {_SAMPLE_TRIES} draws: {last}")


@dataclass(frozen=True)
class PlaneBuild:
    plane: assembly.PlaneTiling
    tiles: list[tuple[TileId, Triangle]]
    y0: float
    shears: tuple[float, ...]
    reports: tuple[verify.VerificationReport, ...]
    closeness: verify.ClosenessReport

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.reports) and self.closeness.passed


def build_plane(epsilon: float, seed: int, rows: int, cols: int) -> PlaneBuild:
    """Full pipeline from a closeness budget to a verified plane window."""
    if not 0.0 < epsilon:
        raise InvalidParameter(f"epsilon must be positive, got {epsilon}")
    if rows < 1 or cols < 1:
        raise InvalidParameter("rows and cols must be >= 1")
    rng = random.Random(seed)
    y0, base = sample_certified_y0(rng, cols, epsilon)
    scaled = assembly.scale_to_equilateral(base)
    shears = assembly.select_shears(scaled, count=rows, epsilon=epsilon, seed=seed,
                                    window_cols=cols, rng=rng)
    plane = assembly.stack_plane(scaled, shears, rows, cols, epsilon=epsilon, seed=seed)
    tiles = plane.tiles()

    budget = sum(2.0 * assembly.SQRT3 * abs(m) for m in shears)
    budget_report = verify.VerificationReport(
        check_name="shear-budget", passed=budget < epsilon, worst_residual=None,
        margin=epsilon - budget, offenders=(), tiles_checked=len(shears),
        tolerance_used=epsilon)
    reports = (
        verify.check_equal_area(tiles, assembly.SQRT3, 1e-10),
        verify.check_vertex_to_vertex(tiles, 1e-9),
        verify.check_pairwise_incongruent(tiles, 1e-9),
        budget_report,
    )
    closeness = verify.check_closeness(tiles, epsilon)
    return PlaneBuild(plane=plane, tiles=tiles, y0=y0, shears=tuple(shears),
                      reports=reports, closeness=closeness)


def quadify_checked(doc: document.TilingDocument):
    """Subdivide a plane document and verify the result.

    Refuses inputs containing congruent or equilateral tiles (the fair
    split of an equilateral triangle yields congruent pieces), then checks
    equal areas, equal perimeters, convexity and pairwise incongruence of
    the output.  Returns (quads, reports, passed).
    """
    if doc.kind != "plane":
        raise InvalidParameter(f"quadify needs a plane document, got kind {doc.kind!r}")
    pairs = [(t.id, t) for t in doc.tiles]
    pre = verify.check_pairwise_incongruent(pairs, 1e-9)
    if not pre.passed:
        return [], (pre,), False

    quads = quadsplit.quadify_plane(pairs)
    scale = quadsplit.QUADIFY_SCALE
    area_target = assembly.SQRT3 * scale * scale / 3.0
    nonconvex = tuple(
        (tile_label(q), tile_label(q))
        for q in quads if not verify.check_convex(q))
    convex_report = verify.VerificationReport(
        check_name="convex", passed=not nonconvex, worst_residual=None, margin=None,
        offenders=nonconvex[:10], tiles_checked=len(quads), tolerance_used=1e-12)
    reports = (
        pre,
        verify.check_equal_area(quads, area_target, 1e-9),
        verify.check_equal_perimeter(quads, quadsplit.P0, 1e-9),
        convex_report,
        verify.check_pairwise_incongruent(quads, 1e-9),
    )
    return quads, reports, all(r.passed for r in reports)


# ---------------------------------------------------------------------------
# document builders


def strip_document(tiling: StripTiling, cols: int, *,
                   seed: int | None = None, mode: str = "fixed") -> document.TilingDocument:
    tiles = [triangle_at(tiling, tid.col, tid.slot) for tid in tile_ids(cols)]
    params = document.make_parameters(y0=tiling.y0, cols=cols, seed=seed, mode=mode)
    return document.TilingDocument(kind="strip", parameters=params, tiles=tiles)


def plane_document(build: PlaneBuild, epsilon: float, seed: int,
                   rows: int, cols: int) -> document.TilingDocument:
    params = document.make_parameters(
        epsilon=epsilon, seed=seed, rows=rows, cols=cols,
        y0=build.y0, shears=list(build.shears))
    tiles = [tri for _, tri in build.tiles]
    return document.TilingDocument(kind="plane", parameters=params, tiles=tiles)


def quad_document(quads: list[Quadrangle],
                  source: document.TilingDocument) -> document.TilingDocument:
    params = dict(source.parameters)
    params.update(document.make_parameters(
        scale=quadsplit.QUADIFY_SCALE, p0=quadsplit.P0))
    return document.TilingDocument(kind="quad", parameters=params, tiles=list(quads))


def plane_tiles_from_document(doc: document.TilingDocument):
    return [(t.id, t) for t in doc.tiles]
