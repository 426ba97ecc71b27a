"""Congruence predicates, signatures, vertical widths, shear root sets."""

import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fairtile.congruence import (
    bad_shear_set,
    congruence_signature,
    congruent,
    equilateral_shear_set,
    halfturn_translate_congruent,
    shear_match_roots,
    signature_distance,
    simeq_distance,
)
from fairtile.errors import DegeneratePair
from fairtile.geometry import (
    Point,
    Quadrangle,
    Triangle,
    area,
    edge_lengths,
    edge_vectors,
    perimeter,
    shear,
    translate,
    vertical_width,
)
from fairtile.quadsplit import fair_split
from fairtile.strip import critical_tiling, strip_tiling, triangle_at

SQRT3 = math.sqrt(3.0)


def tri(*pts):
    return Triangle(*(Point(*p) for p in pts))


def quad(*pts):
    return Quadrangle(tuple(Point(*p) for p in pts))


UNIT_SQUARE = quad((0, 0), (1, 0), (1, 1), (0, 1))


# --- area / perimeter / edge vectors ---------------------------------------

def test_basic_measures():
    assert area(UNIT_SQUARE) == pytest.approx(1.0, abs=1e-15)
    assert perimeter(UNIT_SQUARE) == pytest.approx(4.0, abs=1e-15)
    assert area(tri((0, 0), (2, 0), (0, 1))) == pytest.approx(1.0, abs=1e-15)
    cell = tri((0, 0), (2, 0), (1, 1))
    assert area(cell) == pytest.approx(1.0, abs=1e-15)
    assert perimeter(cell) == pytest.approx(2 + 2 * math.sqrt(2), abs=1e-14)


def test_edge_vectors_sum_to_zero():
    for p in (UNIT_SQUARE, tri((0.3, -1), (2.7, 0.4), (1, 2))):
        sx = sum(v[0] for v in edge_vectors(p))
        sy = sum(v[1] for v in edge_vectors(p))
        assert abs(sx) < 1e-15 and abs(sy) < 1e-15


coord = st.floats(min_value=-50, max_value=50, allow_nan=False, allow_infinity=False)


@given(st.tuples(coord, coord), st.floats(min_value=0, max_value=2 * math.pi),
       st.booleans())
@settings(max_examples=60, deadline=None)
def test_measures_invariant_under_isometry(shift, angle, mirror):
    t = tri((0, 0), (2, 0), (0.7, 1.3))
    c, s = math.cos(angle), math.sin(angle)

    def iso(v):
        x, y = (v.x, -v.y) if mirror else (v.x, v.y)
        return Point(c * x - s * y + shift[0], s * x + c * y + shift[1])

    pts = [iso(v) for v in t.vertices]
    if mirror:
        pts.reverse()
    u = Triangle(*pts)
    assert area(u) == pytest.approx(area(t), rel=1e-12)
    assert perimeter(u) == pytest.approx(perimeter(t), rel=1e-12)


# --- vertical width ----------------------------------------------------------

def test_vertical_width_basics():
    t = critical_tiling(2)
    assert vertical_width(triangle_at(t, 1, 1)) == pytest.approx(1.0, abs=1e-15)
    assert vertical_width(tri((0, 0), (1, 0), (2, 1e-6))) == pytest.approx(1e-6, abs=1e-18)


def test_vertical_width_classification_table():
    t = strip_tiling(0.01, 1000)
    y = t.ys
    for i in list(range(1, 1000)) + [-3, -998]:
        k = abs(i)
        expect = {
            1: 1 - y[k],
            2: 1 - y[k - 1] if k % 2 == 0 else 1 - y[k],
            3: 1 + y[k] if k % 2 == 0 else 1 + y[k - 1],
            4: 1 + y[k],
        }
        for j in (1, 2, 3, 4):
            got = vertical_width(triangle_at(t, i, j))
            assert abs(got - expect[j]) <= 1e-12, (i, j)


# --- congruence --------------------------------------------------------------

def test_congruent_translate_and_reflection():
    assert congruent(tri((0, 0), (1, 0), (0, 1)), tri((5, 5), (6, 5), (5, 6)), 1e-9)
    assert congruent(tri((0, 0), (2, 0), (0, 1)), tri((0, 0), (2, 0), (2, 1)), 1e-9)
    assert not congruent(tri((0, 0), (2, 0), (0, 1)), tri((0, 0), (2, 0), (0, 1.01)), 1e-9)


def test_critical_tiling_congruence_classes():
    t = critical_tiling(4)
    t11 = triangle_at(t, 1, 1)
    t22 = triangle_at(t, 2, 2)
    assert congruent(t11, t22, 1e-9)
    t14 = triangle_at(t, 1, 4)
    t23 = triangle_at(t, 2, 3)
    assert congruent(t14, t23, 1e-9)

    tiles = [triangle_at(t, 0, j) for j in (1, 4)]
    for i in range(-4, 5):
        if i == 0:
            continue
        tiles += [triangle_at(t, i, j) for j in (1, 2, 3, 4)]
    classes = {congruence_signature(x).canonical for x in tiles}
    assert len(classes) == 6


def test_halfturn_relation():
    t = tri((0.2, 0.1), (1.7, 0.3), (0.9, 1.2))
    assert halfturn_translate_congruent(t, translate(t, 7.0, -3.0), 1e-9)
    neg = Triangle(*(Point(1.0 - v.x, 1.0 - v.y) for v in t.vertices))
    assert halfturn_translate_congruent(t, neg, 1e-9)
    # a reflected copy is congruent but not a translated half-turn
    refl = Triangle(*(Point(-v.x, v.y) for v in reversed(t.vertices)))
    assert congruent(t, refl, 1e-9)
    assert not halfturn_translate_congruent(t, refl, 1e-9)


def test_halfturn_mirror_columns_of_critical_tiling():
    t = critical_tiling(3)
    for i in (1, 2, 3):
        for j in (1, 2, 3, 4):
            plus = triangle_at(t, i, j)
            minus = triangle_at(t, -i, j)
            assert not halfturn_translate_congruent(plus, minus, 1e-9)


def test_halfturn_symmetric_and_reflexive():
    rng = random.Random(5)
    for _ in range(40):
        pts = [(rng.uniform(-3, 3), rng.uniform(-3, 3)) for _ in range(3)]
        try:
            t = tri(*pts)
        except Exception:
            continue
        u = translate(t, rng.uniform(-9, 9), rng.uniform(-9, 9))
        assert halfturn_translate_congruent(t, t, 1e-9)
        assert (halfturn_translate_congruent(t, u, 1e-9)
                == halfturn_translate_congruent(u, t, 1e-9))
        assert abs(simeq_distance(t, u) - simeq_distance(u, t)) < 1e-12


# --- signatures --------------------------------------------------------------

def test_signature_ignores_vertex_rotation_and_reflection():
    rotated = Quadrangle(tuple(UNIT_SQUARE.vertices[2:] + UNIT_SQUARE.vertices[:2]))
    assert congruence_signature(UNIT_SQUARE) == congruence_signature(rotated)
    q = quad((0, 0), (1.4, 0.1), (1.5, 1.2), (0.2, 0.9))
    mirrored = Quadrangle(tuple(Point(-v.x, v.y) for v in reversed(q.vertices)))
    assert congruence_signature(q) == congruence_signature(mirrored)
    assert signature_distance(q, mirrored) <= 1e-12


def test_signature_invariance_under_random_isometries():
    rng = random.Random(20)
    checked = 0
    while checked < 10_000:
        n = 3 if rng.random() < 0.5 else 4
        if n == 3:
            pts = [(rng.uniform(-5, 5), rng.uniform(-5, 5)) for _ in range(3)]
            try:
                p = tri(*pts)
            except Exception:
                continue
        else:
            # star-shaped order around the centroid keeps the quad simple
            raw = [(rng.uniform(-5, 5), rng.uniform(-5, 5)) for _ in range(4)]
            cx = sum(x for x, _ in raw) / 4
            cy = sum(y for _, y in raw) / 4
            raw.sort(key=lambda v: math.atan2(v[1] - cy, v[0] - cx))
            try:
                p = quad(*raw)
            except Exception:
                continue
        angle = rng.uniform(0, 2 * math.pi)
        c, s = math.cos(angle), math.sin(angle)
        dx, dy = rng.uniform(-30, 30), rng.uniform(-30, 30)
        mirror = rng.random() < 0.5
        mapped = []
        for v in p.vertices if n == 4 else p.vertices:
            x, y = (v.x, -v.y) if mirror else (v.x, v.y)
            mapped.append(Point(c * x - s * y + dx, s * x + c * y + dy))
        if mirror:
            mapped.reverse()
        q = Triangle(*mapped) if n == 3 else Quadrangle(tuple(mapped))
        assert congruence_signature(p).canonical == congruence_signature(q).canonical
        checked += 1


def test_fair_split_of_scalene_gives_three_distinct_signatures():
    from fairtile.quadsplit import apex

    t = Triangle(Point(0, 0), Point(1.01, 0), apex(1.01, 1.00, 0.99))
    quads = fair_split(t)
    sigs = [congruence_signature(q).canonical for q in quads]
    assert len(set(sigs)) == 3
    gaps = [signature_distance(quads[a], quads[b]) for a, b in ((0, 1), (0, 2), (1, 2))]
    assert min(gaps) > 0


def test_congruence_soundness_on_congruent_samples():
    rng = random.Random(11)
    for _ in range(60):
        pts = [(rng.uniform(-2, 2), rng.uniform(-2, 2)) for _ in range(3)]
        try:
            t = tri(*pts)
        except Exception:
            continue
        angle = rng.uniform(0, 2 * math.pi)
        c, s = math.cos(angle), math.sin(angle)
        u = Triangle(*(Point(c * v.x - s * v.y + 3, s * v.x + c * v.y - 2)
                       for v in t.vertices))
        tol = 1e-9
        assert congruent(t, u, tol)
        assert abs(perimeter(t) - perimeter(u)) <= 4 * tol * 3 + 1e-12
        assert abs(area(t) - area(u)) <= perimeter(t) * tol + 1e-12


# --- shear root sets ---------------------------------------------------------

def test_quadratic_edge_pair_examples():
    from fairtile.congruence import _real_roots

    # vectors (1,1) against (1,-1): degenerate leading coefficient, root 0
    assert _real_roots(1 - 1, 2 * (1 * 1 - 1 * -1), (1 + 1) - (1 + 1)) == [0.0]
    # both heights zero with distinct |x|: contradiction, empty set
    assert _real_roots(0.0, 0.0, 9.0 - 4.0) == []


def test_bad_shear_set_mirror_pair_contains_zero():
    t = tri((0, 0), (2.1, 0), (0.8, 1.7))
    m = Triangle(*(Point(-v.x, v.y) for v in reversed(t.vertices)))
    roots = bad_shear_set(t, m).roots
    assert min(abs(r) for r in roots) < 1e-12


def test_bad_shear_set_degenerate_pair():
    t = tri((0, 0), (2.1, 0), (0.8, 1.7))
    with pytest.raises(DegeneratePair):
        bad_shear_set(t, translate(t, 4.0, 1.0))
    neg = Triangle(*(Point(3.0 - v.x, 2.0 - v.y) for v in t.vertices))
    with pytest.raises(DegeneratePair):
        bad_shear_set(t, neg)


def test_bad_shear_roots_mark_length_collisions():
    rng = random.Random(3)
    tested = 0
    while tested < 30:
        pts = [(rng.uniform(-2, 2), rng.uniform(-2, 2)) for _ in range(6)]
        try:
            t, u = tri(*pts[:3]), tri(*pts[3:])
        except Exception:
            continue
        if simeq_distance(t, u) < 1e-3:
            continue
        for r in bad_shear_set(t, u).roots:
            lt = edge_lengths(shear(t, r))
            lu_sheared = edge_lengths(shear(u, r))
            lu_fixed = edge_lengths(u)
            collide = min(
                min(abs(a - b) for a in lt for b in lu_sheared),
                min(abs(a - b) for a in lt for b in lu_fixed),
            )
            assert collide <= 1e-7 * max(1.0, abs(r)) ** 2
        tested += 1


def test_shear_certification_outside_roots():
    rng = random.Random(9)
    tested = 0
    while tested < 100:
        pts = [(rng.uniform(-2, 2), rng.uniform(-2, 2)) for _ in range(6)]
        try:
            t, u = tri(*pts[:3]), tri(*pts[3:])
        except Exception:
            continue
        if simeq_distance(t, u) < 1e-2:
            continue
        roots = bad_shear_set(t, u).roots
        mu = None
        for _ in range(50):
            cand = rng.uniform(-3, 3)
            if all(abs(cand - r) >= 1e-6 for r in roots):
                mu = cand
                break
        if mu is None:
            continue
        assert not congruent(shear(t, mu), shear(u, mu), 1e-9)
        tested += 1


def test_shear_match_roots_certify_against_fixed():
    rng = random.Random(21)
    tested = 0
    while tested < 60:
        pts = [(rng.uniform(-2, 2), rng.uniform(-2, 2)) for _ in range(6)]
        try:
            t, u = tri(*pts[:3]), tri(*pts[3:])
        except Exception:
            continue
        roots = shear_match_roots(t, u).roots
        for _ in range(10):
            mu = rng.uniform(-3, 3)
            if all(abs(mu - r) >= 1e-6 for r in roots):
                assert not congruent(shear(t, mu), u, 1e-9)
        tested += 1


def test_shear_match_roots_allows_identical_inputs():
    t = tri((0, 0), (2.1, 0), (0.8, 1.7))
    roots = shear_match_roots(t, t).roots
    assert min(abs(r) for r in roots) < 1e-12  # the identity shear collides


def test_equilateral_shear_set():
    t = tri((0, 0), (1, 0), (0.5, math.sqrt(3) / 2))
    roots = sorted(equilateral_shear_set(t).roots)
    assert roots[0] == pytest.approx(0.0, abs=1e-12)
    assert roots[1] == pytest.approx(2 * math.sqrt(3) / 3, abs=1e-12)

    scalene = tri((0, 0), (3, 0), (0, 1))
    for r in equilateral_shear_set(scalene).roots:
        lengths = edge_lengths(shear(scalene, r))
        assert max(lengths) - min(lengths) > 1e-6  # superset filter, not equilateral
