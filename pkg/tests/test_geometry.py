import math

import numpy as np
import pytest

from parcut.errors import EmptyInteriorError, UnboundedError
from parcut.geometry import (
    HPolygon,
    VPolygon,
    canonicalize,
    diameter,
    directional_width,
    inner_body,
    inradius_incenter,
    min_width,
    regular_polygon,
)

SQ3 = math.sqrt(3.0)


def unit_square() -> HPolygon:
    return canonicalize([(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)])


def equilateral() -> HPolygon:
    return canonicalize([(0.0, 0.0), (1.0, 0.0), (0.5, SQ3 / 2)])


def hexagon() -> HPolygon:
    return regular_polygon(6)


class TestCanonicalize:
    def test_unit_square_rows(self):
        P = unit_square()
        assert P.m == 4
        got = {(round(a[0], 12), round(a[1], 12), round(off, 12)) for a, off in zip(P.A, P.b)}
        assert got == {(1, 0, 1), (0, 1, 1), (-1, 0, 0), (0, -1, 0)}
        # canonical start: smallest angle in [0, 2pi) first
        assert P.A[0] == pytest.approx((1.0, 0.0))

    def test_redundant_rows_dropped(self):
        A = [(1, 0), (1, 0), (0, 1), (-1, 0), (0, -1), (1, 0)]
        b = [1, 1, 1, 0, 0, 5]
        P = canonicalize((np.array(A, float), np.array(b, float)))
        assert P.m == 4
        ref = unit_square()
        assert np.allclose(P.A, ref.A)
        assert np.allclose(P.b, ref.b)

    def test_contradictory_slab_is_empty(self):
        with pytest.raises(EmptyInteriorError):
            canonicalize((np.array([[1.0, 0.0], [-1.0, 0.0]]), np.array([0.0, -1.0])))

    def test_unbounded(self):
        with pytest.raises(UnboundedError):
            canonicalize((np.array([[1.0, 0.0], [0.0, 1.0]]), np.array([1.0, 1.0])))

    def test_vertex_cycle_convention(self):
        P = unit_square()
        # vertices[j] = rows j and j+1 meeting point
        assert P.vertices[0] == pytest.approx((1.0, 1.0))
        assert P.vertices[3] == pytest.approx((1.0, 0.0))

    def test_idempotent_bit_for_bit(self):
        rng = np.random.default_rng(0)
        for _ in range(20):
            pts = rng.normal(size=(12, 2)) * rng.uniform(0.5, 40)
            P1 = canonicalize(pts)
            P2 = canonicalize(P1)
            assert P1.A.tobytes() == P2.A.tobytes()
            assert P1.b.tobytes() == P2.b.tobytes()
            assert P1.vertices.tobytes() == P2.vertices.tobytes()


class TestWidths:
    def test_square_axis(self):
        assert directional_width(unit_square(), (1.0, 0.0)) == pytest.approx(1.0)

    def test_square_diagonal(self):
        d = math.sqrt(0.5)
        assert directional_width(unit_square(), (d, d)) == pytest.approx(math.sqrt(2))

    def test_triangle_height(self):
        P = equilateral()
        # outward normal of the base edge y = 0 is (0, -1)
        assert directional_width(P, (0.0, -1.0)) == pytest.approx(SQ3 / 2)

    def test_min_width_square(self):
        w = min_width(unit_square())
        assert w.width == pytest.approx(1.0)
        assert abs(w.direction[0]) == pytest.approx(1.0) or abs(w.direction[1]) == pytest.approx(1.0)

    def test_min_width_triangle_brute(self):
        P = equilateral()
        w = min_width(P)
        brute = min(directional_width(P, a) for a in P.A)
        assert w.width == pytest.approx(SQ3 / 2)
        assert w.width == pytest.approx(brute)

    def test_min_width_hexagon(self):
        P = hexagon()
        w = min_width(P)
        brute = min(directional_width(P, a) for a in P.A)
        assert w.width == pytest.approx(SQ3)
        assert w.width == pytest.approx(brute)

    def test_min_width_is_global_min_random(self):
        rng = np.random.default_rng(1)
        for _ in range(10):
            P = canonicalize(rng.normal(size=(16, 2)))
            w = min_width(P).width
            for _ in range(100):
                th = rng.uniform(0, 2 * math.pi)
                assert w <= directional_width(P, (math.cos(th), math.sin(th))) + 1e-9


class TestInnerBody:
    def test_square_quarter(self):
        Q = inner_body(unit_square(), 0.25)
        assert Q is not None
        got = sorted(map(tuple, np.round(Q.vertices, 12).tolist()))
        assert got == [(0.25, 0.25), (0.25, 0.75), (0.75, 0.25), (0.75, 0.75)]

    def test_square_beyond_inradius(self):
        assert inner_body(unit_square(), 0.6) is None

    def test_triangle_similar(self):
        # inradius r = sqrt(3)/6; at t = sqrt(3)/12 the inner triangle has side 1/2
        Q = inner_body(equilateral(), SQ3 / 12)
        assert Q is not None
        assert Q.m == 3
        side = np.linalg.norm(Q.vertices[0] - Q.vertices[1])
        assert side == pytest.approx(0.5, rel=1e-9)

    def test_nested_and_antitone(self):
        rng = np.random.default_rng(2)
        for _ in range(10):
            P = canonicalize(rng.normal(size=(10, 2)))
            r, _ = inradius_incenter(P)
            ts = sorted(rng.uniform(0, r * 0.95, size=3))
            polys = [inner_body(P, t) for t in ts]
            scale = diameter(P)
            for smaller, larger in zip(polys[1:], polys[:-1]):
                for v in smaller.vertices:
                    assert larger.contains(v, scale=scale)
            for Q in polys:
                for v in Q.vertices:
                    assert P.contains(v, scale=scale)

    def test_width_offset_identity(self):
        # width(P^t) = width(inner_t) + 2t, evaluated over edge normals
        rng = np.random.default_rng(3)
        for _ in range(8):
            P = canonicalize(rng.normal(size=(12, 2)))
            r, _ = inradius_incenter(P)
            for t in rng.uniform(0, r * 0.9, size=4):
                Q = inner_body(P, t)
                lhs = min(directional_width(Q, a) for a in P.A) + 2 * t
                assert lhs == pytest.approx(min_width(Q).width + 2 * t, rel=1e-9)


class TestInradius:
    def test_square(self):
        r, c = inradius_incenter(unit_square())
        assert r == pytest.approx(0.5)
        assert c == pytest.approx((0.5, 0.5))

    def test_triangle(self):
        r, _ = inradius_incenter(equilateral())
        assert r == pytest.approx(SQ3 / 6, rel=1e-9)

    def test_hexagon(self):
        r, _ = inradius_incenter(hexagon())
        assert r == pytest.approx(SQ3 / 2, rel=1e-9)

    def test_matches_inner_body_threshold(self):
        rng = np.random.default_rng(4)
        for _ in range(10):
            P = canonicalize(rng.normal(size=(8, 2)))
            r, _ = inradius_incenter(P)
            assert inner_body(P, r * 0.999) is not None
            assert inner_body(P, r * 1.001) is None


def test_diameter_square():
    assert diameter(unit_square()) == pytest.approx(math.sqrt(2))


def test_vpolygon_roundtrip():
    P = canonicalize(VPolygon(np.array([(0, 0), (2, 0), (2, 1), (0, 1)], float)))
    assert P.m == 4
    assert diameter(P) == pytest.approx(math.sqrt(5))
