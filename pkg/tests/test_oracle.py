import math

import numpy as np
import pytest

from parcut.dome import bounded_core, build_dome, perturb
from parcut.errors import EmptyInteriorError
from parcut.geometry import canonicalize, inradius_incenter
from parcut.hierarchy import build_hierarchy
from parcut.oracle import OracleConfig, oracle_Mi, oracle_fi, oracle_solve, random_polygon
from parcut.solver import eval_fi, solve

SQ3 = math.sqrt(3.0)


def unit_square():
    return canonicalize([(0, 0), (1, 0), (1, 1), (0, 1)])


def equilateral():
    return canonicalize([(0, 0), (1, 0), (0.5, SQ3 / 2)])


class TestOracleFi:
    def test_square_hand_value(self):
        assert oracle_fi(unit_square(), 0, 0.1, 3) == pytest.approx(0.4, abs=1e-12)

    def test_triangle_height(self):
        assert oracle_fi(equilateral(), 0, 0.0, 1) == pytest.approx(SQ3 / 2, rel=1e-9)

    def test_square_collapse(self):
        assert oracle_fi(unit_square(), 0, 0.5, 1) == pytest.approx(0.0, abs=1e-8)

    def test_empty_inner(self):
        with pytest.raises(EmptyInteriorError):
            oracle_fi(unit_square(), 0, 0.7, 1)


class TestOracleMi:
    def test_square(self):
        for i in range(4):
            assert oracle_Mi(unit_square(), i) == pytest.approx(0.5, abs=1e-9)

    def test_triangle(self):
        for i in range(3):
            assert oracle_Mi(equilateral(), i) == pytest.approx(SQ3 / 6, abs=1e-9)

    def test_rectangle(self):
        P = canonicalize([(0, 0), (2, 0), (2, 1), (0, 1)])
        for i in range(4):
            assert oracle_Mi(P, i) == pytest.approx(0.5, abs=1e-9)

    def test_agrees_with_facet_max_t(self):
        rng = np.random.default_rng(0)
        for trial in range(5):
            P = canonicalize(rng.normal(size=(10, 2)))
            D0 = build_dome(P)
            Dp = perturb(D0, seed=trial)
            H = build_hierarchy(Dp, bounded_core(Dp), original=D0)
            from parcut.solver import _facet_top
            from parcut.queries import QueryStats

            diam = max(1.0, float(np.abs(P.vertices).max()))
            for i in range(P.m):
                a = oracle_Mi(P, i)
                b = _facet_top(H, i, QueryStats())
                assert abs(a - b) < 1e-9 * diam


class TestOracleSolve:
    def test_square(self):
        rho, v = oracle_solve(unit_square(), 2)
        assert rho == pytest.approx(0.25, abs=1e-9)

    def test_triangle(self):
        rho, v = oracle_solve(equilateral(), 2)
        assert rho == pytest.approx(SQ3 / 10, abs=1e-9)

    def test_agrees_with_solver_random_32gon(self):
        P = random_polygon(32, seed=7)
        s = solve(P, 4)
        rho, v = oracle_solve(P, 4)
        assert s.rho == pytest.approx(rho, rel=1e-8)

    def test_config_validation(self):
        with pytest.raises(ValueError):
            OracleConfig(bisection_tol=0.0)


class TestRandomPolygon:
    def test_triangle(self):
        P = random_polygon(3, seed=7)
        assert P.m == 3

    def test_circle_inradius_bound(self):
        P = random_polygon(64, seed=1, model="circle")
        r, _ = inradius_incenter(P)
        assert 0.9 <= r <= 1.0

    def test_deterministic(self):
        a = random_polygon(24, seed=5, model="smoothed")
        b = random_polygon(24, seed=5, model="smoothed")
        assert np.array_equal(a.A, b.A)
        assert np.array_equal(a.b, b.b)

    def test_vertex_count(self):
        for model in ("circle", "ellipse", "smoothed"):
            for m in (8, 32, 100):
                P = random_polygon(m, seed=3, model=model)
                assert P.m >= 0.9 * m

    def test_bad_model(self):
        with pytest.raises(ValueError):
            random_polygon(8, model="torus")


class TestGridAgreement:
    def test_oracle_fi_matches_eval_fi(self):
        rng = np.random.default_rng(2)
        for trial in range(4):
            P = random_polygon(16, seed=trial)
            D0 = build_dome(P)
            Dp = perturb(D0, seed=trial)
            H = build_hierarchy(Dp, bounded_core(Dp), original=D0)
            diam = max(1.0, float(np.abs(P.vertices).max()) * 2)
            n = 1 + trial % 4
            for i in range(0, P.m, 3):
                Mi = oracle_Mi(P, i)
                for t in np.linspace(0.0, Mi, 17):
                    a = eval_fi(H, P, i, float(t), n)
                    try:
                        b = oracle_fi(P, i, float(t), n)
                    except EmptyInteriorError:
                        continue  # grid endpoint collapses the clip
                    assert abs(a - b) < 1e-9 * diam
