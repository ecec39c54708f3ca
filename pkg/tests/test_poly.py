"""Exact polynomial arithmetic, binary forms, resultants, and the 0-dim solver."""

from fractions import Fraction

import numpy as np
import pytest

from catacaustic.errors import (
    CommonComponentError,
    DegenerateError,
    NonHomogeneousError,
)
from catacaustic.gauss import GaussRat
from catacaustic.poly import (
    BinForm,
    MPoly,
    cluster_points,
    count_distinct_roots,
    gcd_form,
    proj_distance,
    resultant_numeric,
    resultant_wrt,
    solve_system,
    solve_system_numeric,
    squarefree,
)

X0 = MPoly.variable(0)
X1 = MPoly.variable(1)
X2 = MPoly.variable(2)

CONIC = X0 * X0 + X1 * X1 * 2 - X2 * X2
CIRCLE = X0 * X0 + X1 * X1 - X2 * X2
FERMAT = X0 ** 3 + X1 ** 3 + X2 ** 3


class TestMPoly:
    def test_arithmetic_and_degree(self):
        p = (X0 + X1) * (X0 - X1)
        assert p == X0 * X0 - X1 * X1
        assert p.degree == 2
        assert (p - p).is_zero

    def test_scalar_coefficients_stay_exact(self):
        p = X0 * Fraction(3, 7) + X2
        assert p.terms[(1, 0, 0)] == Fraction(3, 7)
        assert p.is_exact

    def test_partial(self):
        p = X0 ** 3 + X0 * X1 * X2
        assert p.partial(0) == X0 * X0 * 3 + X1 * X2
        assert p.partial(2) == X0 * X1

    def test_eval_complex(self):
        p = X0 * X0 + X1 * X2
        assert p.eval_complex((2.0, 3.0, 5.0)) == pytest.approx(19.0)

    def test_compose_linear(self):
        # substituting x -> M x must commute with evaluation
        m = [[1, 2, 0], [0, 1, 0], [1, 0, 1]]
        q = CONIC.compose_linear(m)
        v = np.array([1.3, -0.7, 2.1])
        mv = np.array(m, dtype=float) @ v
        assert q.eval_complex(v) == pytest.approx(CONIC.eval_complex(mv))

    def test_str_is_deterministic(self):
        p = X1 * X0 + X2 * X2 - X0 * X0
        assert str(p) == str(X2 * X2 - X0 * X0 + X0 * X1)

    def test_gauss_rational_coefficients(self):
        p = X0 * GaussRat(0, 1) + X1
        q = p * p
        assert q.terms[(2, 0, 0)] == GaussRat(-1, 0)

    def test_mixed_degrees_rejected(self):
        with pytest.raises(NonHomogeneousError):
            MPoly({(1, 0, 0): 1, (2, 0, 0): 1})


class TestBinForm:
    def test_from_affine_pads_degree(self):
        # affine t^2 - 1 as a degree-3 form gains a root at infinity
        f = BinForm.from_affine([-1, 0, 1], 3)
        assert f.degree == 3
        assert f.infinity_multiplicity() == 1

    def test_roots_count(self):
        f = BinForm.from_affine([Fraction(-1), Fraction(0), Fraction(1)], 2)
        assert count_distinct_roots(f) == 2

    def test_gcd_and_squarefree(self):
        a = BinForm.from_affine([-1, 0, 1], 2)   # (t-1)(t+1)
        b = BinForm.from_affine([-1, 1], 1)      # t-1
        g = gcd_form(a, b)
        assert g.degree == 1
        sq = squarefree(BinForm.from_affine([1, -2, 1], 2))  # (t-1)^2
        assert sq.degree == 1

    def test_count_includes_infinity(self):
        # u*v has roots t=0 and t=infinity
        f = BinForm([0, 1, 0])
        assert count_distinct_roots(f) == 2

    def test_degree_zero_has_no_roots(self):
        assert count_distinct_roots(BinForm([Fraction(5)])) == 0


class TestResultants:
    def test_exact_conic_line(self):
        line = X0 + X1 * 2 - X2
        r = resultant_wrt(CONIC, line, 0)
        assert r.degree == 2
        assert count_distinct_roots(r) == 2

    def test_exact_vanishes_at_projections(self):
        # common zeros of {x0^2 - x1 x2, x0 - x2} are (0,1,0) and (1,1,1);
        # eliminating x0 must leave a form vanishing exactly there
        f = X0 * X0 - X1 * X2
        g = X0 - X2
        r = resultant_wrt(f, g, 0)
        assert r.degree == 2
        assert count_distinct_roots(r) == 2
        vals = [sum(c * Fraction(1) ** k for k, c in enumerate(r.coeffs))]
        assert vals[0] == 0  # the (x1, x2) = (1, 1) projection

    def test_numeric_agrees_with_exact(self):
        f = CONIC
        g = FERMAT - X0 * X1 * X2 * 2
        exact = resultant_wrt(f, g, 0)
        numeric = resultant_numeric(f.to_numeric(), g.to_numeric(), 0)
        a = np.array([complex(c) for c in exact.coeffs])
        b = np.array(numeric.coeffs, dtype=complex)
        assert len(a) == len(b)
        num = np.linalg.norm(a / np.linalg.norm(a) - b / np.linalg.norm(b))
        assert num < 1e-9

    def test_numeric_not_reversed(self):
        # catches a DFT-direction mistake: the roots of the interpolated
        # resultant must be the projections of the true solutions, not
        # their reciprocals
        f = (X0 - X1 * 2) * 1.0
        g = (X0 * X0 - X1 * X2 * 4) * 1.0
        r = resultant_numeric(f, g, 0)
        # eliminating x0: common zero needs 4x1^2 = 4x1x2, so t = x1/x2 = 1... but
        # scale-free check: r(1,1) ~ 0 while r at the distinct root of the
        # reversed form would not vanish
        vals = [abs(peval_c(r.coeffs, t)) for t in (1.0,)]
        scale = max(abs(c) for c in r.coeffs)
        assert vals[0] < 1e-9 * scale


def peval_c(coeffs, t):
    acc = 0.0
    for c in reversed(list(coeffs)):
        acc = acc * t + c
    return acc


class TestSolver:
    def test_conic_cubic_exact(self):
        res = solve_system(CONIC, FERMAT, seed=0)
        assert res.count == 5
        # one tangential contact sits at (1, 0, -1)
        target = np.array([1.0, 0.0, -1.0])
        assert any(proj_distance(p, target) < 1e-7 for p in res.points)

    def test_conic_cubic_transverse(self):
        res = solve_system(CONIC, FERMAT - X0 * X1 * X2 * 2, seed=0)
        assert res.count == 6

    def test_count_only_skips_points(self):
        res = solve_system(CONIC, FERMAT, seed=1, count_only=True)
        assert res.count == 5
        assert res.points == []

    def test_circle_secant_and_tangent(self):
        secant = solve_system(CIRCLE, X0 + X1 * 2 - X2, seed=0)
        assert secant.count == 2
        # x0 = x2 touches the circle at (1, 0, 1) only
        tangent = solve_system(CIRCLE, X0 - X2, seed=0)
        assert tangent.count == 1
        assert proj_distance(tangent.points[0], (1, 0, 1)) < 1e-7

    def test_common_component_detected(self):
        f = CIRCLE * (X0 + X1)
        g = (X0 + X1) * (X0 - X2)
        with pytest.raises(CommonComponentError):
            solve_system(f, g, seed=0)

    def test_numeric_twin(self):
        res = solve_system_numeric(CONIC.to_numeric(), FERMAT.to_numeric(), seed=0)
        assert res.count == 5

    def test_seed_independence(self):
        counts = {solve_system(CONIC, FERMAT, seed=s, count_only=True).count for s in (0, 1, 2)}
        assert counts == {5}

    def test_zero_polynomial_rejected(self):
        with pytest.raises(DegenerateError):
            solve_system(MPoly.zero(), CONIC, seed=0)


class TestClustering:
    def test_proj_distance_ignores_scale(self):
        assert proj_distance((1, 2, 3), (-2, -4, -6)) < 1e-12

    def test_cluster_points(self):
        pts = [(1, 0, 0), (1 + 1e-9, 0, 0), (0, 1, 0)]
        assert len(cluster_points(pts, 1e-6)) == 2
