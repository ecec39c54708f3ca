"""Caustic invariants: class counts, dual degree, envelopes, implicitization."""

from fractions import Fraction

import numpy as np
import pytest

from catacaustic.caustic import (
    caustic_degree,
    degree_D,
    dual_degree,
    envelope_points,
    gamma_degree,
    implicit_fit,
    normal_counts,
    reflected_family,
    sample_curve_points,
)
from catacaustic.errors import DegenerateError, PointCausticError
from catacaustic.euclid import Curve, ProjPoint
from catacaustic.poly import MPoly, proj_distance

F = Fraction
X0 = MPoly.variable(0)
X1 = MPoly.variable(1)
X2 = MPoly.variable(2)

CIRCLE = Curve(X0 * X0 + X1 * X1 - X2 * X2)
CONIC = Curve(X0 * X0 + X1 * X1 * 2 - X2 * X2)
FERMAT = Curve(X0 ** 3 + X1 ** 3 + X2 ** 3)
LINE = Curve(X0 + X1 * 2 - X2)
SOURCE = ProjPoint((F(2), F(1), F(1)))


class TestGammaDegree:
    def test_conic(self):
        rep = gamma_degree(CONIC, SOURCE)
        assert rep.degree_gamma == 6
        assert rep.base_point_count == 0

    def test_circle_base_points(self):
        # the cyclic points lie on the circle and eat two rays
        rep = gamma_degree(CIRCLE, SOURCE)
        assert rep.degree_gamma == 4
        assert rep.base_point_count == 2

    def test_line(self):
        rep = gamma_degree(LINE, ProjPoint((F(3), F(1), F(1))))
        assert rep.degree_gamma == 1
        assert rep.base_point_count == 0

    def test_fermat_cubic(self):
        rep = gamma_degree(FERMAT, SOURCE)
        assert rep.degree_gamma == 15
        assert rep.base_point_count == 0

    def test_seed_invariance(self):
        assert {gamma_degree(CONIC, SOURCE, seed=s).degree_gamma for s in (0, 1, 2)} == {6}


class TestDualAndNormals:
    def test_dual_degrees(self):
        assert dual_degree(CIRCLE) == 2
        assert dual_degree(CONIC) == 2
        assert dual_degree(FERMAT) == 6

    def test_normal_counts_circle(self):
        # every normal passes the center: two feet per normal line
        assert normal_counts(CIRCLE) == (2, 1, 2)

    def test_normal_counts_conic(self):
        assert normal_counts(CONIC) == (4, 4, 1)

    def test_degree_D(self):
        assert degree_D(CIRCLE) == 4
        assert degree_D(CONIC) == 6

    def test_line_rejected(self):
        with pytest.raises(DegenerateError):
            dual_degree(LINE)
        with pytest.raises(DegenerateError):
            degree_D(LINE)


class TestSampling:
    def test_points_lie_on_curve(self):
        samples = sample_curve_points(CONIC, 24, seed=0)
        assert len(samples) == 24
        f = CONIC.poly.to_numeric()
        scale = f.coefficient_norm()
        for s in samples:
            v = s.point.to_numpy()
            assert abs(f.eval_complex(v)) < 1e-8 * scale

    def test_tangent_is_tangent(self):
        # tangent_dir must annihilate the gradient and stay on the point's line
        samples = sample_curve_points(FERMAT, 12, seed=1)
        for s in samples:
            p = s.point.to_numpy()
            t = s.tangent_dir.to_numpy()
            grad = np.array([g.eval_complex(p) for g in FERMAT.gradient])
            assert abs(np.dot(grad, t)) < 1e-7 * np.linalg.norm(grad) * np.linalg.norm(t)

    def test_samples_distinct(self):
        samples = sample_curve_points(CIRCLE, 16, seed=2)
        pts = [s.point.to_numpy() for s in samples]
        for i in range(len(pts)):
            for j in range(i + 1, len(pts)):
                assert proj_distance(pts[i], pts[j]) > 1e-7


class TestEnvelope:
    def test_envelope_points_on_reflected_rays(self):
        samples = sample_curve_points(CONIC, 8, seed=0)
        lams = reflected_family(CONIC, SOURCE)
        pts = envelope_points(CONIC, SOURCE, samples)
        assert len(pts) == 8
        for s, e in zip(samples, pts):
            ray = np.array([l.eval_complex(s.point.to_numpy()) for l in lams])
            ev = e.to_numpy()
            assert abs(np.dot(ray, ev)) < 1e-7 * np.linalg.norm(ray) * np.linalg.norm(ev)

    def test_circle_center_concentrates(self):
        # concentric source: every reflected ray passes back through the center
        center = ProjPoint((F(0), F(0), F(1)))
        with pytest.raises(PointCausticError) as exc:
            caustic_degree(CIRCLE, center, n=40)
        assert proj_distance(exc.value.point.to_numpy(), (0, 0, 1)) < 1e-6

    def test_parabola_axis_source_focus(self):
        # rays parallel to the axis of x1 x2 = x0^2 focus at (0, 1, 4)
        parabola = Curve(X0 * X0 - X1 * X2)
        axis_dir = ProjPoint((F(0), F(1), F(0)))
        with pytest.raises(PointCausticError) as exc:
            caustic_degree(parabola, axis_dir, n=40)
        assert proj_distance(exc.value.point.to_numpy(), (0, 1, 4)) < 1e-6


class TestImplicitization:
    def test_caustic_degree_conic(self):
        assert caustic_degree(CONIC, SOURCE) == 6

    def test_caustic_degree_circle_external_source(self):
        assert caustic_degree(CIRCLE, ProjPoint((F(2), F(0), F(1)))) == 6

    def test_implicit_fit_recovers_conic(self):
        samples = sample_curve_points(CONIC, 30, seed=3)
        m, eq = implicit_fit([s.point for s in samples], max_degree=4)
        assert m == 2
        # the fitted equation is proportional to the input conic
        ref = np.array([1.0, 2.0, -1.0])
        got = np.array(
            [eq.terms.get(e, 0.0) for e in ((2, 0, 0), (0, 2, 0), (0, 0, 2))],
            dtype=complex,
        )
        got = got / got[0]
        assert np.linalg.norm(got - ref) < 1e-6

    def test_implicit_fit_needs_enough_points(self):
        samples = sample_curve_points(CONIC, 3, seed=4)
        with pytest.raises(DegenerateError):
            implicit_fit([s.point for s in samples], max_degree=4)
