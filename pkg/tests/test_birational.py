"""One-to-one checks for the ray map and for matrix-curve projections."""

import json
from fractions import Fraction

import numpy as np
import pytest

from catacaustic.birational import (
    MatrixCurve,
    WHOLE_PLANE_DEGENERATE,
    is_caustic_birational,
    is_projection_birational,
    kernel_curve,
    lambda_fiber_count,
    projection_fiber_count,
    recover_point_from_B,
)
from catacaustic.caustic import sample_curve_points
from catacaustic.detgeom import rank_sym
from catacaustic.errors import DegenerateError, ParseError
from catacaustic.euclid import Curve, ProjPoint, SymMat, matB
from catacaustic.poly import MPoly, proj_distance

F = Fraction
X0 = MPoly.variable(0)
X1 = MPoly.variable(1)
X2 = MPoly.variable(2)

CIRCLE = Curve(X0 * X0 + X1 * X1 - X2 * X2)
CONIC = Curve(X0 * X0 + X1 * X1 * 2 - X2 * X2)
FERMAT = Curve(X0 ** 3 + X1 ** 3 + X2 ** 3)
SOURCE = ProjPoint((F(2), F(1), F(1)))

VERONESE = MatrixCurve.from_rank_one(([F(1)], [F(0), F(1)], [F(0), F(0), F(1)]))


class TestMatrixCurveParsing:
    def test_entry_polynomials(self):
        d = MatrixCurve.from_dict({"b00": "1 - 2*t + t^3", "b12": "3/2*t^2"})
        assert d.entry(0, 0) == [F(1), F(-2), F(0), F(1)]
        assert d.entry(1, 2) == [F(0), F(0), F(3, 2)]
        assert d.entry(2, 2) == []
        assert d.degree == 3

    def test_symmetric_indexing(self):
        d = MatrixCurve.from_dict({"b01": "t"})
        assert d.entry(1, 0) == d.entry(0, 1)

    def test_from_json(self):
        d = MatrixCurve.from_json(json.dumps({"b00": "1", "b11": "t^2"}))
        assert d.degree == 2

    def test_bad_json_position(self):
        with pytest.raises(ParseError):
            MatrixCurve.from_json("{\"b00\": ")

    def test_unknown_key_rejected(self):
        with pytest.raises(ParseError):
            MatrixCurve.from_dict({"b33": "1"})

    def test_zero_matrix_rejected(self):
        with pytest.raises(DegenerateError):
            MatrixCurve.from_dict({"b00": "0"})

    def test_parse_error_has_position(self):
        with pytest.raises(ParseError) as exc:
            MatrixCurve.from_dict({"b00": "1 + ^2"})
        assert "position" in str(exc.value)

    def test_rank_one_lift(self):
        x = ([F(1)], [F(0), F(1)], [F(0), F(0), F(1)])
        d = MatrixCurve.from_rank_one(x)
        assert d.entry(0, 0) == [F(1)]
        assert d.entry(0, 1) == [F(0), F(1)]
        assert d.entry(1, 1) == [F(0), F(0), F(1)]

    def test_eval_at(self):
        m = VERONESE.eval_at(F(3))
        assert m.entry(0, 0) == 1
        assert m.entry(0, 1) == 3
        assert m.entry(1, 1) == 9
        assert rank_sym(m) == 1


class TestKernelCurve:
    def test_generic_has_none(self):
        assert kernel_curve(VERONESE) is None

    def test_common_kernel_found(self):
        d = MatrixCurve.from_dict({"b00": "1", "b01": "t", "b11": "t^3"})
        k = kernel_curve(d)
        assert isinstance(k, ProjPoint)
        assert k.eq(ProjPoint((0, 0, 1)))

    def test_line_kernel(self):
        d = MatrixCurve.from_dict({"b22": "1"})
        k = kernel_curve(d)
        assert k == WHOLE_PLANE_DEGENERATE


class TestProjectionFibers:
    def test_veronese_fiber_one(self):
        s = ProjPoint((F(1), F(1), F(1)))
        assert projection_fiber_count(VERONESE, s, F(2)) == 1
        assert projection_fiber_count(VERONESE, s, F(-1, 3)) == 1

    def test_verdict_veronese(self):
        rep = is_projection_birational(VERONESE, seed=0)
        assert rep.verdict == "birational"
        assert rep.generic_fiber == 1
        assert rep.s_prime is None

    def test_exceptional_family(self):
        # all members kill e3: the projection factors through (S')-perp
        d = MatrixCurve.from_dict({"b00": "1", "b01": "t", "b11": "t^3"})
        rep = is_projection_birational(d, seed=0)
        assert rep.verdict == "exceptional"
        assert rep.s_prime is not None
        assert rep.s_prime.eq(ProjPoint((0, 0, 1)))
        assert rep.generic_fiber == 3

    def test_line_in_delta_s_is_birational(self):
        d = MatrixCurve.from_dict({"b00": "1", "b01": "t"})
        rep = is_projection_birational(d, seed=0)
        assert rep.verdict == "birational"

    def test_whole_plane_kernel_degenerate(self):
        d = MatrixCurve.from_dict({"b22": "1 + t"})
        with pytest.raises(DegenerateError):
            is_projection_birational(d, seed=0)

    def test_seed_stability(self):
        verdicts = {is_projection_birational(VERONESE, seed=s).verdict for s in (0, 1, 5)}
        assert verdicts == {"birational"}


class TestRayMapFibers:
    def test_conic_fiber_one(self):
        for s in sample_curve_points(CONIC, 3, seed=0):
            assert lambda_fiber_count(CONIC, SOURCE, s) == 1

    def test_circle_center_fiber_two(self):
        # antipodal mirror points share each reflected ray through the center
        center = ProjPoint((F(0), F(0), F(1)))
        for s in sample_curve_points(CIRCLE, 3, seed=0):
            assert lambda_fiber_count(CIRCLE, center, s) == 2

    def test_verdicts(self):
        rep = is_caustic_birational(CONIC, SOURCE, n_samples=4)
        assert rep.verdict == "birational"
        assert rep.generic_fiber == 1

        center = ProjPoint((F(0), F(0), F(1)))
        rep2 = is_caustic_birational(CIRCLE, center, n_samples=4)
        assert rep2.verdict == "non-birational"
        assert rep2.generic_fiber == 2

    def test_cubic_verdict(self):
        rep = is_caustic_birational(FERMAT, SOURCE, n_samples=3)
        assert rep.verdict == "birational"
        assert rep.generic_fiber == 1

    def test_line_mirror_rejected(self):
        line = Curve(X0 + X1 * 2 - X2)
        with pytest.raises(DegenerateError):
            is_caustic_birational(line, SOURCE)


class TestPointRecovery:
    def test_roundtrip(self):
        p = ProjPoint((F(3, 5), F(4, 5), F(1)))
        m = matB(CIRCLE, p)
        q = recover_point_from_B(CIRCLE, m)
        assert proj_distance(q.to_numpy(), p.to_numpy()) < 1e-8

    def test_numeric_roundtrip(self):
        theta = 0.73
        p = ProjPoint((np.cos(theta), np.sin(theta), 1.0))
        m = matB(CIRCLE).eval_at(p.to_numpy())
        q = recover_point_from_B(CIRCLE, m)
        assert proj_distance(q.to_numpy(), p.to_numpy()) < 1e-7

    def test_kernel_of_rank_two_matrix(self):
        m = SymMat((F(1), F(0), F(0), F(1), F(0), F(0)))  # diag(1, 1, 0)
        q = recover_point_from_B(CIRCLE, m)
        assert q.eq(ProjPoint((0, 0, 1)))

    def test_wrong_rank_rejected(self):
        full = SymMat((F(1), F(0), F(0), F(1), F(0), F(1)))
        with pytest.raises(DegenerateError):
            recover_point_from_B(CIRCLE, full)
