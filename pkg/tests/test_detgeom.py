"""Symmetric 3x3 pencils and the determinantal cubic hypersurface."""

from fractions import Fraction

import numpy as np
import pytest

from catacaustic.detgeom import (
    Pencil,
    classify_pencil,
    delta_l_members,
    delta_s_members,
    det3,
    factor_conic,
    image_basis,
    is_veronese,
    kernel_sym,
    pencil_det_form,
    rank_sym,
    veronese_point,
)
from catacaustic.draws import random_rational_triple, rng_stream
from catacaustic.errors import DegenerateError
from catacaustic.euclid import Line, ProjPoint, SymMat
from catacaustic.poly import MPoly, count_distinct_roots

F = Fraction


def sym(a, b, c, d, e, f):
    return SymMat((F(a), F(b), F(c), F(d), F(e), F(f)))


DIAG111 = sym(1, 0, 0, 1, 0, 1)
DIAG110 = sym(1, 0, 0, 1, 0, 0)
RANK1 = SymMat.outer((F(1), F(2), F(3)))


class TestDeterminant:
    def test_det3_identity(self):
        assert det3(DIAG111) == 1
        assert det3(DIAG110) == 0

    def test_det3_matches_numpy(self):
        rng = rng_stream(11, "det3")
        for _ in range(20):
            entries = [random_rational_triple(rng)[0] for _ in range(6)]
            m = SymMat(tuple(entries))
            expect = np.linalg.det(np.array(m.rows(), dtype=float))
            assert float(det3(m)) == pytest.approx(expect, abs=1e-8)

    def test_pencil_det_form_diag(self):
        # det(l*I + m*diag(1,1,0)) = (l + m)^2 l
        form = pencil_det_form(Pencil(DIAG111, DIAG110))
        assert form.degree == 3
        assert count_distinct_roots(form) == 2

    def test_pencil_det_form_diagonal_split(self):
        # det(l*I + m*diag(1,2,3)) = (l+m)(l+2m)(l+3m)
        other = sym(1, 0, 0, 2, 0, 3)
        form = pencil_det_form(Pencil(DIAG111, other))
        assert count_distinct_roots(form) == 3

    def test_pencil_det_form_vanishes_inside_delta(self):
        b0, b1, _ = delta_s_members(ProjPoint((F(0), F(0), F(1))))
        assert pencil_det_form(Pencil(b0, b1)).is_zero


class TestRankKernel:
    def test_kernel_exact(self):
        ker = kernel_sym(DIAG110)
        assert len(ker) == 1
        assert list(ker[0]) == [0, 0, 1]

    def test_rank_numeric(self):
        m = SymMat(tuple(float(v) for v in (1, 0, 0, 1, 0, 0)))
        assert rank_sym(m) == 2

    def test_image_perp_kernel(self):
        img = image_basis(DIAG110)
        for u in img:
            assert sum(a * b for a, b in zip(u, (0, 0, 1))) == 0

    def test_veronese_rank_one(self):
        v = veronese_point(ProjPoint((F(1), F(2), F(3))))
        assert is_veronese(v)
        assert rank_sym(v) == 1
        assert not is_veronese(DIAG110)


class TestFactorConic:
    def test_rank_two_splits(self):
        # x0^2 - x1^2 = (x0 - x1)(x0 + x1)
        m = SymMat.from_conic(MPoly.variable(0) ** 2 - MPoly.variable(1) ** 2)
        l1, l2, exact = factor_conic(m)
        assert exact
        got = {tuple(Line(l).coords) for l in (l1, l2)}
        assert Line((1, -1, 0)).eq(l1) or Line((1, -1, 0)).eq(l2)

    def test_rank_one_doubles(self):
        m = SymMat.outer((F(1), F(0), F(-1)))
        l1, l2, exact = factor_conic(m)
        assert exact
        assert l1.eq(l2)

    def test_irrational_split_is_numeric_but_verified(self):
        # x0^2 - 2 x1^2 needs sqrt(2): factorization leaves Q(i)
        m = SymMat.from_conic(MPoly.variable(0) ** 2 - MPoly.variable(1) ** 2 * 2)
        l1, l2, exact = factor_conic(m)
        assert not exact
        a = np.asarray(l1.to_numpy())
        b = np.asarray(l2.to_numpy())
        outer = (np.outer(a, b) + np.outer(b, a)) / 2
        target = m.to_numpy()
        scale = np.linalg.norm(target)
        best = min(
            np.linalg.norm(outer * s - target)
            for s in (np.sum(outer * target) / np.sum(outer * outer),)
        )
        assert best < 1e-8 * scale

    def test_full_rank_rejected(self):
        with pytest.raises(DegenerateError):
            factor_conic(DIAG111)


class TestClassification:
    def test_generic_pencil_not_in_delta(self):
        pc = classify_pencil(Pencil(DIAG111, DIAG110))
        assert pc.kind == "not_in_delta"
        assert pc.det_form is not None
        assert pc.det_form.degree == 3

    def test_common_kernel_pencil(self):
        s = ProjPoint((F(1), F(-1), F(2)))
        b0, b1, _ = delta_s_members(s)
        pc = classify_pencil(Pencil(b0, b1))
        assert pc.kind == "in_delta"
        assert pc.delta_S is not None
        assert pc.delta_S.eq(s)

    def test_common_line_pencil(self):
        line = Line((F(1), F(2), F(-1)))
        b0, b1, _ = delta_l_members(line)
        pc = classify_pencil(Pencil(b0, b1))
        assert pc.kind == "in_delta"
        assert pc.delta_L is not None
        assert pc.delta_L.eq(line)

    def test_members_move_inside_delta_s(self):
        # every member of a Delta_S pencil kills S
        s = ProjPoint((F(2), F(1), F(1)))
        b0, _, b2 = delta_s_members(s)
        pencil = Pencil(b0, b2)
        for lam, mu in ((F(1), F(0)), (F(1), F(1)), (F(3), F(-2))):
            m = pencil.member(lam, mu)
            assert all(v == 0 for v in m.mat_vec(s.coords))

    def test_delta_l_members_vanish_on_line(self):
        line = Line((F(1), F(0), F(-1)))
        p = (F(1), F(0), F(1))
        q = (F(1), F(1), F(1))
        for m in delta_l_members(line):
            for u in (p, q):
                for v in (p, q):
                    assert m.quad(u, v) == 0

    def test_dependent_generators_rejected(self):
        with pytest.raises(DegenerateError):
            Pencil(DIAG111, DIAG111 * F(2))

    def test_random_pencils_not_in_delta(self):
        rng = rng_stream(5, "random-pencils")
        hits = 0
        for _ in range(25):
            e0 = tuple(random_rational_triple(rng)[0] for _ in range(6))
            e1 = tuple(random_rational_triple(rng)[0] for _ in range(6))
            try:
                pencil = Pencil(SymMat(e0), SymMat(e1))
            except DegenerateError:
                continue
            pc = classify_pencil(pencil)
            assert pc.kind == "not_in_delta"
            hits += 1
        assert hits >= 20
