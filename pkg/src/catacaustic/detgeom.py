"""Geometry of the determinantal hypersurface in the space of symmetric 3x3
matrices.

Delta = {det B = 0} contains two families of maximal linear subspaces:

* Delta_S = {B : B S = 0}, matrices annihilating a fixed point S;
* Delta(L) = {B : B restricted to L is identically zero}, a fixed line L.

Every 2-plane (pencil) inside Delta lies in a member of one family or the
other; classify_pencil decides which (possibly both). Rank <= 2 quadratic
forms split into two lines, exactly over the Gaussian rationals when the
discriminant has a square root there, numerically otherwise.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DegenerateError
from .gauss import exactify, gauss_sqrt, is_exact, to_complex
from .linalg import nullspace, numeric_nullspace, numeric_rank, rank, rref
from .euclid import Line, ProjPoint, SymMat, proj_distance
from .poly import BinForm, padd, pmul, pnormalize


# ---------------------------------------------------------------------------
# determinants
# ---------------------------------------------------------------------------


def det3(m: SymMat):
    """Determinant of a symmetric matrix from its six entries."""
    a, b, c, d, e, f = m.entries  # 00, 01, 02, 11, 12, 22
    return a * (d * f - e * e) - b * (b * f - e * c) + c * (b * e - d * c)


def pencil_det_form(pencil: "Pencil") -> BinForm:
    """det(l*B0 + m*B1) as an exact binary cubic in (l, m)."""
    b0, b1 = pencil.b0, pencil.b1
    ent = [pnormalize([exactify(e1), exactify(e0)]) for e0, e1 in zip(b0.entries, b1.entries)]
    a, b, c, d, e, f = ent  # affine lists in l (constant term = B1 part)

    def mul3(u, v, w):
        return pmul(pmul(u, v), w)

    det = mul3(a, d, f)
    det = padd(det, [-v for v in mul3(a, e, e)])
    det = padd(det, [-v for v in mul3(b, b, f)])
    det = padd(det, mul3(b, e, c))
    det = padd(det, mul3(c, b, e))
    det = padd(det, [-v for v in mul3(c, d, c)])
    if not det:
        return BinForm.zero()
    return BinForm.from_affine(det, 3)


# ---------------------------------------------------------------------------
# rank / kernel / image
# ---------------------------------------------------------------------------


def rank_sym(m: SymMat, tol: float = 1e-8) -> int:
    if m.is_exact:
        return rank(m.rows())
    return numeric_rank(m.to_numpy(), tol)


def kernel_sym(m: SymMat, tol: float = 1e-8):
    """Basis of ker(B) as coordinate lists (exact) or numpy vectors."""
    if m.is_exact:
        return nullspace(m.rows())
    vecs, _ = numeric_nullspace(m.to_numpy(), tol)
    return vecs


def image_basis(m: SymMat, tol: float = 1e-8):
    """Basis of the column space. For symmetric B this equals ker(B)-perp
    under the standard (transpose, not Hermitian) pairing."""
    if m.is_exact:
        reduced, pivots = rref(m.rows())
        return [reduced[i] for i in range(len(pivots))]
    mat = m.to_numpy()
    u, s, _ = np.linalg.svd(mat)
    if s.size == 0 or s[0] == 0.0:
        return []
    keep = int(np.sum(s > tol * s[0]))
    return [u[:, i] for i in range(keep)]


def veronese_point(p: ProjPoint) -> SymMat:
    """Image of a plane point under the quadratic Veronese map, x x^t."""
    return SymMat.outer(p.coords)


def is_veronese(m: SymMat, tol: float = 1e-8) -> bool:
    return rank_sym(m, tol) == 1


# ---------------------------------------------------------------------------
# conic factorization
# ---------------------------------------------------------------------------


def _sqrt_scalar(value):
    """(exact_flag, square root) over Q(i) when possible, else complex."""
    if is_exact(value):
        root = gauss_sqrt(value)
        if root is not None:
            return True, root
        return False, cmath.sqrt(to_complex(value))
    return False, cmath.sqrt(to_complex(value))


def factor_conic(m: SymMat, tol: float = 1e-10):
    """Split a rank <= 2 quadratic form into two lines.

    Returns (l1, l2, exact). Exact whenever the needed square root lies in
    the Gaussian rationals; otherwise the lines are numeric and the residual
    |B - sym(l1, l2)/2| is verified below `tol` relative to |B|.
    """
    r = rank_sym(m, tol=1e-10 if not m.is_exact else 1e-8)
    if r == 3:
        raise DegenerateError("factor_conic: full-rank conic does not split")
    if r == 0:
        raise DegenerateError("factor_conic: zero matrix")
    perms = [(0, 1, 2), (1, 0, 2), (2, 1, 0)]
    for perm in perms:
        if m.entry(perm[0], perm[0]):
            return _factor_with_corner(m, perm, tol)
    # all diagonal entries vanish: q = 2(B01 x0 x1 + B02 x0 x2 + B12 x1 x2),
    # and det = 2*B01*B02*B12 = 0 kills one product
    b01, b02, b12 = m.entry(0, 1), m.entry(0, 2), m.entry(1, 2)
    zero = Fraction(0)
    if not b12:
        pair = (Line((1, 0, 0)), Line((zero, zero + b01, zero + b02)))
    elif not b02:
        pair = (Line((0, 1, 0)), Line((zero + b01, zero, zero + b12)))
    else:
        pair = (Line((0, 0, 1)), Line((zero + b02, zero + b12, zero)))
    l1, l2 = pair
    _check_split(m, l1, l2, True, tol)
    return l1, l2, m.is_exact


def _factor_with_corner(m: SymMat, perm, tol):
    i, j, k = perm
    a = m.entry(i, i)
    # complete the square on x_i: a*q = L1^2 + (qjj xj^2 + 2 qjk xj xk + qkk xk^2)
    l1 = [None, None, None]
    l1[i], l1[j], l1[k] = a, m.entry(i, j), m.entry(i, k)
    qjj = m.entry(j, j) * a - m.entry(i, j) ** 2
    qjk = m.entry(j, k) * a - m.entry(i, j) * m.entry(i, k)
    qkk = m.entry(k, k) * a - m.entry(i, k) ** 2
    # rank <= 2 forces qjk^2 = qjj*qkk, so the complement is s * L2^2
    if qjj:
        s = qjj
        l2 = [None, None, None]
        l2[i], l2[j], l2[k] = 0 * a, qjj, qjk
    elif qkk:
        s = qkk
        l2 = [None, None, None]
        l2[i], l2[j], l2[k] = 0 * a, qjk, qkk
    else:
        # rank-one form: q = a * L1^2 (qjk must vanish too)
        line = Line(l1)
        _check_split(m, line, line, True, tol)
        return line, line, m.is_exact
    # a*q = L1^2 + (1/s)*L2^2, so a*q = (L1 + w L2)(L1 - w L2) with w^2 = -1/s
    exact, w = _sqrt_scalar(-1 / (s if is_exact(s) else to_complex(s)))
    if exact:
        lp = tuple(l1[t] + w * l2[t] for t in range(3))
        lm = tuple(l1[t] - w * l2[t] for t in range(3))
        line1, line2 = Line(lp), Line(lm)
        _check_split(m, line1, line2, True, tol)
        return line1, line2, True
    l1c = [to_complex(v) for v in l1]
    l2c = [to_complex(v) for v in l2]
    lp = tuple(l1c[t] + w * l2c[t] for t in range(3))
    lm = tuple(l1c[t] - w * l2c[t] for t in range(3))
    line1, line2 = Line(lp), Line(lm)
    _check_split(m, line1, line2, False, tol)
    return line1, line2, False


def _check_split(m: SymMat, l1: Line, l2: Line, exact: bool, tol: float):
    recon = SymMat.sym_outer(l1.coords, l2.coords)
    if exact and m.is_exact and l1.is_exact and l2.is_exact:
        a = [exactify(v) for v in recon.entries]
        b = [exactify(v) for v in m.entries]
        for i in range(6):
            for j in range(6):
                if a[i] * b[j] != a[j] * b[i]:
                    raise DegenerateError("factor_conic: exact split verification failed")
        return
    va = np.array([to_complex(v) for v in recon.entries])
    vb = np.array([to_complex(v) for v in m.entries])
    if proj_distance(va, vb) > tol:
        raise DegenerateError("factor_conic: numeric split residual too large")


# ---------------------------------------------------------------------------
# pencils
# ---------------------------------------------------------------------------


@dataclass
class Pencil:
    b0: SymMat
    b1: SymMat

    def __post_init__(self):
        if not (self.b0.is_exact and self.b1.is_exact):
            raise ValueError("pencils require exact entries")
        if rank([[exactify(v) for v in self.b0.vec6()], [exactify(v) for v in self.b1.vec6()]]) != 2:
            raise DegenerateError("pencil members must be linearly independent")

    def member(self, lam, mu) -> SymMat:
        return self.b0 * lam + self.b1 * mu


@dataclass
class PencilClass:
    kind: str  # "not_in_delta" | "in_delta"
    det_form: BinForm | None = None
    delta_S: ProjPoint | None = None
    delta_L: Line | None = None
    exact: bool = True


def classify_pencil(pencil: Pencil, tol: float = 1e-8) -> PencilClass:
    """Decide where the pencil sits relative to Delta.

    Outside Delta iff the determinant form is not identically zero. Inside,
    the pencil lies in some Delta_S (common exact kernel) and/or some
    Delta(L) (common line factor of all members); by the classification of
    maximal subspaces one of the two must happen, so falling through is a
    loud internal failure, never a silent "unclassified".
    """
    det_form = pencil_det_form(pencil)
    if not det_form.is_zero:
        return PencilClass(kind="not_in_delta", det_form=det_form)
    stacked = [row for m in (pencil.b0, pencil.b1) for row in m.rows()]
    null = nullspace(stacked)
    delta_s = None
    if len(null) == 1:
        delta_s = ProjPoint(null[0])
    elif len(null) > 1:
        raise RuntimeError(
            "independent symmetric matrices cannot share a 2-dimensional kernel"
        )
    members = [pencil.b0, pencil.b1, pencil.b0 + pencil.b1]
    factor_sets = []
    exact_all = True
    for m in members:
        l1, l2, exact = factor_conic(m, tol=1e-10)
        exact_all = exact_all and exact
        factor_sets.append((l1, l2))
    delta_l = None
    for cand in factor_sets[0]:
        if all(any(cand.eq(l, tol) for l in pair) for pair in factor_sets[1:]):
            delta_l = cand
            break
    if delta_l is not None and exact_all:
        _verify_delta_l(pencil, delta_l)
    if delta_s is None and delta_l is None:
        raise RuntimeError(
            "pencil inside the determinantal hypersurface matched neither family; "
            "this contradicts the subspace classification and is a bug"
        )
    return PencilClass(
        kind="in_delta", delta_S=delta_s, delta_L=delta_l, exact=exact_all
    )


def _verify_delta_l(pencil: Pencil, line: Line):
    """Exact check that both generators vanish identically on the line."""
    basis = _line_point_basis(line)
    for m in (pencil.b0, pencil.b1):
        for u in basis:
            for v in basis:
                if m.quad(u, v) != 0:
                    raise RuntimeError("delta_L candidate failed the exact restriction test")


def _line_point_basis(line: Line):
    """Two exact points spanning a line given by an exact dual triple."""
    return [tuple(v) for v in nullspace([list(line.coords)])]


def delta_s_members(s: ProjPoint):
    """Three independent matrices spanning {B : B S = 0}."""
    if not s.is_exact:
        raise ValueError("delta_s_members needs an exact point")
    basis = nullspace([list(s.coords)])
    u, v = basis[0], basis[1]
    return (
        SymMat.outer(u),
        SymMat.outer(v),
        SymMat.sym_outer(u, v),
    )


def delta_l_members(line: Line):
    """Three independent matrices spanning {B : B|_L = 0} = L * (linear forms)."""
    if not line.is_exact:
        raise ValueError("delta_l_members needs an exact line")
    l = line.coords
    basis = (
        (Fraction(1), Fraction(0), Fraction(0)),
        (Fraction(0), Fraction(1), Fraction(0)),
        (Fraction(0), Fraction(0), Fraction(1)),
    )
    return tuple(SymMat.sym_outer(l, e) for e in basis)
