"""Projective points, plane curves, and the reflection-ray matrices.

A mirror curve C = {f = 0} reflects rays from a source point S. At a smooth
point P the tangent direction vector is the gradient T = (f0, f1, f2) and the
normal line (Euclidean normal, viewed projectively) is

    N = (-x2*f1, x2*f0, -(f0*x1 - f1*x0)).

The incident and reflected rays through P are linear images of S:

    incident(S)  = A(P) S,   A = -T N^t + N T^t   (antisymmetric)
    reflected(S) = B(P) S,   B =  T N^t + N T^t   (symmetric, rank <= 2)

so that the four lines (N, T, incident, reflected) are harmonic: the
reflection law says their cross ratio is -1. Entries of A and B are
polynomials of degree 2d - 1 in the point.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd as int_gcd
from math import inf

import numpy as np

from .errors import DegenerateError
from .gauss import GaussRat, exactify, is_exact, to_complex
from .linalg import rank as exact_rank
from .poly import MPoly, pdiv_exact, pgcd, pmul, pnormalize, proj_distance


# ---------------------------------------------------------------------------
# projective triples
# ---------------------------------------------------------------------------


def _normalize_exact(coords):
    coords = [exactify(c) for c in coords]
    lcm = 1
    for c in coords:
        parts = (c.re, c.im) if isinstance(c, GaussRat) else (Fraction(c),)
        for p in parts:
            lcm = lcm * p.denominator // int_gcd(lcm, p.denominator)
    ints = []
    for c in coords:
        if isinstance(c, GaussRat):
            ints.append(GaussRat(c.re * lcm, c.im * lcm))
        else:
            ints.append(Fraction(c) * lcm)
    content = 0
    for c in ints:
        parts = (c.re, c.im) if isinstance(c, GaussRat) else (c,)
        for p in parts:
            content = int_gcd(content, abs(p.numerator))
    if content > 1:
        ints = [c / content for c in ints]
    for c in ints:
        if isinstance(c, GaussRat):
            key = c.re if c.re else c.im
        else:
            key = c
        if key:
            if key < 0:
                ints = [-v for v in ints]
            break
    return tuple(exactify(c) for c in ints)


def _normalize_numeric(coords):
    v = np.asarray([to_complex(c) for c in coords], dtype=complex)
    nrm = np.linalg.norm(v)
    if nrm == 0:
        raise ValueError("zero projective triple")
    v = v / nrm
    mags = np.abs(v)
    lead = int(np.argmax(mags >= 0.5 * mags.max()))
    phase = v[lead] / abs(v[lead])
    return tuple((v / phase).tolist())


class _Triple:
    """Shared behavior of projective points and lines."""

    __slots__ = ("coords", "is_exact")

    def __init__(self, coords):
        coords = tuple(coords)
        if len(coords) != 3:
            raise ValueError("projective triples have three coordinates")
        exact = all(is_exact(c) for c in coords)
        if exact and not any(coords):
            raise ValueError("zero projective triple")
        self.coords = _normalize_exact(coords) if exact else _normalize_numeric(coords)
        self.is_exact = exact

    def to_numpy(self) -> np.ndarray:
        return np.asarray([to_complex(c) for c in self.coords], dtype=complex)

    def eq(self, other, tol: float = 1e-8) -> bool:
        """Projective equality: all 2x2 minors vanish (to tol on numeric data)."""
        a, b = self.coords, other.coords
        if self.is_exact and other.is_exact:
            return all(
                a[i] * b[j] - a[j] * b[i] == 0 for i in range(3) for j in range(i + 1, 3)
            )
        return proj_distance(self.to_numpy(), other.to_numpy()) <= tol

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def __repr__(self):
        body = ", ".join(str(c) for c in self.coords)
        return f"{type(self).__name__}({body})"


class ProjPoint(_Triple):
    pass


class Line(_Triple):
    pass


def _cross(a, b):
    return (
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    )


def join(p: ProjPoint, q: ProjPoint) -> Line:
    """Line through two points (cross product of the triples)."""
    try:
        return Line(_cross(p.coords, q.coords))
    except ValueError:
        raise DegenerateError("join undefined: the points coincide") from None


def meet(l1: Line, l2: Line) -> ProjPoint:
    try:
        return ProjPoint(_cross(l1.coords, l2.coords))
    except ValueError:
        raise DegenerateError("meet undefined: the lines coincide") from None


def cyclic_points():
    """The two fixed points of the 90-degree rotation on the line at infinity."""
    return (
        ProjPoint((Fraction(1), GaussRat(0, 1), Fraction(0))),
        ProjPoint((Fraction(1), GaussRat(0, -1), Fraction(0))),
    )


def iota(p: ProjPoint, tol: float = 1e-8) -> ProjPoint:
    """Quarter-turn on the line at infinity: (x, y, 0) -> (-y, x, 0)."""
    if p.is_exact:
        if p.coords[2] != 0:
            raise DegenerateError("iota is only defined on the line at infinity")
        return ProjPoint((-p.coords[1], p.coords[0], Fraction(0)))
    v = p.to_numpy()
    if abs(v[2]) > tol:
        raise DegenerateError("iota is only defined on the line at infinity")
    return ProjPoint((-v[1], v[0], 0.0))


# ---------------------------------------------------------------------------
# curves
# ---------------------------------------------------------------------------


class Curve:
    """Plane algebraic curve {f = 0}, f homogeneous with exact coefficients.

    Irreducibility is not checked; callers that need it are documented.
    """

    __slots__ = ("poly", "gradient", "degree")

    def __init__(self, poly: MPoly):
        if poly.is_zero:
            raise ValueError("the zero polynomial does not define a curve")
        if not poly.is_exact:
            raise ValueError("curves require exact coefficients")
        if poly.degree < 1:
            raise ValueError("a curve needs degree >= 1")
        self.poly = poly
        self.gradient = poly.gradient()
        self.degree = poly.degree

    def _scale(self) -> float:
        return self.poly.coefficient_norm() * max(1.0, len(self.poly.terms)) ** 0.5

    def contains(self, p: ProjPoint, tol: float = 1e-8) -> bool:
        if p.is_exact:
            return self.poly.eval(p.coords) == 0
        return abs(self.poly.eval_complex(p.coords)) <= tol * self._scale()

    def grad_at(self, p: ProjPoint):
        return tuple(g.eval(p.coords) if p.is_exact else g.eval_complex(p.coords) for g in self.gradient)

    def is_smooth_at(self, p: ProjPoint, tol: float = 1e-8) -> bool:
        g = self.grad_at(p)
        if p.is_exact and self.poly.is_exact:
            return any(g)
        return float(np.linalg.norm([to_complex(v) for v in g])) > tol * max(
            (gr.coefficient_norm() for gr in self.gradient), default=1.0
        )


def normal_polys(curve: Curve):
    """The normal-line vector N(x) as three polynomials (degree d each)."""
    f0, f1, f2 = curve.gradient
    x0, x1, x2 = (MPoly.variable(i) for i in range(3))
    return (-(x2 * f1), x2 * f0, -(f0 * x1 - f1 * x0))


def tangent_line(curve: Curve, p: ProjPoint, tol: float = 1e-8) -> Line:
    if not curve.contains(p, tol):
        raise DegenerateError("tangent undefined: point not on curve")
    if not curve.is_smooth_at(p, tol):
        raise DegenerateError("tangent undefined: singular point")
    return Line(curve.grad_at(p))


def normal_line(curve: Curve, p: ProjPoint, tol: float = 1e-8) -> Line:
    if not curve.contains(p, tol):
        raise DegenerateError("normal undefined: point not on curve")
    if not curve.is_smooth_at(p, tol):
        raise DegenerateError("normal undefined: singular point")
    npolys = normal_polys(curve)
    n = [q.eval(p.coords) if p.is_exact else q.eval_complex(p.coords) for q in npolys]
    if p.is_exact:
        if not any(n):
            raise DegenerateError("normal undefined at this point")
    else:
        scale = max(q.coefficient_norm() for q in npolys)
        if float(np.linalg.norm([to_complex(v) for v in n])) <= tol * scale:
            raise DegenerateError("normal undefined at this point")
    return Line(n)


# ---------------------------------------------------------------------------
# matrices
# ---------------------------------------------------------------------------

_SYM_KEYS = ((0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2))


class SymMat:
    """Symmetric 3x3 matrix, six stored entries (00, 01, 02, 11, 12, 22).

    Entries are scalars or MPoly; the same class serves quadratic forms and
    the polynomial reflected-ray matrix.
    """

    __slots__ = ("entries",)

    def __init__(self, entries):
        entries = tuple(entries)
        if len(entries) != 6:
            raise ValueError("SymMat takes six entries: 00, 01, 02, 11, 12, 22")
        self.entries = entries

    @classmethod
    def sym_outer(cls, u, v):
        """u v^t + v u^t for 3-vectors of scalars or polynomials."""
        return cls(tuple(u[i] * v[j] + u[j] * v[i] for i, j in _SYM_KEYS))

    @classmethod
    def outer(cls, u):
        """Rank-one form u u^t."""
        return cls(tuple(u[i] * u[j] for i, j in _SYM_KEYS))

    @classmethod
    def from_conic(cls, q: MPoly):
        if q.is_zero or q.degree != 2:
            raise ValueError("a conic is a nonzero quadratic form")
        half = Fraction(1, 2)

        def coeff(i, j):
            e = [0, 0, 0]
            e[i] += 1
            e[j] += 1
            c = q.terms.get(tuple(e), Fraction(0))
            return c if i == j else c * half

        return cls(tuple(coeff(i, j) for i, j in _SYM_KEYS))

    def entry(self, i, j):
        if i > j:
            i, j = j, i
        return self.entries[_SYM_KEYS.index((i, j))]

    def rows(self):
        return [[self.entry(i, j) for j in range(3)] for i in range(3)]

    def mat_vec(self, v):
        return tuple(
            self.entry(i, 0) * v[0] + self.entry(i, 1) * v[1] + self.entry(i, 2) * v[2]
            for i in range(3)
        )

    def quad(self, u, v=None):
        """u^t M v (v defaults to u)."""
        v = u if v is None else v
        w = self.mat_vec(v)
        return u[0] * w[0] + u[1] * w[1] + u[2] * w[2]

    def to_conic(self) -> MPoly:
        x = [MPoly.variable(i) for i in range(3)]
        out = MPoly.zero()
        for (i, j), e in zip(_SYM_KEYS, self.entries):
            term = x[i] * x[j] * e
            out = out + (term if i == j else term * 2)
        return out

    def eval_at(self, point):
        vals = []
        for e in self.entries:
            if isinstance(e, MPoly):
                vals.append(e.eval(point) if all(is_exact(c) for c in point) else e.eval_complex(point))
            else:
                vals.append(e)
        return SymMat(vals)

    def is_zero(self):
        return all((e.is_zero if isinstance(e, MPoly) else not e) for e in self.entries)

    @property
    def is_exact(self):
        return all(
            (e.is_exact if isinstance(e, MPoly) else is_exact(e)) for e in self.entries
        )

    def to_numpy(self) -> np.ndarray:
        return np.array([[to_complex(self.entry(i, j)) for j in range(3)] for i in range(3)])

    def vec6(self):
        return list(self.entries)

    def __add__(self, other):
        return SymMat(tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other):
        return SymMat(tuple(a - b for a, b in zip(self.entries, other.entries)))

    def __mul__(self, scalar):
        return SymMat(tuple(e * scalar for e in self.entries))

    __rmul__ = __mul__

    def __repr__(self):
        return f"SymMat{self.entries!r}"


class SkewMat:
    """Antisymmetric 3x3 matrix, three stored entries (01, 02, 12)."""

    __slots__ = ("entries",)

    def __init__(self, entries):
        entries = tuple(entries)
        if len(entries) != 3:
            raise ValueError("SkewMat takes three entries: 01, 02, 12")
        self.entries = entries

    @classmethod
    def skew_outer(cls, u, v):
        """-u v^t + v u^t."""
        return cls(
            (
                -(u[0] * v[1]) + v[0] * u[1],
                -(u[0] * v[2]) + v[0] * u[2],
                -(u[1] * v[2]) + v[1] * u[2],
            )
        )

    def entry(self, i, j):
        if i == j:
            zero = self.entries[0]
            return (zero - zero) if isinstance(zero, MPoly) else 0 * zero
        sign = 1
        if i > j:
            i, j, sign = j, i, -1
        idx = {(0, 1): 0, (0, 2): 1, (1, 2): 2}[(i, j)]
        e = self.entries[idx]
        return e if sign > 0 else -e

    def rows(self):
        return [[self.entry(i, j) for j in range(3)] for i in range(3)]

    def mat_vec(self, v):
        a01, a02, a12 = self.entries
        return (
            a01 * v[1] + a02 * v[2],
            -(a01 * v[0]) + a12 * v[2],
            -(a02 * v[0]) - a12 * v[1],
        )

    def eval_at(self, point):
        vals = []
        for e in self.entries:
            if isinstance(e, MPoly):
                vals.append(e.eval(point) if all(is_exact(c) for c in point) else e.eval_complex(point))
            else:
                vals.append(e)
        return SkewMat(vals)

    def to_numpy(self) -> np.ndarray:
        return np.array([[to_complex(self.entry(i, j)) for j in range(3)] for i in range(3)])

    def __repr__(self):
        return f"SkewMat{self.entries!r}"


def matB(curve: Curve, p: ProjPoint | None = None):
    """Reflected-ray matrix B = T N^t + N T^t (entries of degree 2d - 1)."""
    t = curve.gradient
    n = normal_polys(curve)
    b = SymMat.sym_outer(t, n)
    return b if p is None else b.eval_at(p.coords)


def matA(curve: Curve, p: ProjPoint | None = None):
    """Incident-ray matrix A = -T N^t + N T^t (antisymmetric)."""
    t = curve.gradient
    n = normal_polys(curve)
    a = SkewMat.skew_outer(t, n)
    return a if p is None else a.eval_at(p.coords)


def _ray(matrix_at_p, s: ProjPoint, tol: float, exact: bool) -> Line:
    vec = matrix_at_p.mat_vec(s.coords)
    if exact:
        if not any(vec):
            raise DegenerateError("ray undefined: the ray vector vanishes at this point")
        return Line(vec)
    v = np.asarray([to_complex(c) for c in vec])
    scale = max(abs(x) for x in np.ravel(matrix_at_p.to_numpy())) or 1.0
    if np.linalg.norm(v) <= tol * scale:
        raise DegenerateError("ray undefined: the ray vector vanishes at this point")
    return Line(v)


def incident_ray(curve: Curve, p: ProjPoint, s: ProjPoint, tol: float = 1e-8) -> Line:
    exact = p.is_exact and s.is_exact
    return _ray(matA(curve, p), s, tol, exact)


def reflected_ray(curve: Curve, p: ProjPoint, s: ProjPoint, tol: float = 1e-8) -> Line:
    exact = p.is_exact and s.is_exact
    return _ray(matB(curve, p), s, tol, exact)


# ---------------------------------------------------------------------------
# cross ratio of a concurrent quadruple
# ---------------------------------------------------------------------------


def cross_ratio(l1: Line, l2: Line, l3: Line, l4: Line, tol: float = 1e-8):
    """Cross ratio of four concurrent lines, in C union {inf}.

    Exact inputs give an exact value. The pencil is coordinatized by
    dropping the largest coordinate of the common point; the cross ratio is
    independent of that choice.
    """
    lines = (l1, l2, l3, l4)
    exact = all(l.is_exact for l in lines)
    for i in range(4):
        for j in range(i + 1, 4):
            if lines[i].eq(lines[j], tol):
                raise DegenerateError("cross ratio degenerate: two lines coincide")
    p = meet(l1, l2)
    if exact:
        if any(sum(l[k] * p[k] for k in range(3)) != 0 for l in (l3, l4)):
            raise DegenerateError("cross ratio undefined: lines not concurrent")
        drop = max(range(3), key=lambda k: abs(to_complex(p[k])))
    else:
        pv = p.to_numpy()
        for l in (l3, l4):
            lv = l.to_numpy()
            if abs(np.dot(lv, pv)) > tol * np.linalg.norm(lv) * np.linalg.norm(pv):
                raise DegenerateError("cross ratio undefined: lines not concurrent")
        drop = int(np.argmax(np.abs(pv)))
    r, s = [k for k in range(3) if k != drop]

    def det2(a, b):
        return a[r] * b[s] - a[s] * b[r]

    num = det2(l1, l3) * det2(l2, l4)
    den = det2(l1, l4) * det2(l2, l3)
    if exact:
        if not den:
            return inf
        return exactify(num / den)
    num, den = to_complex(num), to_complex(den)
    if abs(den) <= tol * max(abs(num), 1e-300):
        return inf
    return num / den


# ---------------------------------------------------------------------------
# conics with a rational point admit an exact quadratic parametrization
# ---------------------------------------------------------------------------


def parametrize_conic(curve: Curve, p0: ProjPoint):
    """Exact degree-2 parametrization t -> x(t) of a smooth conic.

    p0 must be an exact point on the conic. Returns three coefficient lists
    (ascending powers of t); the content is removed, so x(t) never vanishes.
    Construction: the residual intersection of the line through p0 with
    direction u(t) = w0 + t*w1 is q(u) p0 - 2 beta(p0, u) u.
    """
    if curve.degree != 2:
        raise ValueError("parametrize_conic needs a conic")
    if not (p0.is_exact and curve.contains(p0)):
        raise ValueError("parametrize_conic needs an exact point on the conic")
    m = SymMat.from_conic(curve.poly)
    basis = [
        (Fraction(1), Fraction(0), Fraction(0)),
        (Fraction(0), Fraction(1), Fraction(0)),
        (Fraction(0), Fraction(0), Fraction(1)),
    ]
    w0 = w1 = None
    for i in range(3):
        for j in range(i + 1, 3):
            if exact_rank([list(p0.coords), list(basis[i]), list(basis[j])]) == 3:
                w0, w1 = basis[i], basis[j]
                break
        if w0 is not None:
            break
    # u(t) = w0 + t w1 coordinatewise: list [w0_i, w1_i]
    u = [[w0[i], w1[i]] for i in range(3)]

    def bilinear(a_lists, b_lists):
        out = []
        for i in range(3):
            for j in range(3):
                c = m.entry(i, j)
                if c:
                    out = _list_add(out, pmul(a_lists[i], [v * c for v in b_lists[j]]))
        return pnormalize(out)

    p0l = [[c] for c in p0.coords]
    q_u = bilinear(u, u)
    beta = bilinear(p0l, u)
    x = []
    for i in range(3):
        xi = _list_sub(pmul(q_u, p0l[i]), pmul([2 * v for v in beta], u[i]))
        x.append(pnormalize(xi))
    content = pgcd(pgcd(x[0], x[1]), x[2])
    if len(content) > 1:
        x = [pdiv_exact([Fraction(v) for v in xi], content) for xi in x]
    return tuple(x)


def _list_add(a, b):
    n = max(len(a), len(b))
    out = [Fraction(0)] * n
    for i, v in enumerate(a):
        out[i] += v
    for i, v in enumerate(b):
        out[i] += v
    return out


def _list_sub(a, b):
    n = max(len(a), len(b))
    out = [Fraction(0)] * n
    for i, v in enumerate(a):
        out[i] += v
    for i, v in enumerate(b):
        out[i] -= v
    return out
