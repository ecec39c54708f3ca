"""Exact polynomial layer for homogeneous trivariate geometry.

Everything downstream (ray matrices, degree counts, fiber counts) rests on
four operations implemented here:

* resultants of homogeneous trivariate polynomials via fraction-free Bareiss
  elimination on the Sylvester matrix (exact, integer arithmetic);
* GCD / squarefree parts of homogeneous binary forms, done homogeneously so
  roots at infinity keep their multiplicities;
* complex root extraction through companion-matrix eigenvalues
  (numpy.roots) followed by tolerance clustering;
* solve_system: distinct-solution counting for a pair of curves through a
  seeded random projective coordinate change, exact resultant, exact
  squarefree degree, and numeric back-substitution. A floating twin
  (solve_system_numeric) interpolates the Sylvester determinant at roots of
  unity for inputs with floating coefficients.

Coefficients are Fractions on the exact paths; points may carry GaussRat
coordinates. Numeric data is plain complex.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd as int_gcd

import numpy as np

from .draws import random_int_matrix, random_rotation, rng_stream
from .errors import (
    ClusterAmbiguityError,
    CommonComponentError,
    DegenerateError,
    NonHomogeneousError,
    UnluckyCoordinatesError,
    ZeroPolynomialDegree,
)
from .gauss import GaussRat, exactify, is_exact, to_complex

VAR_NAMES = ("x0", "x1", "x2")


# ---------------------------------------------------------------------------
# dense univariate coefficient lists (index = exponent)
# ---------------------------------------------------------------------------


def pnormalize(c):
    c = list(c)
    while c and not c[-1]:
        c.pop()
    return c


def pdeg(c):
    return len(c) - 1


def padd(a, b):
    n = max(len(a), len(b))
    out = [0] * n
    for i, v in enumerate(a):
        out[i] = out[i] + v
    for i, v in enumerate(b):
        out[i] = out[i] + v
    return pnormalize(out)


def psub(a, b):
    n = max(len(a), len(b))
    out = [0] * n
    for i, v in enumerate(a):
        out[i] = out[i] + v
    for i, v in enumerate(b):
        out[i] = out[i] - v
    return pnormalize(out)


def pmul(a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, va in enumerate(a):
        if not va:
            continue
        for j, vb in enumerate(b):
            if vb:
                out[i + j] = out[i + j] + va * vb
    return pnormalize(out)


def pscale(a, s):
    if not s:
        return []
    return pnormalize([v * s for v in a])


def pderiv(a):
    return pnormalize([a[i] * i for i in range(1, len(a))])


def peval(a, x):
    out = 0
    for c in reversed(a):
        out = out * x + c
    return out


def pdiv_exact(a, b):
    """Exact quotient a / b; raises if the division leaves a remainder.

    Works over the integers (Bareiss pivots divide exactly by theory) and
    over Fraction/GaussRat coefficients.
    """
    a = list(a)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    if not a:
        return []
    if len(a) < len(b):
        raise ArithmeticError("inexact polynomial division")
    lead = b[-1]
    integer = all(isinstance(v, int) for v in a) and all(isinstance(v, int) for v in b)
    q = [0] * (len(a) - len(b) + 1)
    for k in range(len(q) - 1, -1, -1):
        top = a[k + len(b) - 1]
        if not top:
            continue
        if integer:
            if top % lead:
                raise ArithmeticError("inexact polynomial division")
            coef = top // lead
        else:
            coef = top / lead
        q[k] = coef
        for j, vb in enumerate(b):
            a[k + j] = a[k + j] - coef * vb
    if any(a[: len(b) - 1]):
        raise ArithmeticError("inexact polynomial division")
    return pnormalize(q)


def _int_content(a):
    c = 0
    for v in a:
        c = int_gcd(c, abs(v))
    return c or 1


def _prim_int(a):
    c = _int_content(a)
    return [v // c for v in a]


def _clear_denominators(a):
    """Fraction list -> primitive integer list (up to a positive scale)."""
    lcm = 1
    for v in a:
        d = Fraction(v).denominator
        lcm = lcm * d // int_gcd(lcm, d)
    ints = [int(Fraction(v) * lcm) for v in a]
    return _prim_int(ints)


def _prem_int(a, b):
    """Pseudo-remainder of integer lists: lc(b)^(da-db+1) * a mod b."""
    a = list(a)
    db = pdeg(b)
    lead = b[-1]
    while pdeg(a) >= db and a:
        k = pdeg(a) - db
        la = a[-1]
        a = [v * lead for v in a]
        for j, vb in enumerate(b):
            a[k + j] -= la * vb
        a = pnormalize(a)
    return a


def pgcd(a, b):
    """GCD of univariate polynomials with exact coefficients.

    Rational inputs run a primitive pseudo-remainder sequence over the
    integers; GaussRat inputs use monic Euclid over Q(i). The result is
    normalized (primitive / monic) and only defined up to scale anyway.
    """
    a = pnormalize([exactify(v) for v in a])
    b = pnormalize([exactify(v) for v in b])
    if not a:
        return b
    if not b:
        return a
    gaussian = any(isinstance(v, GaussRat) for v in a + b)
    if gaussian:
        while b:
            _, r = _pdivmod_field(a, b)
            a, b = b, r
        return pmonic(a)
    ia, ib = _clear_denominators(a), _clear_denominators(b)
    if pdeg(ia) < pdeg(ib):
        ia, ib = ib, ia
    while ib:
        r = _prem_int(ia, ib)
        ia, ib = ib, _prim_int(r) if r else []
    g = _prim_int(ia)
    if g and g[-1] < 0:
        g = [-v for v in g]
    return [Fraction(v) for v in g]


def _pdivmod_field(a, b):
    a = list(a)
    lead = b[-1]
    q = [0] * max(len(a) - len(b) + 1, 0)
    for k in range(len(q) - 1, -1, -1):
        top = a[k + len(b) - 1]
        if not top:
            continue
        coef = top / lead
        q[k] = coef
        for j, vb in enumerate(b):
            a[k + j] = a[k + j] - coef * vb
    return pnormalize(q), pnormalize(a[: len(b) - 1])


def pmonic(a):
    if not a:
        return a
    lead = a[-1]
    return [exactify(v / lead) for v in a]


def psquarefree(a):
    """Squarefree part (product of distinct irreducible factors), exact."""
    a = pnormalize([exactify(v) for v in a])
    if not a or pdeg(a) == 0:
        return a
    g = pgcd(a, pderiv(a))
    if pdeg(g) == 0:
        return a
    q, r = _pdivmod_field(a, g)
    if r:
        raise ArithmeticError("squarefree division left a remainder")
    return q


# ---------------------------------------------------------------------------
# homogeneous trivariate polynomials
# ---------------------------------------------------------------------------


def _fmt_monomial(expo):
    parts = [
        VAR_NAMES[i] if e == 1 else f"{VAR_NAMES[i]}^{e}"
        for i, e in enumerate(expo)
        if e
    ]
    return "*".join(parts) if parts else "1"


def _fmt_coeff(c):
    if isinstance(c, complex):
        return f"({c.real:.12g}{c.imag:+.12g}i)"
    return str(c)


class MPoly:
    """Homogeneous polynomial in x0, x1, x2.

    terms maps exponent triples to nonzero coefficients; the zero polynomial
    is the empty map and has no degree (asking for one raises).
    """

    __slots__ = ("terms",)

    def __init__(self, terms):
        acc = {}
        for expo, coeff in terms.items():
            e = (int(expo[0]), int(expo[1]), int(expo[2]))
            if min(e) < 0:
                raise ValueError(f"negative exponent in {e}")
            c = exactify(coeff) if is_exact(coeff) else complex(coeff)
            acc[e] = acc[e] + c if e in acc else c
        clean = {e: c for e, c in acc.items() if (c != 0 if isinstance(c, complex) else bool(c))}
        degrees = {}
        for e in clean:
            degrees.setdefault(sum(e), []).append(e)
        if len(degrees) > 1:
            # the majority degree is taken as intended; everything else offends
            ref = max(degrees, key=lambda d: (len(degrees[d]), -d))
            offending = sorted(e for d, es in degrees.items() if d != ref for e in es)
            raise NonHomogeneousError(
                "non-homogeneous polynomial; offending monomials: "
                + ", ".join(_fmt_monomial(e) for e in offending),
                monomials=offending,
            )
        self.terms = clean

    # -- constructors ---------------------------------------------------

    @classmethod
    def zero(cls):
        return cls({})

    @classmethod
    def constant(cls, c):
        return cls({(0, 0, 0): c})

    @classmethod
    def variable(cls, i):
        e = [0, 0, 0]
        e[i] = 1
        return cls({tuple(e): Fraction(1)})

    @classmethod
    def monomial(cls, expo, coeff=1):
        return cls({tuple(expo): coeff})

    # -- structure -------------------------------------------------------

    @property
    def is_zero(self):
        return not self.terms

    @property
    def degree(self):
        if not self.terms:
            raise ZeroPolynomialDegree("degree of the zero polynomial is undefined")
        return sum(next(iter(self.terms)))

    @property
    def is_exact(self):
        return all(is_exact(c) for c in self.terms.values())

    def degree_in(self, var):
        if not self.terms:
            raise ZeroPolynomialDegree("degree of the zero polynomial is undefined")
        return max(e[var] for e in self.terms)

    def __eq__(self, other):
        return isinstance(other, MPoly) and self.terms == other.terms

    def __bool__(self):
        return bool(self.terms)

    # -- ring operations ---------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, MPoly):
            return NotImplemented
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, 0) + c
            if (isinstance(s, complex) and s == 0) or (not isinstance(s, complex) and not s):
                out.pop(e, None)
            else:
                out[e] = s
        return MPoly(out)

    def __neg__(self):
        return MPoly({e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, MPoly):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, MPoly):
            out = {}
            for e1, c1 in self.terms.items():
                for e2, c2 in other.terms.items():
                    e = (e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2])
                    out[e] = out.get(e, 0) + c1 * c2
            return MPoly(out)
        return MPoly({e: c * other for e, c in self.terms.items()})

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative power")
        out = MPoly.constant(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def partial(self, var):
        out = {}
        for e, c in self.terms.items():
            if e[var]:
                ne = list(e)
                ne[var] -= 1
                out[tuple(ne)] = c * e[var]
        return MPoly(out)

    def gradient(self):
        return (self.partial(0), self.partial(1), self.partial(2))

    def eval(self, point):
        x0, x1, x2 = point
        out = 0
        for (e0, e1, e2), c in self.terms.items():
            out = out + c * x0**e0 * x1**e1 * x2**e2
        return out

    def eval_complex(self, point):
        x0, x1, x2 = (to_complex(v) for v in point)
        out = 0j
        for (e0, e1, e2), c in self.terms.items():
            out += to_complex(c) * x0**e0 * x1**e1 * x2**e2
        return out

    def coeffs_wrt(self, var):
        """Coefficient polynomials of x_var^j, j = 0..degree_in(var)."""
        top = self.degree_in(var)
        buckets = [dict() for _ in range(top + 1)]
        for e, c in self.terms.items():
            ne = list(e)
            j = ne[var]
            ne[var] = 0
            buckets[j][tuple(ne)] = c
        return [MPoly(b) for b in buckets]

    def compose_linear(self, m):
        """f(M x): substitute x_i -> sum_j m[i][j] x_j."""
        lin = [
            MPoly({(1, 0, 0): m[i][0], (0, 1, 0): m[i][1], (0, 0, 1): m[i][2]})
            for i in range(3)
        ]
        powers = [{0: MPoly.constant(1)}, {0: MPoly.constant(1)}, {0: MPoly.constant(1)}]

        def power(i, e):
            if e not in powers[i]:
                powers[i][e] = power(i, e - 1) * lin[i]
            return powers[i][e]

        out = MPoly.zero()
        for (e0, e1, e2), c in self.terms.items():
            out = out + power(0, e0) * power(1, e1) * power(2, e2) * c
        return out

    def coefficient_norm(self):
        return max((abs(to_complex(c)) for c in self.terms.values()), default=0.0)

    def to_numeric(self):
        return MPoly({e: to_complex(c) for e, c in self.terms.items()})

    def __str__(self):
        if not self.terms:
            return "0"
        keys = sorted(self.terms, reverse=True)
        parts = []
        for e in keys:
            c = self.terms[e]
            mono = _fmt_monomial(e)
            if mono == "1":
                parts.append(_fmt_coeff(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append(f"-{mono}")
            else:
                parts.append(f"{_fmt_coeff(c)}*{mono}")
        text = " + ".join(parts)
        return text.replace("+ -", "- ")

    __repr__ = __str__


# ---------------------------------------------------------------------------
# homogeneous binary forms
# ---------------------------------------------------------------------------

INFINITY_ROOT = (1.0 + 0j, 0.0 + 0j)


class BinForm:
    """Homogeneous binary form. coeffs[k] multiplies u^k * v^(degree-k).

    The structural degree may exceed the affine degree in u; the gap is the
    multiplicity of the root at infinity (1 : 0).
    """

    __slots__ = ("coeffs", "vars")

    def __init__(self, coeffs, vars=(0, 1)):
        coeffs = [exactify(c) if is_exact(c) else complex(c) for c in coeffs]
        if not coeffs:
            raise ValueError("a BinForm needs an explicit coefficient list")
        self.coeffs = tuple(coeffs)
        self.vars = tuple(vars)

    @classmethod
    def zero(cls, vars=(0, 1)):
        return cls([Fraction(0)], vars=vars)

    @classmethod
    def from_affine(cls, affine, degree, vars=(0, 1)):
        affine = list(affine)
        if len(affine) > degree + 1:
            raise ValueError("affine part longer than homogeneous degree allows")
        return cls(affine + [0] * (degree + 1 - len(affine)), vars=vars)

    @property
    def is_zero(self):
        return all(not c for c in self.coeffs)

    @property
    def is_exact(self):
        return all(is_exact(c) for c in self.coeffs)

    @property
    def degree(self):
        if self.is_zero:
            raise ZeroPolynomialDegree("degree of the zero form is undefined")
        return len(self.coeffs) - 1

    def affine(self):
        """Coefficients of form(u, 1) with exact trailing zeros stripped."""
        return pnormalize(list(self.coeffs))

    def affine_numeric(self, rel_tol=1e-12):
        vals = [to_complex(c) for c in self.coeffs]
        top = max((abs(v) for v in vals), default=0.0)
        if top == 0.0:
            return []
        cut = len(vals)
        while cut > 0 and abs(vals[cut - 1]) <= rel_tol * top:
            cut -= 1
        return vals[:cut]

    def infinity_multiplicity(self):
        return self.degree - pdeg(self.affine())

    def eval(self, u, v):
        n = len(self.coeffs) - 1
        out = 0
        for k, c in enumerate(self.coeffs):
            if c:
                out = out + c * u**k * v ** (n - k)
        return out

    def __mul__(self, other):
        if isinstance(other, BinForm):
            if self.is_zero or other.is_zero:
                return BinForm.zero(self.vars)
            prod = pmul(list(self.coeffs), list(other.coeffs))
            return BinForm.from_affine(prod, self.degree + other.degree, self.vars)
        return BinForm([c * other for c in self.coeffs], self.vars)

    __rmul__ = __mul__

    def proportional(self, other) -> bool:
        """Exact projective equality of forms (same degree, parallel coeffs)."""
        a, b = list(self.coeffs), list(other.coeffs)
        if len(a) != len(b):
            return False
        for i in range(len(a)):
            for j in range(len(a)):
                if a[i] * b[j] != a[j] * b[i]:
                    return False
        return not (self.is_zero ^ other.is_zero)

    def __str__(self):
        u, v = (VAR_NAMES[self.vars[0]], VAR_NAMES[self.vars[1]])
        if self.is_zero:
            return "0"
        n = self.degree
        parts = []
        for k in range(n, -1, -1):
            c = self.coeffs[k]
            if not c:
                continue
            paw = []
            if k:
                paw.append(u if k == 1 else f"{u}^{k}")
            if n - k:
                paw.append(v if n - k == 1 else f"{v}^{n - k}")
            mono = "*".join(paw) if paw else "1"
            if mono == "1":
                parts.append(_fmt_coeff(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append(f"-{mono}")
            else:
                parts.append(f"{_fmt_coeff(c)}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    __repr__ = __str__


def gcd_form(a: BinForm, b: BinForm) -> BinForm:
    """Exact GCD of binary forms, keeping common roots at infinity."""
    if a.is_zero:
        return b
    if b.is_zero:
        return a
    fa, fb = a.affine(), b.affine()
    g = pgcd(fa, fb)
    inf = min(a.infinity_multiplicity(), b.infinity_multiplicity())
    return BinForm.from_affine(g, pdeg(g) + inf, vars=a.vars)


def squarefree(a: BinForm) -> BinForm:
    """Product of the distinct irreducible factors of a (via a / gcd(a, a'))."""
    if a.is_zero:
        raise ZeroPolynomialDegree("squarefree of the zero form is undefined")
    aff = psquarefree(a.affine())
    inf = 1 if a.infinity_multiplicity() else 0
    return BinForm.from_affine(aff, pdeg(aff) + inf, vars=a.vars)


def count_distinct_roots(a: BinForm) -> int:
    """Number of distinct projective roots, exactly."""
    if a.is_zero:
        raise ZeroPolynomialDegree("the zero form vanishes identically")
    if a.degree == 0:
        return 0
    return squarefree(a).degree


def complex_roots(a: BinForm, tol: float = 1e-8):
    """All projective roots with multiplicity, as ((u, v), multiplicity).

    Roots come from companion-matrix eigenvalues of the dehomogenization
    (numpy.roots); the deficiency of the leading coefficient contributes the
    root at infinity (1 : 0). Near-coincident roots are merged by
    single-linkage clustering at `tol`; a merge decision that would flip
    within a factor of 10 of the tolerance raises ClusterAmbiguityError.
    """
    if a.is_zero:
        raise ZeroPolynomialDegree("the zero form vanishes identically")
    n = a.degree
    aff = a.affine_numeric() if not a.is_exact else [to_complex(c) for c in a.affine()]
    pairs = []
    if len(aff) > 1:
        rts = np.roots(aff[::-1])
        pairs.extend((complex(r), 1.0 + 0j) for r in rts)
    pairs.extend([INFINITY_ROOT] * (n - (len(aff) - 1 if aff else n)))
    return cluster_projective(pairs, tol)


# ---------------------------------------------------------------------------
# numeric clustering (projective, chordal metric)
# ---------------------------------------------------------------------------


def _unit(vec):
    v = np.asarray(vec, dtype=complex)
    nrm = np.linalg.norm(v)
    return v / nrm if nrm else v


def proj_distance(p, q) -> float:
    """Chordal distance: norm of the wedge of the unit representatives."""
    p = _unit(p)
    q = _unit(q)
    if p.shape[0] == 2:
        return abs(p[0] * q[1] - p[1] * q[0])
    if p.shape[0] == 3:
        return float(np.linalg.norm(np.cross(p, q)))
    # higher dimension: sin of the Hermitian angle, computed as a projection
    # residual to avoid cancellation near zero
    return float(np.linalg.norm(p - np.vdot(q, p) * q))


def _cluster(items, tol, dist):
    n = len(items)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    gaps = []
    for i in range(n):
        for j in range(i + 1, n):
            d = dist(items[i], items[j])
            if d <= tol:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[ri] = rj
            else:
                gaps.append((d, i, j))
    # ambiguity: a pair that stayed separate but sits within 10x of the merge
    # radius makes the count untrustworthy
    for d, i, j in gaps:
        if find(i) != find(j) and d <= 10 * tol:
            raise ClusterAmbiguityError(
                f"ambiguous clustering: separation {d:.3e} within 10x of tolerance {tol:.3e}"
            )
    groups = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return list(groups.values())


def cluster_projective(pairs, tol):
    """Cluster projective tuples (any fixed length); returns (rep, mult) list."""
    if not pairs:
        return []
    units = [_unit(p) for p in pairs]
    groups = _cluster(units, tol, proj_distance)
    out = []
    for idx in groups:
        base = units[idx[0]]
        acc = np.zeros_like(base)
        for i in idx:
            v = units[i]
            phase = np.vdot(v, base)
            v = v * (phase / abs(phase)) if abs(phase) > 0 else v
            acc = acc + v
        rep = _unit(acc)
        out.append((tuple(rep.tolist()), len(idx)))
    out.sort(key=lambda rm: (-rm[1], tuple((z.real, z.imag) for z in rm[0])))
    return out


def cluster_points(points, tol):
    """Distinct representatives of numeric projective points (3-vectors)."""
    return cluster_projective([np.asarray(p, dtype=complex) for p in points], tol)


def match_point(p, reps, tol) -> int | None:
    """Index of the representative within tol of p, or None."""
    p = np.asarray(p, dtype=complex)
    best, best_d = None, None
    for i, r in enumerate(reps):
        d = proj_distance(p, np.asarray(r, dtype=complex))
        if best_d is None or d < best_d:
            best, best_d = i, d
    if best is not None and best_d <= tol:
        return best
    return None


# ---------------------------------------------------------------------------
# resultants
# ---------------------------------------------------------------------------


def _coeff_affine_lists(f: MPoly, var: int, other):
    """Coefficient forms of x_var^j as affine integer lists in x_other[0]."""
    coeffs = f.coeffs_wrt(var)
    out = []
    for c in coeffs:
        lst = []
        for e, v in c.terms.items():
            k = e[other[0]]
            while len(lst) <= k:
                lst.append(Fraction(0))
            lst[k] += v
        out.append(pnormalize(lst))
    return out


def _scale_rows_to_int(rows):
    lcm = 1
    for lst in rows:
        for v in lst:
            d = Fraction(v).denominator
            lcm = lcm * d // int_gcd(lcm, d)
    return [[int(Fraction(v) * lcm) for v in lst] for lst in rows]


def _bareiss_det(mat):
    """Fraction-free Bareiss determinant of a matrix of coefficient lists."""
    n = len(mat)
    m = [[list(e) for e in row] for row in mat]
    sign = 1
    prev = [1]
    for k in range(n - 1):
        if not m[k][k]:
            pivot = next((i for i in range(k + 1, n) if m[i][k]), None)
            if pivot is None:
                return []
            m[k], m[pivot] = m[pivot], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = psub(pmul(m[k][k], m[i][j]), pmul(m[i][k], m[k][j]))
                m[i][j] = pdiv_exact(num, prev) if num else []
            m[i][k] = []
        prev = m[k][k]
    det = m[n - 1][n - 1]
    return [-c for c in det] if sign < 0 else det


def _sylvester(fco, gco):
    """Sylvester matrix from coefficient lists ordered by ascending power."""
    mf, mg = len(fco) - 1, len(gco) - 1
    size = mf + mg
    rows = []
    for r in range(mg):
        row = [[] for _ in range(size)]
        for k in range(mf + 1):
            row[r + k] = list(fco[mf - k])
        rows.append(row)
    for r in range(mf):
        row = [[] for _ in range(size)]
        for k in range(mg + 1):
            row[r + k] = list(gco[mg - k])
        rows.append(row)
    return rows


def resultant_wrt(f: MPoly, g: MPoly, var: int) -> BinForm:
    """Resultant of two homogeneous polynomials w.r.t. one variable.

    The result is a binary form in the remaining variables, homogeneous of
    degree (df-mf)*mg + (dg-mg)*mf + mf*mg where m* are the degrees in the
    eliminated variable; the zero form signals a common component. Computed
    by fraction-free Bareiss elimination over integer coefficient lists, so
    the output is exact up to a positive rational scale.
    """
    if f.is_zero or g.is_zero:
        raise ZeroPolynomialDegree("resultant with the zero polynomial")
    if not (f.is_exact and g.is_exact):
        raise ValueError("exact resultant requires exact coefficients")
    mf, mg = f.degree_in(var), g.degree_in(var)
    if mf == 0 or mg == 0:
        raise DegenerateError(
            f"resultant undefined: input constant in eliminated variable {VAR_NAMES[var]}"
        )
    other = tuple(i for i in range(3) if i != var)
    df, dg = f.degree, g.degree
    total = (df - mf) * mg + (dg - mg) * mf + mf * mg
    fco = _scale_rows_to_int(_coeff_affine_lists(f, var, other))
    gco = _scale_rows_to_int(_coeff_affine_lists(g, var, other))
    det = _bareiss_det(_sylvester(fco, gco))
    if not det:
        return BinForm.zero(vars=other)
    return BinForm.from_affine([Fraction(v) for v in det], total, vars=other)


def resultant_numeric(f: MPoly, g: MPoly, var: int) -> BinForm:
    """Floating resultant: Sylvester determinants interpolated at roots of unity."""
    if f.is_zero or g.is_zero:
        raise ZeroPolynomialDegree("resultant with the zero polynomial")
    mf, mg = f.degree_in(var), g.degree_in(var)
    if mf == 0 or mg == 0:
        raise DegenerateError(
            f"resultant undefined: input constant in eliminated variable {VAR_NAMES[var]}"
        )
    other = tuple(i for i in range(3) if i != var)
    df, dg = f.degree, g.degree
    total = (df - mf) * mg + (dg - mg) * mf + mf * mg
    fco = [[to_complex(v) for v in lst] for lst in _coeff_affine_lists(f.to_numeric(), var, other)]
    gco = [[to_complex(v) for v in lst] for lst in _coeff_affine_lists(g.to_numeric(), var, other)]
    npts = total + 1
    nodes = np.exp(2j * np.pi * np.arange(npts) / npts)
    size = mf + mg
    values = np.empty(npts, dtype=complex)
    for idx, t in enumerate(nodes):
        mat = np.zeros((size, size), dtype=complex)
        for r in range(mg):
            for k in range(mf + 1):
                mat[r, r + k] = peval(fco[mf - k], t)
        for r in range(mf):
            for k in range(mg + 1):
                mat[mg + r, r + k] = peval(gco[mg - k], t)
        values[idx] = np.linalg.det(mat)
    # values[k] = R(w^k) with w = e^{2pi i/n} is an inverse DFT of the
    # coefficients, so the forward transform recovers them; ifft here would
    # hand back the coefficient list reversed
    coeffs = np.fft.fft(values) / npts
    return BinForm(list(coeffs), vars=other)


# ---------------------------------------------------------------------------
# solve_system
# ---------------------------------------------------------------------------


@dataclass
class SolveResult:
    count: int
    points: list = field(default_factory=list)
    matrix: list = field(default_factory=list)
    attempts: int = 1
    seed: int = 0


def _hom_eval(affine, structural_deg, a, b):
    out = 0j
    for k, c in enumerate(affine):
        if c:
            out += to_complex(c) * a**k * b ** (structural_deg - k)
    return out


def _coeff_eval_lists(h: MPoly, var: int, other):
    """(affine list, structural degree) per power of x_var, complex coeffs."""
    lists = _coeff_affine_lists(h.to_numeric(), var, other)
    d = h.degree
    return [([to_complex(v) for v in lst], d - j) for j, lst in enumerate(lists)]


def _form_roots_raw(a: BinForm):
    """Numeric projective roots of a binary form as unnormalized (u, v)
    pairs, with multiplicity repeats and no clustering. Callers feeding
    Newton starts want coverage, not a count."""
    if a.is_exact:
        aff = [to_complex(c) for c in a.affine()]
    else:
        aff = a.affine_numeric()
    out = []
    if len(aff) > 1:
        arr = np.array(aff[::-1], dtype=complex)
        out.extend((complex(r), 1.0 + 0j) for r in np.roots(arr))
    out.extend([(1.0 + 0j, 0j)] * (a.degree - (len(aff) - 1 if aff else a.degree)))
    return out


def _lift_solutions(f2, g2, res, expected, tol):
    """Numeric solution points of {f2 = 0, g2 = 0} in the rotated frame.

    Resultant roots are treated as coarse hints only: every fiber of the
    lower-degree polynomial over every root seeds a Gauss-Newton polish of
    the full system, and the converged points are filtered by a scale-free
    solution test, then clustered. With `expected` set, the distinct cluster
    count must reproduce the exact root count (a miss means an inaccurate
    lift or a projection collision; the caller retries with fresh
    coordinates). With `expected=None` the clusters themselves are the
    answer. Returns the representatives, or None on any mismatch.
    """
    fib = f2 if f2.degree <= g2.degree else g2
    fl = _coeff_eval_lists(fib, 2, (0, 1))
    starts = []
    for u, v in _form_roots_raw(res):
        nrm = (abs(u) ** 2 + abs(v) ** 2) ** 0.5
        a, b = u / nrm, v / nrm
        pf = np.array([_hom_eval(lst, sd, a, b) for lst, sd in fl][::-1], dtype=complex)
        for z in np.roots(pf):
            starts.append(_unit(np.array([a, b, z])))
    fg = [f2.to_numeric(), g2.to_numeric()]
    norms = [q.coefficient_norm() or 1.0 for q in fg]
    parts = [[q.partial(j) for j in range(3)] for q in fg]
    genuine = []
    for w in _newton_polish(f2, g2, starts, iters=30):
        # |p(w)| <= tol*|grad p(w)| is a first-order distance bound; the
        # additive floor covers solutions at singular points of one curve
        if all(
            abs(q.eval_complex(w))
            <= tol * np.linalg.norm([pp.eval_complex(w) for pp in pj]) + 1e-13 * s
            for q, pj, s in zip(fg, parts, norms)
        ):
            genuine.append(w)
    if not genuine:
        return None
    try:
        clusters = cluster_points(genuine, 1e-7)
    except ClusterAmbiguityError:
        return None
    if expected is not None and len(clusters) != expected:
        return None
    return [np.asarray(rep, dtype=complex) for rep, _mult in clusters]


def _apply_matrix(m, points):
    arr = np.array([[to_complex(v) for v in row] for row in m], dtype=complex)
    return [_unit(arr @ p) for p in points]


def _newton_polish(f: MPoly, g: MPoly, points, iters: int = 30):
    """Refine solution points of {f, g} by projective Gauss-Newton.

    Each step solves the full 2x3 Jacobian in least squares, gauge-fixed
    orthogonal to the current representative (pinning one coordinate instead
    can hit a singular 2x2 minor at perfectly regular solutions). Steps are
    backtracked and kept only while the residual shrinks, so bad starts
    stall in place instead of flying off.
    """
    fg = [f.to_numeric(), g.to_numeric()]
    scales = [q.coefficient_norm() or 1.0 for q in fg]
    parts = [[q.partial(j) for j in range(3)] for q in fg]

    def residual(v):
        return max(abs(q.eval_complex(v)) / s for q, s in zip(fg, scales))

    out = []
    for p in points:
        v = _unit(np.asarray(p, dtype=complex))
        best = residual(v)
        for _ in range(iters):
            rhs = -np.array([q.eval_complex(v) for q in fg])
            jac = np.array(
                [[parts[r][j].eval_complex(v) for j in range(3)] for r in range(2)]
            )
            jac = jac - np.outer(jac @ v, v.conj())
            delta, *_ = np.linalg.lstsq(jac, rhs, rcond=None)
            delta = delta - np.vdot(v, delta) * v
            width = float(np.linalg.norm(delta))
            if not np.isfinite(width) or width < 1e-16:
                break
            stepped = None
            for t in (1.0, 0.5, 0.25):
                w = _unit(v + t * delta)
                r = residual(w)
                if r < best:
                    stepped = (w, r)
                    break
            if stepped is None:
                break
            v, best = stepped
        out.append(v)
    return out


def solve_system(
    f: MPoly, g: MPoly, seed: int = 0, tol: float = 1e-8, count_only: bool = False
) -> SolveResult:
    """Distinct projective solutions of {f = 0, g = 0}, counted exactly.

    A seeded random invertible integer coordinate change makes the
    elimination proper (unit leading coefficients in x2); the distinct count
    is the squarefree degree of the exact resultant. Numeric representatives
    come from polishing every fiber candidate over the resultant roots and
    must reproduce the exact count, else fresh coordinates are tried, up to
    a retry budget. With count_only no numeric work happens at all and the
    points list comes back empty.
    """
    if f.is_zero or g.is_zero:
        raise ZeroPolynomialDegree("solve_system with the zero polynomial")
    if not (f.is_exact and g.is_exact):
        raise ValueError("solve_system needs exact coefficients; see solve_system_numeric")
    rng = rng_stream(seed, "solve")
    last = None
    for attempt in range(1, 6):
        m = random_int_matrix(rng)
        f2 = f.compose_linear(m)
        g2 = g.compose_linear(m)
        df, dg = f.degree, g.degree
        if (0, 0, df) not in f2.terms or (0, 0, dg) not in g2.terms:
            last = "improper leading coefficient"
            continue
        res = resultant_wrt(f2, g2, 2)
        if res.is_zero:
            raise CommonComponentError("the two curves share a common component")
        sq = squarefree(res)
        count = sq.degree
        if count_only:
            return SolveResult(
                count=count, matrix=[list(row) for row in m], attempts=attempt, seed=seed
            )
        pts = _lift_solutions(f2, g2, sq, count, tol)
        if pts is None:
            last = "lifted solutions do not reproduce the exact root count"
            continue
        return SolveResult(
            count=count,
            points=_newton_polish(f, g, _apply_matrix(m, pts)),
            matrix=[list(row) for row in m],
            attempts=attempt,
            seed=seed,
        )
    raise UnluckyCoordinatesError(f"unlucky coordinates after retries: {last}")


def solve_system_numeric(f: MPoly, g: MPoly, seed: int = 0, tol: float = 1e-8) -> SolveResult:
    """Floating twin of solve_system for inputs with numeric coefficients.

    No exact count exists here: the count reports the distinct converged
    points, so callers needing certainty should sample several seeds.
    """
    if f.is_zero or g.is_zero:
        raise ZeroPolynomialDegree("solve_system with the zero polynomial")
    rng = rng_stream(seed, "solve-numeric")
    fn, gn = f.to_numeric(), g.to_numeric()
    scale = (fn.coefficient_norm() or 1.0) * (gn.coefficient_norm() or 1.0)
    last = None
    for attempt in range(1, 6):
        m = random_rotation(rng)
        f2 = fn.compose_linear(m)
        g2 = gn.compose_linear(m)
        df, dg = f.degree, g.degree
        lead_f = abs(f2.terms.get((0, 0, df), 0j))
        lead_g = abs(g2.terms.get((0, 0, dg), 0j))
        if lead_f < 1e-9 * f2.coefficient_norm() or lead_g < 1e-9 * g2.coefficient_norm():
            last = "improper leading coefficient"
            continue
        res = resultant_numeric(f2, g2, 2)
        if max(abs(to_complex(c)) for c in res.coeffs) < 1e-10 * scale:
            raise CommonComponentError(
                "resultant vanished numerically: curves appear to share a component"
            )
        pts = _lift_solutions(f2, g2, res, None, tol)
        if pts is None:
            last = "no fiber candidate converged to a solution"
            continue
        return SolveResult(
            count=len(pts),
            points=_newton_polish(f, g, _apply_matrix(m, pts)),
            matrix=[[float(v) for v in row] for row in m],
            attempts=attempt,
            seed=seed,
        )
    raise UnluckyCoordinatesError(f"unlucky coordinates after retries: {last}")
