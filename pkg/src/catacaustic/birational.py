"""Fiber counting for the ray map and for matrix-curve projections.

Two one-to-one questions are settled by sampling fibers. First: does a
mirror point generically determine its reflected ray (the map P -> L_P)?
Second: given a curve of symmetric matrices B(t), does B -> B*S stay
injective for a general center S? The second has an exact exceptional
case: a non-line family with a common kernel vector S' projects onto the
fixed line orthogonal to S', and the verdict reports that S' instead of a
fiber count.
"""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .caustic import CurveSample, reflected_family, sample_curve_points
from .detgeom import kernel_sym, rank_sym
from .draws import random_fraction, random_rational_triple, rng_stream
from .errors import (
    CommonComponentError,
    DegenerateError,
    InconclusiveError,
    ParseError,
)
from .euclid import Curve, ProjPoint, SymMat
from .gauss import exactify, is_exact
from .linalg import nullspace, rank
from .poly import (
    BinForm,
    count_distinct_roots,
    gcd_form,
    padd,
    pdeg,
    peval,
    pmul,
    pnormalize,
    pscale,
    psub,
    solve_system_numeric,
)

_ENTRY_KEYS = ("b00", "b01", "b02", "b11", "b12", "b22")
_SYM_SLOTS = ((0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2))

#: kernel_curve sentinel for families whose kernel is 2-dimensional for
#: every parameter value (no single distinguished direction exists)
WHOLE_PLANE_DEGENERATE = "whole-plane degenerate"


def _parse_poly_in_t(text: str):
    """Coefficient list (lowest degree first) for strings like "1 - 3/2*t^2".

    Accepted: a sum of terms, each a '*'-separated product of rational
    literals p or p/q and powers t or t^k. No parentheses.
    """
    coeffs: dict[int, Fraction] = {}
    n = len(text)

    def skip(j):
        while j < n and text[j].isspace():
            j += 1
        return j

    def read_int(j):
        k = j
        while k < n and text[k].isdigit():
            k += 1
        if k == j:
            raise ParseError("expected a number", j)
        return int(text[j:k]), k

    i = skip(0)
    if i == n:
        raise ParseError("empty polynomial", 0)
    first = True
    while i < n:
        sign = 1
        if text[i] in "+-":
            sign = -1 if text[i] == "-" else 1
            i = skip(i + 1)
        elif not first:
            raise ParseError("expected '+' or '-'", i)
        first = False
        coeff = Fraction(sign)
        power = 0
        while True:
            if i < n and text[i].isdigit():
                num, i = read_int(i)
                i = skip(i)
                if i < n and text[i] == "/":
                    j = skip(i + 1)
                    den, i = read_int(j)
                    if den == 0:
                        raise ParseError("zero denominator", j)
                    coeff *= Fraction(num, den)
                else:
                    coeff *= num
            elif i < n and text[i] == "t":
                i = skip(i + 1)
                e = 1
                if i < n and text[i] == "^":
                    e, i = read_int(skip(i + 1))
                power += e
            else:
                raise ParseError("expected a coefficient or t", i)
            i = skip(i)
            if i < n and text[i] == "*":
                i = skip(i + 1)
            else:
                break
        coeffs[power] = coeffs.get(power, Fraction(0)) + coeff
    out = [Fraction(0)] * (max(coeffs) + 1)
    for e, c in coeffs.items():
        out[e] = c
    return pnormalize(out)


class MatrixCurve:
    """Symmetric 3x3 matrix B(t) of univariate polynomials in one affine
    parameter, six stored entries (00, 01, 02, 11, 12, 22) as coefficient
    lists (lowest degree first) with exact rational or Gaussian-rational
    coefficients."""

    __slots__ = ("entries",)

    def __init__(self, entries):
        entries = list(entries)
        if len(entries) != 6:
            raise ValueError("MatrixCurve takes six entries: 00, 01, 02, 11, 12, 22")
        norm = []
        for e in entries:
            e = pnormalize([exactify(c) for c in e])
            if not all(is_exact(c) for c in e):
                raise ValueError("matrix curve entries must have exact coefficients")
            norm.append(e)
        if all(not e for e in norm):
            raise DegenerateError("matrix curve is identically zero")
        self.entries = norm

    @classmethod
    def from_dict(cls, d: dict) -> "MatrixCurve":
        unknown = sorted(set(d) - set(_ENTRY_KEYS))
        if unknown:
            raise ParseError(f"unknown matrix-curve entries: {', '.join(unknown)}")
        entries = []
        for key in _ENTRY_KEYS:
            if key not in d:
                entries.append([])
                continue
            value = d[key]
            if not isinstance(value, str):
                raise ParseError(f"entry {key} must be a polynomial string in t")
            entries.append(_parse_poly_in_t(value))
        return cls(entries)

    @classmethod
    def from_json(cls, text: str) -> "MatrixCurve":
        try:
            d = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"bad matrix-curve JSON: {exc.msg}", exc.pos) from exc
        if not isinstance(d, dict):
            raise ParseError("matrix-curve JSON must be an object with entries b00..b22")
        return cls.from_dict(d)

    @classmethod
    def from_rank_one(cls, x) -> "MatrixCurve":
        """B(t) = x(t) x(t)^t for a parametrized vector x of three
        coefficient lists; x = (1, t, t^2) gives the Veronese curve."""
        x = [pnormalize([exactify(c) for c in xi]) for xi in x]
        return cls([pmul(x[i], x[j]) for i, j in _SYM_SLOTS])

    @property
    def degree(self) -> int:
        return max(pdeg(e) for e in self.entries if e)

    def entry(self, i, j):
        if i > j:
            i, j = j, i
        return self.entries[_SYM_SLOTS.index((i, j))]

    def coefficient_matrices(self):
        """SymMat list, k-th entry the coefficient of t^k."""
        top = self.degree
        return [
            SymMat([e[k] if k < len(e) else Fraction(0) for e in self.entries])
            for k in range(top + 1)
        ]

    def eval_at(self, t) -> SymMat:
        t = exactify(t)
        return SymMat([peval(e, t) if e else Fraction(0) for e in self.entries])

    def mat_vec_polys(self, s):
        """The three coefficient lists of B(t) s for a fixed exact vector."""
        out = []
        for i in range(3):
            acc = []
            for j in range(3):
                acc = padd(acc, pscale(self.entry(i, j), s[j]))
            out.append(acc)
        return out

    def is_line(self) -> bool:
        # a line in matrix space = the coefficient matrices span a pencil
        rows = [sm.vec6() for sm in self.coefficient_matrices()]
        return rank(rows) == 2

    def __repr__(self):
        return f"MatrixCurve({self.entries!r})"


@dataclass
class FiberReport:
    """Sampled fiber sizes of a ray/projection map plus the majority verdict."""

    samples: list
    generic_fiber: int | float  # math.inf when one ray serves the whole mirror
    verdict: str  # "birational" | "non-birational" | "exceptional"
    seed: int
    tolerance: float
    s_prime: ProjPoint | None = None


def _solve_seed(seed: int, k: int) -> int:
    return (seed * 977 + 13 * k + 5) & 0x7FFFFFFF


def _agreed_mode(counts, what: str) -> int:
    mode, hits = Counter(counts).most_common(1)[0]
    if hits / len(counts) < 0.8:
        raise InconclusiveError(
            f"inconclusive {what}: fiber sizes {sorted(counts)} have no 80% majority"
        )
    return mode


# ---------------------------------------------------------------------------
# fibers of the ray map
# ---------------------------------------------------------------------------


def lambda_fiber_count(
    curve: Curve, source: ProjPoint, p0: CurveSample, seed: int = 0, tol: float = 1e-8
) -> int:
    """Number of distinct mirror points (p0 included) whose reflected ray
    coincides with the ray at p0.

    One nonzero cross-product component pins the candidates as a polynomial
    system on the mirror; a second, independent component (when one exists)
    acts as a numeric filter at 1e-6 relative, with candidates landing
    within a decade of that threshold triggering a re-solve in fresh
    coordinates. When every component is a multiple of the first the filter
    is vacuous and the system alone cuts the fiber.
    """
    lams = [l.to_numeric() for l in reflected_family(curve, source)]
    scale = max(l.coefficient_norm() for l in lams) or 1.0
    ray0 = np.array([l.eval_complex(p0.point) for l in lams])
    if np.linalg.norm(ray0) <= 1e-8 * scale:
        raise DegenerateError("base point: the reflected ray vanishes at p0")
    ray0 = ray0 / np.linalg.norm(ray0)
    cross = [
        lams[1] * ray0[2] - lams[2] * ray0[1],
        lams[2] * ray0[0] - lams[0] * ray0[2],
        lams[0] * ray0[1] - lams[1] * ray0[0],
    ]
    exps = sorted(set().union(*[set(p.terms) for p in cross]))
    vecs = [np.array([complex(p.terms.get(e, 0)) for e in exps]) for p in cross]
    norms = [np.linalg.norm(v) for v in vecs]
    live = sorted(
        (k for k in range(3) if norms[k] > 1e-12 * scale), key=lambda k: -norms[k]
    )
    for k1 in live:
        u1 = vecs[k1] / norms[k1]
        pick, pick_res = None, 1e-6
        for k in live:
            if k == k1:
                continue
            r = np.linalg.norm(vecs[k] - np.vdot(u1, vecs[k]) * u1) / norms[k]
            if r > pick_res:
                pick, pick_res = k, r
        g1 = cross[k1]
        g2 = cross[pick] if pick is not None else None
        g2scale = g2.coefficient_norm() if g2 is not None else 1.0
        try:
            for attempt in range(3):
                sol = solve_system_numeric(
                    curve.poly, g1, seed=_solve_seed(seed, attempt), tol=tol
                )
                kept = 0
                retry = False
                for p in sol.points:
                    if max(abs(l.eval_complex(p)) for l in lams) <= 1e-6 * scale:
                        continue  # the ray map is undefined there
                    if g2 is not None:
                        r = abs(g2.eval_complex(p)) / g2scale
                        if 1e-7 < r < 1e-5:
                            retry = True
                            break
                        if r > 1e-7:
                            continue
                    kept += 1
                # p0 itself always belongs to the fiber; an empty count means
                # the numeric solve lost it
                if not retry and kept > 0:
                    return kept
            raise InconclusiveError(
                "unstable count: cross-component residuals stay within a decade "
                "of the 1e-6 filter threshold"
            )
        except CommonComponentError:
            continue  # g1 vanishes along the mirror; try the next component
    raise DegenerateError(
        "components dependent: the reflected ray direction is constant along the mirror"
    )


def is_caustic_birational(
    curve: Curve, source: ProjPoint, n_samples: int = 5, seed: int = 0, tol: float = 1e-8
) -> FiberReport:
    """Fiber statistics of the ray map over sampled mirror points."""
    if curve.degree < 2:
        raise DegenerateError("fiber statistics need a mirror of degree at least 2")
    samples = []
    for s in sample_curve_points(curve, n_samples, seed=seed, tol=tol):
        try:
            cnt = lambda_fiber_count(
                curve, source, s, seed=_solve_seed(seed, 17 + s.index), tol=tol
            )
        except DegenerateError as exc:
            if "base point" in str(exc):
                continue
            if "components dependent" in str(exc):
                # one fixed ray for the whole mirror: every fiber is the curve
                samples.append((s.point, math.inf))
                return FiberReport(
                    samples=samples,
                    generic_fiber=math.inf,
                    verdict="non-birational",
                    seed=seed,
                    tolerance=tol,
                )
            raise
        samples.append((s.point, cnt))
    if not samples:
        raise DegenerateError("base point: the reflected ray vanished at every sample")
    mode = _agreed_mode([c for _, c in samples], "ray-map fiber statistics")
    return FiberReport(
        samples=samples,
        generic_fiber=mode,
        verdict="birational" if mode == 1 else "non-birational",
        seed=seed,
        tolerance=tol,
    )


# ---------------------------------------------------------------------------
# fibers of matrix projections
# ---------------------------------------------------------------------------


def kernel_curve(d: MatrixCurve):
    """The common kernel direction S' with B(t) S' = 0 for all t, if any.

    Returns a ProjPoint for a one-dimensional common kernel, None for a
    trivial one, and the WHOLE_PLANE_DEGENERATE sentinel when the kernel is
    a full plane of directions.
    """
    rows = []
    for sm in d.coefficient_matrices():
        rows.extend(sm.rows())
    basis = nullspace(rows, 3)
    if not basis:
        return None
    if len(basis) > 1:
        return WHOLE_PLANE_DEGENERATE
    return ProjPoint(tuple(basis[0]))


def projection_fiber_count(d: MatrixCurve, s: ProjPoint, t0, seed: int = 0) -> int:
    """Distinct parameters (t0 included, infinity counted) whose image under
    B(t) s spans the same ray as the image of t0, net of the base parameters
    where the image vanishes. Exact; the seed is accepted for call-site
    symmetry with the numeric fiber counters."""
    if not s.is_exact:
        raise ValueError("projection center must have exact coordinates")
    t0 = exactify(t0)
    if not is_exact(t0):
        raise ValueError("base parameter must be exact")
    v = d.mat_vec_polys(s.coords)
    c = [peval(e, t0) if e else Fraction(0) for e in v]
    if not any(c):
        raise DegenerateError("base parameter: B(t0) s is the zero vector")
    hs = [
        psub(pscale(v[1], c[2]), pscale(v[2], c[1])),
        psub(pscale(v[2], c[0]), pscale(v[0], c[2])),
        psub(pscale(v[0], c[1]), pscale(v[1], c[0])),
    ]
    hs = [h for h in hs if h]
    if not hs:
        raise DegenerateError("constant image: every parameter maps to the ray at t0")
    # homogenize to the top component degree so the parameter at infinity is
    # counted exactly like any other fiber member
    deg = max(pdeg(e) for e in v if e)
    g = BinForm.from_affine(hs[0], deg)
    for h in hs[1:]:
        g = gcd_form(g, BinForm.from_affine(h, deg))
    vforms = [BinForm.from_affine(e, deg) for e in v if e]
    gb = vforms[0]
    for h in vforms[1:]:
        gb = gcd_form(gb, h)
    return count_distinct_roots(g) - count_distinct_roots(gb)


def is_projection_birational(
    d: MatrixCurve, n_samples: int = 5, seed: int = 0, tol: float = 1e-8
) -> FiberReport:
    """Dichotomy for the projection of a matrix curve from a general center.

    A non-line family with a common kernel S' is exceptional: its images
    all land on the line orthogonal to S' (checked exactly per sampled
    center). Everything else is judged by sampled fiber sizes.
    """
    sk = kernel_curve(d)
    if sk == WHOLE_PLANE_DEGENERATE:
        raise DegenerateError(
            "whole-plane degenerate: the family kills a plane of directions"
        )
    exceptional = sk is not None and not d.is_line()
    rng = rng_stream(seed, "projection-fiber")
    samples = []
    tries = 0
    budget = 4 * n_samples + 8
    while len(samples) < n_samples and tries < budget:
        tries += 1
        s = ProjPoint(random_rational_triple(rng))
        t0 = random_fraction(rng)
        if exceptional:
            dot = []
            for vi, ki in zip(d.mat_vec_polys(s.coords), sk.coords):
                dot = padd(dot, pscale(vi, ki))
            if dot:
                raise RuntimeError(
                    "images of the projection leave the kernel-orthogonal line; "
                    "kernel_curve is inconsistent and this is a bug"
                )
        try:
            cnt = projection_fiber_count(d, s, t0, seed=seed)
        except DegenerateError as exc:
            # "constant image" propagates: the whole curve maps to one ray
            if "base parameter" in str(exc):
                continue
            raise
        samples.append((t0, cnt))
    if len(samples) < n_samples:
        raise DegenerateError(
            "base parameter: not enough non-base parameters in the sampling budget"
        )
    mode = _agreed_mode([c for _, c in samples], "projection fiber statistics")
    if exceptional:
        return FiberReport(
            samples=samples,
            generic_fiber=mode,
            verdict="exceptional",
            seed=seed,
            tolerance=tol,
            s_prime=sk,
        )
    return FiberReport(
        samples=samples,
        generic_fiber=mode,
        verdict="birational" if mode == 1 else "non-birational",
        seed=seed,
        tolerance=tol,
    )


def recover_point_from_B(curve: Curve, m: SymMat, tol: float = 1e-8) -> ProjPoint:
    """The mirror point back from its reflected-ray matrix: ker(M).

    M alone determines the answer; the curve argument keeps call sites
    readable ("recover the point of this mirror") and is not consulted.
    """
    r = rank_sym(m, tol)
    if r != 2:
        raise DegenerateError(f"wrong rank: point recovery needs rank 2, got {r}")
    return ProjPoint(tuple(kernel_sym(m, tol)[0]))
