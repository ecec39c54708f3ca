"""Degree bookkeeping for the reflected-ray family and its envelope.

The family of reflected rays {L_P : P on C} sweeps out the caustic. Its
class (rays through a generic point) is counted exactly with resultants;
the envelope itself is sampled numerically and implicitized to estimate the
caustic's degree. "Generic" choices are made operational by a stability
protocol: a count is accepted once three independent seeded draws agree,
with a bounded number of extra draws on disagreement.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from math import comb

import numpy as np

from .draws import random_rational_triple, rng_stream
from .errors import (
    CommonComponentError,
    DegenerateError,
    InconclusiveError,
    PointCausticError,
)
from .euclid import Curve, ProjPoint, matB, normal_polys
from .poly import (
    BinForm,
    MPoly,
    cluster_points,
    complex_roots,
    match_point,
    proj_distance,
    solve_system,
)

_DRAW_BUDGET = 8
_DRAWS_NEEDED = 3
_VANISH_TOL = 1e-6
_MATCH_TOL = 1e-7


@dataclass
class CurveSample:
    """A smooth numeric point of the mirror with a tangent direction."""

    point: ProjPoint
    tangent_dir: ProjPoint
    index: int = 0


@dataclass
class CausticReport:
    degree_gamma: int
    base_point_count: int
    seed: int
    tolerance: float
    caustic_degree: int | None = None
    implicit_equation: MPoly | None = None


# ---------------------------------------------------------------------------
# shared machinery
# ---------------------------------------------------------------------------


def reflected_family(curve: Curve, source: ProjPoint):
    """The three polynomial components of B(x) S, defining the ray at each x."""
    if not source.is_exact:
        raise ValueError("reflected_family needs an exact source point")
    return matB(curve).mat_vec(source.coords)


def _random_point(rng) -> tuple:
    return random_rational_triple(rng)


def _rel_eval(poly: MPoly, point) -> float:
    scale = poly.coefficient_norm() or 1.0
    return abs(poly.eval_complex(point)) / scale


def _solve_seed(seed: int, k: int) -> int:
    return (seed * 131 + 7 * k + 1) & 0x7FFFFFFF


def _stable_value(draw, label: str):
    """Mode of draw(k) once it has been seen _DRAWS_NEEDED times.

    draw returns a hashable observation or None for a degenerate draw.
    """
    seen = []
    degenerate = 0
    for k in range(_DRAW_BUDGET):
        value = draw(k)
        if value is None:
            degenerate += 1
            continue
        seen.append(value)
        top, hits = Counter(seen).most_common(1)[0]
        if hits >= _DRAWS_NEEDED:
            return top
    if degenerate == _DRAW_BUDGET:
        raise DegenerateError(f"degenerate source: every {label} draw collapsed")
    raise InconclusiveError(f"unstable count for {label}: draws gave {seen}")


def _base_points(curve: Curve, polys, seed: int, tol: float):
    """Distinct points of C where every listed polynomial vanishes.

    Returns None when the common zero locus contains C itself (every
    component either is the zero polynomial or shares a component with C).
    """
    active = [p for p in polys if not p.is_zero]
    if not active:
        return None
    sets = []
    for i, g in enumerate(active):
        if len(sets) == 2:
            break
        try:
            res = solve_system(curve.poly, g, seed=_solve_seed(seed, 900 + i), tol=tol)
        except CommonComponentError:
            continue
        sets.append(res.points)
    if not sets:
        return None
    candidates = sets[0]
    for other in sets[1:]:
        candidates = [
            p for p in candidates if any(proj_distance(p, q) <= _MATCH_TOL for q in other)
        ]
    return [p for p in candidates if all(_rel_eval(g, p) <= _VANISH_TOL for g in active)]


# ---------------------------------------------------------------------------
# exact counts
# ---------------------------------------------------------------------------


def gamma_degree(curve: Curve, source: ProjPoint, seed: int = 0, tol: float = 1e-8) -> CausticReport:
    """Class of the caustic: distinct mirror points whose reflected ray hits
    a generic target, net of the base points where the ray is undefined."""
    lams = reflected_family(curve, source)
    if all(l.is_zero for l in lams):
        raise DegenerateError("degenerate source: reflected family vanishes identically")
    rng = rng_stream(seed, "gamma-target")

    def draw(k):
        q = _random_point(rng)
        g = lams[0] * q[0] + lams[1] * q[1] + lams[2] * q[2]
        if g.is_zero:
            return None
        try:
            return solve_system(
                curve.poly, g, seed=_solve_seed(seed, k), tol=tol, count_only=True
            ).count
        except CommonComponentError:
            return None

    raw = _stable_value(draw, "gamma_degree")
    base = _base_points(curve, list(lams), seed, tol)
    if base is None:
        raise DegenerateError("degenerate source: reflected family vanishes on the whole curve")
    net = raw - len(base)
    if net < 1:
        raise InconclusiveError(
            f"net ray count {net} is not positive (raw {raw}, base {len(base)})"
        )
    return CausticReport(
        degree_gamma=net, base_point_count=len(base), seed=seed, tolerance=tol
    )


def dual_degree(curve: Curve, seed: int = 0, tol: float = 1e-8) -> int:
    """Class of the mirror: tangent lines through a generic point."""
    if curve.poly.degree < 2:
        raise DegenerateError("dual degree is undefined for a line")
    grad = curve.gradient
    rng = rng_stream(seed, "dual-target")

    def draw(k):
        q = _random_point(rng)
        g = grad[0] * q[0] + grad[1] * q[1] + grad[2] * q[2]
        if g.is_zero:
            return None
        try:
            return solve_system(
                curve.poly, g, seed=_solve_seed(seed, 100 + k), tol=tol, count_only=True
            ).count
        except CommonComponentError:
            return None

    return _stable_value(draw, "dual_degree")


def normal_counts(curve: Curve, seed: int = 0, tol: float = 1e-8):
    """(p_count, nu, mu): feet of normals through a generic point, distinct
    normal lines among them, and the fiber size of foot -> normal line."""
    if curve.poly.degree < 2:
        raise DegenerateError("normal counts are undefined for a line")
    nps = normal_polys(curve)
    base = _base_points(curve, list(nps), seed, tol)
    base_reps = [] if base is None else base
    rng = rng_stream(seed, "normal-target")

    def draw(k):
        q = _random_point(rng)
        g = nps[0] * q[0] + nps[1] * q[1] + nps[2] * q[2]
        if g.is_zero:
            return None
        try:
            res = solve_system(curve.poly, g, seed=_solve_seed(seed, 200 + k), tol=tol)
        except CommonComponentError:
            return None
        feet = [
            p
            for p in res.points
            if not any(proj_distance(p, b) <= _MATCH_TOL for b in base_reps)
        ]
        if not feet:
            return None
        lines = cluster_points([[g.eval_complex(p) for g in nps] for p in feet], tol)
        return (len(feet), len(lines))

    p_count, nu = _stable_value(draw, "normal_counts")
    if nu == 0 or p_count % nu != 0:
        raise InconclusiveError(
            f"inconsistent fibration: {p_count} feet over {nu} normal lines"
        )
    return p_count, nu, p_count // nu


def degree_D(curve: Curve, seed: int = 0, tol: float = 1e-8) -> int:
    """Degree of the source-locus hypersurface: mirror points P whose
    associated conic (the quadratic form B(P)) passes through a generic
    source, cross-checked against dual_degree + mu * nu."""
    if curve.poly.degree < 2:
        raise DegenerateError("degree_D is undefined for a line")
    b = matB(curve)
    entries = list(b.entries)
    base = _base_points(curve, entries, seed, tol)
    if base is None:
        raise DegenerateError("the matrix family vanishes on the whole curve")
    rng = rng_stream(seed, "degreeD-source")

    def draw(k):
        s = _random_point(rng)
        g = b.quad(s)
        if g.is_zero:
            return None
        try:
            return solve_system(
                curve.poly, g, seed=_solve_seed(seed, 300 + k), tol=tol, count_only=True
            ).count
        except CommonComponentError:
            return None

    raw = _stable_value(draw, "degree_D")
    direct = raw - len(base)
    p_count, nu, mu = normal_counts(curve, seed=seed, tol=tol)
    via_formula = dual_degree(curve, seed=seed, tol=tol) + mu * nu
    if direct != via_formula:
        raise InconclusiveError(
            f"formula mismatch: direct count {direct}, class + mu*nu gives {via_formula}"
        )
    return direct


# ---------------------------------------------------------------------------
# numeric sampling of the mirror
# ---------------------------------------------------------------------------


def sample_curve_points(curve: Curve, n: int, seed: int = 0, tol: float = 1e-8):
    """n smooth numeric points of C, cut out by a seeded pencil of lines.

    Each pencil line through a fixed off-curve rational point is restricted
    to a binary form whose roots give the intersection points; singular and
    isotropic points are discarded.
    """
    rng = rng_stream(seed, "sample-pencil")
    f = curve.poly
    d = f.degree
    apex = None
    for _ in range(50):
        cand = _random_point(rng)
        if f.eval(cand) != 0:
            apex = cand
            break
    if apex is None:
        raise DegenerateError("insufficient samples: could not find an off-curve pencil apex")
    samples: list[CurveSample] = []
    reps: list = []
    gscale = max((g.coefficient_norm() for g in curve.gradient), default=0.0) or 1.0
    max_lines = 4 * (n // max(d, 1) + 1) + 8
    for k in range(max_lines):
        if len(samples) >= n:
            break
        other = _random_point(rng)
        m = [[apex[i], other[i], 0] for i in range(3)]
        restricted = f.compose_linear(m)
        affine = [0] * (d + 1)
        for (e0, e1, e2), c in restricted.terms.items():
            affine[e1] = c
        form = BinForm.from_affine(affine, d)
        if form.is_zero:
            continue  # line inside the curve
        for (u, v), _mult in complex_roots(form, tol):
            if len(samples) >= n:
                break
            pt = np.array(
                [complex(apex[i]) * v + complex(other[i]) * u for i in range(3)],
                dtype=complex,
            )
            nrm = np.linalg.norm(pt)
            if nrm == 0:
                continue
            pt = pt / nrm
            grad = np.array([g.eval_complex(pt) for g in curve.gradient])
            if np.linalg.norm(grad) <= tol * gscale:
                continue  # singular point of the mirror
            tangent = np.cross(grad, pt)
            if np.linalg.norm(tangent) <= tol * np.linalg.norm(grad):
                continue  # isotropic: gradient proportional to the point itself
            if match_point(pt, reps, _MATCH_TOL) is not None:
                continue
            reps.append(pt)
            samples.append(
                CurveSample(point=ProjPoint(pt), tangent_dir=ProjPoint(tangent), index=k)
            )
    if len(samples) < n:
        raise DegenerateError(
            f"insufficient samples: found {len(samples)} of {n} requested"
        )
    return samples


# ---------------------------------------------------------------------------
# envelope
# ---------------------------------------------------------------------------


def _family_with_jacobian(curve: Curve, source: ProjPoint):
    lams = reflected_family(curve, source)
    jac = [[l.partial(j) for j in range(3)] for l in lams]
    return lams, jac


def envelope_point(
    curve: Curve,
    source: ProjPoint,
    sample: CurveSample,
    family=None,
    tol: float = 1e-8,
) -> ProjPoint:
    """Characteristic point of the reflected family at the sample: the limit
    of intersections of infinitesimally close reflected rays.

    The variation is the exact directional derivative of B(x)S along the
    tangent direction; the envelope point is ray x variation.
    """
    lams, jac = family if family is not None else _family_with_jacobian(curve, source)
    p = np.asarray(sample.point.to_numpy(), dtype=complex)
    v = np.asarray(sample.tangent_dir.to_numpy(), dtype=complex)
    lam = np.array([l.eval_complex(p) for l in lams])
    dlam = np.array(
        [sum(jac[i][j].eval_complex(p) * v[j] for j in range(3)) for i in range(3)]
    )
    cp = np.cross(lam, dlam)
    scale = np.linalg.norm(lam) * np.linalg.norm(dlam)
    if scale == 0 or np.linalg.norm(cp) <= tol * scale:
        raise DegenerateError("stationary family: the ray does not move to first order")
    return ProjPoint(cp)


def envelope_points(curve: Curve, source: ProjPoint, samples, tol: float = 1e-8):
    """Envelope points for a batch of samples, skipping stationary ones."""
    family = _family_with_jacobian(curve, source)
    out = []
    for s in samples:
        try:
            out.append(envelope_point(curve, source, s, family=family, tol=tol))
        except DegenerateError:
            continue
    return out


# ---------------------------------------------------------------------------
# implicitization
# ---------------------------------------------------------------------------


def _monomials(m: int):
    exps = [
        (e0, e1, m - e0 - e1)
        for e0 in range(m, -1, -1)
        for e1 in range(m - e0, -1, -1)
    ]
    return exps


def implicit_fit(points, max_degree: int, tol: float = 1e-6):
    """Smallest-degree curve through the points, found by SVD rank drop on
    the monomial evaluation matrix. Returns (degree, numeric equation)."""
    pts = []
    for p in points:
        v = np.asarray(p.to_numpy() if isinstance(p, ProjPoint) else p, dtype=complex)
        nrm = np.linalg.norm(v)
        if nrm:
            pts.append(v / nrm)
    testable = False
    for m in range(1, max_degree + 1):
        exps = _monomials(m)
        if len(pts) < len(exps):
            break
        testable = True
        rows = np.array(
            [[p[0] ** e0 * p[1] ** e1 * p[2] ** e2 for (e0, e1, e2) in exps] for p in pts]
        )
        svals = np.linalg.svd(rows, compute_uv=False)
        if svals[-1] >= tol * svals[0]:
            continue
        if len(svals) >= 2:
            second = svals[-2]
            if second < tol * svals[0]:
                raise InconclusiveError(
                    f"ambiguous rank at degree {m}: nullspace dimension exceeds 1"
                )
            if second < 1e3 * svals[-1]:
                raise InconclusiveError(
                    f"ambiguous rank at degree {m}: spectral gap "
                    f"{second / max(svals[-1], 1e-300):.1e} below 1e3"
                )
        _, _, vh = np.linalg.svd(rows)
        coeffs = vh[-1].conj()
        lead = coeffs[np.argmax(np.abs(coeffs))]
        coeffs = coeffs / lead
        eq = MPoly({e: c for e, c in zip(exps, coeffs.tolist())})
        return m, eq
    if not testable:
        raise DegenerateError("no curve found: too few points to test any degree")
    raise DegenerateError(f"no curve found through the samples up to degree {max_degree}")


def caustic_degree(
    curve: Curve,
    source: ProjPoint,
    n: int = 120,
    seed: int = 0,
    tol: float = 1e-8,
    max_degree: int | None = None,
) -> int:
    """Degree of the caustic, estimated by implicitizing envelope samples."""
    d = curve.poly.degree
    if max_degree is None:
        max_degree = 2 * d * (2 * d - 1)
        while comb(max_degree + 2, 2) > n and max_degree > 1:
            max_degree -= 1
    samples = sample_curve_points(curve, n, seed=seed, tol=tol)
    pts = envelope_points(curve, source, samples, tol=tol)
    if not pts:
        raise DegenerateError("stationary family at every sample")
    clusters = cluster_points([p.to_numpy() for p in pts], 1e-6)
    if len(clusters) == 1:
        raise PointCausticError(
            "point caustic: all envelope samples coincide",
            point=ProjPoint(np.asarray(clusters[0][0])),
        )
    m, _ = implicit_fit(pts, max_degree=max_degree, tol=max(tol, 1e-6))
    return m
