"""Command line: parsing, orchestration, and deterministic reports.

stdout carries machine output (JSON, text key-value lines, or SVG), stderr
carries human messages. Exit codes: 0 success, 2 parse errors, 3 degenerate
geometry, 4 unstable or inconclusive numerics. Identical argv (seed
included) produces byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .birational import MatrixCurve, is_caustic_birational, is_projection_birational
from .caustic import (
    degree_D,
    dual_degree,
    envelope_points,
    gamma_degree,
    implicit_fit,
    normal_counts,
    sample_curve_points,
)
from .detgeom import Pencil, classify_pencil
from .errors import (
    CatacausticError,
    DegenerateError,
    NonHomogeneousError,
    ParseError,
    UnstableError,
)
from .euclid import Curve, ProjPoint, SymMat
from .gauss import GaussRat
from .poly import MPoly, _fmt_monomial, cluster_points
from .render import RenderSpec, render_svg

# ---------------------------------------------------------------------------
# input parsing
# ---------------------------------------------------------------------------


def parse_curve(text: str) -> MPoly:
    """Homogeneous polynomial in x0, x1, x2 from text.

    Grammar: a sum of terms; a term is a '*'-separated product of rational
    literals p or p/q and variable powers x0, x1, x2 (optionally ^k).
    Whitespace is insignificant. Mixed total degrees are rejected with the
    offending monomials listed.
    """
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

    terms: dict[tuple, Fraction] = {}
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
        exps = [0, 0, 0]
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
            elif i < n and text[i] == "x":
                j = i + 1
                if j >= n or text[j] not in "012":
                    raise ParseError("expected x0, x1 or x2", i)
                var = int(text[j])
                i = skip(j + 1)
                e = 1
                if i < n and text[i] == "^":
                    e, i = read_int(skip(i + 1))
                exps[var] += e
            else:
                raise ParseError("expected a coefficient or a variable", i)
            i = skip(i)
            if i < n and text[i] == "*":
                i = skip(i + 1)
            else:
                break
        key = tuple(exps)
        terms[key] = terms.get(key, Fraction(0)) + coeff
    terms = {k: v for k, v in terms.items() if v}
    degs = sorted({sum(k) for k in terms})
    if len(degs) > 1:
        counts = {d: sum(1 for k in terms if sum(k) == d) for d in degs}
        main = max(degs, key=lambda d: (counts[d], d))
        off = sorted(_fmt_monomial(k) for k in terms if sum(k) != main)
        raise NonHomogeneousError(
            f"non-homogeneous polynomial: degrees {degs} are mixed; "
            f"offending monomials: {', '.join(off)}",
            monomials=off,
        )
    return MPoly(terms)


def _parse_rational(text: str, where: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"bad rational literal {text!r} in {where}") from None


def _parse_scalar(text: str, where: str):
    """Rational or Gaussian-rational literal: "3", "-1/2", "i", "2-3/4*i"."""
    s = text.replace(" ", "")
    if not s:
        raise ParseError(f"empty entry in {where}")
    # split into at most two signed addends at top level
    cuts = [k for k in range(1, len(s)) if s[k] in "+-" and s[k - 1] not in "+-/*"]
    pieces = []
    prev = 0
    for c in cuts:
        pieces.append(s[prev:c])
        prev = c
    pieces.append(s[prev:])
    re_part, im_part = Fraction(0), Fraction(0)
    seen_im = False
    for piece in pieces:
        sign = 1
        while piece and piece[0] in "+-":
            if piece[0] == "-":
                sign = -sign
            piece = piece[1:]
        if not piece:
            raise ParseError(f"dangling sign in {where}")
        if piece.endswith("i"):
            if seen_im:
                raise ParseError(f"two imaginary parts in {where}")
            seen_im = True
            body = piece[:-1].rstrip("*")
            im_part += sign * (_parse_rational(body, where) if body else Fraction(1))
        else:
            re_part += sign * _parse_rational(piece, where)
    if seen_im and im_part:
        return GaussRat(re_part, im_part)
    return re_part


def parse_source(text: str) -> ProjPoint:
    parts = text.split(",")
    if len(parts) != 3:
        raise ParseError("source needs three comma-separated coordinates, like 3,1,1")
    coords = tuple(_parse_rational(p.strip(), "source") for p in parts)
    if not any(coords):
        raise ParseError("source must be a nonzero point")
    return ProjPoint(coords)


def parse_sym_entries(text: str, flag: str) -> SymMat:
    parts = text.split(",")
    if len(parts) != 6:
        raise ParseError(
            f"{flag} needs six comma-separated entries b00,b01,b02,b11,b12,b22"
        )
    return SymMat([_parse_scalar(p.strip(), flag) for p in parts])


def parse_viewport(text: str):
    parts = text.split(",")
    if len(parts) != 4:
        raise ParseError("viewport needs four numbers xmin,xmax,ymin,ymax")
    try:
        vals = tuple(float(p) for p in parts)
    except ValueError:
        raise ParseError(f"bad viewport {text!r}") from None
    return vals


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------


def _cnum(z) -> list:
    z = complex(z)
    return [z.real, z.imag]


def _point_json(p: ProjPoint) -> list:
    if p.is_exact:
        return [str(c) for c in p.coords]
    return [_cnum(c) for c in p.coords]


def _fiber_json(count):
    return "infinity" if isinstance(count, float) and math.isinf(count) else count


def _config_echo(args) -> dict:
    keys = (
        "curve",
        "source",
        "matrix_curve",
        "b0",
        "b1",
        "seed",
        "tol",
        "samples",
        "max_degree",
        "viewport",
        "rays",
        "format",
        "out",
    )
    return {k: getattr(args, k) for k in keys if hasattr(args, k)}


def _report(args, result: dict) -> dict:
    return {
        "command": args.command,
        "config": _config_echo(args),
        "library_version": __version__,
        "result": result,
    }


def _to_text(value, prefix="") -> str:
    if isinstance(value, dict):
        return "".join(
            _to_text(value[k], f"{prefix}.{k}" if prefix else k) for k in sorted(value)
        )
    if isinstance(value, (list, tuple)):
        body = json.dumps(value, sort_keys=True)
        return f"{prefix}: {body}\n"
    return f"{prefix}: {value}\n"


def _emit(args, text: str) -> None:
    out = getattr(args, "out", None)
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _emit_report(args, result: dict) -> None:
    report = _report(args, result)
    if args.format == "text":
        _emit(args, _to_text(report))
    else:
        _emit(args, json.dumps(report, indent=2, sort_keys=True) + "\n")


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_class(args) -> None:
    curve = Curve(parse_curve(args.curve))
    source = parse_source(args.source)
    rep = gamma_degree(curve, source, seed=args.seed, tol=args.tol)
    _emit_report(
        args,
        {
            "degree_gamma": rep.degree_gamma,
            "base_point_count": rep.base_point_count,
            "caustic_degree": rep.caustic_degree,
            "implicit_equation": None
            if rep.implicit_equation is None
            else str(rep.implicit_equation),
        },
    )


def cmd_birational(args) -> None:
    curve = Curve(parse_curve(args.curve))
    source = parse_source(args.source)
    rep = is_caustic_birational(
        curve, source, n_samples=args.samples, seed=args.seed, tol=args.tol
    )
    _emit_report(
        args,
        {
            "verdict": rep.verdict,
            "generic_fiber": _fiber_json(rep.generic_fiber),
            "samples": [
                {"base": _point_json(p), "fiber": _fiber_json(c)} for p, c in rep.samples
            ],
            "s_prime": None,
        },
    )


def cmd_project(args) -> None:
    path = Path(args.matrix_curve)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read matrix curve file {path}: {exc.strerror}") from exc
    d = MatrixCurve.from_json(text)
    rep = is_projection_birational(d, n_samples=args.samples, seed=args.seed, tol=args.tol)
    _emit_report(
        args,
        {
            "verdict": rep.verdict,
            "generic_fiber": _fiber_json(rep.generic_fiber),
            "samples": [{"base": str(t), "fiber": c} for t, c in rep.samples],
            "s_prime": None if rep.s_prime is None else _point_json(rep.s_prime),
        },
    )


def cmd_pencil(args) -> None:
    b0 = parse_sym_entries(args.b0, "--b0")
    b1 = parse_sym_entries(args.b1, "--b1")
    cls = classify_pencil(Pencil(b0, b1), tol=args.tol)
    det = None
    if cls.det_form is not None and not cls.det_form.is_zero:
        det = [str(c) for c in cls.det_form.coeffs]
    _emit_report(
        args,
        {
            "kind": cls.kind,
            "det_form": det,
            "delta_s": None if cls.delta_S is None else _point_json(cls.delta_S),
            "delta_l": None if cls.delta_L is None else _point_json(cls.delta_L),
            "exact": cls.exact,
        },
    )


def cmd_envelope(args) -> None:
    curve = Curve(parse_curve(args.curve))
    source = parse_source(args.source)
    samples = sample_curve_points(curve, args.samples, seed=args.seed, tol=args.tol)
    pts = envelope_points(curve, source, samples, tol=args.tol)
    if not pts:
        raise DegenerateError("stationary family: no envelope point at any sample")
    clusters = cluster_points([p.to_numpy() for p in pts], 1e-6)
    if len(clusters) == 1:
        # a concurrent family: every reflected ray passes through one point
        _emit_report(
            args,
            {
                "outcome": "point caustic",
                "point": _point_json(ProjPoint(clusters[0][0])),
                "points": [],
                "sample_count": len(pts),
            },
        )
        return
    _emit_report(
        args,
        {
            "outcome": "envelope",
            "point": None,
            "points": [_point_json(p) for p in pts],
            "sample_count": len(pts),
        },
    )


def cmd_implicit(args) -> None:
    curve = Curve(parse_curve(args.curve))
    source = parse_source(args.source)
    samples = sample_curve_points(curve, args.samples, seed=args.seed, tol=args.tol)
    pts = envelope_points(curve, source, samples, tol=args.tol)
    if not pts:
        raise DegenerateError("stationary family: no envelope point at any sample")
    clusters = cluster_points([p.to_numpy() for p in pts], 1e-6)
    if len(clusters) == 1:
        raise DegenerateError("point caustic: nothing to implicitize")
    d = curve.poly.degree
    max_degree = args.max_degree
    if max_degree is None:
        max_degree = 2 * d * (2 * d - 1)
    m, eq = implicit_fit(pts, max_degree=max_degree, tol=max(args.tol, 1e-6))
    _emit_report(
        args,
        {
            "degree": m,
            "equation": str(eq),
            "coefficients": [
                {"exponents": list(e), "value": _cnum(c)}
                for e, c in sorted(eq.terms.items(), reverse=True)
            ],
        },
    )


def cmd_normals(args) -> None:
    curve = Curve(parse_curve(args.curve))
    feet, nu, mu = normal_counts(curve, seed=args.seed, tol=args.tol)
    dual = dual_degree(curve, seed=args.seed, tol=args.tol)
    deg_d = degree_D(curve, seed=args.seed, tol=args.tol)
    _emit_report(
        args,
        {
            "feet_through_general_point": feet,
            "distinct_normal_lines": nu,
            "feet_per_normal_line": mu,
            "dual_degree": dual,
            "degree_D": deg_d,
        },
    )


def cmd_render(args) -> None:
    curve = Curve(parse_curve(args.curve))
    source = parse_source(args.source)
    spec = RenderSpec(viewport=parse_viewport(args.viewport), rays=args.rays)
    _emit(args, render_svg(curve, source, spec, seed=args.seed, tol=args.tol))


_HANDLERS = {
    "class": cmd_class,
    "birational": cmd_birational,
    "project": cmd_project,
    "pencil": cmd_pencil,
    "envelope": cmd_envelope,
    "implicit": cmd_implicit,
    "normals": cmd_normals,
    "render": cmd_render,
}


# ---------------------------------------------------------------------------
# argument wiring
# ---------------------------------------------------------------------------


def _seed(value: str) -> int:
    n = int(value)
    if not 0 <= n < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit integer")
    return n


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="catacaustic",
        description="Caustics by reflection: degree counts, fiber statistics, "
        "pencil classification, envelopes, and SVG ray pictures.",
    )
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, samples=None):
        sp.add_argument("--seed", type=_seed, default=0)
        sp.add_argument("--tol", type=float, default=1e-8)
        sp.add_argument("--out", default=None)
        sp.add_argument("--format", choices=("json", "text"), default="json")
        if samples is not None:
            sp.add_argument("--samples", type=int, default=samples)

    sp = sub.add_parser("class", help="degree of the caustic ray family")
    sp.add_argument("--curve", required=True)
    sp.add_argument("--source", required=True)
    common(sp)

    sp = sub.add_parser("birational", help="fiber statistics of the ray map")
    sp.add_argument("--curve", required=True)
    sp.add_argument("--source", required=True)
    common(sp, samples=5)

    sp = sub.add_parser("project", help="matrix-curve projection dichotomy")
    sp.add_argument("--matrix-curve", required=True, dest="matrix_curve")
    common(sp, samples=5)

    sp = sub.add_parser("pencil", help="classify a pencil of symmetric matrices")
    sp.add_argument("--b0", required=True)
    sp.add_argument("--b1", required=True)
    common(sp)

    sp = sub.add_parser("envelope", help="envelope points of the reflected rays")
    sp.add_argument("--curve", required=True)
    sp.add_argument("--source", required=True)
    common(sp, samples=24)

    sp = sub.add_parser("implicit", help="implicit equation of the caustic")
    sp.add_argument("--curve", required=True)
    sp.add_argument("--source", required=True)
    sp.add_argument("--max-degree", type=int, default=None, dest="max_degree")
    common(sp, samples=120)

    sp = sub.add_parser("normals", help="normal-line counts and the degree formula")
    sp.add_argument("--curve", required=True)
    common(sp)

    sp = sub.add_parser("render", help="SVG picture of mirror, rays, and envelope")
    sp.add_argument("--curve", required=True)
    sp.add_argument("--source", required=True)
    sp.add_argument("--viewport", default="-3,3,-3,3")
    sp.add_argument("--rays", type=int, default=12)
    common(sp)

    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        _HANDLERS[args.command](args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except DegenerateError as exc:
        print(f"degenerate: {exc}", file=sys.stderr)
        return 3
    except UnstableError as exc:
        print(f"unstable: {exc}", file=sys.stderr)
        return 4
    except CatacausticError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
