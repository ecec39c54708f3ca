"""Deterministic SVG pictures of a mirror curve, its rays, and the envelope.

The scene is the affine chart x = x0/x2, y = x1/x2. The mirror trace comes
from marching squares over a fixed viewport grid, ray base points are taken
at equal arclength fractions along that trace, and every float is written
with four decimals, so identical inputs produce identical bytes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from skimage.measure import find_contours

from .caustic import CurveSample, envelope_point, reflected_family
from .errors import DegenerateError, ParseError
from .euclid import Curve, ProjPoint

_GRID = 257


@dataclass
class RenderSpec:
    viewport: tuple  # (xmin, xmax, ymin, ymax)
    rays: int = 12
    width: int = 640
    curve_stroke: float = 2.0
    ray_stroke: float = 0.8
    show_curve: bool = True
    show_incident: bool = True
    show_reflected: bool = True
    show_envelope: bool = True

    def __post_init__(self):
        xmin, xmax, ymin, ymax = self.viewport
        if not (xmax > xmin and ymax > ymin):
            raise ParseError("degenerate viewport: need xmin < xmax and ymin < ymax")
        if self.rays < 0:
            raise ParseError("ray count must be nonnegative")


def _fmt(v: float) -> str:
    if abs(v) < 5e-5:
        v = 0.0  # avoid "-0.0000"
    return f"{v:.4f}"


def _trace(curve: Curve, viewport) -> list:
    """Mirror polylines in data coordinates, via marching squares."""
    xmin, xmax, ymin, ymax = viewport
    xs = np.linspace(xmin, xmax, _GRID)
    ys = np.linspace(ymin, ymax, _GRID)
    xg, yg = np.meshgrid(xs, ys)
    vals = np.zeros_like(xg)
    for (e0, e1, _e2), c in curve.poly.to_numeric().terms.items():
        vals += complex(c).real * xg**e0 * yg**e1
    if not (vals.min() < 0.0 < vals.max()):
        raise DegenerateError("no real curve points in the viewport")
    sx = (xmax - xmin) / (_GRID - 1)
    sy = (ymax - ymin) / (_GRID - 1)
    out = []
    for contour in find_contours(vals, 0.0):
        pts = [(xmin + col * sx, ymin + row * sy) for row, col in contour]
        if len(pts) >= 2:
            out.append(pts)
    if not out:
        raise DegenerateError("no real curve points in the viewport")
    return out


def _arclength_samples(polylines, n: int):
    """n points at equal arclength fractions over all trace polylines."""
    segs = []
    total = 0.0
    for pts in polylines:
        for (x1, y1), (x2, y2) in zip(pts, pts[1:]):
            ln = float(np.hypot(x2 - x1, y2 - y1))
            if ln > 0.0:
                segs.append((total, ln, (x1, y1), (x2, y2)))
                total += ln
    if not segs or total == 0.0:
        return []
    targets = [(k + 0.5) / n * total for k in range(n)]
    out = []
    idx = 0
    for t in targets:
        while idx + 1 < len(segs) and segs[idx][0] + segs[idx][1] < t:
            idx += 1
        start, ln, (x1, y1), (x2, y2) = segs[idx]
        a = min(max((t - start) / ln, 0.0), 1.0)
        out.append((x1 + a * (x2 - x1), y1 + a * (y2 - y1)))
    return out


def _clip_line(a: float, b: float, c: float, viewport):
    """Viewport chord of the affine line a*x + b*y + c = 0, or None."""
    xmin, xmax, ymin, ymax = viewport
    pts = []
    if abs(b) > 1e-14:
        for x in (xmin, xmax):
            y = -(a * x + c) / b
            if ymin - 1e-9 <= y <= ymax + 1e-9:
                pts.append((x, y))
    if abs(a) > 1e-14:
        for y in (ymin, ymax):
            x = -(b * y + c) / a
            if xmin - 1e-9 <= x <= xmax + 1e-9:
                pts.append((x, y))
    uniq = []
    for p in pts:
        if all(abs(p[0] - q[0]) + abs(p[1] - q[1]) > 1e-9 for q in uniq):
            uniq.append(p)
    if len(uniq) < 2:
        return None
    uniq.sort()
    return uniq[0], uniq[-1]


def _real_line(coords) -> tuple | None:
    """Real (a, b, c) from projective line coordinates, None if genuinely complex."""
    v = np.asarray(coords, dtype=complex)
    nrm = np.linalg.norm(v)
    if nrm == 0.0:
        return None
    # rotate the leading phase away, then demand a real vector
    lead = v[int(np.argmax(np.abs(v)))]
    v = v * (abs(lead) / lead) / nrm
    if np.linalg.norm(v.imag) > 1e-8:
        return None
    return float(v[0].real), float(v[1].real), float(v[2].real)


def render_svg(
    curve: Curve, source: ProjPoint, spec: RenderSpec, seed: int = 0, tol: float = 1e-8
) -> str:
    """The full scene as an SVG 1.1 document string.

    The seed is accepted for interface symmetry: the construction is already
    deterministic because ray base points come from arclength fractions of
    the marching-squares trace, not from random draws.
    """
    del seed
    xmin, xmax, ymin, ymax = spec.viewport
    w = spec.width
    h = int(round(w * (ymax - ymin) / (xmax - xmin)))
    px = lambda x: (x - xmin) * w / (xmax - xmin)
    py = lambda y: (ymax - y) * h / (ymax - ymin)

    polylines = _trace(curve, spec.viewport)
    bases = _arclength_samples(polylines, spec.rays)
    lams = reflected_family(curve, source)
    lams_n = [l.to_numeric() for l in lams]
    lam_scale = max(l.coefficient_norm() for l in lams_n) or 1.0
    grads = [g.to_numeric() for g in curve.gradient]
    src_n = np.array([complex(c) for c in source.coords])

    samples = []
    for x, y in bases:
        p = np.array([x, y, 1.0], dtype=complex)
        g = np.array([gg.eval_complex(p) for gg in grads])
        t = np.cross(g, p)
        if np.linalg.norm(t) <= 1e-10 * max(np.linalg.norm(g), 1.0):
            continue  # singular or isotropic spot on the trace
        samples.append(CurveSample(point=ProjPoint(p), tangent_dir=ProjPoint(t)))

    incident = []
    reflected = []
    envelope = []
    for s in samples:
        p = np.asarray(s.point.to_numpy())
        line = _real_line(np.cross(src_n, p))
        if spec.show_incident and line is not None:
            seg = _clip_line(*line, spec.viewport)
            if seg:
                incident.append(seg)
        lam = np.array([l.eval_complex(p) for l in lams_n])
        if np.linalg.norm(lam) > 1e-8 * lam_scale:
            rline = _real_line(lam)
            if spec.show_reflected and rline is not None:
                seg = _clip_line(*rline, spec.viewport)
                if seg:
                    reflected.append(seg)
        if spec.show_envelope:
            try:
                e = envelope_point(curve, source, s, tol=tol)
            except DegenerateError:
                continue
            ev = _real_line(e.to_numpy())  # same reality filter works for points
            if ev is None or abs(ev[2]) < 1e-9:
                continue
            ex, ey = ev[0] / ev[2], ev[1] / ev[2]
            if xmin <= ex <= xmax and ymin <= ey <= ymax:
                envelope.append((ex, ey))

    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{w}" height="{h}" viewBox="0 0 {w} {h}">',
        f'<rect width="{w}" height="{h}" fill="#ffffff"/>',
    ]
    if spec.show_incident:
        parts.append(f'<g id="incident" stroke="#caa84d" stroke-width="{_fmt(spec.ray_stroke)}">')
        for (x1, y1), (x2, y2) in incident:
            parts.append(
                f'<line x1="{_fmt(px(x1))}" y1="{_fmt(py(y1))}" '
                f'x2="{_fmt(px(x2))}" y2="{_fmt(py(y2))}"/>'
            )
        parts.append("</g>")
    if spec.show_reflected:
        parts.append(f'<g id="reflected" stroke="#b03a2e" stroke-width="{_fmt(spec.ray_stroke)}">')
        for (x1, y1), (x2, y2) in reflected:
            parts.append(
                f'<line x1="{_fmt(px(x1))}" y1="{_fmt(py(y1))}" '
                f'x2="{_fmt(px(x2))}" y2="{_fmt(py(y2))}"/>'
            )
        parts.append("</g>")
    if spec.show_curve:
        parts.append(
            f'<g id="curve" stroke="#1f4e79" stroke-width="{_fmt(spec.curve_stroke)}" fill="none">'
        )
        for pts in polylines:
            d = "M " + " L ".join(f"{_fmt(px(x))} {_fmt(py(y))}" for x, y in pts)
            parts.append(f'<path d="{d}"/>')
        parts.append("</g>")
    if spec.show_envelope:
        parts.append('<g id="envelope" fill="#1b1b1b">')
        for ex, ey in envelope:
            parts.append(f'<circle cx="{_fmt(px(ex))}" cy="{_fmt(py(ey))}" r="2.5"/>')
        parts.append("</g>")
    sv = _real_line(src_n)
    if sv is not None and abs(sv[2]) > 1e-9:
        sx, sy = sv[0] / sv[2], sv[1] / sv[2]
        if xmin <= sx <= xmax and ymin <= sy <= ymax:
            parts.append(
                f'<g id="source"><circle cx="{_fmt(px(sx))}" cy="{_fmt(py(sy))}" '
                f'r="4" fill="#2e7d32"/></g>'
            )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
