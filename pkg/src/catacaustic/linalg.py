"""Small dense linear algebra: exact (Fraction/GaussRat entries) and numeric.

The exact routines run plain Gauss-Jordan; at the sizes that occur here
(stacked coefficient matrices, at most a few dozen rows of width <= 6)
coefficient growth is a non-issue.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .gauss import exactify, to_complex


def _is_zero(value) -> bool:
    return not value


def rref(rows):
    """Reduced row echelon form. Returns (new_rows, pivot_columns)."""
    m = [[exactify(v) for v in row] for row in rows]
    if not m:
        return m, []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pivot_row = None
        for i in range(r, len(m)):
            if not _is_zero(m[i][c]):
                pivot_row = i
                break
        if pivot_row is None:
            continue
        m[r], m[pivot_row] = m[pivot_row], m[r]
        pv = m[r][c]
        m[r] = [v / pv for v in m[r]]
        for i in range(len(m)):
            if i != r and not _is_zero(m[i][c]):
                factor = m[i][c]
                m[i] = [a - factor * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank(rows) -> int:
    return len(rref(rows)[1])


def nullspace(rows, ncols=None):
    """Exact right nullspace basis of the matrix given by `rows`."""
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    if not rows:
        rows = [[Fraction(0)] * ncols]
    m, pivots = rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [Fraction(0)] * ncols
        vec[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            vec[pc] = -m[r][fc]
        basis.append([exactify(v) for v in vec])
    return basis


def mat_vec(m, v):
    return [sum((a * b for a, b in zip(row, v)), Fraction(0)) for row in m]


def numeric_nullspace(a: np.ndarray, rel_tol: float):
    """Right singular vectors whose singular values fall below rel_tol*sigma_max.

    Returns (vectors, singular_values); vectors are rows.
    """
    a = np.asarray(a, dtype=complex)
    _, s, vh = np.linalg.svd(a)
    if s.size == 0 or s[0] == 0.0:
        return [vh[i] for i in range(vh.shape[0])], s
    small = [i for i in range(vh.shape[0]) if (s[i] if i < s.size else 0.0) <= rel_tol * s[0]]
    return [vh[i].conjugate() for i in small], s


def numeric_rank(a: np.ndarray, rel_tol: float) -> int:
    a = np.asarray(a, dtype=complex)
    s = np.linalg.svd(a, compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.sum(s > rel_tol * s[0]))


def to_numpy_matrix(rows) -> np.ndarray:
    return np.array([[to_complex(v) for v in row] for row in rows], dtype=complex)
