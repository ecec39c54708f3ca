"""Seeded draws for general-position choices.

Every randomized decision in the library flows through rng_stream so that a
single integer seed pins the whole run. Streams are labeled: two call sites
never share a generator, and the same (seed, label) always replays the same
sequence on any platform (string seeding hashes with SHA-512, not PYTHONHASHSEED).
"""

from __future__ import annotations

import random
from fractions import Fraction

import numpy as np


def rng_stream(seed: int, label: str) -> random.Random:
    return random.Random(f"{seed}|{label}")


def random_fraction(rng: random.Random, num: int = 9, den: int = 4) -> Fraction:
    return Fraction(rng.randint(-num, num), rng.randint(1, den))


def random_rational_triple(rng: random.Random, num: int = 9, den: int = 4):
    while True:
        t = tuple(random_fraction(rng, num, den) for _ in range(3))
        if any(t):
            return t


def random_int_matrix(rng: random.Random, bound: int = 2):
    """Invertible 3x3 integer matrix (det +-1): permutation * unit-L * unit-U."""
    lo = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    up = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    for i in range(3):
        for j in range(i):
            lo[i][j] = rng.randint(-bound, bound)
            up[j][i] = rng.randint(-bound, bound)
    perm = [0, 1, 2]
    rng.shuffle(perm)
    lu = [[sum(lo[i][k] * up[k][j] for k in range(3)) for j in range(3)] for i in range(3)]
    return [lu[p] for p in perm]


def random_rotation(rng: random.Random) -> np.ndarray:
    """Real orthogonal 3x3 matrix from a seeded Gaussian draw (QR sign-fixed)."""
    a = np.array([[rng.gauss(0.0, 1.0) for _ in range(3)] for _ in range(3)])
    q, r = np.linalg.qr(a)
    return q * np.sign(np.diag(r))
