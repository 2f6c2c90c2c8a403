"""Independent slow computations used to produce golden files.

Everything here uses plain dictionaries for the Steenrod action and the
``naive`` dense 0/1 routines for linear algebra.  Nothing is shared with the
bit-packed path except the mathematics.
"""

from __future__ import annotations

import itertools
from math import comb

import numpy as np

from . import naive


def monomials(r: int, d: int) -> list[tuple[int, ...]]:
    """Exponent vectors of degree d, descending lexicographic order."""
    out = [e for e in itertools.product(range(d + 1), repeat=r) if sum(e) == d]
    return sorted(out, reverse=True)


def _sq1(e):
    out: dict = {}
    for i, a in enumerate(e):
        if a % 2:
            t = list(e)
            t[i] += 1
            out[tuple(t)] = out.get(tuple(t), 0) ^ 1
    return {k for k, v in out.items() if v}


def _sq2(e):
    out: dict = {}

    def add(t):
        out[t] = out.get(t, 0) ^ 1

    for i, a in enumerate(e):
        if comb(a, 2) % 2:
            t = list(e)
            t[i] += 2
            add(tuple(t))
    for i in range(len(e)):
        for j in range(i + 1, len(e)):
            if e[i] * e[j] % 2:
                t = list(e)
                t[i] += 1
                t[j] += 1
                add(tuple(t))
    return {k for k, v in out.items() if v}


class NaiveBV:
    """H(BV_r) through degree N with dense 0/1 action matrices."""

    def __init__(self, r: int, N: int):
        self.r, self.N = r, N
        self.basis = {d: monomials(r, d) for d in range(1, N + 1)}
        self.index = {d: {m: i for i, m in enumerate(b)} for d, b in self.basis.items()}

    def dim(self, d: int) -> int:
        return len(self.basis.get(d, []))

    def sq(self, i: int, d: int) -> np.ndarray:
        out = np.zeros((self.dim(d + i), self.dim(d)), dtype=np.uint8)
        if not out.size:
            return out
        f = _sq1 if i == 1 else _sq2
        for c, m in enumerate(self.basis[d]):
            for t in f(m):
                out[self.index[d + i][t], c] = 1
        return out

    def op(self, word, d: int) -> np.ndarray:
        x = np.eye(self.dim(d), dtype=np.uint8)
        deg = d
        for letter in reversed(word):
            x = naive.matmul(self.sq(letter, deg), x) if x.size else np.zeros((self.dim(deg + letter), self.dim(d)), np.uint8)
            deg += letter
        return x


def _rank(a: np.ndarray) -> int:
    return naive.rank(a) if a.size else 0


def margolis_dims(m: NaiveBV, q: str, lo: int, hi: int) -> dict[int, int]:
    k = 1 if q == "Q0" else 3

    def mat(d):
        if q == "Q0":
            return m.sq(1, d)
        return (m.op((1, 2), d).astype(np.int64) + m.op((2, 1), d)) % 2

    return {d: m.dim(d) - _rank(mat(d)) - (_rank(mat(d - k)) if d - k >= 1 else 0) for d in range(lo, hi + 1)}


OFFSETS = (0, 1, 2, 4)
WORDS = ((2,), (2,), (1, 2), (2, 1, 2))


def offset(n: int) -> int:
    k, i = divmod(n, 4)
    return 8 * k + OFFSETS[i]


def toda_homology(m: NaiveBV, n_range, t_range) -> dict:
    """Dims of the fundamental complex on m, with explicit kernels and images."""
    s = offset

    def basis(n, t):
        d = t + s(n)
        if d < 1 or d > m.N:
            return np.zeros((0, max(m.dim(d), 0)), np.uint8), d
        if n % 4 in (0, 3):
            return naive.kernel(m.sq(1, d)), d
        return np.eye(m.dim(d), dtype=np.uint8), d

    def out_rank(n, t):
        b, d = basis(n, t)
        if b.shape[0] == 0:
            return 0
        w = WORDS[n % 4]
        img = naive.matmul(m.op(w, d), b.T)
        return _rank(img)

    out = {}
    for n in range(n_range[0], n_range[1] + 1):
        for t in range(t_range[0], t_range[1] + 1):
            b, _ = basis(n, t)
            out[(n, t)] = b.shape[0] - out_rank(n, t) - out_rank(n - 1, t - 1)
    return out


def tu_dims(m: NaiveBV) -> dict[int, int]:
    return {d: (_rank(m.op((1, 2, 1), d - 4)) if d - 4 >= 1 else 0) for d in range(1, m.N + 1)}


def sq2_homology(m: NaiveBV) -> dict[int, int]:
    """Sq2-homology on the image of Sq1Sq2Sq1, via explicit subspaces."""
    tu = {}
    for d in range(1, m.N + 1):
        if d - 4 >= 1:
            tu[d] = naive.rref(m.op((1, 2, 1), d - 4).T)[0]
        else:
            tu[d] = np.zeros((0, m.dim(d)), np.uint8)

    def rank_on(d):
        if d < 1 or d + 2 > m.N or tu[d].shape[0] == 0:
            return 0
        return _rank(naive.matmul(m.sq(2, d), tu[d].T))

    return {d: tu[d].shape[0] - rank_on(d) - rank_on(d - 2) for d in range(1, m.N - 1)}


THETA = {0: ((2, 2, 2), -6), 1: ((2, 1), -2), 2: ((2,), 0), 3: ((1, 2), 1)}


def theta_image(m: NaiveBV, i: int, d: int) -> int:
    word, shift = THETA[i]
    src = d + shift
    if src < 1:
        return 0
    return _rank(m.op(word, src))
