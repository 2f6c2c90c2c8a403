"""The 4-periodic fundamental complex evaluated on an A(1)-module.

For a module M the complex has terms

    index 4k   : Ann_{Sq1} M   (offset 8k)
    index 4k+1 : M             (offset 8k+1)
    index 4k+2 : M             (offset 8k+2)
    index 4k+3 : Ann_{Sq1} M   (offset 8k+4)

with differentials Sq2, Sq2, Sq3 = Sq1Sq2 and Sq2Sq1Sq2 leaving indices
0, 1, 2, 3 mod 4.  A class at (index n, internal degree t) lives in M in
degree t + s(n), and every differential raises t by one.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import gf2
from ._parallel import pmap
from .a1mod import A1Module, margolis, suspend, syzygy
from .gf2 import GF2Matrix

OFFSETS = (0, 1, 2, 4)
DIFFERENTIALS = ((2,), (2,), (1, 2), (2, 1, 2))
ANN_TERMS = (0, 3)


class HypothesisError(ValueError):
    """The input module does not satisfy the hypothesis of a check."""


class ComplexError(RuntimeError):
    """d o d is non-zero: the source module is corrupted."""


def offset(n: int) -> int:
    k, i = divmod(n, 4)
    return 8 * k + OFFSETS[i]


def is_ann(n: int) -> bool:
    return n % 4 in ANN_TERMS


def differential_word(n: int) -> tuple[int, ...]:
    return DIFFERENTIALS[n % 4]


class _RankTable:
    """Ranks of Sq-words on M or on Ann_{Sq1} M, summed over components."""

    def __init__(self, m: A1Module, split: bool = True):
        self.m = m
        self.parts = m.components() if split and not m.finite else [m]
        self.cache: dict = {}

    def _rank(self, part: A1Module, word, d: int, ann: bool) -> int:
        if part.dim(d) == 0:
            return 0
        deg = sum(word)
        if part.dim(d + deg) == 0:
            return 0
        op = part.op(word, d) if len(word) > 1 else part.sq(word[0], d)
        if not ann:
            return gf2.rank(op)
        s1 = part.sq(1, d)
        return gf2.rank(gf2.vstack([op, s1], part.dim(d))) - gf2.rank(s1)

    def rank(self, word, d: int, ann: bool) -> int:
        key = (tuple(word), d, ann)
        if key not in self.cache:
            self.cache[key] = sum(self._rank(p, word, d, ann) for p in self.parts)
        return self.cache[key]

    def sq1_rank(self, d: int) -> int:
        key = ("sq1", d)
        if key not in self.cache:
            self.cache[key] = sum(gf2.rank(p.sq(1, d)) if p.dim(d) and p.dim(d + 1) else 0 for p in self.parts)
        return self.cache[key]

    def prefill(self, jobs) -> None:
        jobs = [j for j in jobs if (tuple(j[0]), j[1], j[2]) not in self.cache]
        for j, v in zip(jobs, pmap(lambda j: self.rank(*j), jobs)):
            self.cache[(tuple(j[0]), j[1], j[2])] = v


@dataclass(eq=False)
class CochainComplex:
    module: A1Module
    n_range: tuple
    t_range: tuple
    _ranks: _RankTable = field(repr=False, default=None)

    def __post_init__(self):
        if self._ranks is None:
            self._ranks = _RankTable(self.module)

    # bookkeeping ---------------------------------------------------------

    def m_degree(self, n: int, t: int) -> int:
        return t + offset(n)

    def computable(self, n: int, t: int) -> bool:
        m = self.module
        return m.finite or t + 1 + offset(n + 1) <= m.hi

    def reliable(self, n: int, t: int) -> bool:
        m = self.module
        return m.finite or t + 1 + offset(n + 1) <= m.reliable_hi

    # dimensions and ranks -------------------------------------------------

    def term_dim(self, n: int, t: int) -> int:
        d = self.m_degree(n, t)
        dim = self.module.dim(d)
        if dim and is_ann(n):
            dim -= self._ranks.sq1_rank(d)
        return dim

    def out_rank(self, n: int, t: int) -> int:
        return self._ranks.rank(differential_word(n), self.m_degree(n, t), is_ann(n))

    def homology_dim(self, n: int, t: int) -> int:
        return self.term_dim(n, t) - self.out_rank(n, t) - self.out_rank(n - 1, t - 1)

    # explicit bases, for small modules ------------------------------------------

    def term_basis(self, n: int, t: int) -> GF2Matrix:
        """Rows are basis vectors of the term, written in M."""
        d = self.m_degree(n, t)
        dim = self.module.dim(d)
        if is_ann(n):
            return gf2.kernel(self.module.sq(1, d)).basis
        return GF2Matrix.identity(dim)

    def differential(self, n: int, t: int) -> GF2Matrix:
        """Matrix from term (n, t) to term (n + 1, t + 1) in term bases."""
        d = self.m_degree(n, t)
        src = self.term_basis(n, t)
        images = src @ self.module.op(differential_word(n), d).T
        if is_ann(n + 1):
            target = gf2.kernel(self.module.sq(1, d + sum(differential_word(n))))
            return target.coordinates(images).T
        return images.T

    def check_dd(self) -> None:
        """Raise ComplexError unless every composable d o d vanishes."""
        n0, n1 = self.n_range
        t0, t1 = self.t_range
        for n in range(n0, n1):
            for t in range(t0, t1 + 1):
                if not (self.computable(n, t) and self.computable(n + 1, t + 1)):
                    continue
                if self.term_dim(n, t) == 0:
                    continue
                d = self.m_degree(n, t)
                w = differential_word(n + 1) + differential_word(n)
                comp = self.module.op(w, d)
                if is_ann(n):
                    comp = comp @ gf2.kernel(self.module.sq(1, d)).basis.T
                if not comp.is_zero():
                    raise ComplexError(f"d o d != 0 at index {n}, internal degree {t}")

    def representatives(self, n: int, t: int) -> list[np.ndarray]:
        """Cocycles in M (degree t + s(n)) whose classes span the homology."""
        basis = self.term_basis(n, t)
        if basis.rows == 0:
            return []
        cycles = gf2.kernel(self.differential(n, t))
        prev = self.term_basis(n - 1, t - 1)
        if prev.rows:
            bounds = gf2.image(self.differential(n - 1, t - 1))
        else:
            bounds = gf2.Subspace.zero(basis.rows)
        reps = []
        acc = bounds
        for v in cycles.vectors():
            row = GF2Matrix.from_dense(v.reshape(1, -1))
            if not acc.contains_rows(row)[0]:
                acc = acc + gf2.Subspace.span(row)
                reps.append((row @ basis).to_dense()[0])
        return reps


@dataclass
class BigradedDims:
    dims: dict
    reliable: dict

    def get(self, n: int, t: int) -> int:
        if (n, t) not in self.dims:
            raise KeyError(f"bidegree ({n}, {t}) not computed")
        return self.dims[(n, t)]

    def is_reliable(self, n: int, t: int) -> bool:
        return self.reliable.get((n, t), False)

    def nonzero(self, reliable_only: bool = True) -> dict:
        return {k: v for k, v in self.dims.items() if v and (self.reliable[k] or not reliable_only)}

    def cells(self):
        """(n, t, dim, reliable) sorted by n then t."""
        for (n, t) in sorted(self.dims):
            yield n, t, self.dims[(n, t)], self.reliable[(n, t)]

    def shifted(self, dn: int = 0, dt: int = 0) -> "BigradedDims":
        return BigradedDims(
            {(n + dn, t + dt): v for (n, t), v in self.dims.items()},
            {(n + dn, t + dt): v for (n, t), v in self.reliable.items()},
        )


def default_t_range(m: A1Module, n_range) -> tuple[int, int]:
    n0, n1 = n_range
    offs = [offset(n) for n in range(n0, n1 + 1)]
    return m.lo - max(offs), m.hi - min(offs)


def build_complex(m: A1Module, n_range=(0, 3), t_range=None, check: bool = True) -> CochainComplex:
    if t_range is None:
        t_range = default_t_range(m, n_range)
    c = CochainComplex(m, tuple(n_range), tuple(t_range))
    if check:
        c.check_dd()
    return c


def homology(c: CochainComplex) -> BigradedDims:
    n0, n1 = c.n_range
    t0, t1 = c.t_range
    cells = [(n, t) for n in range(n0, n1 + 1) for t in range(t0, t1 + 1) if c.computable(n, t)]
    jobs = set()
    for n, t in cells:
        for nn, tt in ((n, t), (n - 1, t - 1)):
            jobs.add((differential_word(nn), c.m_degree(nn, tt), is_ann(nn)))
    c._ranks.prefill(sorted(jobs))
    dims = {}
    rel = {}
    for n, t in cells:
        dims[(n, t)] = c.homology_dim(n, t)
        rel[(n, t)] = c.reliable(n, t)
    return BigradedDims(dims, rel)


@dataclass
class DecalageVerdict:
    ok: bool
    compared: int
    mismatches: list


def decalage_check(m: A1Module, n_range=(-3, 4), t_range=None) -> DecalageVerdict:
    """Compare H^n on Sigma^{-1} Omega M with H^{n-1} on M."""
    q0 = margolis(m, "Q0")
    if not q0.vanishes():
        d = min(q0.nonzero())
        raise HypothesisError(f"module is not Q0-acyclic (homology in degree {d})")
    omega = suspend(syzygy(m), -1)
    n0, n1 = n_range
    if t_range is None:
        a = default_t_range(m, (n0 - 1, n1))
        b = default_t_range(omega, (n0, n1))
        t_range = (min(a[0], b[0]), max(a[1], b[1]))
    left = homology(build_complex(omega, (n0, n1), t_range))
    right = homology(build_complex(m, (n0 - 1, n1 - 1), t_range))
    mismatches = []
    compared = 0
    for (n, t), v in left.dims.items():
        if not left.reliable[(n, t)]:
            continue
        key = (n - 1, t)
        if key not in right.dims or not right.reliable[key]:
            continue
        compared += 1
        if v != right.dims[key]:
            mismatches.append((n, t, v, right.dims[key]))
    return DecalageVerdict(not mismatches and compared > 0, compared, mismatches)
