"""Cohomology of elementary abelian 2-groups and the modules P, R, P0, Pn.

``bv_cohomology(r, N)`` is the reduced mod-2 cohomology of B(Z/2)^r, a
polynomial algebra on classes u_1..u_r of degree 1, with Sq1 and Sq2 given
by the Cartan formula from Sq1 u = u^2, Sq2 u = 0.  Monomials of each degree
are ordered by descending exponent vector (u_1^d first).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb

import numpy as np

from . import gf2
from .a1mod import (
    A1Module,
    WindowError,
    hom_space,
    margolis,
    suspend,
    syzygy_n,
)
from .gf2 import GF2Matrix


def exponent_vectors(r: int, d: int) -> np.ndarray:
    """All exponent vectors of total degree d in r variables, descending lex."""
    if r == 1:
        return np.array([[d]], dtype=np.int64)
    rows = []
    for a in range(d, -1, -1):
        rest = exponent_vectors(r - 1, d - a)
        rows.append(np.hstack([np.full((len(rest), 1), a, dtype=np.int64), rest]))
    return np.vstack(rows)


@dataclass(frozen=True, eq=False)
class BVCohomology:
    rank: int
    max_degree: int
    module: A1Module
    exponents: dict = field(repr=False)

    def dim(self, d: int) -> int:
        return self.module.dim(d)

    def monomial(self, d: int, i: int) -> str:
        e = self.exponents[d][i]
        parts = []
        for k, a in enumerate(e, start=1):
            if a == 1:
                parts.append(f"u{k}")
            elif a > 1:
                parts.append(f"u{k}^{a}")
        return "".join(parts) or "1"

    def index(self, exps) -> int:
        exps = np.asarray(exps, dtype=np.int64)
        d = int(exps.sum())
        hits = np.nonzero((self.exponents[d] == exps).all(axis=1))[0]
        if not hits.size:
            raise KeyError(tuple(exps))
        return int(hits[0])

    def vector(self, exps) -> np.ndarray:
        d = int(np.sum(exps))
        v = np.zeros(self.dim(d), dtype=np.uint8)
        v[self.index(exps)] = 1
        return v


def _encode(e: np.ndarray, base: int) -> np.ndarray:
    key = np.zeros(len(e), dtype=np.int64)
    for k in range(e.shape[1]):
        key = key * base + e[:, k]
    return key


def bv_cohomology(r: int, N: int) -> BVCohomology:
    if r < 1 or N < 1:
        raise ValueError("need r >= 1 and N >= 1")
    base = N + 3
    exps = {d: exponent_vectors(r, d) for d in range(1, N + 1)}
    # keys are descending within a degree; flip for searchsorted
    keys = {d: _encode(e, base)[::-1].copy() for d, e in exps.items()}

    def locate(d: int, targets: np.ndarray) -> np.ndarray:
        k = keys[d]
        pos = np.searchsorted(k, _encode(targets, base))
        return len(k) - 1 - pos

    def action(i: int, d: int) -> GF2Matrix:
        e = exps[d]
        n_src, n_dst = len(e), len(exps[d + i])
        rs, cs = [], []
        cols = np.arange(n_src)
        if i == 1:
            for k in range(r):
                m = (e[:, k] & 1).astype(bool)
                t = e[m].copy()
                t[:, k] += 1
                rs.append(locate(d + 1, t))
                cs.append(cols[m])
        else:
            for k in range(r):
                m = (e[:, k] % 4 >= 2)
                t = e[m].copy()
                t[:, k] += 2
                rs.append(locate(d + 2, t))
                cs.append(cols[m])
            for k in range(r):
                for j in range(k + 1, r):
                    m = ((e[:, k] & e[:, j]) & 1).astype(bool)
                    t = e[m].copy()
                    t[:, k] += 1
                    t[:, j] += 1
                    rs.append(locate(d + 2, t))
                    cs.append(cols[m])
        return GF2Matrix.from_coo(n_dst, n_src, np.concatenate(rs), np.concatenate(cs))

    sq1 = {d: action(1, d) for d in range(1, N)}
    sq2 = {d: action(2, d) for d in range(1, N - 1)}
    mod = A1Module.build(1, N, {d: len(e) for d, e in exps.items()}, sq1, sq2, N, False)
    out = BVCohomology(r, N, mod, exps)
    if r == 1:
        labels = tuple((f"u^{d}",) for d in range(1, N + 1))
        object.__setattr__(out, "module", A1Module(mod.lo, mod.hi, mod.dims, mod.sq1, mod.sq2, N, False, labels))
    return out


@dataclass(frozen=True, eq=False)
class StuntedModule:
    label: str
    module: A1Module


def build_P(N: int) -> StuntedModule:
    """Reduced cohomology of BZ/2: u^n in each degree n >= 1."""
    return StuntedModule("P", bv_cohomology(1, N).module)


def _with_bottom(N: int, extra: dict, sq1_bottom: dict, sq2_bottom: dict, labels_bottom: dict) -> A1Module:
    """P with extra classes in degrees -1, 0 attached below it."""
    p = build_P(N).module
    lo = -1
    dims = {d: p.dim(d) + extra.get(d, 0) for d in range(lo, N + 1)}
    sq1 = {}
    sq2 = {}
    for d in range(lo, N):
        if d >= 1:
            sq1[d] = p.sq(1, d)
        elif d in sq1_bottom:
            sq1[d] = GF2Matrix.from_dense(np.array(sq1_bottom[d], dtype=np.uint8).reshape(dims[d + 1], dims[d]))
    for d in range(lo, N - 1):
        if d >= 1:
            sq2[d] = p.sq(2, d)
        elif d in sq2_bottom:
            sq2[d] = GF2Matrix.from_dense(np.array(sq2_bottom[d], dtype=np.uint8).reshape(dims[d + 2], dims[d]))
    labels = tuple(labels_bottom.get(d, (f"u^{d}",) if d >= 1 else ()) for d in range(lo, N + 1))
    mod = A1Module.build(lo, N, dims, sq1, sq2, N, False, labels)
    mod.check_relations()
    return mod


def build_R(N: int) -> StuntedModule:
    """R = P plus x in degree -1 with Sq1 x = 0, Sq2 x = u."""
    mod = _with_bottom(N, {-1: 1}, {}, {-1: [[1]]}, {-1: ("x",)})
    return StuntedModule("R", mod)


def build_P0(N: int) -> StuntedModule:
    """P0 = R plus y in degree 0 with Sq1 x = y, Sq2 x = u."""
    mod = _with_bottom(N, {-1: 1, 0: 1}, {-1: [[1]], 0: [[0]]}, {-1: [[1]], 0: [[0]]}, {-1: ("x",), 0: ("y",)})
    return StuntedModule("P0", mod)


def build_Pn(n: int, N: int) -> StuntedModule:
    """P_n = Sigma^{-n} Omega^n P0 (so P_1 = P)."""
    if n < 0:
        raise ValueError("n must be non-negative")
    mod = suspend(syzygy_n(build_P0(N).module, n), -n)
    if mod.rel_bound() < mod.lo:
        raise WindowError(f"window exhausted building P{n}; increase N")
    return StuntedModule(f"P{n}", mod)


# splittings ------------------------------------------------------------------


def retraction_exists(m: A1Module, keep: dict, hi: int | None = None) -> bool:
    """Whether the submodule on basis vectors ``keep[d]`` is a retract of m.

    Works on degrees up to ``hi`` only; a negative answer there is a proof
    for the untruncated module as well, since fewer equations were imposed.
    """
    hi = m.hi if hi is None else hi
    sub = m.restrict(keep)
    basis = hom_space(m, sub, m.lo, hi)
    degs = list(range(m.lo, hi + 1))
    # constraint: r restricted to the submodule is the identity
    cols = []
    for phi in basis:
        parts = [phi[d].take_cols(np.asarray(keep.get(d, []), dtype=np.int64)).to_dense().ravel() for d in degs]
        cols.append(np.concatenate(parts) if parts else np.zeros(0, np.uint8))
    target = np.concatenate([np.eye(len(keep.get(d, [])), dtype=np.uint8).ravel() for d in degs])
    if target.size == 0:
        return True
    if not cols:
        return not target.any()
    system = GF2Matrix.from_dense(np.array(cols, dtype=np.uint8).T)
    return gf2.preimage(system, target) is not None


def check_nonsplit(N: int = 12) -> dict[str, bool]:
    """True when the extension defining R, resp. P0, does not split."""
    r = build_R(N).module
    p_in_r = {d: [0] for d in range(1, N + 1)}
    p0 = build_P0(N).module
    f_in_p0 = {0: [0]}
    return {
        "R": not retraction_exists(r, p_in_r),
        "P0": not retraction_exists(p0, f_in_p0),
    }


# Kunneth decomposition ----------------------------------------------------------


@dataclass
class KunnethReport:
    rank: int
    window: tuple
    mismatches: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches


def kunneth_check(r: int, N: int) -> KunnethReport:
    """Margolis homology of H(BV_r) against the sum of C(r, i) copies of P_i.

    P_i = Sigma^{1-i} Omega^{i-1} P; free summands are invisible to
    Margolis homology, so the two sides must agree degreewise.
    """
    lhs = bv_cohomology(r, N).module
    pieces = []
    p = build_P(N).module
    for i in range(1, r + 1):
        pieces.append((comb(r, i), suspend(syzygy_n(p, i - 1), 1 - i)))
    rel = min([lhs.reliable_hi] + [m.reliable_hi for _, m in pieces])
    lo = 1 - r
    report = KunnethReport(r, (lo, rel))
    for q, k in (("Q0", 1), ("Q1", 3)):
        left = margolis(lhs, q).dims
        right: dict[int, int] = {}
        for mult, m in pieces:
            for d, v in margolis(m, q).dims.items():
                right[d] = right.get(d, 0) + mult * v
        for d in range(lo, rel - k + 1):
            if left.get(d, 0) != right.get(d, 0):
                report.mismatches.append((q, d, left.get(d, 0), right.get(d, 0)))
    return report
