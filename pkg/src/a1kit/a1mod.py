"""Bounded-below graded A(1)-modules of finite type inside a degree window.

A module is known on the degree window ``[lo, hi]`` and is zero below ``lo``.
Data up to ``reliable_hi`` agrees with the untruncated module it models;
between ``reliable_hi`` and ``hi`` it is present but may be a truncation
artifact.  A ``finite`` module is genuinely zero above ``hi``, so its window
can be extended freely.  Every operation computes the window of its output.

Bases are ordered once and for all: direct sums list the left summand first,
tensor products order pairs by the degree of the left factor and then
lexicographically, and free modules order by generator, then by A(1) word.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from . import gf2
from .gf2 import GF2Matrix, Subspace
from .steenrod import TOP, build_a1

INF = math.inf


class WindowError(ValueError):
    """The requested degrees are outside the module's known window."""


class ModuleRelationError(ValueError):
    """Action matrices violate the defining relations of A(1)."""


class InternalError(RuntimeError):
    """A step that cannot fail mathematically did fail."""


def _submatrix(m: GF2Matrix, rows, cols) -> GF2Matrix:
    rows = np.asarray(rows, dtype=np.int64)
    cols = np.asarray(cols, dtype=np.int64)
    r, c = m.nonzero()
    rmap = np.full(m.rows, -1, dtype=np.int64)
    rmap[rows] = np.arange(len(rows))
    cmap = np.full(m.cols, -1, dtype=np.int64)
    cmap[cols] = np.arange(len(cols))
    keep = (rmap[r] >= 0) & (cmap[c] >= 0)
    return GF2Matrix.from_coo(len(rows), len(cols), rmap[r[keep]], cmap[c[keep]])


@dataclass(frozen=True, eq=False)
class A1Module:
    lo: int
    hi: int
    dims: tuple[int, ...]
    sq1: tuple[GF2Matrix, ...]
    sq2: tuple[GF2Matrix, ...]
    reliable_hi: float
    finite: bool = False
    labels: tuple[tuple[str, ...], ...] | None = None
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if self.hi < self.lo - 1:
            raise WindowError(f"empty window [{self.lo}, {self.hi}]")
        n = self.hi - self.lo + 1
        if len(self.dims) != n:
            raise ValueError(f"{len(self.dims)} dims for window of size {n}")
        if len(self.sq1) != max(n - 1, 0) or len(self.sq2) != max(n - 2, 0):
            raise ValueError("action matrices do not cover the window")
        for k, m in enumerate(self.sq1):
            if m.shape != (self.dims[k + 1], self.dims[k]):
                raise ValueError(f"sq1 in degree {self.lo + k} has shape {m.shape}")
        for k, m in enumerate(self.sq2):
            if m.shape != (self.dims[k + 2], self.dims[k]):
                raise ValueError(f"sq2 in degree {self.lo + k} has shape {m.shape}")
        if self.finite:
            object.__setattr__(self, "reliable_hi", INF)
        elif self.reliable_hi > self.hi:
            raise ValueError("reliable_hi exceeds the window")

    # construction ---------------------------------------------------------

    @classmethod
    def from_dense(cls, lo, dims, sq1, sq2, reliable_hi=None, finite=False, labels=None) -> "A1Module":
        hi = lo + len(dims) - 1
        return cls(
            lo=lo,
            hi=hi,
            dims=tuple(int(d) for d in dims),
            sq1=tuple(GF2Matrix.from_dense(np.asarray(m, dtype=np.uint8).reshape(dims[k + 1], dims[k])) for k, m in enumerate(sq1)),
            sq2=tuple(GF2Matrix.from_dense(np.asarray(m, dtype=np.uint8).reshape(dims[k + 2], dims[k])) for k, m in enumerate(sq2)),
            reliable_hi=hi if reliable_hi is None else reliable_hi,
            finite=finite,
            labels=None if labels is None else tuple(tuple(x) for x in labels),
        )

    @classmethod
    def build(cls, lo, hi, dims, sq1, sq2, reliable_hi=None, finite=False, labels=None) -> "A1Module":
        """From dicts keyed by degree; missing action matrices are zero."""
        n = hi - lo + 1
        dl = [int(dims.get(d, 0)) for d in range(lo, hi + 1)]

        def mat(src, d, k):
            m = src.get(d)
            return m if m is not None else GF2Matrix(dl[d + k - lo], dl[d - lo])

        return cls(
            lo=lo,
            hi=hi,
            dims=tuple(dl),
            sq1=tuple(mat(sq1, d, 1) for d in range(lo, lo + max(n - 1, 0))),
            sq2=tuple(mat(sq2, d, 2) for d in range(lo, lo + max(n - 2, 0))),
            reliable_hi=hi if reliable_hi is None else reliable_hi,
            finite=finite,
            labels=labels,
        )

    @classmethod
    def zero(cls) -> "A1Module":
        return cls(0, -1, (), (), (), INF, finite=True)

    @classmethod
    def trivial(cls, degree: int = 0) -> "A1Module":
        return cls(degree, degree, (1,), (), (), INF, finite=True, labels=(("1",),))

    # access -----------------------------------------------------------------

    @property
    def window(self) -> tuple[int, int]:
        return (self.lo, self.hi)

    @property
    def total_dim(self) -> int:
        return sum(self.dims)

    def degrees(self) -> range:
        return range(self.lo, self.hi + 1)

    def dim(self, d: int) -> int:
        if d < self.lo:
            return 0
        if d > self.hi:
            if self.finite:
                return 0
            raise WindowError(f"degree {d} above window top {self.hi}")
        return self.dims[d - self.lo]

    def dims_dict(self) -> dict[int, int]:
        return {d: n for d, n in zip(self.degrees(), self.dims) if n}

    def sq(self, i: int, d: int) -> GF2Matrix:
        """Matrix of Sq^i (i in {1, 2}) from degree d to d + i."""
        src, dst = self.dim(d), self.dim(d + i)
        if d < self.lo or d + i > self.hi:
            return GF2Matrix(dst, src)
        return (self.sq1 if i == 1 else self.sq2)[d - self.lo]

    def op(self, word: Sequence[int], d: int) -> GF2Matrix:
        """Matrix of a word in Sq1, Sq2 (rightmost letter applied first)."""
        key = ("op", tuple(word), d)
        if key in self._cache:
            return self._cache[key]
        x = GF2Matrix.identity(self.dim(d))
        deg = d
        for letter in reversed(tuple(word)):
            x = self.sq(letter, deg) @ x
            deg += letter
        self._cache[key] = x
        return x

    def apply_word(self, word: Sequence[int], d: int, vecs: GF2Matrix) -> GF2Matrix:
        """Apply a word to column vectors (columns of ``vecs``) in degree d."""
        deg = d
        x = vecs
        for letter in reversed(tuple(word)):
            x = self.sq(letter, deg) @ x
            deg += letter
        return x

    def q1(self, d: int) -> GF2Matrix:
        return self.op((1, 2), d) + self.op((2, 1), d)

    def label(self, d: int, i: int) -> str:
        if self.labels is None:
            return f"e{d}_{i}"
        return self.labels[d - self.lo][i]

    # invariants --------------------------------------------------------------

    def check_relations(self) -> None:
        """Raise ModuleRelationError unless the A(1) relations hold."""
        for d in self.degrees():
            if d + 2 <= self.hi and not self.op((1, 1), d).is_zero():
                raise ModuleRelationError(f"Sq1Sq1 != 0 in degree {d}")
            if d + 4 <= self.hi and self.op((2, 2), d) != self.op((1, 2, 1), d):
                raise ModuleRelationError(f"Sq2Sq2 != Sq1Sq2Sq1 in degree {d}")
            if d + 6 <= self.hi and self.op((2, 1, 2, 1), d) != self.op((1, 2, 1, 2), d):
                raise ModuleRelationError(f"Sq2Sq1Sq2Sq1 != Sq1Sq2Sq1Sq2 in degree {d}")

    def is_valid(self) -> bool:
        try:
            self.check_relations()
        except ModuleRelationError:
            return False
        return True

    # window manipulation --------------------------------------------------

    def rel_bound(self) -> float:
        return INF if self.finite else self.reliable_hi

    def truncate(self, hi: int) -> "A1Module":
        """Forget everything above ``hi`` (the result is no longer finite)."""
        if hi >= self.hi:
            return self if not self.finite else self.extend(hi)._replace_finite(False, hi)
        if hi < self.lo - 1:
            raise WindowError(f"cannot truncate window [{self.lo}, {self.hi}] to top {hi}")
        n = hi - self.lo + 1
        return A1Module(
            self.lo,
            hi,
            self.dims[:n],
            self.sq1[: max(n - 1, 0)],
            self.sq2[: max(n - 2, 0)],
            min(self.rel_bound(), hi),
            False,
            None if self.labels is None else self.labels[:n],
        )

    def _replace_finite(self, finite: bool, rel) -> "A1Module":
        return A1Module(self.lo, self.hi, self.dims, self.sq1, self.sq2, rel, finite, self.labels)

    def extend(self, hi: int) -> "A1Module":
        """Pad a finite module with zeros up to ``hi``."""
        if hi <= self.hi:
            return self
        if not self.finite:
            raise WindowError(f"cannot extend a truncated module beyond {self.hi}")
        return self._pad_top(hi)

    def extend_below(self, lo: int) -> "A1Module":
        if lo >= self.lo:
            return self
        k = self.lo - lo
        dims = (0,) * k + self.dims
        labels = None if self.labels is None else ((),) * k + self.labels
        return A1Module.build(
            lo,
            self.hi,
            dict(zip(range(lo, self.hi + 1), dims)),
            {d: self.sq(1, d) for d in range(self.lo, self.hi)},
            {d: self.sq(2, d) for d in range(self.lo, self.hi - 1)},
            self.reliable_hi,
            self.finite,
            labels,
        )

    def _pad_top(self, hi: int) -> "A1Module":
        dims = dict(zip(self.degrees(), self.dims))
        labels = None if self.labels is None else self.labels + ((),) * (hi - self.hi)
        return A1Module.build(
            self.lo,
            hi,
            dims,
            {d: self.sq(1, d) for d in range(self.lo, self.hi)},
            {d: self.sq(2, d) for d in range(self.lo, self.hi - 1)},
            hi,
            self.finite,
            labels,
        )

    def trim(self) -> "A1Module":
        """Drop zero degrees at the bottom (and at the top if finite)."""
        nz = [d for d in self.degrees() if self.dim(d)]
        if not nz:
            return A1Module.zero() if self.finite else self
        lo = nz[0]
        hi = nz[-1] if self.finite else self.hi
        if lo == self.lo and hi == self.hi:
            return self
        return A1Module.build(
            lo,
            hi,
            {d: self.dim(d) for d in range(lo, hi + 1)},
            {d: self.sq(1, d) for d in range(lo, hi)},
            {d: self.sq(2, d) for d in range(lo, hi - 1)},
            self.reliable_hi,
            self.finite,
            None if self.labels is None else self.labels[lo - self.lo : hi - self.lo + 1],
        )

    def restrict(self, keep: dict[int, np.ndarray]) -> "A1Module":
        """Submodule spanned by basis vectors ``keep[d]`` (must be invariant)."""
        idx = {d: np.asarray(keep.get(d, []), dtype=np.int64) for d in self.degrees()}
        sq1 = {d: _submatrix(self.sq(1, d), idx[d + 1], idx[d]) for d in range(self.lo, self.hi)}
        sq2 = {d: _submatrix(self.sq(2, d), idx[d + 2], idx[d]) for d in range(self.lo, self.hi - 1)}
        labels = None
        if self.labels is not None:
            labels = tuple(tuple(self.labels[d - self.lo][i] for i in idx[d]) for d in self.degrees())
        return A1Module.build(self.lo, self.hi, {d: len(v) for d, v in idx.items()}, sq1, sq2, self.reliable_hi, self.finite, labels)

    def components(self) -> list["A1Module"]:
        """Split along connected components of the action graph.

        The action matrices are block diagonal for this decomposition, so the
        pieces are direct summands.
        """
        if "components" in self._cache:
            return self._cache["components"]
        offs = np.concatenate([[0], np.cumsum(self.dims)]).astype(np.int64)
        rs, cs = [], []
        for d in self.degrees():
            for i in (1, 2):
                if d + i <= self.hi:
                    r, c = self.sq(i, d).nonzero()
                    rs.append(r + offs[d + i - self.lo])
                    cs.append(c + offs[d - self.lo])
        n = int(offs[-1])
        if n == 0:
            return []
        r = np.concatenate(rs) if rs else np.zeros(0, np.int64)
        c = np.concatenate(cs) if cs else np.zeros(0, np.int64)
        g = coo_matrix((np.ones(len(r), dtype=np.int8), (r, c)), shape=(n, n))
        ncomp, lab = connected_components(g, directed=False)
        # order components by their first basis vector
        first = np.full(ncomp, n)
        np.minimum.at(first, lab, np.arange(n))
        order = np.argsort(first, kind="stable")
        rank_of = np.empty(ncomp, dtype=np.int64)
        rank_of[order] = np.arange(ncomp)
        lab = rank_of[lab]
        # local index of every basis vector inside its (component, degree)
        local = np.empty(n, dtype=np.int64)
        sizes = {}
        for d in self.degrees():
            a, b = offs[d - self.lo], offs[d - self.lo + 1]
            seg = lab[a:b]
            srt = np.argsort(seg, kind="stable")
            counts = np.bincount(seg, minlength=ncomp)
            starts = np.concatenate([[0], np.cumsum(counts)[:-1]])
            pos = np.empty(b - a, dtype=np.int64)
            pos[srt] = np.arange(b - a) - np.repeat(starts, counts)
            local[a:b] = pos
            sizes[d] = counts
        mats = {1: {}, 2: {}}
        for i in (1, 2):
            for d in self.degrees():
                if d + i > self.hi:
                    continue
                r, c = self.sq(i, d).nonzero()
                gc = c + offs[d - self.lo]
                gr = r + offs[d + i - self.lo]
                comp = lab[gc]
                srt = np.argsort(comp, kind="stable")
                bounds = np.searchsorted(comp[srt], np.arange(ncomp + 1))
                for k in range(ncomp):
                    sel = srt[bounds[k] : bounds[k + 1]]
                    mats[i][(k, d)] = GF2Matrix.from_coo(
                        int(sizes[d + i][k]), int(sizes[d][k]), local[gr[sel]], local[gc[sel]]
                    )
        out = []
        for k in range(ncomp):
            dims = {d: int(sizes[d][k]) for d in self.degrees()}
            sq1 = {d: mats[1][(k, d)] for d in range(self.lo, self.hi)}
            sq2 = {d: mats[2][(k, d)] for d in range(self.lo, self.hi - 1)}
            out.append(A1Module.build(self.lo, self.hi, dims, sq1, sq2, self.reliable_hi, self.finite))
        self._cache["components"] = out
        return out

    def suspend(self, k: int) -> "A1Module":
        return suspend(self, k)

    def __repr__(self) -> str:
        kind = "finite" if self.finite else f"reliable<= {self.reliable_hi}"
        return f"A1Module(window=[{self.lo}, {self.hi}], {kind}, total_dim={self.total_dim})"

    # interchange ------------------------------------------------------------

    def to_json(self) -> dict:
        """JSON-ready dict; matrix rows are little-endian bit strings in hex."""

        def enc(m: GF2Matrix) -> list[str]:
            dense = m.to_dense()
            return [np.packbits(row, bitorder="little").tobytes().hex() for row in dense]

        return {
            "format": "a1kit-module",
            "version": 1,
            "window": [self.lo, self.hi],
            "reliable_hi": None if self.finite else self.reliable_hi,
            "finite": self.finite,
            "dims": {str(d): n for d, n in zip(self.degrees(), self.dims)},
            "sq1": {str(d): enc(self.sq(1, d)) for d in range(self.lo, self.hi)},
            "sq2": {str(d): enc(self.sq(2, d)) for d in range(self.lo, self.hi - 1)},
        }

    @classmethod
    def from_json(cls, obj: dict | str) -> "A1Module":
        if isinstance(obj, str):
            obj = json.loads(obj)
        if obj.get("format") != "a1kit-module":
            raise ValueError("not an a1kit module document")
        lo, hi = obj["window"]
        dims = {int(k): int(v) for k, v in obj["dims"].items()}

        def dec(rows: list[str], n_rows: int, n_cols: int) -> GF2Matrix:
            if len(rows) != n_rows:
                raise ValueError("row count does not match dims")
            out = np.zeros((n_rows, n_cols), dtype=np.uint8)
            for i, h in enumerate(rows):
                bits = np.unpackbits(np.frombuffer(bytes.fromhex(h), dtype=np.uint8), bitorder="little")
                if bits[n_cols:].any():
                    raise ValueError("bits set past the last column")
                out[i] = bits[:n_cols]
            return GF2Matrix.from_dense(out)

        sq1 = {int(k): dec(v, dims.get(int(k) + 1, 0), dims.get(int(k), 0)) for k, v in obj["sq1"].items()}
        sq2 = {int(k): dec(v, dims.get(int(k) + 2, 0), dims.get(int(k), 0)) for k, v in obj["sq2"].items()}
        rel = obj.get("reliable_hi")
        mod = cls.build(lo, hi, dims, sq1, sq2, hi if rel is None else rel, bool(obj.get("finite", False)))
        mod.check_relations()
        return mod


@dataclass(frozen=True)
class A1ModuleMap:
    """Degree-``shift`` A(1)-linear map; ``mats[d]`` sends source_d to target_{d+shift}."""

    source: A1Module
    target: A1Module
    shift: int
    mats: dict

    def at(self, d: int) -> GF2Matrix:
        m = self.mats.get(d)
        if m is None:
            return GF2Matrix(self.target.dim(d + self.shift), self.source.dim(d))
        return m

    def check(self, hi: int | None = None) -> None:
        top = min(self.source.hi, self.target.hi - self.shift) if hi is None else hi
        for d in range(self.source.lo, top + 1):
            for i in (1, 2):
                if d + i > top:
                    continue
                left = self.at(d + i) @ self.source.sq(i, d)
                right = self.target.sq(i, d + self.shift) @ self.at(d)
                if left != right:
                    raise ModuleRelationError(f"map does not commute with Sq{i} in degree {d}")


# constructors ---------------------------------------------------------------


def suspend(m: A1Module, k: int) -> A1Module:
    if k == 0:
        return m
    rel = m.reliable_hi + k if not m.finite else INF
    return A1Module(m.lo + k, m.hi + k, m.dims, m.sq1, m.sq2, rel, m.finite, m.labels)


def _common_top(mods: Sequence[A1Module]) -> tuple[int, float, bool]:
    open_ = [m for m in mods if not m.finite]
    if not open_:
        return max(m.hi for m in mods), INF, True
    hi = min(m.hi for m in open_)
    rel = min(m.reliable_hi for m in open_)
    return hi, min(rel, hi), False


def direct_sum(a: A1Module, b: A1Module) -> A1Module:
    """Block-diagonal sum; the window is the common known range."""
    mods = [m for m in (a, b) if m.total_dim or not m.finite]
    if len(mods) == 1:
        return mods[0]
    if not mods:
        return A1Module.zero()
    hi, rel, finite = _common_top(mods)
    lo = min(m.lo for m in mods)
    if hi < lo:
        raise WindowError("direct sum: windows do not overlap")
    dims = {d: a.dim(d) + b.dim(d) for d in range(lo, hi + 1)}
    sq1 = {d: gf2.block_diag([a.sq(1, d), b.sq(1, d)]) for d in range(lo, hi)}
    sq2 = {d: gf2.block_diag([a.sq(2, d), b.sq(2, d)]) for d in range(lo, hi - 1)}
    labels = None
    if a.labels is not None and b.labels is not None:
        def lab(m, d):
            return tuple(m.label(d, i) for i in range(m.dim(d)))
        labels = tuple(lab(a, d) + lab(b, d) for d in range(lo, hi + 1))
    return A1Module.build(lo, hi, dims, sq1, sq2, rel, finite, labels)


def direct_sum_all(mods: Sequence[A1Module]) -> A1Module:
    out = A1Module.zero()
    for m in mods:
        out = direct_sum(out, m)
    return out


def _kron_coords(a: GF2Matrix, b: GF2Matrix):
    ra, ca = a.nonzero()
    rb, cb = b.nonzero()
    if ra.size == 0 or rb.size == 0:
        return np.zeros(0, np.int64), np.zeros(0, np.int64)
    r = (ra[:, None] * b.rows + rb[None, :]).ravel()
    c = (ca[:, None] * b.cols + cb[None, :]).ravel()
    return r, c


def tensor(a: A1Module, b: A1Module) -> A1Module:
    """Tensor product over F with the Cartan-formula action."""
    if a.total_dim == 0 and a.finite or b.total_dim == 0 and b.finite:
        return A1Module.zero()
    lo = a.lo + b.lo
    tops = []
    rels = []
    if not a.finite:
        tops.append(a.hi + b.lo)
        rels.append(a.reliable_hi + b.lo)
    if not b.finite:
        tops.append(b.hi + a.lo)
        rels.append(b.reliable_hi + a.lo)
    finite = not tops
    hi = a.hi + b.hi if finite else min(tops)
    rel = INF if finite else min(min(rels), hi)
    if hi < lo - 1:
        raise WindowError("tensor: empty window")

    # blocks[d] = list of (p, offset, dim_a_p, dim_b_q)
    blocks: dict[int, dict[int, tuple[int, int, int]]] = {}
    dims: dict[int, int] = {}
    for d in range(lo, hi + 1):
        off = 0
        entry = {}
        for p in range(a.lo, d - b.lo + 1):
            if p > a.hi and a.finite:
                break
            q = d - p
            na, nb = a.dim(p), b.dim(q)
            if na and nb:
                entry[p] = (off, na, nb)
                off += na * nb
        blocks[d] = entry
        dims[d] = off

    def action(i: int, d: int) -> GF2Matrix:
        rs, cs = [], []
        tgt = blocks[d + i]
        for p, (off, na, nb) in blocks[d].items():
            q = d - p
            # terms Sq^j x (x) Sq^{i-j} y
            for j in range(i + 1):
                if (p + j) not in tgt:
                    continue
                toff, tna, tnb = tgt[p + j]
                ma = a.sq(j, p) if j else GF2Matrix.identity(na)
                mb = b.sq(i - j, q) if i - j else GF2Matrix.identity(nb)
                r, c = _kron_coords(ma, mb)
                rs.append(r + toff)
                cs.append(c + off)
        if not rs:
            return GF2Matrix(dims[d + i], dims[d])
        return GF2Matrix.from_coo(dims[d + i], dims[d], np.concatenate(rs), np.concatenate(cs))

    sq1 = {d: action(1, d) for d in range(lo, hi)}
    sq2 = {d: action(2, d) for d in range(lo, hi - 1)}
    return A1Module.build(lo, hi, dims, sq1, sq2, rel, finite).trim()


def tensor_power(m: A1Module, n: int) -> A1Module:
    out = m
    for _ in range(n - 1):
        out = tensor(out, m)
    return out


def free_module(gen_degrees: Sequence[int], hi: int | None = None) -> A1Module:
    """Free module on generators in the given degrees (sorted order kept)."""
    a1 = build_a1()
    gens = list(gen_degrees)
    if not gens:
        return A1Module.zero()
    lo = min(gens)
    top = max(gens) + 6
    finite = hi is None or hi >= top
    hi = top if hi is None else hi
    basis: dict[int, list[tuple[int, int]]] = {d: [] for d in range(lo, hi + 1)}
    for j, g in enumerate(gens):
        for w in range(a1.dim):
            d = g + a1.degrees[w]
            if lo <= d <= hi:
                basis[d].append((j, w))
    pos = {d: {bw: k for k, bw in enumerate(v)} for d, v in basis.items()}

    def action(i: int, d: int) -> GF2Matrix:
        gi = a1.index((i,))
        rs, cs = [], []
        for c, (j, w) in enumerate(basis[d]):
            p = a1.table[gi][w]
            if p >= 0 and d + i <= hi:
                rs.append(pos[d + i][(j, p)])
                cs.append(c)
        return GF2Matrix.from_coo(len(basis.get(d + i, [])), len(basis[d]), rs, cs)

    sq1 = {d: action(1, d) for d in range(lo, hi)}
    sq2 = {d: action(2, d) for d in range(lo, hi - 1)}
    mod = A1Module.build(lo, hi, {d: len(v) for d, v in basis.items()}, sq1, sq2, hi, finite)
    object.__setattr__(mod, "_cache", {"free_basis": basis})
    return mod


# annihilators and Margolis homology -----------------------------------------


def ann_sq1(m: A1Module) -> dict[int, Subspace]:
    """Kernel of Sq1 degree by degree (degrees whose Sq1 target is known)."""
    top = m.hi if m.finite else m.hi - 1
    return {d: gf2.kernel(m.sq(1, d)) for d in range(m.lo, top + 1)}


@dataclass(frozen=True)
class MargolisHomology:
    op: str
    dims: dict
    reliable: tuple

    def reliable_dims(self) -> dict[int, int]:
        lo, hi = self.reliable
        return {d: n for d, n in self.dims.items() if lo <= d <= hi}

    def nonzero(self) -> dict[int, int]:
        return {d: n for d, n in self.reliable_dims().items() if n}

    def vanishes(self) -> bool:
        return not self.nonzero()


def margolis_operator(m: A1Module, q: str, d: int) -> GF2Matrix:
    if q == "Q0":
        return m.sq(1, d)
    if q == "Q1":
        return m.q1(d)
    raise ValueError(f"unknown Margolis operator {q!r}")


MARGOLIS_DEGREE = {"Q0": 1, "Q1": 3}


def margolis(m: A1Module, q: str) -> MargolisHomology:
    k = MARGOLIS_DEGREE[q]
    top = m.hi if m.finite else m.hi - k
    ranks = {}
    for d in range(m.lo - k, top + 1):
        if m.dim(d) and m.dim(d + k):
            op = margolis_operator(m, q, d)
            ranks[d] = gf2.rank(op)
            if d + 2 * k <= m.hi or m.finite:
                if not (margolis_operator(m, q, d + k) @ op).is_zero():
                    raise ModuleRelationError(f"{q} does not square to zero in degree {d}")
        else:
            ranks[d] = 0
    dims = {d: m.dim(d) - ranks[d] - ranks.get(d - k, 0) for d in range(m.lo, top + 1)}
    rel_top = top if m.finite else int(min(m.reliable_hi - k, top))
    return MargolisHomology(q, dims, (m.lo, rel_top))


# generators, covers, syzygies -------------------------------------------------


def decomposables(m: A1Module, d: int) -> Subspace:
    """A(1)^+ M in degree d, i.e. Sq1 M_{d-1} + Sq2 M_{d-2}."""
    rows = gf2.vstack([m.sq(1, d - 1).T, m.sq(2, d - 2).T], m.dim(d))
    return Subspace.span(rows)


def min_generators(m: A1Module) -> list[tuple[int, np.ndarray]]:
    """Representatives of a basis of M / A(1)^+ M, lowest degree first."""
    out = []
    for d in m.degrees():
        if m.dim(d) == 0:
            continue
        for v in gf2.quotient_basis(decomposables(m, d)):
            out.append((d, v))
    return out


def _cover_columns(m: A1Module, gens: list[tuple[int, np.ndarray]], d: int, basis) -> GF2Matrix:
    """Matrix of the cover F_d -> M_d in the free-module basis of degree d."""
    a1 = build_a1()
    by_gen: dict[int, list[int]] = {}
    for c, (j, w) in enumerate(basis):
        by_gen.setdefault(j, []).append(c)
    cols = np.zeros((m.dim(d), len(basis)), dtype=np.uint8)
    # group generators by degree to share word applications
    by_deg: dict[int, list[int]] = {}
    for j, (g, _) in enumerate(gens):
        if g <= d:
            by_deg.setdefault(g, []).append(j)
    for g, js in by_deg.items():
        vecs = GF2Matrix.from_dense(np.array([gens[j][1] for j in js], dtype=np.uint8)).T
        for w in a1.in_degree(d - g):
            img = m.apply_word(a1.words[w], g, vecs).to_dense()
            for col_j, j in enumerate(js):
                c = basis.index((j, w))
                cols[:, c] = img[:, col_j]
    return GF2Matrix.from_dense(cols)


def projective_cover(m: A1Module) -> tuple[A1Module, A1ModuleMap]:
    """Minimal free module F with its surjection onto M (on M's window)."""
    if m.finite:
        m = m.extend(m.hi + 6)
    gens = min_generators(m)
    free = free_module([g for g, _ in gens], hi=m.hi)
    if free.total_dim == 0:
        free = A1Module.build(m.lo, m.hi, {}, {}, {}, m.hi, m.finite)
    basis = free._cache.get("free_basis", {})
    mats = {d: _cover_columns(m, gens, d, basis.get(d, [])) for d in m.degrees()}
    free = free.extend_below(m.lo) if free.lo > m.lo else free
    return free, A1ModuleMap(free, m, 0, mats)


def _submodule(m: A1Module, subs: dict[int, Subspace], rel, finite) -> A1Module:
    """Module structure on invariant subspaces ``subs[d]`` in RREF bases."""
    dims = {d: subs[d].dim for d in subs}
    maps: dict[int, dict[int, GF2Matrix]] = {1: {}, 2: {}}
    for i in (1, 2):
        for d in subs:
            if d + i not in subs:
                continue
            src, dst = subs[d], subs[d + i]
            if src.dim == 0 or dst.dim == 0:
                continue
            images = src.basis @ m.sq(i, d).T
            reduced, inside = dst.reduce(images)
            if not inside.all():
                raise InternalError(f"subspace not Sq{i}-invariant in degree {d}")
            maps[i][d] = images.take_cols(dst.pivots).T
    lo, hi = min(subs), max(subs)
    return A1Module.build(lo, hi, dims, maps[1], maps[2], rel, finite)


def _quotient(m: A1Module, subs: dict[int, Subspace]) -> A1Module:
    """M / N for an A(1)-submodule N given by RREF subspaces per degree."""
    comp = {d: (subs[d].complement_indices() if d in subs else np.arange(m.dim(d))) for d in m.degrees()}
    maps: dict[int, dict[int, GF2Matrix]] = {1: {}, 2: {}}
    for i in (1, 2):
        for d in m.degrees():
            if d + i > m.hi:
                continue
            src, dst = comp[d], comp[d + i]
            if len(src) == 0 or len(dst) == 0:
                continue
            rows = m.sq(i, d).take_cols(src).T
            if d + i in subs:
                rows, _ = subs[d + i].reduce(rows)
            maps[i][d] = rows.take_cols(dst).T
    labels = None
    if m.labels is not None:
        labels = tuple(tuple(m.label(d, int(i)) for i in comp[d]) for d in m.degrees())
    return A1Module.build(m.lo, m.hi, {d: len(v) for d, v in comp.items()}, maps[1], maps[2], m.reliable_hi, m.finite, labels)


def syzygy(m: A1Module) -> A1Module:
    """Kernel of the minimal free cover.

    The result is reliable wherever ``m`` is: generators, the cover and its
    kernel in degree d only involve ``m`` in degrees at most d.
    """
    free, cover = projective_cover(m)
    mm = m.extend(m.hi + 6) if m.finite else m
    subs = {d: gf2.kernel(cover.at(d)) for d in mm.degrees()}
    if all(s.dim == 0 for s in subs.values()):
        return A1Module.zero() if m.finite else A1Module.build(m.lo, m.hi, {}, {}, {}, m.reliable_hi, False)
    free = free.extend_below(mm.lo)
    omega = _submodule(free, subs, mm.reliable_hi, m.finite)
    return omega.trim()


def syzygy_n(m: A1Module, n: int) -> A1Module:
    for _ in range(n):
        m = syzygy(m)
    return m


# free summands ------------------------------------------------------------------


@dataclass(frozen=True)
class FreeSplitting:
    free_part_dims: dict
    residual: A1Module

    @property
    def free_rank(self) -> int:
        return sum(self.free_part_dims.values())


def free_submodule(m: A1Module) -> tuple[dict[int, int], dict[int, Subspace]]:
    """A maximal free submodule, as generator counts and RREF subspaces.

    In each degree g, vectors whose images under the top class Sq2Sq1Sq2Sq1
    form a basis of that image generate free summands; free modules are
    injective over A(1), so the submodule they span is a direct summand.
    """
    a1 = build_a1()
    top = m.hi - 6
    counts: dict[int, int] = {}
    picks: dict[int, GF2Matrix] = {}
    for g in range(m.lo, top + 1):
        if m.dim(g) == 0 or m.dim(g + 6) == 0:
            continue
        theta = m.op(TOP, g)
        _, pivots = gf2.rref(theta)
        if len(pivots):
            counts[g] = len(pivots)
            picks[g] = GF2Matrix.from_coo(m.dim(g), len(pivots), pivots, np.arange(len(pivots)))
    subs: dict[int, Subspace] = {}
    for d in m.degrees():
        rows = []
        expected = 0
        for g, vecs in picks.items():
            if 0 <= d - g <= 6:
                for w in a1.in_degree(d - g):
                    rows.append(m.apply_word(a1.words[w], g, vecs).T)
                    expected += vecs.cols
        if rows:
            sub = Subspace.span(gf2.vstack(rows, m.dim(d)))
            if sub.dim != expected:
                raise InternalError(f"free submodule is not free in degree {d}")
            subs[d] = sub
    return counts, subs


def split_free(m: A1Module) -> FreeSplitting:
    """Split off a maximal free summand; the residual is M/F.

    Free summands generated within 6 of the window top cannot be seen, so
    the residual's reliable range drops by 6 unless the module is finite.
    """
    mm = m.extend(m.hi + 6) if m.finite else m
    counts, subs = free_submodule(mm)
    residual = _quotient(mm, subs) if subs else mm
    if not m.finite:
        rel = min(m.reliable_hi - 6, m.hi)
        if rel < m.lo - 1:
            raise WindowError("window too small to split free summands")
        residual = A1Module(residual.lo, residual.hi, residual.dims, residual.sq1, residual.sq2, rel, False, residual.labels)
    return FreeSplitting(counts, residual.trim())


# homomorphisms and isomorphism ------------------------------------------------------


def hom_space(a: A1Module, b: A1Module, lo: int, hi: int) -> list[dict[int, GF2Matrix]]:
    """Basis of degree-preserving A(1)-maps a -> b on degrees [lo, hi]."""
    degs = list(range(lo, hi + 1))
    offs = {}
    n = 0
    for d in degs:
        offs[d] = n
        n += a.dim(d) * b.dim(d)
    if n == 0:
        return []
    eqs = []
    for d in degs:
        for i in (1, 2):
            if d + i > hi:
                continue
            A = a.sq(i, d).to_dense()
            B = b.sq(i, d).to_dense()
            na_d, nb_d = a.dim(d), b.dim(d)
            na_t, nb_t = a.dim(d + i), b.dim(d + i)
            for r in range(nb_t):
                for c in range(na_d):
                    row = np.zeros(n, dtype=np.uint8)
                    # phi_{d+i}[r, k] A[k, c]
                    for k in range(na_t):
                        if A[k, c]:
                            row[offs[d + i] + r * na_t + k] ^= 1
                    # B[r, k] phi_d[k, c]
                    for k in range(nb_d):
                        if B[r, k]:
                            row[offs[d] + k * na_d + c] ^= 1
                    if row.any():
                        eqs.append(row)
    if eqs:
        sol = gf2.kernel(GF2Matrix.from_dense(np.array(eqs)))
        vecs = sol.vectors()
    else:
        vecs = list(np.eye(n, dtype=np.uint8))
    out = []
    for v in vecs:
        phi = {}
        for d in degs:
            na, nb = a.dim(d), b.dim(d)
            phi[d] = GF2Matrix.from_dense(v[offs[d] : offs[d] + na * nb].reshape(nb, na))
        out.append(phi)
    return out


def find_isomorphism(a: A1Module, b: A1Module, lo: int, hi: int, max_enumerate: int = 16, samples: int = 4096, seed: int = 0):
    """An invertible map in Hom(a, b) on [lo, hi], or None if none was found.

    Exhaustive when the Hom space has dimension <= max_enumerate, so None is
    then a proof of non-isomorphism; above that random combinations are tried.
    Returns (phi, exhaustive).
    """
    degs = range(lo, hi + 1)
    if any(a.dim(d) != b.dim(d) for d in degs):
        return None, True
    basis = hom_space(a, b, lo, hi)
    if not basis:
        return ({d: GF2Matrix(0, 0) for d in degs} if all(a.dim(d) == 0 for d in degs) else None), True

    def invertible(phi):
        return all(gf2.rank(phi[d]) == a.dim(d) for d in degs)

    def combo(bits):
        phi = {}
        for d in degs:
            acc = GF2Matrix(b.dim(d), a.dim(d))
            for k, on in enumerate(bits):
                if on:
                    acc = acc + basis[k][d]
            phi[d] = acc
        return phi

    h = len(basis)
    if h <= max_enumerate:
        for bits in itertools.product((0, 1), repeat=h):
            if any(bits):
                phi = combo(bits)
                if invertible(phi):
                    return phi, True
        return None, True
    rng = np.random.default_rng(seed)
    for _ in range(samples):
        phi = combo(rng.integers(0, 2, h))
        if invertible(phi):
            return phi, False
    return None, False


@dataclass(frozen=True)
class StableVerdict:
    status: str  # "EQUAL", "MARGOLIS-EQUAL" or "NOT-EQUAL"
    window: tuple
    witness: int | None = None
    reason: str = ""

    @property
    def equal(self) -> bool:
        return self.status == "EQUAL"

    def __bool__(self) -> bool:
        return self.status != "NOT-EQUAL"


def stable_equal(a: A1Module, b: A1Module, max_iso_dim: int = 64) -> StableVerdict:
    """Compare two modules up to free summands on their common reliable window."""
    lo = min(a.lo, b.lo)
    rel = min(a.rel_bound(), b.rel_bound())
    if rel == INF:
        rel = max(a.hi, b.hi) + 6
        a, b = a.extend(int(rel)), b.extend(int(rel))
    rel = int(rel)
    failures: list[tuple[int, str]] = []
    for q in ("Q0", "Q1"):
        k = MARGOLIS_DEGREE[q]
        if rel - k < lo:
            raise WindowError("common reliable window too small for Margolis homology")
        ma, mb = margolis(a, q), margolis(b, q)
        for d in range(lo, rel - k + 1):
            if ma.dims.get(d, 0) != mb.dims.get(d, 0):
                failures.append((d, f"{q} homology differs in degree {d}"))
                break
    ra = split_free(a).residual
    rb = split_free(b).residual
    top = int(min(ra.rel_bound(), rb.rel_bound(), rel - 6))
    if top < lo:
        raise WindowError("common reliable window too small to compare residuals")
    for d in range(lo, top + 1):
        if ra.dim(d) != rb.dim(d):
            failures.append((d, f"residual dimensions differ in degree {d}"))
            break
    window = (lo, top)
    if failures:
        d, why = min(failures)
        return StableVerdict("NOT-EQUAL", window, d, why)
    size = sum(ra.dim(d) for d in range(lo, top + 1))
    if size > max_iso_dim:
        return StableVerdict("MARGOLIS-EQUAL", window, None, f"residual dimension {size} exceeds {max_iso_dim}")
    ta = ra.extend_below(lo).truncate(top) if ra.lo > lo else ra.truncate(top)
    tb = rb.extend_below(lo).truncate(top) if rb.lo > lo else rb.truncate(top)
    phi, exhaustive = find_isomorphism(ta, tb, lo, top)
    if phi is not None:
        return StableVerdict("EQUAL", window, None, "isomorphic residuals")
    if exhaustive:
        return StableVerdict("NOT-EQUAL", window, lo, "residuals are not isomorphic")
    return StableVerdict("MARGOLIS-EQUAL", window, None, "isomorphism search inconclusive")
