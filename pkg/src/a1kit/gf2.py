"""Exact linear algebra over the two-element field with bit-packed rows.

Matrices act on column vectors: a map ``V -> W`` is stored as a
``dim W x dim V`` matrix.  Subspaces are stored by a basis in reduced row
echelon form, which is the canonical form used for every equality test.
"""

from __future__ import annotations

import sys
from typing import Iterable, Sequence

import numpy as np

from . import _kernels

if sys.byteorder != "little":  # pragma: no cover
    raise ImportError("a1kit.gf2 assumes a little-endian platform")


class ShapeError(ValueError):
    """Incompatible matrix or vector shapes."""


def _nwords(cols: int) -> int:
    return (cols + 63) >> 6


def _pack(bits: np.ndarray) -> np.ndarray:
    rows, cols = bits.shape
    nw = _nwords(cols)
    packed = np.packbits(bits.astype(np.uint8, copy=False), axis=1, bitorder="little")
    out = np.zeros((rows, nw * 8), dtype=np.uint8)
    out[:, : packed.shape[1]] = packed
    return out.view(np.uint64)


def _as_bits(v) -> np.ndarray:
    return (np.asarray(v, dtype=np.int64) & 1).astype(np.uint8)


class GF2Matrix:
    """Dense matrix over GF(2), one row per run of 64-bit words.

    Instances are treated as immutable; every operation returns a new matrix.
    """

    __slots__ = ("rows", "cols", "data")

    def __init__(self, rows: int, cols: int, data: np.ndarray | None = None):
        if rows < 0 or cols < 0:
            raise ShapeError(f"negative shape ({rows}, {cols})")
        self.rows = rows
        self.cols = cols
        if data is None:
            data = np.zeros((rows, _nwords(cols)), dtype=np.uint64)
        elif data.shape != (rows, _nwords(cols)) or data.dtype != np.uint64:
            raise ShapeError(f"storage {data.shape} {data.dtype} does not fit ({rows}, {cols})")
        self.data = data

    # construction -------------------------------------------------------

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "GF2Matrix":
        return cls(rows, cols)

    @classmethod
    def identity(cls, n: int) -> "GF2Matrix":
        idx = np.arange(n)
        return cls.from_coo(n, n, idx, idx)

    @classmethod
    def from_dense(cls, a) -> "GF2Matrix":
        bits = _as_bits(a)
        if bits.ndim != 2:
            raise ShapeError("from_dense expects a 2-d array")
        return cls(bits.shape[0], bits.shape[1], _pack(bits))

    @classmethod
    def from_coo(cls, rows: int, cols: int, r, c) -> "GF2Matrix":
        """Build from coordinate lists; repeated entries add up mod 2."""
        r = np.asarray(r, dtype=np.int64).ravel()
        c = np.asarray(c, dtype=np.int64).ravel()
        if r.size and (r.min() < 0 or r.max() >= rows or c.min() < 0 or c.max() >= cols):
            raise ShapeError("coordinate out of range")
        m = cls(rows, cols)
        if r.size:
            words = m.data
            bit = np.left_shift(np.uint64(1), (c & 63).astype(np.uint64))
            np.bitwise_xor.at(words, (r, c >> 6), bit)
        return m

    @classmethod
    def from_rows(cls, vectors: Sequence, cols: int) -> "GF2Matrix":
        if len(vectors) == 0:
            return cls(0, cols)
        bits = np.vstack([_as_bits(v).reshape(1, -1) for v in vectors])
        if bits.shape[1] != cols:
            raise ShapeError(f"vectors of length {bits.shape[1]}, expected {cols}")
        return cls.from_dense(bits)

    # views --------------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def to_dense(self) -> np.ndarray:
        if self.rows == 0 or self.cols == 0:
            return np.zeros((self.rows, self.cols), dtype=np.uint8)
        bits = np.unpackbits(self.data.view(np.uint8), axis=1, bitorder="little")
        return bits[:, : self.cols].copy()

    def nonzero(self) -> tuple[np.ndarray, np.ndarray]:
        r, w = np.nonzero(self.data)
        if r.size == 0:
            return r, w
        words = self.data[r, w]
        bits = np.unpackbits(words.view(np.uint8).reshape(-1, 8), axis=1, bitorder="little")
        rr, bb = np.nonzero(bits)
        return r[rr], (w[rr] << 6) + bb

    def __getitem__(self, key) -> int:
        i, j = key
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(key)
        return int((int(self.data[i, j >> 6]) >> (j & 63)) & 1)

    def row(self, i: int) -> np.ndarray:
        return self.take_rows([i]).to_dense()[0]

    def take_rows(self, idx) -> "GF2Matrix":
        idx = np.asarray(idx, dtype=np.int64)
        return GF2Matrix(len(idx), self.cols, self.data[idx].copy())

    def take_cols(self, idx) -> "GF2Matrix":
        idx = np.asarray(idx, dtype=np.int64)
        if self.rows == 0:
            return GF2Matrix(0, len(idx))
        return GF2Matrix.from_dense(self.to_dense()[:, idx])

    @property
    def T(self) -> "GF2Matrix":
        if self.rows == 0 or self.cols == 0:
            return GF2Matrix(self.cols, self.rows)
        r, c = self.nonzero()
        if r.size * 8 < self.rows * self.cols // 8:
            return GF2Matrix.from_coo(self.cols, self.rows, c, r)
        return GF2Matrix.from_dense(self.to_dense().T)

    def is_zero(self) -> bool:
        return not self.data.any()

    def nnz(self) -> int:
        return int(np.unpackbits(self.data.view(np.uint8)).sum()) if self.data.size else 0

    # arithmetic ---------------------------------------------------------

    def __add__(self, other: "GF2Matrix") -> "GF2Matrix":
        if self.shape != other.shape:
            raise ShapeError(f"cannot add {self.shape} and {other.shape}")
        return GF2Matrix(self.rows, self.cols, self.data ^ other.data)

    __sub__ = __add__

    def __matmul__(self, other: "GF2Matrix") -> "GF2Matrix":
        if not isinstance(other, GF2Matrix):
            return NotImplemented
        return matmul(self, other)

    def apply(self, v) -> np.ndarray:
        """Image of a column vector given as a 0/1 array."""
        v = _as_bits(v)
        if v.shape != (self.cols,):
            raise ShapeError(f"vector of length {v.shape} for matrix {self.shape}")
        col = GF2Matrix.from_dense(v.reshape(1, -1)).T
        return (self @ col).to_dense()[:, 0]

    def __eq__(self, other) -> bool:
        if not isinstance(other, GF2Matrix):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self.data, other.data))

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        if self.rows * self.cols <= 64:
            body = "; ".join("".join(map(str, r)) for r in self.to_dense())
            return f"GF2Matrix({self.rows}x{self.cols}: {body})"
        return f"GF2Matrix({self.rows}x{self.cols})"

    def rank(self) -> int:
        return rank(self)


def matmul(a: GF2Matrix, b: GF2Matrix) -> GF2Matrix:
    """Product over GF(2).

    The only multiplication routine in the package; cost is proportional to
    the number of set bits of ``a`` times the row width of ``b``.
    """
    if a.cols != b.rows:
        raise ShapeError(f"cannot multiply {a.shape} by {b.shape}")
    out = GF2Matrix(a.rows, b.cols)
    if a.rows and b.cols and a.cols:
        _kernels.matmul(a.data, b.data, out.data)
    return out


def vstack(mats: Iterable[GF2Matrix], cols: int | None = None) -> GF2Matrix:
    mats = list(mats)
    if cols is None:
        if not mats:
            raise ShapeError("vstack of nothing needs an explicit column count")
        cols = mats[0].cols
    for m in mats:
        if m.cols != cols:
            raise ShapeError(f"vstack: {m.cols} columns, expected {cols}")
    if not mats:
        return GF2Matrix(0, cols)
    data = np.vstack([m.data for m in mats]) if mats else None
    return GF2Matrix(sum(m.rows for m in mats), cols, data)


def hstack(mats: Sequence[GF2Matrix]) -> GF2Matrix:
    rows = {m.rows for m in mats}
    if len(rows) != 1:
        raise ShapeError("hstack: row counts differ")
    return GF2Matrix.from_dense(np.hstack([m.to_dense() for m in mats]))


def block_diag(mats: Sequence[GF2Matrix]) -> GF2Matrix:
    rows = sum(m.rows for m in mats)
    cols = sum(m.cols for m in mats)
    rs, cs = [], []
    r0 = c0 = 0
    for m in mats:
        r, c = m.nonzero()
        rs.append(r + r0)
        cs.append(c + c0)
        r0 += m.rows
        c0 += m.cols
    if not mats:
        return GF2Matrix(0, 0)
    return GF2Matrix.from_coo(rows, cols, np.concatenate(rs), np.concatenate(cs))


# echelon forms ---------------------------------------------------------


def _echelon(m: GF2Matrix, full: bool) -> tuple[GF2Matrix, np.ndarray]:
    data = m.data.copy()
    if m.rows == 0 or m.cols == 0:
        return GF2Matrix(0, m.cols), np.zeros(0, dtype=np.int64)
    pivots = _kernels.echelon_inplace(data, m.cols, full)
    r = len(pivots)
    return GF2Matrix(r, m.cols, data[:r].copy()), pivots.copy()


def rank(m: GF2Matrix) -> int:
    if m.rows == 0 or m.cols == 0:
        return 0
    # fewer rows means fewer pivot scans
    if m.rows > 4 * m.cols:
        m = m.T
    data = m.data.copy()
    return len(_kernels.echelon_inplace(data, m.cols, False))


def rref(m: GF2Matrix) -> tuple[GF2Matrix, np.ndarray]:
    """Reduced row echelon form with zero rows dropped, and its pivots."""
    return _echelon(m, True)


class Subspace:
    """A subspace of ``F^ambient_dim`` held by its RREF basis."""

    __slots__ = ("ambient_dim", "basis", "pivots")

    def __init__(self, ambient_dim: int, basis: GF2Matrix, pivots: np.ndarray):
        self.ambient_dim = ambient_dim
        self.basis = basis
        self.pivots = pivots

    @classmethod
    def span(cls, rows: GF2Matrix) -> "Subspace":
        basis, pivots = rref(rows)
        return cls(rows.cols, basis, pivots)

    @classmethod
    def zero(cls, n: int) -> "Subspace":
        return cls(n, GF2Matrix(0, n), np.zeros(0, dtype=np.int64))

    @classmethod
    def full(cls, n: int) -> "Subspace":
        return cls(n, GF2Matrix.identity(n), np.arange(n, dtype=np.int64))

    @property
    def dim(self) -> int:
        return self.basis.rows

    def vectors(self) -> list[np.ndarray]:
        return list(self.basis.to_dense())

    def reduce(self, rows: GF2Matrix) -> tuple[GF2Matrix, np.ndarray]:
        """Remainders of ``rows`` modulo the subspace and a membership mask."""
        if rows.cols != self.ambient_dim:
            raise ShapeError(f"vectors of length {rows.cols} in ambient {self.ambient_dim}")
        data = rows.data.copy()
        if rows.rows == 0:
            return GF2Matrix(0, rows.cols), np.zeros(0, dtype=bool)
        inside = _kernels.reduce_rows(data, self.basis.data, self.pivots)
        return GF2Matrix(rows.rows, rows.cols, data), inside

    def contains_rows(self, rows: GF2Matrix) -> np.ndarray:
        return self.reduce(rows)[1]

    def __contains__(self, v) -> bool:
        v = _as_bits(v)
        return bool(self.contains_rows(GF2Matrix.from_dense(v.reshape(1, -1)))[0])

    def contains(self, other: "Subspace") -> bool:
        return bool(self.contains_rows(other.basis).all())

    def coordinates(self, rows: GF2Matrix) -> GF2Matrix:
        """Coordinates (one row per input row) in the RREF basis.

        Raises ValueError if some row is not in the subspace.
        """
        if not self.contains_rows(rows).all():
            raise ValueError("vector not in subspace")
        return rows.take_cols(self.pivots)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return (
            self.ambient_dim == other.ambient_dim
            and np.array_equal(self.pivots, other.pivots)
            and self.basis == other.basis
        )

    __hash__ = None  # type: ignore[assignment]

    def __add__(self, other: "Subspace") -> "Subspace":
        return Subspace.span(vstack([self.basis, other.basis], self.ambient_dim))

    def complement_indices(self) -> np.ndarray:
        mask = np.ones(self.ambient_dim, dtype=bool)
        mask[self.pivots] = False
        return np.nonzero(mask)[0]

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim})"


def row_space(m: GF2Matrix) -> Subspace:
    return Subspace.span(m)


def image(m: GF2Matrix) -> Subspace:
    """Column space of ``m``."""
    return Subspace.span(m.T)


def kernel(m: GF2Matrix) -> Subspace:
    """Null space ``{x : m x = 0}``."""
    n = m.cols
    r, pivots = rref(m)
    mask = np.ones(n, dtype=bool)
    mask[pivots] = False
    free = np.nonzero(mask)[0]
    if free.size == 0:
        return Subspace.zero(n)
    k = np.zeros((free.size, n), dtype=np.uint8)
    k[np.arange(free.size), free] = 1
    if pivots.size:
        k[:, pivots] = r.to_dense()[:, free].T
    return Subspace.span(GF2Matrix.from_dense(k))


def preimage(m: GF2Matrix, v) -> np.ndarray | None:
    """Some ``x`` with ``m x = v``, or None if ``v`` is not in the image."""
    v = _as_bits(v)
    if v.shape != (m.rows,):
        raise ShapeError(f"right-hand side of length {v.shape}, matrix {m.shape}")
    aug = np.hstack([m.to_dense(), v.reshape(-1, 1)]) if m.rows else np.zeros((0, m.cols + 1), np.uint8)
    r, pivots = rref(GF2Matrix.from_dense(aug))
    if pivots.size and pivots[-1] == m.cols:
        return None
    x = np.zeros(m.cols, dtype=np.uint8)
    if pivots.size:
        x[pivots] = r.to_dense()[:, m.cols]
    return x


def quotient_basis(sub: Subspace) -> list[np.ndarray]:
    """Unit vectors on the non-pivot columns: representatives of ambient/sub."""
    out = []
    for j in sub.complement_indices():
        e = np.zeros(sub.ambient_dim, dtype=np.uint8)
        e[j] = 1
        out.append(e)
    return out


def echelon(rows: GF2Matrix) -> GF2Matrix:
    return rref(rows)[0]
