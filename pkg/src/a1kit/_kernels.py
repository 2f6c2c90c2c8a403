"""Numba inner loops for bit-packed GF(2) matrices.

Rows are stored as little-endian uint64 words: column ``j`` is bit ``j % 64``
of word ``j // 64``.  Padding bits past the last column are always zero.
"""

import numpy as np
from numba import njit

_ONE = np.uint64(1)


@njit(cache=True, nogil=True)
def _ctz(x):
    n = 0
    if (x & np.uint64(0xFFFFFFFF)) == 0:
        n += 32
        x >>= np.uint64(32)
    if (x & np.uint64(0xFFFF)) == 0:
        n += 16
        x >>= np.uint64(16)
    if (x & np.uint64(0xFF)) == 0:
        n += 8
        x >>= np.uint64(8)
    if (x & np.uint64(0xF)) == 0:
        n += 4
        x >>= np.uint64(4)
    if (x & np.uint64(0x3)) == 0:
        n += 2
        x >>= np.uint64(2)
    if (x & _ONE) == 0:
        n += 1
    return n


@njit(cache=True, nogil=True)
def echelon_inplace(a, ncols, full):
    """Row-reduce ``a`` in place; returns the pivot columns.

    With ``full`` the result is the reduced row echelon form, otherwise only
    rows below each pivot are cleared (enough for rank).
    """
    rows, nw = a.shape
    npiv = min(rows, ncols)
    pivots = np.empty(npiv, np.int64)
    r = 0
    for c in range(ncols):
        if r == rows:
            break
        w = c >> 6
        b = _ONE << np.uint64(c & 63)
        p = -1
        for i in range(r, rows):
            if a[i, w] & b:
                p = i
                break
        if p < 0:
            continue
        if p != r:
            for k in range(w, nw):
                t = a[p, k]
                a[p, k] = a[r, k]
                a[r, k] = t
        start = 0 if full else r + 1
        for i in range(start, rows):
            if i != r and (a[i, w] & b):
                for k in range(w, nw):
                    a[i, k] ^= a[r, k]
        pivots[r] = c
        r += 1
    return pivots[:r]


@njit(cache=True, nogil=True)
def matmul(a, b, out):
    """``out = a @ b`` over GF(2); ``out`` must be zeroed by the caller."""
    m, wa = a.shape
    wb = b.shape[1]
    for i in range(m):
        for w in range(wa):
            x = a[i, w]
            while x:
                low = x & (~x + _ONE)
                k = (w << 6) + _ctz(low)
                for j in range(wb):
                    out[i, j] ^= b[k, j]
                x ^= low


@njit(cache=True, nogil=True)
def reduce_rows(rows, basis, pivots):
    """Reduce each row of ``rows`` modulo an RREF ``basis`` in place.

    Returns a boolean array: True where the row reduced to zero.
    """
    m, nw = rows.shape
    inside = np.empty(m, np.bool_)
    for i in range(m):
        for j in range(pivots.shape[0]):
            c = pivots[j]
            w = c >> 6
            if rows[i, w] & (_ONE << np.uint64(c & 63)):
                for k in range(nw):
                    rows[i, k] ^= basis[j, k]
        z = True
        for k in range(nw):
            if rows[i, k]:
                z = False
                break
        inside[i] = z
    return inside
