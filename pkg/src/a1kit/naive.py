"""Slow reference linear algebra on plain 0/1 ``uint8`` arrays.

Nothing here is bit-packed or compiled.  It exists to cross-check the fast
kernel and to regenerate golden files from an independent code path.
"""

import numpy as np


def _bits(a):
    return (np.asarray(a, dtype=np.int64) & 1).astype(np.uint8)


def rref(a):
    """Reduced row echelon form (zero rows dropped) and pivot columns."""
    m = _bits(a).copy()
    if m.ndim != 2:
        raise ValueError("expected a matrix")
    rows, cols = m.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        hits = np.nonzero(m[r:, c])[0]
        if hits.size == 0:
            continue
        p = r + hits[0]
        if p != r:
            m[[r, p]] = m[[p, r]]
        mask = m[:, c].astype(bool)
        mask[r] = False
        m[mask] ^= m[r]
        pivots.append(c)
        r += 1
    return m[:r], pivots


def rank(a):
    return len(rref(a)[1])


def matmul(a, b):
    return (_bits(a).astype(np.int64) @ _bits(b).astype(np.int64) % 2).astype(np.uint8)


def kernel(a):
    a = _bits(a)
    cols = a.shape[1]
    r, pivots = rref(a)
    free = [j for j in range(cols) if j not in pivots]
    basis = []
    for f in free:
        x = np.zeros(cols, dtype=np.uint8)
        x[f] = 1
        for i, p in enumerate(pivots):
            x[p] = r[i, f]
        basis.append(x)
    if not basis:
        return np.zeros((0, cols), dtype=np.uint8)
    return rref(np.array(basis))[0]


def solve(a, v):
    a = _bits(a)
    v = _bits(v)
    aug = np.hstack([a, v.reshape(-1, 1)])
    r, pivots = rref(aug)
    if pivots and pivots[-1] == a.shape[1]:
        return None
    x = np.zeros(a.shape[1], dtype=np.uint8)
    for i, p in enumerate(pivots):
        x[p] = r[i, -1]
    return x
