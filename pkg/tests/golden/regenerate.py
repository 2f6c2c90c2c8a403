"""Rebuild the golden JSON files from the slow reference path.

Run from the repository root:  python tests/golden/regenerate.py

Nothing here touches the bit-packed kernel: actions are built from
dictionaries, linear algebra uses ``a1kit.naive``, and A(1) products are
expanded with Adem relations rather than the rewriting system.
"""

import json
from pathlib import Path

import numpy as np

from a1kit import naive, reference
from a1kit.steenrod import adem_product, build_a1

HERE = Path(__file__).parent


def dump(name, obj):
    (HERE / name).write_text(json.dumps(obj, indent=1, sort_keys=True) + "\n")


def a1_products():
    words = build_a1().words
    out = []
    for a in words:
        for b in words:
            out.append({"a": list(a), "b": list(b), "admissible": sorted(list(m) for m in adem_product(a, b))})
    return out


def a1_ann_sq1():
    """Dimension by degree of the kernel of left multiplication by Sq1."""
    words = build_a1().words
    monos = sorted({m for w in words for m in adem_product((1,), w)})
    img = np.array([[1 if m in adem_product((1,), w) else 0 for m in monos] for w in words], dtype=np.uint8)
    degs = [sum(w) for w in words]
    out = {}
    for v in naive.kernel(img.T):
        (deg,) = {degs[i] for i in np.nonzero(v)[0]}
        out[str(deg)] = out.get(str(deg), 0) + 1
    return out


def bv_data(r, N):
    m = reference.NaiveBV(r, N)
    tu = reference.tu_dims(m)
    h = reference.sq2_homology(m)
    theta = []
    for i in range(4):
        word, shift = reference.THETA[i]
        for d in range(1, N + 1):
            if d + shift >= 1 and d + shift + sum(word) <= N:
                theta.append([i, d, reference.theta_image(m, i, d)])
    marg = {q: reference.margolis_dims(m, q, 1, N - 3) for q in ("Q0", "Q1")}
    return {
        "rank": r,
        "max_degree": N,
        "dims": [m.dim(d) for d in range(1, N + 1)],
        "tu": [[d, v] for d, v in sorted(tu.items())],
        "sq2_homology": [[d, v] for d, v in sorted(h.items())],
        "theta_image": theta,
        "margolis": {q: [[d, v] for d, v in sorted(v.items())] for q, v in marg.items()},
    }


def toda_data(r, N, n_range, t_range):
    m = reference.NaiveBV(r, N)
    h = reference.toda_homology(m, n_range, t_range)
    cells = [[n, t, v] for (n, t), v in sorted(h.items()) if t + 1 + reference.offset(n + 1) <= N]
    return {"rank": r, "max_degree": N, "cells": cells}


def main():
    dump("a1_products.json", a1_products())
    dump("a1_ann_sq1.json", a1_ann_sq1())
    dump("bv_small.json", [bv_data(r, 20) for r in (1, 2, 3)])
    dump("toda_bv2.json", toda_data(2, 24, (-3, 4), (-8, 14)))


if __name__ == "__main__":
    main()
