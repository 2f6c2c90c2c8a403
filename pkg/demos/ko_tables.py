"""
KO tables for BV_r
==================

TU is the image of Q0Q1 in H(BV_r).  Its Sq2-homology is concentrated in
degrees 6 and 7 mod 8, and the short exact sequences for each connective
cover are assembled from quotient sizes and Bockstein images.
"""

from a1kit.kotheory import (
    detection_check,
    dims_accounting,
    exact_couple_check,
    ses_report,
    sq2_homology,
    st_tu_couple,
    tu_space,
)

r, N = 3, 26
h = sq2_homology(tu_space(r, N))
print("Sq2-homology of TU:", {d: v for d, v in h.items() if v})

for d, tu, st, st2, hd in dims_accounting(r, N)[:16]:
    print(f"d={d:2d} TU={tu:3d} = ST {st} + ST(d+2) {st2} + H {hd}")

print("exact couple:", exact_couple_check(st_tu_couple(r, N)).ok)

for d in (4, 6, 7, 8):
    rep = ses_report(1, d, r)
    print(d, rep.qo, "torsion", rep.torsion_dim, rep.flags)

rep = detection_check(r, 34)
print("detection:", "PASS" if rep.ok else "FAIL", rep.cells, "cells")
