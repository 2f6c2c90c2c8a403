"""
P, its relatives, and the family P_n
====================================

P is the reduced cohomology of RP^infinity.  Adding classes below it gives R
and P0; iterated syzygies of P0 give P_n, which repeats with period 4 up to
an 8-fold suspension.
"""

from a1kit.a1mod import margolis, split_free, stable_equal, suspend, syzygy_n, tensor_power
from a1kit.classifying import build_P, build_P0, build_Pn, build_R, check_nonsplit

N = 40
P, R, P0 = build_P(N).module, build_R(N).module, build_P0(N).module

# Margolis homology: P is Q0-acyclic and R is Q1-acyclic
print("Q0(P) vanishes:", margolis(P, "Q0").vanishes())
print("Q1(R) vanishes:", margolis(R, "Q1").vanishes())
print("Q1(P):", margolis(P, "Q1").nonzero())
print("extensions do not split:", check_nonsplit())

# first few P_n, shown by their dimensions near the bottom
for n in range(6):
    m = build_Pn(n, N).module
    print(f"P{n}", {d: m.dim(d) for d in range(m.lo, m.lo + 8)})

# P_{n+4} and Sigma^8 P_n agree up to free summands
for n in (0, 1):
    v = stable_equal(build_Pn(n + 4, N).module, suspend(build_Pn(n, N).module, 8))
    print(f"P{n + 4} ~ S^8 P{n}:", v.status, "on", v.window)

# tensor powers of P split into a free part plus a desuspended syzygy
for n in (1, 2):
    s = split_free(tensor_power(P, n + 1))
    v = stable_equal(s.residual, suspend(syzygy_n(P, n), -n))
    print(f"P^{n + 1}: {s.free_rank} free summands removed, residual vs S^-{n} O^{n} P:", v.status)
