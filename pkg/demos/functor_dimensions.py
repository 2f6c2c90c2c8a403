"""
Reading composition factors off dimension sequences
===================================================

A functor F is recorded by r -> dim F(F_2^r).  Forward differences at zero
give the multiplicities of the exterior powers.
"""

from math import comb

from a1kit.grothendieck import DecompositionError, newton_decompose

print(newton_decompose([comb(r, 2) for r in range(6)]))
print(newton_decompose([2**r - 1 for r in range(6)]))

try:
    newton_decompose([2 * r for r in range(6)])
except DecompositionError as e:
    print("strict mode:", e)
print("generalized:", newton_decompose([2 * r for r in range(6)], generalized=True))
