"""
The algebra A(1) and its small modules
======================================

A(1) is generated by Sq1 and Sq2.  We build it from three rewriting rules,
check the result against Adem relations, and look at two cyclic modules.
"""

from a1kit.steenrod import adem_product, build_a1, build_a1_mod_a0, build_joker

# the basis of normal words and their degrees
a1 = build_a1()
for word, deg in zip(a1.words, a1.degrees):
    print(deg, " ".join(f"Sq{x}" for x in word) or "1")
print("dimension by degree:", a1.dims_by_degree())

# Sq2 Sq2 rewrites to Sq1 Sq2 Sq1; in admissible form both are Sq3 Sq1
print("Sq2*Sq2 =", a1.multiply((2,), (2,)), "admissible:", sorted(adem_product((2, 2))))

# A(1)//A(0) lives in degrees 0, 2, 3, 5; the Joker in -2..2
print("A(1)//A(0):", build_a1_mod_a0().module.dims_dict())
print("Joker:", build_joker().module.dims_dict())
