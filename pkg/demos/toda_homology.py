"""
Homology of the fundamental complex
===================================

The complex has terms Ann(Sq1) M, M, M, Ann(Sq1) M in each period with
differentials Sq2, Sq2, Sq3, Sq2Sq1Sq2.  On P every bidegree has dimension at
most one; on H(BV_r) the answer is a binomial count.
"""

import numpy as np

from a1kit.classifying import build_P, bv_cohomology
from a1kit.grothendieck import figure2_class, figure2_dims
from a1kit.toda import build_complex, homology

P = build_P(40).module
c = build_complex(P, (0, 3), (-4, 16))
h = homology(c)
for (n, t), v in sorted(h.nonzero().items()):
    print(f"n={n} t={t:3d}  class of {P.label(c.m_degree(n, t), 0)}")

# the same complex on H(BV_2) as an array, rows are levels n, columns degrees d
r, degrees, levels = 2, range(-8, 17), range(-3, 5)
m = bv_cohomology(r, 32).module
h = homology(build_complex(m, (levels[0], levels[-1]), (degrees[0], degrees[-1])))
table = np.array([[h.get(n, d) for d in degrees] for n in levels])
print(table)
closed = np.array([[figure2_dims(n, d, r) for d in degrees] for n in levels])
print("agrees with the closed form:", np.array_equal(table, closed))
print("entry (0, 8) as a class:", figure2_class(0, 8))
