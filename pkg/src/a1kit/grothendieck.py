"""Dimension calculators for exterior powers and augmentation-ideal functors.

A functor F is recorded by its dimension sequence r -> dim F(F_2^r).  In
the binomial basis C(r, i) the coefficients are the forward differences at
zero; for finite functors built from exterior powers they are the
multiplicities of the composition factors Lambda^i.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Mapping, Sequence


class DecompositionError(ValueError):
    """The sequence has no decomposition of the requested kind."""


@dataclass(frozen=True)
class DimSequence:
    values: tuple[int, ...]  # values[r] = dim F(F^r), r = 0..R

    @classmethod
    def from_function(cls, f, R: int) -> "DimSequence":
        return cls(tuple(int(f(r)) for r in range(R + 1)))

    @property
    def top_rank(self) -> int:
        return len(self.values) - 1

    def forward_differences(self) -> list[int]:
        """eps_i = sum_j (-1)^{i-j} C(i, j) s(j), i = 0..R."""
        s = self.values
        return [sum((-1) ** (i - j) * comb(i, j) * s[j] for j in range(i + 1)) for i in range(len(s))]


@dataclass(frozen=True)
class GrothendieckClass:
    multiplicities: tuple[tuple[int, int], ...]  # sorted (i, mult) for Lambda^i, mult > 0

    @classmethod
    def of(cls, mults: Mapping[int, int]) -> "GrothendieckClass":
        return cls(tuple(sorted((i, m) for i, m in mults.items() if m)))

    def as_dict(self) -> dict[int, int]:
        return dict(self.multiplicities)

    def dim(self, r: int) -> int:
        return sum(m * comb(r, i) for i, m in self.multiplicities)

    def __le__(self, other: "GrothendieckClass") -> bool:
        mine, theirs = self.as_dict(), other.as_dict()
        return all(m <= theirs.get(i, 0) for i, m in mine.items())

    def __str__(self) -> str:
        if not self.multiplicities:
            return "0"
        parts = []
        for i, m in self.multiplicities:
            parts.append(f"Λ^{i}" if m == 1 else f"{m}·Λ^{i}")
        return " + ".join(parts)


def newton_decompose(s: DimSequence | Sequence[int], generalized: bool = False) -> GrothendieckClass:
    """Exterior-power factors of a dimension sequence.

    Strict mode requires every multiplicity to be 0 or 1; the generalized
    mode accepts any non-negative multiplicities.
    """
    if not isinstance(s, DimSequence):
        s = DimSequence(tuple(int(x) for x in s))
    eps = s.forward_differences()
    if eps and eps[0] != 0:
        raise DecompositionError(f"value at rank 0 is {eps[0]}, expected 0 for a reduced functor")
    for i, e in enumerate(eps):
        if e < 0:
            raise DecompositionError(f"negative coefficient {e} for Λ^{i}")
        if not generalized and e > 1:
            raise DecompositionError(f"Λ^{i} occurs {e} times; not multiplicity free")
    cls = GrothendieckClass.of({i: e for i, e in enumerate(eps)})
    for r, v in enumerate(s.values):
        if cls.dim(r) != v:  # pragma: no cover - the difference inversion is exact
            raise DecompositionError(f"reconstruction fails at rank {r}")
    return cls


def dim_lambda(i: int, r: int) -> int:
    return comb(r, i) if i >= 0 else 0


def dim_pIbar(n: int, r: int) -> int:
    """dim p_n Ibar(F^r) = C(r,1) + ... + C(r,n); zero for n <= 0."""
    return sum(comb(r, j) for j in range(1, n + 1))


def dim_pbarF_power(m: int, r: int) -> int:
    """dim of the m-th filtration power of Pbar over F: sum_{j >= max(m,1)} C(r, j)."""
    return sum(comb(r, j) for j in range(max(m, 1), r + 1))


def len_pbarZ_quotient(n: int, r: int) -> int:
    """Composition length of Pbar_Z / Pbar_Z^{n+1}, i.e. sum_{j<=n} dim p_j Ibar."""
    return sum(dim_pIbar(j, r) for j in range(1, n + 1))


def figure2_dims(n: int, d: int, r: int) -> int:
    """Homology of the fundamental complex on H(BV_r) at (n, d), in closed form.

    d = 8l     : p_{n+4l} Ibar
    d = 8l + 4 : p_{n+4l+1} Ibar
    d = 8l + 6 : Lambda^{n+4l+2}
    d = 8l + 7 : Lambda^{n+4l+3}
    """
    l, rem = divmod(d, 8)
    a = n + 4 * l
    if rem == 0:
        return dim_pIbar(a, r)
    if rem == 4:
        return dim_pIbar(a + 1, r)
    if rem in (6, 7):
        i = a + 2 if rem == 6 else a + 3
        # only reduced functors occur, so Lambda^i with i <= 0 contributes 0
        return dim_lambda(i, r) if i >= 1 else 0
    return 0


def figure2_class(n: int, d: int) -> GrothendieckClass:
    """The same entry as a class in the Grothendieck group."""
    l, rem = divmod(d, 8)
    a = n + 4 * l
    if rem in (0, 4):
        top = a if rem == 0 else a + 1
        return GrothendieckClass.of({j: 1 for j in range(1, top + 1)})
    if rem in (6, 7):
        i = a + 2 if rem == 6 else a + 3
        return GrothendieckClass.of({i: 1} if i >= 1 else {})
    return GrothendieckClass.of({})
