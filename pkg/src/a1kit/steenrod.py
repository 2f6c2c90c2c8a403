"""The algebras A(0) and A(1) and the cyclic A(1)-modules built from them.

A(1) is stored as an explicit monomial basis of words in Sq1, Sq2 together
with its multiplication table.  The table comes from word rewriting with

    Sq1 Sq1 = 0,   Sq2 Sq2 = Sq1 Sq2 Sq1,   Sq1 Sq2 Sq1 Sq2 = Sq2 Sq1 Sq2 Sq1

and is validated against Adem-relation arithmetic in the full Steenrod
algebra before it is handed out.

Words are tuples read left to right as composition, so ``(2, 1)`` is
``Sq2 Sq1`` (apply Sq1 first).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from math import comb

import numpy as np

Word = tuple[int, ...]

RULES: tuple[tuple[Word, Word | None], ...] = (
    ((1, 1), None),
    ((2, 2), (1, 2, 1)),
    ((1, 2, 1, 2), (2, 1, 2, 1)),
)

MAX_REWRITES = 64


class PresentationError(RuntimeError):
    """The rewriting system failed to terminate or disagrees with Adem."""


def degree(word: Word) -> int:
    return sum(word)


def _redexes(word: Word):
    for pos in range(len(word)):
        for lhs, rhs in RULES:
            if word[pos : pos + len(lhs)] == lhs:
                yield pos, lhs, rhs


def reduce_word(word: Word) -> Word | None:
    """Normal form of a word (leftmost rewriting), or None for zero."""
    w = tuple(word)
    for _ in range(MAX_REWRITES):
        for pos, lhs, rhs in _redexes(w):
            if rhs is None:
                return None
            w = w[:pos] + rhs + w[pos + len(lhs) :]
            break
        else:
            return w
    raise PresentationError(f"rewriting of {word} did not terminate")


def _all_normal_forms(word: Word, depth: int = 0) -> frozenset:
    if depth > MAX_REWRITES:
        raise PresentationError(f"rewriting of {word} did not terminate")
    out = set()
    found = False
    for pos, lhs, rhs in _redexes(word):
        found = True
        if rhs is None:
            out.add(None)
        else:
            out |= _all_normal_forms(word[:pos] + rhs + word[pos + len(lhs) :], depth + 1)
    if not found:
        out.add(word)
    return frozenset(out)


def words_up_to(max_degree: int):
    """All words in Sq1, Sq2 of total degree at most ``max_degree``."""
    out = [()]
    frontier = [()]
    while frontier:
        nxt = []
        for w in frontier:
            for g in (1, 2):
                v = w + (g,)
                if degree(v) <= max_degree:
                    nxt.append(v)
        out.extend(nxt)
        frontier = nxt
    return out


def check_confluence(max_degree: int = 7) -> None:
    """Every reduction order gives the same normal form up to ``max_degree``."""
    for w in words_up_to(max_degree):
        nfs = _all_normal_forms(w)
        if len(nfs) != 1:
            raise PresentationError(f"word {w} has normal forms {sorted(nfs, key=str)}")


# Adem oracle ------------------------------------------------------------


@lru_cache(maxsize=None)
def _admissible(seq: tuple[int, ...]) -> frozenset:
    """Expand a product Sq^{a1}...Sq^{ak} into admissible monomials mod 2."""
    seq = tuple(a for a in seq if a != 0)
    for i in range(len(seq) - 1):
        a, b = seq[i], seq[i + 1]
        if a < 2 * b:
            out: set = set()
            for j in range(a // 2 + 1):
                if comb(b - 1 - j, a - 2 * j) % 2 if b - 1 - j >= 0 else 0:
                    term = seq[:i] + (a + b - j, j) + seq[i + 2 :]
                    out ^= set(_admissible(term))
            return frozenset(out)
    return frozenset([seq])


def adem_product(*words: Word) -> frozenset:
    """The element Sq^{w1} Sq^{w2} ... of the Steenrod algebra, admissibly."""
    return _admissible(tuple(itertools.chain.from_iterable(words)))


# A(1) --------------------------------------------------------------------


@dataclass(frozen=True)
class A1Basis:
    """A(1) as a basis of normal words with structure constants.

    ``table[i][j]`` is the index of the word ``basis[i] basis[j]`` or -1
    when the product is zero (products of basis words are again basis
    words or zero).
    """

    words: tuple[Word, ...]
    degrees: tuple[int, ...]
    table: tuple[tuple[int, ...], ...]

    @property
    def dim(self) -> int:
        return len(self.words)

    def index(self, word: Word) -> int:
        return self.words.index(tuple(word))

    def dims_by_degree(self) -> list[int]:
        top = max(self.degrees)
        return [self.degrees.count(d) for d in range(top + 1)]

    def in_degree(self, d: int) -> list[int]:
        return [i for i, dd in enumerate(self.degrees) if dd == d]

    def multiply(self, a: Word, b: Word) -> Word | None:
        return reduce_word(tuple(a) + tuple(b))

    def vector(self, i: int) -> np.ndarray:
        v = np.zeros(self.dim, dtype=np.uint8)
        if i >= 0:
            v[i] = 1
        return v

    def top(self) -> Word:
        return self.words[self.degrees.index(max(self.degrees))]

    def check_associative(self) -> None:
        n = self.dim
        for i in range(n):
            for j in range(n):
                ij = self.table[i][j]
                for k in range(n):
                    jk = self.table[j][k]
                    left = -1 if ij < 0 else self.table[ij][k]
                    right = -1 if jk < 0 else self.table[i][jk]
                    if left != right:
                        raise PresentationError(f"associativity fails on {self.words[i]}, {self.words[j]}, {self.words[k]}")


def _check_against_adem(words: list[Word]) -> None:
    # the subalgebra generated by Sq1, Sq2 inside A, degree by degree
    span_dims = []
    for d in range(8):
        elems = {adem_product(w) for w in words_up_to(d) if degree(w) == d}
        monos = sorted({m for e in elems for m in e})
        mat = np.array([[1 if m in e else 0 for m in monos] for e in elems], dtype=np.uint8)
        from .naive import rank

        span_dims.append(rank(mat) if mat.size else 0)
    expected = [sum(1 for w in words if degree(w) == d) for d in range(8)]
    if span_dims != expected:
        raise PresentationError(f"Adem span dims {span_dims} != rewriting dims {expected}")
    for w in words_up_to(7):
        nf = reduce_word(w)
        target = frozenset() if nf is None else adem_product(nf)
        if adem_product(w) != target:
            raise PresentationError(f"word {w} rewrites to {nf} but Adem disagrees")


@lru_cache(maxsize=1)
def build_a1() -> A1Basis:
    check_confluence(7)
    normal = sorted({nf for w in words_up_to(7) if (nf := reduce_word(w)) is not None}, key=lambda w: (degree(w), w))
    _check_against_adem(normal)
    idx = {w: i for i, w in enumerate(normal)}
    table = []
    for a in normal:
        row = []
        for b in normal:
            p = reduce_word(a + b)
            row.append(-1 if p is None else idx[p])
        table.append(tuple(row))
    basis = A1Basis(tuple(normal), tuple(degree(w) for w in normal), tuple(table))
    basis.check_associative()
    return basis


def build_a0() -> tuple[Word, ...]:
    """Basis words of A(0) = {1, Sq1}."""
    return ((), (1,))


TOP = (2, 1, 2, 1)  # the degree-6 socle element of A(1)


# cyclic modules ------------------------------------------------------------


@dataclass(frozen=True)
class CyclicQuotientModule:
    module: "A1Module"  # noqa: F821
    generator_degree: int
    label: str


def left_ideal(generator: Word) -> list[int]:
    """Basis indices spanning A(1)·generator (a monomial left ideal)."""
    a1 = build_a1()
    g = reduce_word(generator)
    out = set()
    for w in a1.words:
        p = reduce_word(w + g) if g is not None else None
        if p is not None:
            out.add(a1.index(p))
    return sorted(out)


def cyclic_quotient(ideal_generator: Word | None, shift: int = 0, label: str = ""):
    """A(1)/A(1)·g suspended by ``shift``, on the surviving basis words."""
    from .a1mod import A1Module

    a1 = build_a1()
    dead = set(left_ideal(ideal_generator)) if ideal_generator is not None else set()
    keep = [i for i in range(a1.dim) if i not in dead]
    top = max(a1.degrees)
    per_degree = {d: [i for i in keep if a1.degrees[i] == d] for d in range(top + 1)}
    pos = {i: (a1.degrees[i], per_degree[a1.degrees[i]].index(i)) for i in keep}

    def action(gen: int, d: int):
        src = per_degree.get(d, [])
        dst = per_degree.get(d + gen, [])
        mat = np.zeros((len(dst), len(src)), dtype=np.uint8)
        for c, i in enumerate(src):
            p = a1.table[a1.index((gen,))][i]
            if p >= 0 and p in pos:
                mat[pos[p][1], c] = 1
        return mat

    dims = [len(per_degree[d]) for d in range(top + 1)]
    labels = [["".join(f"Sq{g}" for g in a1.words[i]) or "1" for i in per_degree[d]] for d in range(top + 1)]
    mod = A1Module.from_dense(
        lo=0,
        dims=dims,
        sq1=[action(1, d) for d in range(top)],
        sq2=[action(2, d) for d in range(top - 1)],
        finite=True,
        labels=labels,
    )
    mod = mod.trim()
    return CyclicQuotientModule(mod.suspend(shift), shift, label)


def build_a1_module():
    """A(1) as a left module over itself, generator in degree 0."""
    return cyclic_quotient(None, 0, "A(1)")


def build_a1_mod_a0() -> CyclicQuotientModule:
    """A(1)//A(0) = A(1) tensor_{A(0)} F = A(1)/A(1)Sq1."""
    return cyclic_quotient((1,), 0, "A(1)//A(0)")


def build_joker() -> CyclicQuotientModule:
    """The Joker: the desuspension by 2 of A(1)/A(1)Sq1Sq2."""
    return cyclic_quotient((1, 2), -2, "J")
