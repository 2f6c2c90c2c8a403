"""K-theory tables for elementary abelian 2-groups.

TU is the image of Q0 Q1 = Sq1 Sq2 Sq1 in H(BV_r); Sq2 restricts to it and
squares to zero there.  ST is the image of that restricted Sq2.  The QO
tables are closed forms; integral entries are reported as a free rank
together with a filtration index, never as constructed 2-adic modules.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from functools import lru_cache

import numpy as np

from . import gf2
from .classifying import bv_cohomology
from .gf2 import GF2Matrix, Subspace
from .grothendieck import dim_lambda, dim_pbarF_power, figure2_dims, len_pbarZ_quotient
from .toda import build_complex, homology

Q0Q1 = (1, 2, 1)


class StabilityError(RuntimeError):
    """Sq2 does not preserve TU; the action matrices are wrong."""


@lru_cache(maxsize=8)
def _bv(r: int, N: int):
    return bv_cohomology(r, N)


@dataclass(eq=False)
class TUSpace:
    rank: int
    max_degree: int
    spaces: dict  # degree -> Subspace of H^d
    sq2: dict  # degree d -> matrix TU^d -> TU^{d+2} in RREF coordinates

    def dim(self, d: int) -> int:
        s = self.spaces.get(d)
        return 0 if s is None else s.dim

    def degrees(self) -> range:
        return range(1, self.max_degree + 1)


def tu_space(r: int, N: int) -> TUSpace:
    if r < 1:
        raise ValueError("rank must be positive")
    m = _bv(r, N).module
    spaces = {}
    for d in range(1, N + 1):
        if d - 4 >= 1 and m.dim(d - 4):
            spaces[d] = gf2.image(m.op(Q0Q1, d - 4))
        else:
            spaces[d] = Subspace.zero(m.dim(d))
    sq2 = {}
    for d in range(1, N - 1):
        src, dst = spaces[d], spaces[d + 2]
        images = src.basis @ m.sq(2, d).T
        if images.rows:
            inside = dst.contains_rows(images)
            if not inside.all():
                raise StabilityError(f"Sq2 does not map TU^{d} into TU^{d + 2}")
        sq2[d] = images.take_cols(dst.pivots).T
    for d in range(1, N - 3):
        if not (sq2[d + 2] @ sq2[d]).is_zero():
            raise StabilityError(f"Sq2 Sq2 != 0 on TU^{d}")
    return TUSpace(r, N, spaces, sq2)


def stability_violations(r: int, N: int) -> list[int]:
    """Degrees d where Sq2(TU^d) is not contained in TU^{d+2}."""
    m = _bv(r, N).module
    out = []
    for d in range(5, N - 1):
        src = gf2.image(m.op(Q0Q1, d - 4))
        dst = gf2.image(m.op(Q0Q1, d - 2))
        images = src.basis @ m.sq(2, d).T
        if images.rows and not dst.contains_rows(images).all():
            out.append(d)
    return out


def _sq2_rank(t: TUSpace, d: int) -> int:
    m = t.sq2.get(d)
    return 0 if m is None else gf2.rank(m)


def sq2_homology(t: TUSpace) -> dict[int, int]:
    """Sq2-homology of TU in each degree d with d + 2 <= N."""
    return {
        d: t.dim(d) - _sq2_rank(t, d) - _sq2_rank(t, d - 2)
        for d in range(1, t.max_degree - 1)
    }


def sq2_homology_expected(d: int, r: int) -> int:
    """C(r, 4k+2) at d = 8k+6, C(r, 4k+3) at d = 8k+7, else 0."""
    k, rem = divmod(d, 8)
    if rem in (6, 7):
        i = 4 * k + rem - 4
        return dim_lambda(i, r) if i >= 1 else 0
    return 0


def st_space(t: TUSpace) -> dict[int, Subspace]:
    """ST^d = Sq2(TU^{d-2}) as a subspace of H^d."""
    m = _bv(t.rank, t.max_degree).module
    out = {}
    for d in range(1, t.max_degree + 1):
        if d - 2 >= 1:
            out[d] = Subspace.span(t.spaces[d - 2].basis @ m.sq(2, d - 2).T)
        else:
            out[d] = Subspace.zero(m.dim(d))
    return out


# Bockstein operations -------------------------------------------------------------

# Image of Sigma^{-1} theta_i on H(BV) in degree d, 0 <= i <= 3:
# (word, source degree relative to d)
THETA = {
    0: ((2, 2, 2), -6),
    1: ((2, 1), -2),
    2: ((2,), 0),
    3: ((1, 2), 1),
}


def theta_image(n: int, d: int, r: int, N: int | None = None) -> int:
    """Dimension of Im(Sigma^{-1} theta_n) in degree d, via mod-2 operations.

    Levels outside 0..3 are reduced by Bott periodicity (n, d) -> (n - 4, d + 8).
    """
    k, i = divmod(n, 4)
    d = d + 8 * k
    word, shift = THETA[i]
    src = d + shift
    if src < 1:
        return 0
    tgt = src + sum(word)
    N = max(tgt, N or 32)
    m = _bv(r, N).module
    return gf2.rank(m.op(word, src))


# QO tables -------------------------------------------------------------------------


@dataclass(frozen=True)
class QOSize:
    kind: str  # "Z2" (free rank + filtration index), "F" (dimension) or "0"
    index: int | None
    free_rank: int
    length: int  # composition length of the piece's complement in KO^d

    def as_dict(self) -> dict:
        return asdict(self)


def qo_index(n: int, d: int) -> tuple[str, int] | None:
    """Filtration type and index of QO{n}^d, or None if it vanishes."""
    k, l = divmod(d, 8)
    a = 4 * k + n
    if l == 0:
        return ("Z2", a)
    if l == 4:
        return ("Z2", a + 1)
    if l == 6:
        return ("F", a + 2)
    if l == 7:
        return ("F", a + 3)
    return None


def ko_total(d: int, r: int) -> tuple[str, int] | None:
    """KO^d(BV_r): ("Z2", free rank) in degrees 0, 4 mod 8, ("F", dim) in 6, 7."""
    l = d % 8
    if l in (0, 4):
        return ("Z2", 2**r - 1)
    if l in (6, 7):
        return ("F", 2**r - 1)
    return None


def qo_table(n: int, d: int, r: int) -> QOSize:
    idx = qo_index(n, d)
    if idx is None:
        return QOSize("0", None, 0, 0)
    kind, a = idx
    if kind == "Z2":
        # a finite-index subgroup of Pbar_Z: full free rank; quotient length
        return QOSize("Z2", a, 2**r - 1, len_pbarZ_quotient(a - 1, r))
    dim = dim_pbarF_power(a, r)
    return QOSize("F", a, dim, (2**r - 1) - dim)


def qo_quotient(n: int, d: int, r: int) -> int:
    """Composition length of QO{n}^d / QO{n+1}^d."""
    a, b = qo_table(n, d, r), qo_table(n + 1, d, r)
    if a.kind == "0":
        return 0
    if a.kind == "Z2":
        return b.length - a.length
    return a.free_rank - b.free_rank


@dataclass
class KOTableReport:
    level: int
    degree: int
    rank: int
    qo: dict
    torsion_dim: int
    homology_dim: int | None
    flags: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return asdict(self)


def ses_report(n: int, d: int, r: int, homology_dim: int | None = None) -> KOTableReport:
    """0 -> Im(Sigma^{-1} theta_{n-1}) -> KO{n}^d -> QO{n}^d -> 0, as sizes.

    Only the sub dimension and quotient size are reported; the extension
    class is not computed.
    """
    qo = qo_table(n, d, r)
    torsion = theta_image(n - 1, d, r)
    closed = figure2_dims(n, d, r)
    flags = {
        "quotient_matches_closed_form": qo_quotient(n, d, r) == closed,
        "cokernel_filtration": _cokernel_filtration_ok(n, d, r),
    }
    if homology_dim is not None:
        flags["homology_matches"] = homology_dim == closed
    return KOTableReport(n, d, r, qo.as_dict(), torsion, homology_dim, flags)


def _cokernel_filtration_ok(n: int, d: int, r: int) -> bool:
    """C{n}^d has length sum_{j<n} of the successive QO quotients."""
    total = ko_total(d, r)
    qo = qo_table(n, d, r)
    if total is None:
        return qo.kind == "0"
    # QO{j} = everything once the filtration index drops to <= 1
    acc = 0
    j = n - 1
    while qo_index(j, d)[1] >= 1:
        acc += figure2_dims(j, d, r)
        j -= 1
    return acc == qo.length


def tables_json(reports: list[KOTableReport]) -> str:
    return json.dumps(
        {"schema": "a1kit-ko-table", "version": 1, "rows": [r.as_dict() for r in reports]},
        indent=2,
        sort_keys=True,
    )


@dataclass
class DetectionReport:
    rank: int
    max_degree: int
    cells: int
    mismatches: list
    unreliable: int

    @property
    def ok(self) -> bool:
        return not self.mismatches and self.cells > 0


def detection_check(r: int, N: int, n_range=(-3, 4), d_range=(-8, 24)) -> DetectionReport:
    """Toda homology vs the closed form vs successive QO quotients."""
    m = _bv(r, N).module
    h = homology(build_complex(m, n_range, d_range))
    mismatches = []
    cells = 0
    unreliable = 0
    for n, d, v, rel in h.cells():
        if not rel:
            unreliable += 1
            continue
        cells += 1
        closed = figure2_dims(n, d, r)
        quot = qo_quotient(n, d, r)
        if not (v == closed == quot):
            mismatches.append({"n": n, "d": d, "homology": v, "closed_form": closed, "qo_quotient": quot})
    for d in range(d_range[0], d_range[1] + 1):
        tot = ko_total(d, r)
        deep = qo_table(n_range[0] - 4 * (abs(d) // 8 + 2), d, r)
        if tot is None:
            if deep.kind != "0":
                mismatches.append({"d": d, "stabilization": "nonzero QO where KO vanishes"})
        elif deep.free_rank != tot[1]:
            mismatches.append({"d": d, "stabilization": f"QO rank {deep.free_rank} != KO rank {tot[1]}"})
    return DetectionReport(r, N, cells, mismatches, unreliable)


# exact couples ---------------------------------------------------------------------------


@dataclass(eq=False)
class ExactCoupleData:
    """D^{n+1} -i-> D^n -q-> E^n -del-> D^{n+2}, on degrees lo..hi.

    Matrices act on columns; missing entries are zero maps.
    """

    lo: int
    hi: int
    D: dict
    E: dict
    i: dict = field(default_factory=dict)  # n -> D^{n+1} -> D^n
    q: dict = field(default_factory=dict)  # n -> D^n -> E^n
    delta: dict = field(default_factory=dict)  # n -> E^n -> D^{n+2}

    def dD(self, n):
        return self.D.get(n, 0)

    def dE(self, n):
        return self.E.get(n, 0)

    def map_i(self, n):
        return self.i.get(n) if n in self.i else GF2Matrix(self.dD(n), self.dD(n + 1))

    def map_q(self, n):
        return self.q.get(n) if n in self.q else GF2Matrix(self.dE(n), self.dD(n))

    def map_delta(self, n):
        return self.delta.get(n) if n in self.delta else GF2Matrix(self.dD(n + 2), self.dE(n))

    def bockstein(self, n):
        return self.map_q(n + 2) @ self.map_delta(n)


@dataclass
class CoupleVerdict:
    ok: bool
    failures: list
    degrees: int

    def __bool__(self):
        return self.ok


def _im(m: GF2Matrix) -> Subspace:
    return gf2.image(m)


def _ker(m: GF2Matrix) -> Subspace:
    return gf2.kernel(m)


def exact_couple_check(c: ExactCoupleData) -> CoupleVerdict:
    """Check the subquotient chain and the degeneration of the couple."""
    fails = []
    if c.dD(c.lo - 1) or c.dD(c.lo - 2):
        fails.append((c.lo, "D is not zero below the window"))
    top = c.hi - 2
    for n in range(c.lo, top + 1):
        q, dl, B = c.map_q(n), c.map_delta(n), c.bockstein(n)
        Bprev = c.bockstein(n - 2)
        # complex and exactness away from E
        if not (dl @ q).is_zero():
            fails.append((n, "del o q != 0"))
        if not (q @ c.map_i(n)).is_zero():
            fails.append((n, "q o i != 0"))
        if _ker(q) != _im(c.map_i(n)):
            fails.append((n, "not exact at D^n"))
        if _ker(c.map_i(n + 1)) != _im(dl):
            fails.append((n + 2, "not exact at D^(n+2)"))
        # Im B^{n-2} <= Im q^n <= Ker del^n <= Ker B^n
        chain = [_im(Bprev), _im(q), _ker(dl), _ker(B)]
        for a, b in zip(chain, chain[1:]):
            if not b.contains(a):
                fails.append((n, "subquotient chain broken"))
                break
        h = chain[2].dim - chain[1].dim
        hb = chain[3].dim - chain[0].dim
        if h != hb:
            fails.append((n, f"homology {h} != Bockstein homology {hb}"))
        # conclusion: i = 0 and E^n = D^n + D^(n+2) + H^n
        if not c.map_i(n).is_zero():
            fails.append((n, "i is non-zero"))
        if c.dE(n) != c.dD(n) + c.dD(n + 2) + h:
            fails.append((n, "dimension accounting fails"))
        if c.dD(n) != gf2.rank(Bprev):
            fails.append((n, "D is not the image of the Bockstein"))
    fails.sort(key=lambda f: f[0])
    return CoupleVerdict(not fails, fails, max(0, top - c.lo + 1))


def st_tu_couple(r: int, N: int) -> ExactCoupleData:
    """The couple with D = ST, E = TU, i = 0, q the inclusion, del = Sq2."""
    t = tu_space(r, N)
    st = st_space(t)
    m = _bv(r, N).module
    D = {d: st[d].dim for d in st}
    E = {d: t.dim(d) for d in t.degrees()}
    q = {}
    delta = {}
    for d in t.degrees():
        tu = t.spaces[d]
        # inclusion ST^d -> TU^d in RREF coordinates
        q[d] = tu.coordinates(st[d].basis).T if st[d].dim else GF2Matrix(tu.dim, 0)
        if d + 2 <= N:
            images = tu.basis @ m.sq(2, d).T
            delta[d] = st[d + 2].coordinates(images).T if tu.dim else GF2Matrix(st[d + 2].dim, 0)
    return ExactCoupleData(1, N, D, E, {}, q, delta)


def corrupt_delta(c: ExactCoupleData, n: int) -> ExactCoupleData:
    """A copy with del^n replaced by zero (negative control)."""
    delta = dict(c.delta)
    delta[n] = GF2Matrix(c.dD(n + 2), c.dE(n))
    return ExactCoupleData(c.lo, c.hi, c.D, c.E, c.i, c.q, delta)


def dims_accounting(r: int, N: int) -> list[tuple[int, int, int, int, int]]:
    """(d, dim TU^d, dim ST^d, dim ST^{d+2}, Sq2-homology) for d + 2 <= N."""
    t = tu_space(r, N)
    st = st_space(t)
    h = sq2_homology(t)
    return [(d, t.dim(d), st[d].dim, st[d + 2].dim, h[d]) for d in range(1, N - 1)]


def theta_rank_matrix(r: int, N: int, n: int, d: int) -> np.ndarray:
    """Dense matrix of the operation behind theta_image, for inspection."""
    k, i = divmod(n, 4)
    word, shift = THETA[i]
    src = d + 8 * k + shift
    return _bv(r, N).module.op(word, src).to_dense()
