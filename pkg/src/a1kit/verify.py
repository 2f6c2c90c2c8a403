"""Acceptance checks as library functions.

Each check returns a ``CheckResult``; ``run_all`` runs them in order.  The
parameters (degree bounds, windows) are the defaults used by the test suite
and by ``a1kit verify all``.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from math import comb

import numpy as np

from . import gf2, naive
from .a1mod import (
    A1Module,
    direct_sum,
    free_module,
    split_free,
    stable_equal,
    suspend,
    syzygy,
    syzygy_n,
    tensor,
    tensor_power,
)
from .classifying import build_P, build_P0, build_Pn, build_R, bv_cohomology, check_nonsplit, kunneth_check
from .grothendieck import figure2_dims
from .kotheory import (
    corrupt_delta,
    detection_check,
    dims_accounting,
    exact_couple_check,
    sq2_homology,
    sq2_homology_expected,
    st_tu_couple,
    stability_violations,
    tu_space,
)
from .steenrod import build_a1, build_a1_mod_a0, build_a1_module, build_joker, check_confluence
from .toda import build_complex, decalage_check, homology, offset


@dataclass
class CheckResult:
    name: str
    ok: bool
    detail: str = ""
    seconds: float = 0.0
    data: dict = field(default_factory=dict)

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        return f"[{status}] {self.name}: {self.detail} ({self.seconds:.2f}s)"


def _timed(name):
    def wrap(fn):
        def run(*args, **kwargs):
            t0 = time.perf_counter()
            ok, detail, data = fn(*args, **kwargs)
            return CheckResult(name, ok, detail, time.perf_counter() - t0, data)

        run.__name__ = fn.__name__
        run.__doc__ = fn.__doc__
        return run

    return wrap


@_timed("algebra")
def check_algebra():
    """A(1) dimensions, associativity, confluence, and A(1)//A(0)."""
    a1 = build_a1()
    a1.check_associative()
    check_confluence(7)
    dims = a1.dims_by_degree()
    quo = build_a1_mod_a0().module
    ok = dims == [1, 1, 1, 2, 1, 1, 1] and a1.dim == 8 and sorted(quo.dims_dict()) == [0, 2, 3, 5]
    return ok, f"dims {dims}, A(1)//A(0) in degrees {sorted(quo.dims_dict())}", {}


def p_class_table(n: int, t: int) -> int:
    k, i = divmod(n, 4)
    x = t + 8 * k
    if i == 0:
        return int(x >= 4 and x % 4 == 0)
    if i == 1:
        return int(x >= 0 and x % 4 == 0)
    if i == 2:
        return int(x == -1 or (x >= 0 and x % 4 == 0))
    return int(x == -2 or (x >= 0 and x % 4 == 0))


@_timed("homology on P")
def check_homology_P(t_max: int = 40, n_range=(-4, 3)):
    """Toda homology on P against the class table, cell by cell."""
    N = t_max + 1 + offset(n_range[1] + 1)
    P = build_P(N).module
    c = build_complex(P, n_range, (-16, t_max))
    h = homology(c)
    bad = []
    cells = 0
    for n, t, v, rel in h.cells():
        if not rel:
            continue
        cells += 1
        if v != p_class_table(n, t) or v > 1:
            bad.append((n, t, v))
    # the generating classes are the stated powers of u
    for n, t, power in ((0, 4, 4), (0, 8, 8), (1, 0, 1), (1, 4, 5), (2, -1, 1), (2, 4, 6), (3, -2, 2), (3, 4, 8)):
        reps = c.representatives(n, t)
        d = c.m_degree(n, t)
        if len(reps) != 1 or d != power or P.label(d, 0) != f"u^{power}":
            bad.append((n, t, "representative"))
    return not bad and cells > 0, f"{cells} cells, {len(bad)} mismatches", {"mismatches": bad}


@_timed("closed-form table on BV")
def check_figure2(ranks=(1, 2, 3, 4), n_range=(-3, 4), d_range=(-8, 24)):
    """Toda homology on H(BV_r) against the closed-form table."""
    N = d_range[1] + 1 + offset(n_range[1] + 1)
    bad = []
    cells = 0
    for r in ranks:
        m = bv_cohomology(r, N).module
        h = homology(build_complex(m, n_range, d_range))
        for n, d, v, rel in h.cells():
            if not rel:
                bad.append((r, n, d, "unreliable"))
                continue
            cells += 1
            if v != figure2_dims(n, d, r):
                bad.append((r, n, d, v, figure2_dims(n, d, r)))
    return not bad, f"{cells} cells over ranks {list(ranks)}, {len(bad)} mismatches", {"mismatches": bad}


@_timed("P tensor powers")
def check_pn_splitting(ns=(1, 2, 3), N: int = 40):
    """Residual of P^(n+1) after removing free summands vs Sigma^{-n} Omega^n P."""
    P = build_P(N).module
    verdicts = {}
    for n in ns:
        res = split_free(tensor_power(P, n + 1)).residual
        target = suspend(syzygy_n(P, n), -n)
        verdicts[n] = stable_equal(res, target)
    ok = all(v.equal for v in verdicts.values())
    detail = ", ".join(f"n={n}: {v.status} on {v.window}" for n, v in verdicts.items())
    return ok, detail, {"verdicts": verdicts}


@_timed("periodicity of P_n")
def check_periodicity(pairs=((4, 0), (5, 1)), N: int = 40, min_window: int = 16):
    """P_{n+4} against Sigma^8 P_n."""
    out = {}
    for a, b in pairs:
        v = stable_equal(build_Pn(a, N).module, suspend(build_Pn(b, N).module, 8))
        out[(a, b)] = v
    ok = all(v.equal and v.window[1] - v.window[0] + 1 >= min_window for v in out.values())
    detail = ", ".join(f"P{a} vs S^8 P{b}: {v.status} on {v.window}" for (a, b), v in out.items())
    return ok, detail, {"verdicts": out}


@_timed("Joker identities")
def check_joker(N: int = 40):
    J = build_joker().module
    res = split_free(tensor(J, J)).residual
    jj = res.dims_dict() == {0: 1}
    P0 = build_P0(N).module
    P = build_P(N).module
    v1 = stable_equal(tensor(P0, J), suspend(build_Pn(2, N).module, -4))
    v2 = stable_equal(tensor(P, J), suspend(build_Pn(3, N).module, -4))
    ok = jj and v1.equal and v2.equal
    return ok, f"J(x)J residual {res.dims_dict()}, P0(x)J: {v1.status}, P(x)J: {v2.status}", {}


@_timed("Sq2-homology of TU")
def check_sq2_homology(ranks=(1, 2, 3, 4), d_max: int = 24):
    bad = []
    for r in ranks:
        h = sq2_homology(tu_space(r, d_max + 2))
        for d in range(1, d_max + 1):
            if h[d] != sq2_homology_expected(d, r):
                bad.append((r, d, h[d]))
        if r == 1 and any(h.values()):
            bad.append((1, "nonzero"))
    return not bad, f"{len(bad)} mismatches", {"mismatches": bad}


@_timed("TU/ST accounting")
def check_accounting(ranks=(1, 2, 3, 4), d_max: int = 24):
    bad = []
    violations = 0
    couples = []
    for r in ranks:
        N = d_max + 2
        for d, tu, st, st2, h in dims_accounting(r, N):
            if d <= d_max and tu != st + st2 + h:
                bad.append((r, d))
        violations += len(stability_violations(r, N))
        couples.append(exact_couple_check(st_tu_couple(r, N)).ok)
    negative = exact_couple_check(corrupt_delta(st_tu_couple(2, d_max + 2), 8))
    ok = not bad and violations == 0 and all(couples) and not negative.ok
    detail = f"{len(bad)} accounting failures, {violations} stability violations, corrupted couple rejected: {not negative.ok}"
    return ok, detail, {}


@_timed("detection")
def check_detection(ranks=(1, 2, 3), n_range=(-3, 4), d_range=(-8, 24)):
    N = d_range[1] + 1 + offset(n_range[1] + 1)
    reports = [detection_check(r, N, n_range, d_range) for r in ranks]
    bad = sum(len(r.mismatches) for r in reports)
    ok = all(r.ok and r.unreliable == 0 for r in reports)
    return ok, f"{sum(r.cells for r in reports)} cells, {bad} mismatches", {}


def module_corpus(N: int = 24) -> dict[str, A1Module]:
    P = build_P(N).module
    J = build_joker().module
    corpus = {
        "A(1)": build_a1_module().module,
        "A(1)//A(0)": build_a1_mod_a0().module,
        "J": J,
        "P": P,
        "R": build_R(N).module,
        "P0": build_P0(N).module,
        "F(0,3)": free_module([0, 3]),
        "trivial": A1Module.trivial(),
    }
    for n in range(1, 5):
        corpus[f"P{n}"] = build_Pn(n, N).module
    for r in (2, 3):
        corpus[f"BV{r}"] = bv_cohomology(r, 16).module
    corpus["P(x)P"] = tensor(P, P)
    corpus["J(x)J"] = tensor(J, J)
    corpus["P(x)J"] = tensor(P, J)
    corpus["OmegaJ"] = syzygy(J)
    corpus["P+J"] = direct_sum(P, J)
    corpus["residual P(x)P"] = split_free(tensor(P, P)).residual
    return corpus


@_timed("module axioms")
def check_axioms():
    corpus = module_corpus()
    bad = [name for name, m in corpus.items() if not m.is_valid()]
    return not bad, f"{len(corpus) - len(bad)}/{len(corpus)} modules satisfy the relations", {"failed": bad}


@_timed("decalage")
def check_decalage(N: int = 32):
    P = build_P(N).module
    mods = {"P": P, "P(x)P": tensor(P, P), "P0": build_P0(N).module}
    out = {k: decalage_check(m) for k, m in mods.items()}
    ok = all(v.ok for v in out.values())
    return ok, ", ".join(f"{k}: {v.compared} cells, {len(v.mismatches)} mismatches" for k, v in out.items()), {}


@_timed("fast vs naive kernel")
def check_kernel(count: int = 1000, max_size: int = 200, seed: int = 0):
    rng = np.random.default_rng(seed)
    bad = 0
    for _ in range(count):
        rows, cols = rng.integers(0, max_size + 1, 2)
        density = rng.choice([0.02, 0.1, 0.5])
        a = (rng.random((rows, cols)) < density).astype(np.uint8)
        m = gf2.GF2Matrix.from_dense(a)
        r, piv = gf2.rref(m)
        nr, npiv = naive.rref(a)
        if gf2.rank(m) != len(npiv) or list(piv) != list(npiv) or not np.array_equal(r.to_dense(), nr):
            bad += 1
            continue
        k = gf2.kernel(m)
        fast = naive.rref(k.basis.to_dense())[0] if k.dim else np.zeros((0, cols), np.uint8)
        if not np.array_equal(fast, naive.kernel(a)):
            bad += 1
            continue
        inner = int(rng.integers(0, max_size + 1))
        b = (rng.random((cols, inner)) < density).astype(np.uint8)
        if not np.array_equal((m @ gf2.GF2Matrix.from_dense(b)).to_dense(), naive.matmul(a, b)):
            bad += 1
    return bad == 0, f"{count - bad}/{count} random matrices agree", {}


@_timed("Kunneth decomposition")
def check_kunneth(ranks=(1, 2, 3), N: int = 24):
    reports = [kunneth_check(r, N) for r in ranks]
    bad = sum(len(r.mismatches) for r in reports)
    return bad == 0, f"ranks {list(ranks)}: {bad} mismatches", {}


@_timed("nonsplit extensions")
def check_extensions():
    res = check_nonsplit()
    return all(res.values()), ", ".join(f"{k} nonsplit: {v}" for k, v in res.items()), {}


CRITERIA = [
    ("1", check_algebra),
    ("2", check_homology_P),
    ("3", check_figure2),
    ("4", check_pn_splitting),
    ("5", check_periodicity),
    ("6", check_joker),
    ("7", check_sq2_homology),
    ("8", check_accounting),
    ("9", check_detection),
    ("10a", check_axioms),
    ("10b", check_decalage),
    ("10c", check_kernel),
]

EXTRA = [
    ("kunneth", check_kunneth),
    ("extensions", check_extensions),
]


def run_all(include_extra: bool = True) -> list[tuple[str, CheckResult]]:
    items = CRITERIA + (EXTRA if include_extra else [])
    return [(key, fn()) for key, fn in items]


def binomial_row(r: int) -> list[int]:
    return [comb(r, i) for i in range(r + 1)]
