"""Command line interface: ``a1kit <group> <command> [options]``.

Exit codes: 0 success, 1 a verification or detection mismatch, 2 usage error.
Output is deterministic for fixed arguments.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass
from pathlib import Path

from . import verify as V
from ._parallel import set_threads
from .a1mod import A1Module, WindowError, margolis, split_free, stable_equal, suspend, syzygy
from .classifying import bv_cohomology
from .grothendieck import DecompositionError, figure2_class, figure2_dims, newton_decompose
from .kotheory import (
    detection_check,
    dims_accounting,
    exact_couple_check,
    ses_report,
    sq2_homology,
    st_tu_couple,
    tables_json,
    tu_space,
)
from .steenrod import build_a1, build_a1_mod_a0, build_joker
from .toda import HypothesisError, build_complex, decalage_check, homology, offset

FORMATS = ("table", "csv", "json")


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    rank: int | None
    max_degree: int | None
    level_range: tuple[int, int] | None
    fmt: str
    output: str | None
    threads: int | None
    seed: int

    def validate(self) -> None:
        if self.max_degree is not None and self.max_degree < 1:
            raise UsageError("--max-degree must be at least 1")
        if self.rank is not None and self.rank < 1:
            raise UsageError("--rank must be at least 1")
        if self.fmt not in FORMATS:
            raise UsageError(f"--format must be one of {', '.join(FORMATS)}")


# emitters ----------------------------------------------------------------


def render(columns: list[str], rows: list[list], fmt: str, meta: dict | None = None) -> str:
    if fmt == "json":
        obj = dict(meta or {})
        obj["columns"] = columns
        obj["rows"] = rows
        return json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(columns)
        w.writerows(rows)
        return buf.getvalue()
    cells = [columns] + [[str(x) for x in r] for r in rows]
    widths = [max(len(str(r[i])) for r in cells) for i in range(len(columns))]
    lines = ["  ".join(str(v).rjust(w) for v, w in zip(r, widths)) for r in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


def parse_range(text: str) -> tuple[int, int]:
    try:
        a, b = text.split("..")
        lo, hi = int(a), int(b)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a range like -3..4, got {text!r}") from None
    if lo > hi:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return lo, hi


def parse_ints(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma separated integers, got {text!r}") from None


# module loading ------------------------------------------------------------------


def load_module(args, which: str = "") -> A1Module:
    builtin = getattr(args, f"{which}builtin")
    path = getattr(args, f"{which}input")
    if (builtin is None) == (path is None):
        raise UsageError(f"give exactly one of --{which}builtin and --{which}input")
    if path is not None:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
        try:
            return A1Module.from_json(text)
        except (KeyError, ValueError) as e:
            raise UsageError(f"cannot read module from {path}: {e}") from None
    corpus = V.module_corpus(args.max_degree or 24)
    if builtin not in corpus:
        raise UsageError(f"unknown builtin {builtin!r}; choose from {', '.join(corpus)}")
    return corpus[builtin]


# commands ------------------------------------------------------------------------


def cmd_a1_check(args):
    a1 = build_a1()
    rows = [[" ".join(f"Sq{x}" for x in w) or "1", d] for w, d in zip(a1.words, a1.degrees)]
    meta = {
        "dims_by_degree": a1.dims_by_degree(),
        "a1_mod_a0_degrees": sorted(build_a1_mod_a0().module.dims_dict()),
        "joker_degrees": sorted(build_joker().module.dims_dict()),
    }
    out = render(["word", "degree"], rows, args.format, meta)
    if args.format == "table":
        out += f"dims by degree {meta['dims_by_degree']}; presentation confluent, associative, Adem-consistent\n"
    return out, 0


def cmd_bv_cohomology(args):
    bv = bv_cohomology(args.rank, args.max_degree)
    rows = [[d, bv.dim(d)] for d in range(1, args.max_degree + 1)]
    return render(["d", "dim"], rows, args.format, {"rank": args.rank, "max_degree": args.max_degree}), 0


def cmd_module_margolis(args):
    m = load_module(args)
    rows = []
    for q in ("Q0", "Q1"):
        h = margolis(m, q)
        for d in sorted(h.dims):
            rows.append([q, d, h.dims[d], int(d in h.reliable_dims())])
    return render(["q", "d", "dim", "reliable"], rows, args.format), 0


def cmd_module_syzygy(args):
    m = load_module(args)
    for _ in range(args.times):
        m = syzygy(m)
    return json.dumps(m.to_json(), indent=2, sort_keys=True) + "\n", 0


def cmd_module_split_free(args):
    s = split_free(load_module(args))
    obj = {
        "free_part": {str(d): k for d, k in sorted(s.free_part_dims.items())},
        "residual": s.residual.to_json(),
    }
    if args.format == "json":
        return json.dumps(obj, indent=2, sort_keys=True) + "\n", 0
    rows = [[d, k] for d, k in sorted(s.free_part_dims.items())]
    out = render(["generator degree", "free summands"], rows, args.format)
    return out + f"residual dims {s.residual.dims_dict()}\n", 0


def cmd_module_stable_equal(args):
    a = load_module(args)
    b = suspend(load_module(args, "other_"), args.shift)
    v = stable_equal(a, b, args.max_iso_dim)
    obj = {"status": v.status, "window": list(v.window), "witness": v.witness, "reason": v.reason}
    if args.format == "json":
        return json.dumps(obj, indent=2, sort_keys=True) + "\n", 0 if v.equal else 1
    return f"{v.status} on window {v.window[0]}..{v.window[1]}" + (f", witness degree {v.witness}" if v.witness is not None else "") + f" ({v.reason})\n", 0 if v.equal else 1


def _toda_rows(m, r, n_range, t_range):
    h = homology(build_complex(m, n_range, t_range))
    return [[n, t, r, v, int(rel)] for n, t, v, rel in h.cells()]


def cmd_toda_homology(args):
    n_range = args.range
    m = bv_cohomology(args.rank, args.max_degree).module
    t_range = args.degrees or (-8, args.max_degree)
    rows = _toda_rows(m, args.rank, n_range, t_range)
    meta = {"rank": args.rank, "max_degree": args.max_degree, "schema": "a1kit-toda", "version": 1}
    return render(["n", "d", "r", "dim", "reliable"], rows, args.format, meta), 0


def cmd_toda_decalage(args):
    m = load_module(args)
    try:
        v = decalage_check(m, args.range)
    except HypothesisError as e:
        raise UsageError(str(e)) from None
    rows = [list(x) for x in v.mismatches]
    out = render(["n", "t", "left", "right"], rows, args.format, {"ok": v.ok, "compared": v.compared})
    if args.format == "table":
        out += f"{'PASS' if v.ok else 'FAIL'}: {v.compared} cells compared, {len(v.mismatches)} mismatches\n"
    return out, 0 if v.ok else 1


def cmd_gk_decompose(args):
    try:
        cls = newton_decompose(args.dims, generalized=args.generalized)
    except DecompositionError as e:
        return f"no decomposition: {e}\n", 1
    if args.format == "table":
        return str(cls) + "\n", 0
    rows = [[i, m] for i, m in cls.multiplicities]
    return render(["i", "multiplicity"], rows, args.format), 0


def cmd_gk_figure2(args):
    dim = figure2_dims(args.n, args.d, args.rank)
    cls = figure2_class(args.n, args.d)
    if args.format == "table":
        return f"{cls}  (dim {dim} at rank {args.rank})\n", 0
    return render(["n", "d", "r", "dim", "class"], [[args.n, args.d, args.rank, dim, str(cls)]], args.format), 0


def cmd_ko_tu(args):
    t = tu_space(args.rank, args.max_degree)
    rows = [[d, t.dim(d)] for d in t.degrees()]
    return render(["d", "dim"], rows, args.format, {"rank": args.rank}), 0


def cmd_ko_sq2h(args):
    h = sq2_homology(tu_space(args.rank, args.max_degree))
    rows = [[d, v] for d, v in sorted(h.items())]
    return render(["d", "dim"], rows, args.format, {"rank": args.rank}), 0


def cmd_ko_st(args):
    acc = dims_accounting(args.rank, args.max_degree)
    rows = [list(x) for x in acc]
    return render(["d", "tu", "st", "st_next", "sq2_homology"], rows, args.format, {"rank": args.rank}), 0


def _module_bound(d_max: int, n_max: int) -> int:
    return d_max + 1 + offset(n_max + 1)


def cmd_ko_tables(args):
    n_range = args.level if args.level is not None else (0, 3)
    d_range = (-8, args.max_degree)
    m = bv_cohomology(args.rank, _module_bound(d_range[1], n_range[1])).module
    h = homology(build_complex(m, n_range, d_range))
    reports = [ses_report(n, d, args.rank, v) for n, d, v, rel in h.cells() if rel]
    if args.format == "json":
        return tables_json(reports) + "\n", 0
    rows = [
        [r.level, r.degree, r.rank, r.qo["kind"], r.qo["index"], r.qo["free_rank"], r.torsion_dim, r.homology_dim, int(all(r.flags.values()))]
        for r in reports
    ]
    cols = ["n", "d", "r", "qo_kind", "qo_index", "qo_rank", "torsion_dim", "homology_dim", "consistent"]
    bad = sum(1 for x in rows if not x[-1])
    return render(cols, rows, args.format), 0 if bad == 0 else 1


def cmd_ko_detect(args):
    n_range = args.level if args.level is not None else (-3, 4)
    d_range = (-8, args.max_degree)
    rep = detection_check(args.rank, _module_bound(d_range[1], n_range[1]), n_range, d_range)
    if args.format == "json":
        obj = {"ok": rep.ok, "rank": rep.rank, "cells": rep.cells, "mismatches": rep.mismatches}
        return json.dumps(obj, indent=2, sort_keys=True) + "\n", 0 if rep.ok else 1
    status = "PASS" if rep.ok else "FAIL"
    return f"{status}: rank {rep.rank}, {rep.cells} cells, {len(rep.mismatches)} mismatches\n", 0 if rep.ok else 1


def _report(results, fmt):
    ok = all(r.ok for _, r in results)
    if fmt == "json":
        rows = [[k, r.name, r.ok, r.detail] for k, r in results]
        return render(["key", "check", "ok", "detail"], rows, fmt, {"ok": ok}), 0 if ok else 1
    if fmt == "csv":
        rows = [[k, r.name, int(r.ok), r.detail] for k, r in results]
        return render(["key", "check", "ok", "detail"], rows, fmt), 0 if ok else 1
    lines = [f"[{'PASS' if r.ok else 'FAIL'}] {k} {r.name}: {r.detail}" for k, r in results]
    lines.append("PASS" if ok else "FAIL")
    return "\n".join(lines) + "\n", 0 if ok else 1


def cmd_verify_pn(args):
    N = args.max_degree or 40
    return _report([("pn-splitting", V.check_pn_splitting(tuple(args.n or [1, 2, 3]), N))], args.format)


def cmd_verify_periodicity(args):
    N = args.max_degree or 40
    pairs = tuple((n + 4, n) for n in (args.n if args.n is not None else [0, 1]))
    return _report([("periodicity", V.check_periodicity(pairs, N))], args.format)


def cmd_verify_kunneth(args):
    ranks = (args.rank,) if args.rank else (1, 2, 3)
    return _report([("kunneth", V.check_kunneth(ranks, args.max_degree or 24))], args.format)


def cmd_verify_exact_couple(args):
    ranks = (args.rank,) if args.rank else (1, 2, 3, 4)
    N = args.max_degree or 26
    results = []
    for r in ranks:
        v = exact_couple_check(st_tu_couple(r, N))
        res = V.CheckResult(f"exact couple rank {r}", v.ok, f"{v.degrees} degrees checked, {len(v.failures)} failures")
        results.append((f"r{r}", res))
    return _report(results, args.format)


def cmd_verify_all(args):
    results = []
    for key, fn in V.CRITERIA + V.EXTRA:
        if fn is V.check_kernel:
            results.append((key, fn(seed=args.seed)))
        else:
            results.append((key, fn()))
    return _report(results, args.format)


# parser --------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=FORMATS, default="table")
    common.add_argument("--output", "-o", help="write to this file instead of stdout")
    common.add_argument("--threads", type=int, help="worker threads (default: A1KIT_THREADS or CPU count)")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized checks")

    def rank_opts(p, required=True, default_N=24):
        p.add_argument("--rank", "-r", type=int, required=required)
        p.add_argument("--max-degree", "-N", type=int, default=default_N)

    def module_opts(p, other=False):
        p.add_argument("--builtin", help="name of a built-in module, e.g. P, J, P0")
        p.add_argument("--input", help="module JSON file, or - for stdin")
        if other:
            p.add_argument("--other-builtin")
            p.add_argument("--other-input")
            p.add_argument("--shift", type=int, default=0, help="suspend the second module by this amount")
            p.add_argument("--max-iso-dim", type=int, default=64)
        p.add_argument("--max-degree", "-N", type=int, default=24, help="truncation for built-in modules")

    parser = argparse.ArgumentParser(prog="a1kit", description="Computations with modules over A(1) and the fundamental complex.")
    groups = parser.add_subparsers(dest="group", required=True, metavar="group")

    def leaf(group_parser, name, fn, help_text):
        p = group_parser.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(func=fn)
        return p

    g = groups.add_parser("a1", help="the algebra A(1)").add_subparsers(dest="cmd", required=True, metavar="command")
    leaf(g, "check", cmd_a1_check, "verify the presentation and list the basis")

    g = groups.add_parser("bv", help="cohomology of elementary abelian 2-groups").add_subparsers(dest="cmd", required=True, metavar="command")
    rank_opts(leaf(g, "cohomology", cmd_bv_cohomology, "dimensions of H(BV_r)"))

    g = groups.add_parser("module", help="operations on A(1)-modules").add_subparsers(dest="cmd", required=True, metavar="command")
    module_opts(leaf(g, "margolis", cmd_module_margolis, "Margolis Q0 and Q1 homology"))
    p = leaf(g, "syzygy", cmd_module_syzygy, "first syzygy, as module JSON")
    module_opts(p)
    p.add_argument("--times", type=int, default=1)
    module_opts(leaf(g, "split-free", cmd_module_split_free, "remove free summands"))
    module_opts(leaf(g, "stable-equal", cmd_module_stable_equal, "compare two modules up to free summands"), other=True)

    g = groups.add_parser("toda", help="the fundamental complex").add_subparsers(dest="cmd", required=True, metavar="command")
    p = leaf(g, "homology", cmd_toda_homology, "homology table on H(BV_r)")
    rank_opts(p)
    p.add_argument("--range", type=parse_range, default=(0, 3), help="levels n0..n1")
    p.add_argument("--degrees", type=parse_range, help="internal degrees d0..d1")
    p = leaf(g, "decalage", cmd_toda_decalage, "compare H on Sigma^-1 Omega M with H on M")
    module_opts(p)
    p.add_argument("--range", type=parse_range, default=(-3, 4))

    g = groups.add_parser("gk", help="Grothendieck group calculators").add_subparsers(dest="cmd", required=True, metavar="command")
    p = leaf(g, "decompose", cmd_gk_decompose, "exterior-power factors of a dimension sequence")
    p.add_argument("--dims", type=parse_ints, required=True, help="dim F(F^r) for r = 0, 1, ...")
    p.add_argument("--generalized", action="store_true", help="allow multiplicities above one")
    p = leaf(g, "figure2", cmd_gk_figure2, "closed-form homology entry")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--rank", "-r", type=int, default=1)

    g = groups.add_parser("ko", help="KO tables for BV_r").add_subparsers(dest="cmd", required=True, metavar="command")
    rank_opts(leaf(g, "tu", cmd_ko_tu, "dimensions of the image of Sq1Sq2Sq1"))
    rank_opts(leaf(g, "sq2h", cmd_ko_sq2h, "Sq2-homology of TU"))
    rank_opts(leaf(g, "st", cmd_ko_st, "TU/ST dimension accounting"))
    for name, fn, text in (("tables", cmd_ko_tables, "short exact sequence sizes"), ("detect", cmd_ko_detect, "detection cross-check")):
        p = leaf(g, name, fn, text)
        rank_opts(p)
        p.add_argument("--level", type=parse_range, help="levels n0..n1")

    g = groups.add_parser("verify", help="acceptance checks").add_subparsers(dest="cmd", required=True, metavar="command")
    p = leaf(g, "pn-splitting", cmd_verify_pn, "tensor powers of P against syzygies")
    p.add_argument("--n", type=parse_ints)
    p.add_argument("--max-degree", "-N", type=int)
    p = leaf(g, "periodicity", cmd_verify_periodicity, "P_{n+4} against Sigma^8 P_n")
    p.add_argument("--n", type=parse_ints)
    p.add_argument("--max-degree", "-N", type=int)
    rank_opts(leaf(g, "kunneth", cmd_verify_kunneth, "Kunneth decomposition of H(BV_r)"), required=False, default_N=None)
    rank_opts(leaf(g, "exact-couple", cmd_verify_exact_couple, "the ST/TU exact couple"), required=False, default_N=None)
    leaf(g, "all", cmd_verify_all, "run every acceptance check")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = RunConfig(
        command=f"{args.group} {args.cmd}",
        rank=getattr(args, "rank", None),
        max_degree=getattr(args, "max_degree", None),
        level_range=getattr(args, "level", None) or getattr(args, "range", None),
        fmt=args.format,
        output=args.output,
        threads=args.threads,
        seed=args.seed,
    )
    try:
        cfg.validate()
        if cfg.threads is not None:
            if cfg.threads < 1:
                raise UsageError("--threads must be at least 1")
            set_threads(cfg.threads)
        text, code = args.func(args)
    except (UsageError, WindowError) as e:
        parser.print_usage(sys.stderr)
        print(f"a1kit: error: {e}", file=sys.stderr)
        return 2
    if cfg.output:
        Path(cfg.output).write_text(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
