"""Command-line driver: ``logdmod run <file>`` and ``logdmod selftest``."""

from __future__ import annotations

import argparse
import json
import sys

from .chart import StratumComponent
from .charvar import ch_report, char_ideal, restrict_to_stratum, split_by_support
from .comalg import CommIdeal
from .duality import dual_degree_support_bounds, lowest_dual_degree, verdier_dual
from .frontend import ParseError, emit_report, parse_polynomial, parse_problem
from .ncgb import (complex_from_module, free_resolution, is_zero_module, left_gb, format_vec,
                   simplified)
from .perverse import (UNDETERMINED, gabber_filtration, is_log_perverse, p_coherent,
                       perverse_truncate, sato_kashiwara)
from .selftest import check_restriction, run_selftest

EXIT_OK, EXIT_PARSE, EXIT_ANALYSIS, EXIT_UNDETERMINED = 0, 2, 3, 4


class AnalysisError(RuntimeError):
    pass


def _ideal(J: CommIdeal) -> list[str]:
    return sorted(J.formatted())


def _module_summary(M) -> dict:
    S = simplified(M)
    return {"rank": S.rank, "rows": S.formatted_rows(), "zero": is_zero_module(S),
            "char_ideal": _ideal(char_ideal(S))}


def _complex_summary(C) -> dict:
    out = {}
    for k in C.degrees():
        H = C.cohomology(k)
        if not is_zero_module(H):
            out[str(k)] = _module_summary(H)
    return out


def _task_check(M, opts, ctx):
    return {"rank": M.rank, "side": M.side, "localized": sorted(M.localized),
            "rows": M.formatted_rows(), "zero": is_zero_module(M)}


def _task_gb(M, opts, ctx):
    order = opts.get("order", ctx["order"])
    gb = left_gb(M.chart, M.left_rows(), order)
    return {"order": order, "basis": [format_vec(g, M.rank, M.chart) for g in gb]}


def _task_resolve(M, opts, ctx):
    F = free_resolution(M, opts.get("order", ctx["order"]))
    return {"ranks": {str(k): F.rank(k) for k in F.degrees()}, "complex": F.formatted(),
            "is_complex": F.check()}


def _task_charvar(M, opts, ctx):
    d = ch_report(M).as_dict()
    d["char_ideal"] = sorted(d["char_ideal"])
    d["support"] = sorted(d["support"])
    return d


def _task_holonomic(M, opts, ctx):
    r = ch_report(M)
    return {"holonomic": r.holonomic, "logdim_ch": r.logdim}


def _task_dual(M, opts, ctx):
    _left_only(M)
    D = verdier_dual(M)
    degrees = {}
    for k in D.nonzero_degrees():
        degrees[str(k)] = _module_summary(D.cohomology(k))
    return {"degrees": degrees,
            "lowest_degree": lowest_dual_degree(M),
            "degree_bounds": [{"degree": b.degree, "dim_ch": b.dim_ch, "bound": b.bound,
                               "ok": b.ok} for b in dual_degree_support_bounds(M)]}


def _task_restrict(M, opts, ctx):
    _left_only(M)
    T = frozenset(int(s) for s in opts["stratum"].split(","))
    comp = StratumComponent(M.chart, T)
    pieces = {str(k): _module_summary(H) for k, H in restrict_to_stratum(M, comp)}
    return {"stratum": comp.label(), "cohomology": pieces,
            "degree0_matches_restricted_ch": check_restriction(M, comp)}


def _task_split(M, opts, ctx):
    _left_only(M)
    k = int(opts["k"])
    zs = [parse_polynomial(p, M.chart) for p in opts.get("z", "1").split(",")]
    try:
        S = split_by_support(M, k, CommIdeal(M.chart, zs), ctx["max_split_exponent"])
    except ValueError as exc:
        raise AnalysisError(str(exc)) from None
    return {"n": S.n, "G_generators": [format_vec(g, M.rank, M.chart) for g in S.generators],
            "ch_G": _ideal(S.ch_G), "ch_G_prime": _ideal(S.ch_G_prime)}


def _task_perverse(M, opts, ctx):
    _left_only(M)
    if opts.get("dual") == "true":
        C = verdier_dual(M).complex
    else:
        C = complex_from_module(M, int(opts.get("degree", "0")))
    out = is_log_perverse(C).as_dict()
    pc = p_coherent(C)
    out["p_coherent"] = UNDETERMINED if pc is None else pc
    if "level" in opts:
        tr = perverse_truncate(C, int(opts["level"]))
        if tr == UNDETERMINED:
            out["truncation"] = UNDETERMINED
        else:
            out["truncation"] = {"le": _complex_summary(tr[0]), "gt": _complex_summary(tr[1])}
    return out


def _task_gabber(M, opts, ctx):
    _left_only(M)
    if opts.get("method") == "dual-route":
        return sato_kashiwara(M).as_dict()
    return gabber_filtration(M).as_dict()


def _left_only(M):
    if M.localized:
        raise AnalysisError("this task does not accept localized presentations")


TASK_RUNNERS = {
    "check": _task_check, "gb": _task_gb, "resolve": _task_resolve, "charvar": _task_charvar,
    "holonomic": _task_holonomic, "dual": _task_dual, "restrict": _task_restrict,
    "split": _task_split, "perverse": _task_perverse, "gabber": _task_gabber,
}


def _has_undetermined(obj) -> bool:
    if obj == UNDETERMINED:
        return True
    if isinstance(obj, dict):
        return any(_has_undetermined(v) for v in obj.values())
    if isinstance(obj, list):
        return any(_has_undetermined(v) for v in obj)
    return False


def run_problem(text: str, order: str = "pot", max_split_exponent: int = 32) -> tuple[list, object]:
    """Parse and execute a problem; returns (results, problem)."""
    pf = parse_problem(text)
    ctx = {"order": order, "max_split_exponent": max_split_exponent}
    results = []
    for t in pf.tasks:
        M = pf.modules[t.module]
        try:
            body = TASK_RUNNERS[t.command](M, t.options, ctx)
        except (ValueError, ArithmeticError) as exc:
            raise AnalysisError(f"task {t.command} {t.module} (line {t.line}): {exc}") from exc
        entry = {"task": t.command, "module": t.module}
        if t.options:
            entry["options"] = dict(sorted(t.options.items()))
        entry.update(body)
        results.append(entry)
    return results, pf


def _cmd_run(args) -> int:
    try:
        with open(args.file, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        print(f"logdmod: cannot read {args.file}: {exc}", file=sys.stderr)
        return EXIT_PARSE
    try:
        results, pf = run_problem(text, args.order, args.max_split_exponent)
    except ParseError as exc:
        print(f"logdmod: {args.file}: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except AnalysisError as exc:
        print(f"logdmod: {args.file}: {exc}", file=sys.stderr)
        return EXIT_ANALYSIS
    sys.stdout.write(emit_report(results, args.format, pf.chart, pf.chart_label))
    if args.strict and _has_undetermined(results):
        print("logdmod: undetermined result encountered", file=sys.stderr)
        return EXIT_UNDETERMINED
    return EXIT_OK


def _cmd_selftest(args) -> int:
    rep = run_selftest(args.seed, args.bernstein, args.restriction, args.duality)
    sys.stdout.write(json.dumps(rep.as_dict(), sort_keys=True, indent=2) + "\n")
    return EXIT_OK if rep.ok else EXIT_ANALYSIS


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="logdmod",
                                description="Logarithmic D-modules on affine log charts.")
    sub = p.add_subparsers(dest="cmd", required=True)
    r = sub.add_parser("run", help="run the tasks of a problem file")
    r.add_argument("file")
    r.add_argument("--format", choices=("json", "text"), default="json")
    r.add_argument("--order", choices=("pot", "top", "symbols"), default="pot",
                   help="default module order for gb and resolve tasks")
    r.add_argument("--strict", action="store_true",
                   help="exit with status 4 when any result is undetermined")
    r.add_argument("--max-split-exponent", type=int, default=32)
    r.add_argument("--seed", type=int, default=0, help="accepted for symmetry; run is deterministic")
    r.set_defaults(func=_cmd_run)
    s = sub.add_parser("selftest", help="seeded random-instance property checks")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--bernstein", type=int, default=50)
    s.add_argument("--restriction", type=int, default=20)
    s.add_argument("--duality", type=int, default=20)
    s.set_defaults(func=_cmd_selftest)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
