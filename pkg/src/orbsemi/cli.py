"""Command-line front end.

Subcommands: ``eval`` (expression evaluation over loaded tables),
``check-axioms`` / ``check-props`` (bounded verification runs),
``check-labeling`` (labeling laws plus extent-embedding checks),
``decompose`` (transformation factorization) and ``embed`` (the
representation pipeline).

Exit codes: 0 all checks pass, 1 check failure, 2 usage or IO error,
3 no failures but some check was vacuous.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import exprlang
from .labeling import check_embedding, check_labeling, singleton_labeling
from .mutants import MUTANTS, make_mutant
from .orbital import (
    AXIOM_IDS,
    DERIVED_IDS,
    SampleConfig,
    check_axiom,
    check_derived,
)
from .representation import RepCaps, represent
from .tables import TableAlgebra
from .tableio import load_table, table_to_csv, table_to_grid, table_to_json
from .transforms import decompose as decompose_transform
from .transforms import compose, format_transform, is_folding, is_injective
from .transforms import is_partial_identity, parse_transform


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="orbsemi")
    sub = p.add_subparsers(dest="command", required=True)

    pe = sub.add_parser("eval", help="evaluate a relational expression")
    pe.add_argument("expression")
    pe.add_argument("--tables", nargs="*", default=[],
                    help="table files (CSV or JSON); the stem becomes the name")
    pe.add_argument("--ground", help="comma-separated ground atoms")
    pe.add_argument("--format", choices=["grid", "csv", "json"], default="grid")

    def check_args(sp, with_mutate=True):
        sp.add_argument("--ground", default="a,b")
        sp.add_argument("--window", type=int, default=3)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--cases", type=int, default=400)
        sp.add_argument("--only", help="comma-separated check ids")
        sp.add_argument("--all", action="store_true",
                        help="run every check (the default)")
        sp.add_argument("--format", choices=["text", "json"], default="text")
        if with_mutate:
            sp.add_argument("--mutate", choices=sorted(MUTANTS),
                            help="run against a broken variant")

    pa = sub.add_parser("check-axioms", help="run the thirteen axiom checks")
    check_args(pa)

    pp = sub.add_parser("check-props", help="run the derived-property checks")
    check_args(pp)

    pl = sub.add_parser("check-labeling",
                        help="labeling laws and extent-embedding checks")
    check_args(pl, with_mutate=False)
    pl.add_argument("--level", choices=["quasi", "full"], default="full")

    pd = sub.add_parser("decompose",
                        help="factor a transformation into folding, bijection "
                             "and partial identity")
    pd.add_argument("transform", help="e.g. '{x1->x3, x2->x3}' or 'pi{x1,x2}'")
    pd.add_argument("--format", choices=["text", "json"], default="text")

    pm = sub.add_parser("embed", help="run the representation pipeline")
    pm.add_argument("--ground", default="a")
    pm.add_argument("--window", type=int, default=3)
    pm.add_argument("--seed", type=int, default=0)
    pm.add_argument("--cases", type=int, default=200)
    pm.add_argument("--depth", type=int, default=2)
    pm.add_argument("--caps",
                    help="comma-separated overrides: symbols=N,stratum=N,vars=N")
    pm.add_argument("--format", choices=["text", "json"], default="json")

    return p


def _parse_ground(text):
    atoms = frozenset(a.strip() for a in text.split(",") if a.strip())
    if not atoms:
        raise ValueError(f"empty ground set: {text!r}")
    return atoms


def _sample_config(args) -> SampleConfig:
    return SampleConfig(var_window=args.window, seed=args.seed, cases=args.cases)


def _exit_for(reports) -> int:
    if any(not r.passed for r in reports):
        return 1
    if any(r.vacuous for r in reports):
        return 3
    return 0


def _emit_reports(reports, fmt, out):
    if fmt == "json":
        json.dump({"checks": [r.to_json() for r in reports]}, out, indent=2)
        out.write("\n")
    else:
        for r in reports:
            out.write(r.summary() + "\n")


def _selected(args, known):
    if args.only:
        ids = [s.strip() for s in args.only.split(",") if s.strip()]
        unknown = [s for s in ids if s not in known]
        if unknown:
            raise ValueError(f"unknown check ids {unknown} (known: {list(known)})")
        return ids
    return list(known)


def _cmd_eval(args, out) -> int:
    env = {}
    ground = _parse_ground(args.ground) if args.ground else None
    for path in args.tables:
        T = load_table(path, ground=ground)
        env[Path(path).stem] = T
    if ground is None:
        grounds = {T.ground for T in env.values()}
        if len(grounds) != 1:
            raise ValueError("pass --ground, or table files sharing one ground set")
        ground = next(iter(grounds))
    expr = exprlang.parse(args.expression)
    result = exprlang.eval_expr(expr, env, ground)
    if args.format == "grid":
        out.write(table_to_grid(result) + "\n")
    elif args.format == "csv":
        out.write(table_to_csv(result))
    else:
        json.dump(table_to_json(result), out, indent=2)
        out.write("\n")
    return 0


def _cmd_check(args, out, ids, runner) -> int:
    inst = TableAlgebra(_parse_ground(args.ground))
    if getattr(args, "mutate", None):
        inst = make_mutant(args.mutate, inst)
    cfg = _sample_config(args)
    reports = [runner(inst, cid, cfg) for cid in _selected(args, ids)]
    _emit_reports(reports, args.format, out)
    return _exit_for(reports)


def _cmd_check_labeling(args, out) -> int:
    inst = TableAlgebra(_parse_ground(args.ground))
    cfg = _sample_config(args)
    alpha = singleton_labeling(inst)
    reports = check_labeling(alpha, args.level, cfg) + check_embedding(alpha, cfg)
    if args.only:
        wanted = {s.strip() for s in args.only.split(",")}
        reports = [r for r in reports if r.check_id in wanted]
        if not reports:
            raise ValueError(f"no checks match --only {args.only!r}")
    _emit_reports(reports, args.format, out)
    return _exit_for(reports)


def _cmd_decompose(args, out) -> int:
    f = parse_transform(args.transform)
    delta, sigma, pi = decompose_transform(f)
    recomposed = compose(pi, compose(sigma, delta))
    ok = (recomposed == f and is_folding(delta) and is_injective(sigma)
          and is_partial_identity(pi))
    if args.format == "json":
        json.dump({
            "input": format_transform(f),
            "folding": format_transform(delta),
            "bijection": format_transform(sigma),
            "partial_identity": format_transform(pi),
            "recomposition_ok": ok,
        }, out, indent=2)
        out.write("\n")
    else:
        out.write(f"input:            {format_transform(f)}\n")
        out.write(f"folding:          {format_transform(delta)}\n")
        out.write(f"bijection:        {format_transform(sigma)}\n")
        out.write(f"partial identity: {format_transform(pi)}\n")
        out.write(f"recomposition:    {'ok' if ok else 'MISMATCH'}\n")
    return 0 if ok else 1


def _parse_caps(text, depth) -> RepCaps:
    caps = RepCaps(depth=depth)
    if not text:
        return caps
    keys = {"symbols": "max_symbols", "stratum": "max_terms_per_stratum",
            "vars": "max_symbol_vars"}
    for part in text.split(","):
        k, _, v = part.partition("=")
        k = k.strip()
        if k not in keys or not v.strip().isdigit():
            raise ValueError(f"bad caps entry {part!r} (expected key=N with key "
                             f"in {sorted(keys)})")
        setattr(caps, keys[k], int(v))
    return caps


def _cmd_embed(args, out) -> int:
    inst = TableAlgebra(_parse_ground(args.ground))
    cfg = _sample_config(args)
    caps = _parse_caps(args.caps, args.depth)
    report = represent(inst, cfg, caps)
    if args.format == "json":
        json.dump(report.to_json(), out, indent=2)
        out.write("\n")
    else:
        out.write(f"H strata sizes: {report.strata_sizes}\n")
        out.write(f"symbols: {report.symbol_count}"
                  f"{' (truncated)' if report.symbols_truncated else ''}\n")
        out.write(f"quotient classes: {report.quotient_classes}\n")
        for r in report.checks:
            out.write(r.summary() + "\n")
        if report.error:
            out.write(f"error: {report.error}\n")
    if report.error:
        return 2
    if not report.passed:
        return 1
    if report.vacuous_only:
        return 3
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code else 0
    out = sys.stdout
    try:
        if args.command == "eval":
            return _cmd_eval(args, out)
        if args.command == "check-axioms":
            return _cmd_check(args, out, AXIOM_IDS, check_axiom)
        if args.command == "check-props":
            return _cmd_check(args, out, DERIVED_IDS, check_derived)
        if args.command == "check-labeling":
            return _cmd_check_labeling(args, out)
        if args.command == "decompose":
            return _cmd_decompose(args, out)
        if args.command == "embed":
            return _cmd_embed(args, out)
        parser.error(f"unknown command {args.command!r}")
    except (ValueError, OSError, KeyError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    return 2


if __name__ == "__main__":
    sys.exit(main())
