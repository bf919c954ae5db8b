"""Command-line front end.

Subcommands: analyze, cohomology, involutive, restrict, reduce, descend,
char, e1table, verify (thm1 | thm2 | corollary).  Exit codes: 0 success,
1 parse error, 2 degree cap exceeded or order profile uncertified within the
cap, 3 invalid arguments.  Reports are deterministic for fixed input and
flags; seeds and caps are always echoed so genericity verdicts replay.
"""

from __future__ import annotations

import argparse
import sys

from . import dsl
from .cohomology import (
    acyclicity,
    cohomology_table,
    e1_grid,
    is_involutive,
    make_frame,
    property_i1,
    property_i2,
    property_i3,
)
from .characteristics import UnsupportedPencil, char_report, pencil_char_search
from .report import cohomology_entries, empty_report, render_json, render_text
from .system import (
    CapExceeded,
    Precondition,
    SymbolicSystem,
    descend,
    descend_fixpoint,
    equivalence_reduce,
    from_equations,
    order_profile,
    restrict_system,
)
from .theorems import corollary_euler_check, verify_thm1, verify_thm2

EXIT_OK = 0
EXIT_PARSE = 1
EXIT_CAP = 2
EXIT_ARGS = 3


class _ArgumentError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _ArgumentError(message)


def build_parser() -> _Parser:
    parser = _Parser(prog="spdelta",
                     description="Exact Spencer delta-cohomology calculator "
                                 "for constant-coefficient PDE symbols")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, needs_file=True):
        if needs_file:
            p.add_argument("file", help="input .spd file")
        p.add_argument("--max-degree", type=int, default=8,
                       help="degree cap for computed levels (default 8)")
        p.add_argument("--seed", type=int, default=0,
                       help="seed for generic-basis choices (default 0)")
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.add_argument("--field", choices=("q", "qi"), default="qi",
                       help="field for characteristic root reporting")
        p.add_argument("--vstar", help="covectors spanning V*, e.g. 'dx, dy+dz'")
        p.add_argument("--w", help="vectors spanning W, e.g. '@x - @y'")
        p.add_argument("--order", type=int,
                       help="order k for the equivalence reduction")
        p.add_argument("--m", type=int, help="m for the acyclicity check")
        p.add_argument("--l", type=int,
                       help="complex degree l for the E_1 table")

    for name in ("analyze", "cohomology", "involutive", "restrict", "reduce",
                 "descend", "char", "e1table"):
        common(sub.add_parser(name))
    verify = sub.add_parser("verify")
    verify.add_argument("which", choices=("thm1", "thm2", "corollary"))
    common(verify)
    return parser


def _load(args) -> tuple[dsl.EquationSet, SymbolicSystem]:
    with open(args.file, encoding="utf-8") as handle:
        text = handle.read()
    eqs = dsl.parse(text)
    system = from_equations(eqs, args.max_degree, label=args.file)
    return eqs, system


def _subspace(args, eqs, attr: str, mode: str):
    raw = getattr(args, attr if attr != "w" else "w")
    if raw is None:
        raise _ArgumentError(f"--{attr} is required for this command")
    return dsl.parse_subspace(raw, mode, list(eqs.variables))


def _system_summary(report: dict, g: SymbolicSystem) -> None:
    prof = order_profile(g)
    report["orders"] = list(prof.orders)
    report["multiplicities"] = [{"r": r, "m": prof.multiplicity[r]}
                                for r in prof.orders]
    report["cohomology"] = cohomology_entries(cohomology_table(g))


def _involutive_section(g: SymbolicSystem, seed: int) -> dict:
    inv = is_involutive(g, seed=seed)
    return {
        "verdict": inv.involutive,
        "agrees_with_cohomology": inv.agrees,
        "per_order": [
            {"order": k,
             "verdict": res.verdict,
             "attempts": res.attempts,
             "seed": res.seed,
             "cohomology_vanishes": inv.cohomology_check.get(k)}
            for k, res in sorted(inv.per_order.items())],
    }


def _char_section(g, vstar_rows, field_name) -> dict:
    rep = char_report(g, vstar_rows)
    section = {
        "weakly_char": rep.weakly_char,
        "strongly_char": rep.strongly_char,
        "weakly_nonchar": rep.weakly_nonchar,
        "strongly_nonchar": rep.strongly_nonchar,
        "k_char": rep.k_char,
        "k_nonchar": rep.k_nonchar,
        "witness_weak": rep.witness_weak,
        "witness_strong": rep.witness_strong,
        "restriction_iso": rep.restriction_iso,
        "pencil": None,
    }
    try:
        res = pencil_char_search(g, vstar_rows, field=field_name)
        section["pencil"] = {
            "exists": res.exists,
            "covector": res.covector,
            "witness": res.witness,
            "gcd_degree": res.gcd_degree,
            "every_covector": res.every_covector,
        }
    except UnsupportedPencil:
        section["pencil"] = None
    return section


def run(argv) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _ArgumentError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_ARGS

    report = empty_report(getattr(args, "command", "?"), args.seed,
                          args.max_degree, args.field)
    out = sys.stdout

    def emit(code: int) -> int:
        text = render_json(report) if args.format == "json" else \
            render_text(report)
        out.write(text)
        return code

    try:
        eqs, g = _load(args)
    except FileNotFoundError as err:
        report["errors"] = f"cannot read input: {err}"
        return emit(EXIT_ARGS)
    except dsl.ParseError as err:
        report["errors"] = str(err)
        return emit(EXIT_PARSE)
    except CapExceeded as err:
        report["errors"] = str(err)
        return emit(EXIT_CAP)
    report["input"] = dsl.pretty_print(eqs).strip().replace("\n", " ; ")

    try:
        exit_code = EXIT_OK
        prof = order_profile(g)
        if not prof.certified_within_cap:
            report["errors"] = ("order profile not certified within the cap; "
                                "raise --max-degree")
            exit_code = EXIT_CAP

        if args.command == "analyze":
            _system_summary(report, g)
            report["involutive"] = _involutive_section(g, args.seed)
            report["i_properties"] = {
                "I1": {"verdict": property_i1(g).verdict},
                "I2": {"verdict": property_i2(g, seed=args.seed).verdict},
                "I3": {"verdict": property_i3(g, seed=args.seed).verdict},
            }
            if args.m is not None:
                res = acyclicity(g, args.m)
                report["acyclicity"] = {"m": args.m, "verdict": res.verdict,
                                        "violations": res.violations}
            if args.vstar:
                rows = _subspace(args, eqs, "vstar", "covectors")
                report["char"] = _char_section(g, rows, args.field)

        elif args.command == "cohomology":
            _system_summary(report, g)

        elif args.command == "involutive":
            _system_summary(report, g)
            report["involutive"] = _involutive_section(g, args.seed)

        elif args.command == "restrict":
            rows = _subspace(args, eqs, "w", "vectors")
            restricted = restrict_system(g, rows)
            _system_summary(report, restricted)
            report["restriction"] = {"dims": restricted.dims(),
                                     "w": args.w}

        elif args.command == "reduce":
            if args.order is None:
                raise _ArgumentError("--order is required for reduce")
            reduced = equivalence_reduce(g, args.order)
            _system_summary(report, reduced)
            report["reduction"] = {"order": args.order, "nu_hat": reduced.nu,
                                   "dims": reduced.dims()}

        elif args.command == "descend":
            _system_summary(report, g)
            dg = descend(g)
            fp = descend_fixpoint(g)
            report["descend"] = {
                "dims": dg.dims(),
                "fixpoint_steps": fp.steps,
                "cap_exhausted": fp.cap_exhausted,
                "fixpoint_dims": fp.system.dims(),
            }

        elif args.command == "char":
            rows = _subspace(args, eqs, "vstar", "covectors")
            _system_summary(report, g)
            report["char"] = _char_section(g, rows, args.field)

        elif args.command == "e1table":
            rows = _subspace(args, eqs, "vstar", "covectors")
            frame = make_frame(g, rows)
            if args.l is not None:
                ls = [args.l]
            else:
                top = (prof.r_max or 1) * 2 + 1
                ls = list(range(1, min(top, g.cap) + 1))
            tables = []
            for l in ls:
                cells = [{"p": p, "q": q, "e1": e1, "e2": e2}
                         for (p, q), (e1, e2) in sorted(e1_grid(frame, l).items())]
                tables.append({"l": l, "cells": cells})
            report["e1"] = {"tables": tables}

        elif args.command == "verify":
            rows = _subspace(args, eqs, "vstar", "covectors")
            if args.which == "thm1":
                res = verify_thm1(g, rows, seed=args.seed)
                report["thm1"] = {
                    "hypotheses_met": res.hypotheses_met,
                    "failing_hypotheses": res.failing_hypotheses,
                    "all_match": res.all_match,
                    "mismatches": res.mismatches,
                    "cells": res.cells,
                    "restriction_involutive": res.restriction_involutive,
                }
            elif args.which == "thm2":
                res = verify_thm2(g, rows, seed=args.seed,
                                  field_name=args.field)
                report["thm2"] = {
                    "strongly_char": res.strongly_char,
                    "pencil_exists": res.pencil_exists,
                    "covector": res.covector,
                    "equivalence_holds": res.equivalence_holds,
                    "partial": res.partial,
                    "hypothesis_violated": res.hypothesis_violated,
                }
            else:
                frame = make_frame(g, rows)
                base = max(0, (prof.r_min or 1) - 1)
                cells = []
                for i in range(base, min(g.cap - 1, base + 2) + 1):
                    for j in range(g.n + 1):
                        res = corollary_euler_check(g, rows, i, j, frame=frame,
                                                    seed=args.seed)
                        if not res.applicable:
                            continue
                        cells.append({"i": i, "j": j,
                                      "euler_sum": res.euler_sum,
                                      "holds": res.holds,
                                      "hypotheses_met": res.hypotheses_met})
                report["corollary"] = {"cells": cells}
        return emit(exit_code)
    except dsl.ParseError as err:
        report["errors"] = str(err)
        return emit(EXIT_PARSE)
    except CapExceeded as err:
        report["errors"] = str(err)
        return emit(EXIT_CAP)
    except (_ArgumentError, Precondition, UnsupportedPencil, ValueError) as err:
        report["errors"] = str(err)
        return emit(EXIT_ARGS)


def main() -> None:
    sys.exit(run(sys.argv[1:]))
