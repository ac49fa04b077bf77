"""Command-line surface.

Every command prints either stable text or a single JSON document with a
``schema`` field; identical invocations produce byte-identical output.
Budgets come from flags, falling back to the QCHAR_FM_STEPS,
QCHAR_PROCESS_STEPS and QCHAR_ENUM_NODES environment variables, then to
the built-in defaults.

Exit codes: 0 success/agreement, 2 parse or usage error, 3 replay or
sweep mismatch, 4 budget-limited (partial) result.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .cartan import DiagramError, parse_diagram
from .expansion import (
    DEFAULT_FM_STEPS,
    DEFAULT_PROCESS_STEPS,
    INCONCLUSIVE,
    NOT_SPECIAL,
    fm_algorithm,
)
from .monomials import (
    format_monomial,
    monomial_to_json,
    parse_monomial,
    witness_to_json,
)
from .smallness import (
    DEFAULT_ENUM_NODES,
    Budgets,
    check_small_empirical,
    classify,
    enumerate_dominant_below,
    verify_counterexamples,
)

SCHEMA = "qchar/1"

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_MISMATCH = 3
EXIT_PARTIAL = 4


def _env_default(name, fallback):
    raw = os.environ.get(name)
    if raw is None:
        return fallback
    try:
        value = int(raw)
    except ValueError as exc:
        raise DiagramError(f"environment variable {name} must be an integer") from exc
    if value <= 0:
        raise DiagramError(f"environment variable {name} must be positive")
    return value


def _add_common(p):
    p.add_argument("--r", type=int, default=0, help="base spectral power (default 0)")
    p.add_argument("--fm-steps", type=int, default=None)
    p.add_argument("--process-steps", type=int, default=None)
    p.add_argument("--enum-nodes", type=int, default=None)
    p.add_argument("--format", choices=("text", "json"), default="text")


def _budgets(args) -> Budgets:
    fm = args.fm_steps if args.fm_steps else _env_default("QCHAR_FM_STEPS", DEFAULT_FM_STEPS)
    pr = (args.process_steps if args.process_steps
          else _env_default("QCHAR_PROCESS_STEPS", DEFAULT_PROCESS_STEPS))
    en = (args.enum_nodes if args.enum_nodes
          else _env_default("QCHAR_ENUM_NODES", DEFAULT_ENUM_NODES))
    for v in (fm, pr, en):
        if v <= 0:
            raise DiagramError("budgets must be positive")
    return Budgets(fm_steps=fm, process_steps=pr, enum_nodes=en)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qchar",
        description="Exact q-character computations and the smallness "
                    "classifier for Kirillov-Reshetikhin standard modules.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="closed-form smallness verdict")
    p.add_argument("--g", "--diagram", dest="g", required=True)
    p.add_argument("--i", dest="i", type=int, required=True)
    p.add_argument("--k", dest="k", type=int, required=True)
    p.add_argument("--empirical", action="store_true",
                   help="also run the character-level verification")
    _add_common(p)

    p = sub.add_parser("qchar", help="character of a simple module via the "
                                     "Frenkel-Mukhin closure")
    p.add_argument("--g", "--diagram", dest="g", required=True)
    p.add_argument("monomial", help="dominant monomial, e.g. '1_0' or '1_1 3_1 2_4'")
    _add_common(p)

    p = sub.add_parser("enumerate", help="dominant monomials below a string")
    p.add_argument("--g", "--diagram", dest="g", required=True)
    p.add_argument("--i", dest="i", type=int, required=True)
    p.add_argument("--k", dest="k", type=int, required=True)
    _add_common(p)

    p = sub.add_parser("verify-remarks",
                       help="replay the built-in non-smallness pipelines")
    _add_common(p)

    p = sub.add_parser("sweep", help="empirical vs closed-form verdict table")
    p.add_argument("--g", "--diagrams", dest="g", required=True,
                   help="comma list with ranges, e.g. 'A1..A4,D4'")
    p.add_argument("--kmax", type=int, required=True)
    _add_common(p)
    return parser


def _parse_diagram_list(spec):
    out = []
    for chunk in spec.split(","):
        chunk = chunk.strip()
        if ".." in chunk:
            lo, hi = chunk.split("..", 1)
            lo_c, hi_c = parse_diagram(lo), parse_diagram(hi)
            lo_series, hi_series = lo.strip()[0].upper(), hi.strip()[0].upper()
            if lo_series != hi_series or lo_c.affine or hi_c.affine:
                raise DiagramError(f"bad diagram range {chunk!r}")
            lo_rank = int(lo.strip()[1:])
            hi_rank = int(hi.strip()[1:])
            for rank in range(lo_rank, hi_rank + 1):
                out.append(parse_diagram(f"{lo_series}{rank}"))
        else:
            out.append(parse_diagram(chunk))
    return out


def _emit(doc, args, text_lines):
    if args.format == "json":
        print(json.dumps(doc, indent=2))
    else:
        for line in text_lines:
            print(line)


def _cmd_classify(args):
    c = parse_diagram(args.g)
    verdict = classify(c, args.i, args.k)
    if not args.empirical:
        _emit({"schema": SCHEMA, "command": "classify", "diagram": c.name,
               "node": args.i, "k": args.k, "theoretical": verdict},
              args, [verdict])
        return EXIT_OK
    cell = check_small_empirical(c, args.i, args.k, args.r, _budgets(args))
    doc = {"schema": SCHEMA, "command": "classify"}
    doc.update(cell.to_json())
    lines = [verdict,
             f"empirical: {cell.empirical.verdict} "
             f"({len(cell.empirical.entries)} dominant monomials, "
             f"{len(cell.empirical.not_special)} not special, "
             f"{len(cell.empirical.undetermined)} undetermined)",
             f"agree: {'yes' if cell.agree else 'no'}"]
    _emit(doc, args, lines)
    if cell.empirical.partial_enumeration or cell.empirical.undetermined:
        return EXIT_PARTIAL
    return EXIT_OK if cell.agree else EXIT_MISMATCH


def _cmd_qchar(args):
    c = parse_diagram(args.g)
    m = parse_monomial(args.monomial)
    if not m.is_dominant():
        raise DiagramError(f"monomial {format_monomial(m)} is not dominant")
    b = _budgets(args)
    rep = fm_algorithm(c, m, budget=b.fm_steps, process_budget=b.process_steps)
    doc = {"schema": SCHEMA, "command": "qchar", "diagram": c.name}
    doc.update(rep.to_json())
    if rep.verdict == NOT_SPECIAL:
        lines = ["NotSpecial", f"witness {format_monomial(rep.witness)}"]
        for s in rep.chain:
            lines.append(f"  {format_monomial(s.root)} --[{s.node}]--> "
                         f"{format_monomial(s.result)}")
        _emit(doc, args, lines)
        return EXIT_OK
    if rep.verdict == INCONCLUSIVE:
        _emit(doc, args, ["Inconclusive", rep.diagnostic or ""])
        return EXIT_PARTIAL
    _emit(doc, args, [rep.qchar.to_text()])
    return EXIT_OK


def _cmd_enumerate(args):
    c = parse_diagram(args.g)
    b = _budgets(args)
    enum = enumerate_dominant_below(c, args.i, args.k, args.r, budget=b.enum_nodes)
    doc = {"schema": SCHEMA, "command": "enumerate", "diagram": c.name,
           "node": args.i, "k": args.k, "r": args.r,
           "count": len(enum.entries), "partial": enum.partial,
           "entries": [{"monomial": monomial_to_json(m),
                        "text": format_monomial(m),
                        "witness_table": witness_to_json(w)}
                       for m, w in enum.entries]}
    lines = [f"{len(enum.entries)} dominant monomials"]
    lines += [format_monomial(m) for m, _ in enum.entries]
    if enum.partial:
        lines.append("WARNING: enumeration budget exhausted (partial)")
    _emit(doc, args, lines)
    return EXIT_PARTIAL if enum.partial else EXIT_OK


def _cmd_verify_remarks(args):
    results = verify_counterexamples(_budgets(args))
    doc = {"schema": SCHEMA, "command": "verify-remarks",
           "results": [{"name": r.name, "passed": r.passed, "details": r.details}
                       for r in results],
           "passed": sum(r.passed for r in results),
           "total": len(results)}
    lines = []
    for r in results:
        lines.append(f"{'PASS' if r.passed else 'FAIL'} {r.name}")
        if not r.passed:
            lines += [f"  {d}" for d in r.details]
    lines.append(f"{doc['passed']}/{doc['total']} replays passed")
    _emit(doc, args, lines)
    return EXIT_OK if doc["passed"] == doc["total"] else EXIT_MISMATCH


def _cmd_sweep(args):
    diagrams = _parse_diagram_list(args.g)
    b = _budgets(args)
    cells = []
    for c in diagrams:
        for i in c.nodes:
            for k in range(1, args.kmax + 1):
                cells.append(check_small_empirical(c, i, k, args.r, b))
    doc = {"schema": SCHEMA, "command": "sweep", "kmax": args.kmax,
           "cells": [cell.to_json() for cell in cells],
           "all_agree": all(cell.agree for cell in cells)}
    lines = []
    partial = False
    for cell in cells:
        emp = cell.empirical
        lines.append(f"{cell.diagram} i={cell.node} k={cell.k}: "
                     f"theoretical={cell.theoretical} empirical={emp.verdict} "
                     f"agree={'yes' if cell.agree else 'no'}")
        partial = partial or emp.partial_enumeration or bool(emp.undetermined)
    lines.append("all cells agree" if doc["all_agree"] else "DISAGREEMENT found")
    _emit(doc, args, lines)
    if not doc["all_agree"]:
        return EXIT_MISMATCH
    return EXIT_PARTIAL if partial else EXIT_OK


_COMMANDS = {
    "classify": _cmd_classify,
    "qchar": _cmd_qchar,
    "enumerate": _cmd_enumerate,
    "verify-remarks": _cmd_verify_remarks,
    "sweep": _cmd_sweep,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code not in (0, None) else 0
    try:
        return _COMMANDS[args.command](args)
    except (DiagramError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
