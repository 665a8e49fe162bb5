"""Command-line driver: load a declaration file, run its directives,
or run the full admissibility pipeline, with text or structured output.

Exit codes: 0 all checks passed, 1 a check failed, 2 usage/parse error.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import List, Optional

from .admissibility import Outcome, OverallVerdict, check_admissible
from .printer import pp
from .rewriting import confluence_check, joinable, normalize
from .syntax import ElabError, LoadedFile, ParseError, load
from .terms import CacError, Environment, alpha_eq
from .typing import TypeChecker


def _emit(obj, as_json: bool, text: str) -> None:
    if as_json:
        print(json.dumps(obj, indent=2, sort_keys=True))
    else:
        print(text)


def _load_file(path: str, fuel: int) -> LoadedFile:
    with open(path, encoding="utf-8") as f:
        return load(f.read(), fuel=fuel)


def _parse_expr(loaded: LoadedFile, text: str, fuel: int):
    from .syntax import Elaborator, Parser, lex
    elab = Elaborator(fuel=fuel)
    elab.sig = loaded.signature
    elab.rules = loaded.rules
    parser = Parser(lex(text))
    term = parser.parse_term()
    tok = parser.peek()
    if tok.kind != "eof":
        raise ParseError(f"trailing input {tok.text!r}", tok.line, tok.col)
    return elab.term(term, {})


def cmd_check(args) -> int:
    loaded = _load_file(args.file, args.fuel)
    verdict = confluence_check(loaded.rules, loaded.signature, args.fuel,
                               loaded.assume_confluent)
    tc = TypeChecker(loaded.signature, loaded.rules, fuel=args.fuel,
                     confluent=verdict.positive)
    results = []
    ok = True
    for d in loaded.directives:
        entry = {"kind": d.kind, "line": d.line}
        try:
            if d.kind == "check":
                tc.check(Environment(), d.terms[0], d.terms[1])
                entry["outcome"] = "ok"
            elif d.kind == "normalize":
                nf = normalize(d.terms[0], loaded.rules, args.fuel)
                entry["outcome"] = "ok"
                entry["normal_form"] = pp(nf)
            else:  # convert
                conv = joinable(d.terms[0], d.terms[1], loaded.rules,
                                args.fuel, verdict.positive)
                entry["outcome"] = "ok" if conv else "failed"
                entry["detail"] = ("convertible" if conv
                                   else "no common reduct found")
                ok = ok and conv
        except CacError as e:
            entry["outcome"] = "failed"
            entry["detail"] = e.message
            ok = False
        results.append(entry)
    obj = {"file": args.file, "directives": results, "ok": ok}
    lines = []
    for r in results:
        line = f"{r['kind']} (line {r['line']}): {r['outcome']}"
        if "normal_form" in r:
            line += f" — {r['normal_form']}"
        if "detail" in r:
            line += f" — {r['detail']}"
        lines.append(line)
    lines.append("all checks passed" if ok else "some checks failed")
    _emit(obj, args.report == "structured", "\n".join(lines))
    return 0 if ok else 1


def cmd_admissibility(args) -> int:
    loaded = _load_file(args.file, args.fuel)
    report = check_admissible(
        loaded.signature, loaded.rules, fuel=args.fuel,
        assume_confluent=loaded.assume_confluent,
        assume_terminating=loaded.assume_terminating,
        force_non_algebraic=loaded.non_algebraic)
    _emit(report.to_dict(), args.report == "structured", report.to_text())
    if report.overall == OverallVerdict.ADMISSIBLE:
        if args.strict and _uses_sufficient(report):
            return 1
        return 0
    if report.overall == OverallVerdict.ADMISSIBLE_WITH_ASSERTIONS:
        return 1 if args.strict else 0
    return 1


def _uses_sufficient(report) -> bool:
    return any(c.outcome == Outcome.PASS_SUFFICIENT
               for conds in report.s_conditions.values()
               for c in conds.values())


def cmd_normalize(args) -> int:
    loaded = _load_file(args.file, args.fuel)
    codes = 0
    outputs = []
    for expr in args.expr:
        t = _parse_expr(loaded, expr, args.fuel)
        nf = normalize(t, loaded.rules, args.fuel)
        outputs.append({"input": expr, "normal_form": pp(nf)})
    _emit({"file": args.file, "results": outputs},
          args.report == "structured",
          "\n".join(o["normal_form"] for o in outputs))
    return codes


def cmd_convert(args) -> int:
    loaded = _load_file(args.file, args.fuel)
    if len(args.expr) != 2:
        print("convert requires exactly two -e expressions", file=sys.stderr)
        return 2
    verdict = confluence_check(loaded.rules, loaded.signature, args.fuel,
                               loaded.assume_confluent)
    a = _parse_expr(loaded, args.expr[0], args.fuel)
    b = _parse_expr(loaded, args.expr[1], args.fuel)
    conv = joinable(a, b, loaded.rules, args.fuel, verdict.positive)
    _emit({"file": args.file, "convertible": conv},
          args.report == "structured",
          "convertible" if conv else "not convertible")
    return 0 if conv else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="cac",
        description="Type checker and admissibility checker for a "
                    "calculus of constructions with rewrite rules")
    ap.add_argument("--fuel", type=int, default=10000,
                    help="reduction step budget (default 10000)")
    ap.add_argument("--report", choices=("text", "structured"),
                    default="text", help="output format")
    ap.add_argument("--strict", action="store_true",
                    help="treat asserted or sufficient-condition passes "
                         "as failures")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="load a file and run its directives")
    p.add_argument("file")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("admissibility",
                       help="run the full admissibility pipeline")
    p.add_argument("file")
    p.set_defaults(func=cmd_admissibility)

    p = sub.add_parser("normalize", help="normalize expressions")
    p.add_argument("file")
    p.add_argument("-e", "--expr", action="append", required=True,
                   help="expression to normalize")
    p.set_defaults(func=cmd_normalize)

    p = sub.add_parser("convert", help="test convertibility of two "
                                       "expressions")
    p.add_argument("file")
    p.add_argument("-e", "--expr", action="append", required=True,
                   help="expression (give twice)")
    p.set_defaults(func=cmd_convert)
    return ap


def main(argv: Optional[List[str]] = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code not in (0, None) else 0
    try:
        return args.func(args)
    except (ParseError, ElabError) as e:
        print(f"error: {e.message}", file=sys.stderr)
        return 2
    except FileNotFoundError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except CacError as e:
        print(f"error [{e.code}]: {e.message}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
