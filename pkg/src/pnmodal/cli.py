"""Command-line interface.

Exit codes: ``eval`` 0 true / 1 false; ``search`` 0 no countermodel / 1
countermodel found; ``check``, ``replicate`` and ``prove`` 0 on success,
1 on failure. Every command exits 2 on bad input or budget overrun.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from typing import Optional, Sequence

from . import model as M
from .formula import FormulaSyntaxError, parse, to_text
from .proof import ProofSyntaxError, check_proof, parse_proof, soundness_sweep
from .replicate import CASES, run_case
from .search import BUDGET, FOUND, SearchSpec, find_countermodel
from .semantics import BoxMode, EvalContext, EvaluationError, extension

EXIT_OK, EXIT_FAIL, EXIT_ERROR = 0, 1, 2


class UsageError(Exception):
    pass


def _emit(args, data: dict, lines: list[str]) -> None:
    if args.json:
        print(json.dumps(data, indent=2))
    else:
        print("\n".join(lines))


def _load(path: str):
    try:
        return M.load(path)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    except M.ModelFormatError as exc:
        raise UsageError(f"{path}: {exc}") from None


def _formula(text: str):
    try:
        return parse(text)
    except FormulaSyntaxError as exc:
        raise UsageError(f"formula: {exc}") from None


def cmd_eval(args) -> int:
    structure = _load(args.model)
    if not isinstance(structure, M.Model):
        raise UsageError(f"{args.model}: a model file (with 'valuation') is required")
    reports = M.validate_model(structure)
    bad = [r for r in reports if not r.holds]
    if bad:
        raise UsageError(f"{args.model}: not a well-formed model ({bad[0].condition} fails)")
    f = _formula(args.formula)
    ctx = EvalContext(structure, BoxMode(args.box_mode))
    if not 0 <= args.world < structure.frame.world_count:
        raise UsageError(f"world {args.world} out of range")
    ext = M.members(extension(ctx, f))
    verdict = args.world in ext
    _emit(args, {"formula": to_text(f), "world": args.world, "box_mode": args.box_mode,
                 "forces": verdict, "extension": ext},
          ["true" if verdict else "false", f"extension: {ext}"])
    return EXIT_OK if verdict else EXIT_FAIL


def _fmt_witness(w) -> str:
    if w is None:
        return ""
    return " ".join(str(sorted(x)) if isinstance(x, frozenset) else str(x) for x in w)


def cmd_check(args) -> int:
    path = args.model or args.frame or args.path
    if path is None:
        raise UsageError("check needs a model or frame file")
    structure = _load(path)
    model = structure if isinstance(structure, M.Model) else None
    frame = model.frame if model else structure
    reports = M.full_report(frame, model)
    essential = {"order-axioms", "cond1", "valuation-monotone"}
    ok = all(r.holds for r in reports if r.condition in essential)
    lines = [f"{'condition':<20} {'holds':<6} witness"]
    lines += [f"{r.condition:<20} {'yes' if r.holds else 'NO':<6} {_fmt_witness(r.witness)}".rstrip()
              for r in reports]
    _emit(args, {"file": path, "well_formed": ok, "reports": [r.to_json() for r in reports]}, lines)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_search(args) -> int:
    scheme = _formula(args.scheme)
    try:
        spec = SearchSpec(scheme, args.max_worlds, frozenset(args.require or ()),
                          BoxMode(args.box_mode), args.cap)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    outcome = find_countermodel(spec)
    if args.timing:
        print(f"elapsed: {outcome.stats.elapsed:.3f}s", file=sys.stderr)
    data = outcome.to_json(spec)
    lines = [f"scheme: {to_text(scheme)}", f"verdict: {outcome.verdict}",
             f"frames visited: {outcome.stats.frames_visited}",
             f"models visited: {outcome.stats.models_visited}"]
    if outcome.found:
        witness = outcome.witness_json(scheme)
        lines += [f"world: {outcome.world}",
                  f"assignment: {json.dumps(witness['assignment'])}",
                  f"countermodel: {json.dumps(outcome.model.frame.to_json())}"]
        if args.out != "-":
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(M.dumps(outcome.model, witness=witness) + "\n")
            lines.append(f"written: {args.out}")
    elif outcome.verdict == BUDGET:
        lines.append(f"error: {outcome.message}")
    _emit(args, data, lines)
    if outcome.verdict == BUDGET:
        return EXIT_ERROR
    return EXIT_FAIL if outcome.verdict == FOUND else EXIT_OK


def cmd_replicate(args) -> int:
    names = list(CASES) if args.name == "all" else [args.name]
    if args.name != "all" and args.name not in CASES:
        raise UsageError(f"unknown case {args.name!r}; known: all, {', '.join(CASES)}")
    results = [run_case(n) for n in names]
    passed = sum(r.passed for r in results)
    lines = []
    for r in results:
        lines.append(f"{'PASS' if r.passed else 'FAIL'}  {r.name}")
        for c in r.checks:
            mark = "ok " if c["ok"] else "BAD"
            lines.append(f"      [{mark}] {c['check']}: {c['actual']}"
                         + ("" if c["ok"] else f" (expected {c['expected']})"))
    lines.append(f"{passed}/{len(results)} cases pass")
    _emit(args, {"passed": passed, "total": len(results),
                 "cases": [r.to_json() for r in results]}, lines)
    return EXIT_OK if passed == len(results) else EXIT_FAIL


def cmd_prove(args) -> int:
    try:
        with open(args.proof, encoding="utf-8") as fh:
            lines_ = parse_proof(fh.read())
    except OSError as exc:
        raise UsageError(f"cannot read {args.proof}: {exc.strerror}") from None
    except ProofSyntaxError as exc:
        raise UsageError(f"{args.proof}: {exc}") from None
    report = check_proof(lines_)
    data = {"file": args.proof, "lines": len(lines_), **report.to_json()}
    out = [f"{'valid' if report.valid else 'invalid'} ({len(lines_)} lines)"]
    if report.first_error:
        out.append(f"line {report.first_error[0]}: {report.first_error[1]}")
    ok = report.valid
    if args.soundness_sweep and report.valid:
        sweep = soundness_sweep(lines_, args.max_worlds)
        data["sweep"] = sweep.to_json()
        out.append(f"soundness sweep (<= {args.max_worlds} worlds): "
                   + ("clean" if sweep.clean else f"VIOLATION {json.dumps(sweep.violation)}"))
        ok = ok and sweep.clean
    _emit(args, data, out)
    return EXIT_OK if ok else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pnmodal", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    modes = [BoxMode.STANDARD.value, BoxMode.SIMPLE.value]

    p = sub.add_parser("eval", parents=[common], help="evaluate a formula at a world")
    p.add_argument("--model", required=True)
    p.add_argument("--world", type=int, required=True)
    p.add_argument("--formula", required=True)
    p.add_argument("--box-mode", choices=modes, default="standard")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("check", parents=[common], help="report frame and model conditions")
    p.add_argument("path", nargs="?")
    p.add_argument("--model")
    p.add_argument("--frame")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("search", parents=[common], help="search small frames for a countermodel")
    p.add_argument("scheme")
    p.add_argument("--max-worlds", type=int, default=3)
    p.add_argument("--require", action="append", choices=["cond2", "star", "starstar"])
    p.add_argument("--box-mode", choices=modes, default="standard")
    p.add_argument("--cap", type=int, default=3, help="max neighborhoods per world")
    p.add_argument("--out", default="countermodel.json",
                   help="where to write a found countermodel ('-' to skip)")
    p.add_argument("--timing", action="store_true", help="print elapsed time to stderr")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("replicate", parents=[common], help="run the bundled replication cases")
    p.add_argument("name", help="case name or 'all'")
    p.set_defaults(func=cmd_replicate)

    p = sub.add_parser("prove", parents=[common], help="check a proof file")
    p.add_argument("proof")
    p.add_argument("--soundness-sweep", action="store_true")
    p.add_argument("--max-worlds", type=int, default=2)
    p.set_defaults(func=cmd_prove)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (UsageError, EvaluationError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
