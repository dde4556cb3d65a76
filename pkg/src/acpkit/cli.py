"""Command-line front end.

Exit codes: 0 success (or Equal), 1 NotEqual, 2 validation failure,
3 budget exhausted / Inconclusive, 4 parse error.
"""

from __future__ import annotations

import argparse
import os
import sys

from .bisim import InconclusiveTruncated, bisimilar, render_witness
from .comm import CommError, validate_comm
from .linearize import StateBudgetExceeded, linearize
from .rewrite import DEFAULT_FUEL, FuelExhausted, render_trace
from .sos import export_aut, export_lts, generate_lts
from .syntax import ParseError, parse, pretty_spec, pretty_term
from .terms import (
    DEFAULT_UNFOLD_BUDGET,
    Rec,
    SpecError,
    validate_spec,
)

EXIT_OK = 0
EXIT_NOT_EQUAL = 1
EXIT_VALIDATION = 2
EXIT_BUDGET = 3
EXIT_PARSE = 4


class _CliFailure(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _load(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise _CliFailure(EXIT_PARSE, f"{path}: {exc}")
    try:
        return parse(text)
    except ParseError as exc:
        raise _CliFailure(EXIT_PARSE, f"{path}: {exc}")


def _validated(sf, args):
    try:
        comm = sf.comm_fn()
        validate_comm(comm)
    except CommError as exc:
        raise _CliFailure(EXIT_VALIDATION, str(exc))
    try:
        validated = validate_spec(sf.processes, unfold_budget=args.unfold_budget)
    except SpecError as exc:
        raise _CliFailure(EXIT_VALIDATION, str(exc))
    return validated, comm


def _pick_root(sf, args, path: str) -> str:
    root = getattr(args, "root", None) or sf.root
    if root is None:
        raise _CliFailure(EXIT_VALIDATION, f"{path}: no root given (use root directive or --root)")
    if root not in sf.processes.variables():
        raise _CliFailure(EXIT_VALIDATION, f"{path}: root {root!r} has no proc declaration")
    return root


def cmd_check(args) -> int:
    sf = _load(args.file)
    failures = []
    try:
        comm = sf.comm_fn()
        validate_comm(comm)
    except CommError as exc:
        failures.append(str(exc))
    try:
        validate_spec(sf.processes, unfold_budget=args.unfold_budget)
    except SpecError as exc:
        failures.append(str(exc))
    if failures:
        for message in failures:
            print(f"FAIL: {message}")
        return EXIT_VALIDATION
    print("OK")
    return EXIT_OK


def cmd_linearize(args) -> int:
    sf = _load(args.file)
    validated, comm = _validated(sf, args)
    root = _pick_root(sf, args, args.file)
    try:
        result = linearize(
            validated,
            root,
            comm,
            max_states=args.max_states,
            memo=not args.no_memo,
            fuel=args.fuel,
            keep_traces=args.trace,
        )
    except StateBudgetExceeded as exc:
        raise _CliFailure(EXIT_BUDGET, str(exc))
    except FuelExhausted as exc:
        raise _CliFailure(EXIT_BUDGET, str(exc))
    if sf.alphabet:
        print("act " + ", ".join(sf.alphabet) + ";")
    for a, b, c in sf.comm_entries:
        print(f"comm {a} | {b} = {'delta' if c is None else c};")
    print(pretty_spec(result.spec))
    print(f"root {result.root};")
    print("// state map:")
    for name, term in result.state_map:
        print(f"//   {name} = {pretty_term(term)}")
    if args.stats:
        stats = result.stats
        print(
            f"// stats: stages={stats.stages} equations={stats.equations} "
            f"merged_branches={stats.merged_branches}"
        )
    if args.trace:
        for name, trace in result.traces:
            print(f"// trace for {name}:")
            for line in render_trace(trace).splitlines():
                print(f"//   {line}")
    return EXIT_OK


def cmd_lts(args) -> int:
    sf = _load(args.file)
    validated, comm = _validated(sf, args)
    root = _pick_root(sf, args, args.file)
    lts = generate_lts(Rec(root, validated.spec), comm, max_states=args.max_states)
    text = export_aut(lts) if args.format == "aut" else export_lts(lts)
    sys.stdout.write(text)
    return EXIT_BUDGET if lts.truncated else EXIT_OK


def cmd_prove(args) -> int:
    verdicts = []
    for path, root_arg in ((args.file1, args.root1), (args.file2, args.root2)):
        sf = _load(path)
        validated, comm = _validated(sf, args)
        if root_arg not in sf.processes.variables():
            raise _CliFailure(EXIT_VALIDATION, f"{path}: root {root_arg!r} has no proc declaration")
        try:
            result = linearize(
                validated, root_arg, comm, max_states=args.max_states, fuel=args.fuel
            )
        except (StateBudgetExceeded, FuelExhausted):
            print("Inconclusive: state or fuel budget exhausted during linearization")
            return EXIT_BUDGET
        lts = generate_lts(
            Rec(result.root, result.spec), comm, max_states=args.max_states
        )
        verdicts.append(lts)
    lts1, lts2 = verdicts
    try:
        equal, witness = bisimilar(lts1, 0, lts2, 0)
    except InconclusiveTruncated:
        print("Inconclusive: state budget exhausted during exploration")
        return EXIT_BUDGET
    if equal:
        print("Equal")
        return EXIT_OK
    print("NotEqual")
    print(f"witness: {render_witness(witness)}")
    return EXIT_NOT_EQUAL


def build_parser() -> argparse.ArgumentParser:
    default_max_states = int(os.environ.get("ACPKIT_MAX_STATES", "10000"))
    parser = argparse.ArgumentParser(
        prog="acpkit", description="process algebra toolkit: check, linearize, explore, prove"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--max-states", type=int, default=default_max_states)
        p.add_argument("--fuel", type=int, default=DEFAULT_FUEL)
        p.add_argument("--unfold-budget", type=int, default=DEFAULT_UNFOLD_BUDGET)

    p = sub.add_parser("check", help="validate a process file")
    p.add_argument("file")
    common(p)
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("linearize", help="reduce to a linear specification")
    p.add_argument("file")
    p.add_argument("--root")
    p.add_argument("--no-memo", action="store_true")
    p.add_argument("--stats", action="store_true")
    p.add_argument("--trace", action="store_true")
    p.add_argument("--format", choices=["acp"], default="acp")
    common(p)
    p.set_defaults(fn=cmd_linearize)

    p = sub.add_parser("lts", help="generate and export the transition system")
    p.add_argument("file")
    p.add_argument("--root")
    p.add_argument("--format", choices=["lts", "aut"], default="lts")
    common(p)
    p.set_defaults(fn=cmd_lts)

    p = sub.add_parser("prove", help="decide equality of two rooted processes")
    p.add_argument("file1")
    p.add_argument("root1")
    p.add_argument("file2")
    p.add_argument("root2")
    common(p)
    p.set_defaults(fn=cmd_prove)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.max_states < 1 or args.fuel < 1 or args.unfold_budget < 0:
        print("error: budgets must be positive", file=sys.stderr)
        return EXIT_VALIDATION
    try:
        return args.fn(args)
    except _CliFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
