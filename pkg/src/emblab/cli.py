"""Command-line front end over the translations, deciders, and suites.

Exit codes are the machine contract: 0 success (or provable), 1 unprovable or
failed checks, 2 usage and parse errors, 3 precondition violations, 4 budget
exhaustion.  Everything here is a thin wrapper; the same inputs through the
library API give the same formulas and verdicts.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys

from .deciders import BudgetExhausted, Sequent, decide
from .generate import GenParams, gen_formula
from .suites import (
    DEFAULT_SEED,
    SUITE_IDS,
    replay_glivenko_chain,
    replay_markov_chain,
    run_suite,
    suite_default_params,
)
from .surface import ParseError, format_formula, parse
from .syntax import Formula, GammaContext, UnsupportedFormula
from .translations import (
    translate_dbox,
    translate_f,
    translate_ff,
    translate_ff_mea,
    translate_goedel,
    translate_negative,
    translate_rs,
)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_PRECONDITION = 3
EXIT_BUDGET = 4

_PLAIN_TRANSLATIONS = {
    "goedel": translate_goedel,
    "rs": translate_rs,
    "f": translate_f,
    "dbox": translate_dbox,
    "neg": translate_negative,
}

_CONTEXT_TRANSLATIONS = {
    "ff": translate_ff,
    "mea": translate_ff_mea,
}


def _env_budget() -> int | None:
    raw = os.environ.get("EMBLAB_BUDGET")
    if raw is None:
        return None
    try:
        value = int(raw)
        if value <= 0:
            raise ValueError
    except ValueError:
        print(f"EMBLAB_BUDGET must be a positive integer, got {raw!r}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE) from None
    return value


def _parse_or_exit(text: str, what: str = "formula") -> Formula:
    try:
        return parse(text)
    except ParseError as exc:
        print(f"{what}: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _cmd_translate(args: argparse.Namespace) -> int:
    source = _parse_or_exit(args.formula)
    try:
        if args.translation in _PLAIN_TRANSLATIONS:
            out = _PLAIN_TRANSLATIONS[args.translation](source)
        else:
            if not args.gamma or args.e is None:
                print(
                    f"translation {args.translation!r} needs --gamma and --e",
                    file=sys.stderr,
                )
                return EXIT_USAGE
            members = [_parse_or_exit(g, "gamma") for g in args.gamma]
            e = _parse_or_exit(args.e, "e")
            try:
                ctx = GammaContext.make(members, e)
            except ValueError as exc:
                print(str(exc), file=sys.stderr)
                return EXIT_PRECONDITION
            out = _CONTEXT_TRANSLATIONS[args.translation](source, ctx)
    except UnsupportedFormula as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_PRECONDITION
    print(format_formula(out))
    return EXIT_OK


def _cmd_decide(args: argparse.Namespace) -> int:
    goal = _parse_or_exit(args.formula)
    assumptions = tuple(_parse_or_exit(a, "assumption") for a in args.assume)
    try:
        verdict = decide(Sequent(assumptions, goal), args.logic, _env_budget())
    except UnsupportedFormula as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_PRECONDITION
    except BudgetExhausted as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_BUDGET
    if verdict.provable:
        print("provable")
        return EXIT_OK
    print("unprovable")
    if verdict.countermodel is not None:
        print(json.dumps(verdict.countermodel.to_json_dict(), sort_keys=True))
    return EXIT_CHECK_FAILED


def _cmd_verify(args: argparse.Namespace) -> int:
    params = suite_default_params(args.suite, args.seed)
    if args.max_depth is not None:
        params = dataclasses.replace(params, max_depth=args.max_depth)
    report = run_suite(args.suite, params, args.count, _env_budget())
    print(json.dumps(report.to_json_dict(), sort_keys=True))
    return EXIT_OK if not report.failures else EXIT_CHECK_FAILED


def _cmd_replay(args: argparse.Namespace) -> int:
    if args.chain == "markov":
        try:
            stages = replay_markov_chain()
        except AssertionError as exc:
            print(str(exc), file=sys.stderr)
            return EXIT_CHECK_FAILED
        for label, formula in stages:
            print(f"{label}: {format_formula(formula)}")
        return EXIT_OK
    if args.formula is None:
        print("replay --chain glivenko needs --formula", file=sys.stderr)
        return EXIT_USAGE
    source = _parse_or_exit(args.formula)
    try:
        stages = replay_glivenko_chain(source, _env_budget())
    except UnsupportedFormula as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_PRECONDITION
    except BudgetExhausted as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_BUDGET
    for logic, formula, verdict in stages:
        word = "provable" if verdict.provable else "unprovable"
        print(f"{logic}: {format_formula(formula)}: {word}")
    classical = stages[0][2].provable
    ok = not classical or all(v.provable for _, _, v in stages)
    return EXIT_OK if ok else EXIT_CHECK_FAILED


def _cmd_corpus(args: argparse.Namespace) -> int:
    params = GenParams(
        seed=args.seed,
        max_depth=args.max_depth,
        num_atoms=args.num_atoms,
        allow_box=args.modal,
    )
    for index in range(args.count):
        print(format_formula(gen_formula(params, index)))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="emblab",
        description="translate, decide, and verify formulas across logics",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("translate", help="apply a named translation to a formula")
    p.add_argument("formula")
    p.add_argument(
        "--translation",
        required=True,
        choices=sorted(_PLAIN_TRANSLATIONS | _CONTEXT_TRANSLATIONS),
    )
    p.add_argument("--gamma", action="append", default=[], help="context member (repeatable)")
    p.add_argument("--e", default=None, help="distinguished context member")
    p.set_defaults(func=_cmd_translate)

    p = sub.add_parser("decide", help="decide provability of a sequent")
    p.add_argument("formula")
    p.add_argument("--logic", required=True, choices=("cpc", "ipc", "s4"))
    p.add_argument("--assume", action="append", default=[], help="assumption (repeatable)")
    p.set_defaults(func=_cmd_decide)

    p = sub.add_parser("verify", help="run a property suite and print its JSON report")
    p.add_argument("--suite", required=True, choices=SUITE_IDS)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--count", type=int, default=None)
    p.add_argument("--max-depth", type=int, default=None)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("replay", help="replay a staged derivation chain")
    p.add_argument("--chain", required=True, choices=("markov", "glivenko"))
    p.add_argument("--formula", default=None)
    p.set_defaults(func=_cmd_replay)

    p = sub.add_parser("corpus", help="emit generated formulas, one per line")
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--max-depth", type=int, default=5)
    p.add_argument("--num-atoms", type=int, default=4)
    p.add_argument("--modal", action="store_true", help="allow the necessity operator")
    p.set_defaults(func=_cmd_corpus)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
