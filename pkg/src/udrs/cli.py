"""Command-line front end: validate, enumerate readings, decide consequence,
evaluate boxes against models, and apply disambiguating transforms.

Exit codes
    0   success / positive verdict
    1   negative verdict (not entailed, false in the model, inconsistent)
    2   usage or parse error
    3   the structure itself is ill-formed (validation failure, or a
        transform that the structure does not license)

The default model-size bound is 3 atoms; the environment variable
UDRS_MODEL_BOUND overrides it, and an explicit ``--bound`` flag overrides
both.

With ``--format machine`` every output line is ``key value...`` and readings
print as blocks separated by blank lines:

    count 2

    reading 1
    spine l l1 l2
    gap l2 0
    tag l0 d
    bind k1 X
    sense b0 0 borrow
    drs [ | ...]

Diagnostics always go to stderr; verdict data goes to stdout.
"""

from __future__ import annotations

import argparse
import os
import sys
from typing import Callable, Sequence

from . import plural, textio
from .entail import coindex, entails
from .errors import ParseError, UdrsError
from .readings import Reading, apply_reading, enumerate_readings
from .semantics import (
    ConsistentWitness,
    Model,
    NoModelUpTo,
    QUANTIFIER_REGISTRY,
    SyntacticClash,
    check_consistency,
    drs_true,
)
from .structure import Database, Term, Udrs, validate

DEFAULT_BOUND = 3

GEN_MODES: dict[str, Callable[[int, int], bool]] = {
    "strict-majority": lambda total, good: 2 * good > total,
    "universal": lambda total, good: good == total,
}


class _Usage(UdrsError):
    """A problem with how the tool was invoked rather than with the input."""


def _read(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise _Usage(f"cannot read {path}: {exc.strerror or exc}") from None


def _bound(args: argparse.Namespace) -> int:
    if getattr(args, "bound", None) is not None:
        n = args.bound
    else:
        env = os.environ.get("UDRS_MODEL_BOUND", "")
        if env:
            try:
                n = int(env)
            except ValueError:
                raise _Usage(f"UDRS_MODEL_BOUND={env!r} is not an integer") from None
        else:
            n = DEFAULT_BOUND
    if n < 1:
        raise _Usage(f"the model bound must be at least 1, got {n}")
    return n


def _machine(args: argparse.Namespace) -> bool:
    return args.format == "machine"


# --- subcommands ----------------------------------------------------------------


def _cmd_validate(args: argparse.Namespace) -> int:
    db = textio.parse_database(_read(args.file))
    violations = validate(db)
    if not violations:
        print("ok")
        return 0
    for v in violations:
        print(v, file=sys.stderr)
    return 3


def _reading_lines(r: Reading, drss: Sequence) -> list[str]:
    lines = []
    for cl, sp in r.spines:
        if sp:
            lines.append(f"spine {cl} {' '.join(sp)}")
    for node, gap in r.gaps:
        lines.append(f"gap {node} {gap}")
    for verb, tags in r.tags:
        lines.append(f"tag {verb} {','.join(tags)}")
    for pron, ref in r.binds:
        lines.append(f"bind {pron} {ref}")
    for (label, i), sense in r.senses:
        lines.append(f"sense {label} {i} {sense}")
    lines.extend(f"drs {d}" for d in drss)
    return lines


def _cmd_readings(args: argparse.Namespace) -> int:
    db = textio.parse_database(_read(args.file))
    if db.goal is not None:
        db = Database(db.sentences + (db.goal,))
    fams = enumerate_readings(db)
    if _machine(args):
        print(f"count {len(fams)}")
        for i, r in enumerate(fams, 1):
            print()
            print(f"reading {i}")
            for line in _reading_lines(r, apply_reading(db, r)):
                print(line)
    else:
        print(f"{len(fams)} reading{'s' if len(fams) != 1 else ''}")
        for i, r in enumerate(fams, 1):
            print(f"--- reading {i}: {r.describe()}")
            for d in apply_reading(db, r):
                print(d)
    return 0


def _cmd_entail(args: argparse.Namespace) -> int:
    db = textio.parse_database(_read(args.db))
    goal = db.goal
    if args.goal is not None:
        goal = textio.parse_udrs(_read(args.goal))
    if goal is None:
        raise _Usage("no goal: pass --goal FILE or put a goal block in the database")
    report = entails(Database(db.sentences), goal, bound=_bound(args))
    if _machine(args):
        print(f"verdict {'entailed' if report.holds else 'not-entailed'}")
        print(f"bound {report.bound}")
        print(f"models {report.models_checked}")
        print(f"families {report.families}")
        if not report.holds:
            print(f"reading {report.counterreading.describe()}")
            for line in str(report.countermodel).split("\n"):
                print(f"model {line}")
    else:
        print(report)
    return 0 if report.holds else 1


def _cmd_check(args: argparse.Namespace) -> int:
    d = textio.parse_drs(_read(args.drs))
    m = textio.parse_model(_read(args.model), name=args.model)
    result = drs_true(m, d)
    if _machine(args):
        print(f"verdict {'true' if result else 'false'}")
    else:
        print("true" if result else "false")
    return 0 if result else 1


def _cmd_consistency(args: argparse.Namespace) -> int:
    d = textio.parse_drs(_read(args.drs))
    outcome = check_consistency(d, bound=_bound(args))
    if not _machine(args):
        print(outcome)
        return 0 if outcome.consistent else 1
    if isinstance(outcome, ConsistentWitness):
        print("verdict consistent")
        for line in str(outcome.model).split("\n"):
            print(f"model {line}")
        for t, e in outcome.assignment:
            print(f"assign {t} {'+'.join(sorted(e))}")
        return 0
    if isinstance(outcome, SyntacticClash):
        print("verdict clash")
        print(f"detail {outcome.detail}")
        return 1
    assert isinstance(outcome, NoModelUpTo)
    print("verdict no-model")
    print(f"bound {outcome.bound}")
    return 1


def _want(args_list: list[str], n: int, usage: str) -> list[str]:
    if len(args_list) != n:
        raise _Usage(f"this op takes {usage}")
    return args_list


def _cmd_transform(args: argparse.Namespace) -> int:
    db = textio.parse_database(_read(args.file))
    a = args.args
    op = args.op
    result: Udrs | Database
    if op in ("distribute", "collectivize", "genericize"):
        (label,) = _want(a, 1, "one box label")
        result = getattr(plural, op)(db, label)
    elif op == "cumulate":
        subj, obj = _want(a, 2, "two box labels: subject object")
        result = plural.cumulate(db, subj, obj)
    elif op == "resolve":
        pron, target = _want(a, 2, "a pronoun box label and a referent name")
        result = plural.resolve_pronoun(db, pron, target)
    elif op == "abstract":
        pron, dep_ref, licensing = _want(
            a, 3, "a pronoun box label, the covarying referent, and the licensing duplex label"
        )
        result = plural.abstract_antecedent(db, pron, dep_ref, licensing)
    elif op == "coindex":
        l, k, index = _want(a, 3, "two clause labels and an index name")
        result = coindex(db, l, k, index)
    elif op == "dep":
        if len(a) < 3:
            raise _Usage(
                "this op takes two verb box labels followed by term mappings like 'nu(Xi)->alpha(X)'"
            )
        k0, l0 = a[0], a[1]
        pi: dict[Term, Term] = {}
        for pair in a[2:]:
            if "->" not in pair:
                raise _Usage(f"mapping {pair!r} must look like 'term->term'")
            lhs, rhs = pair.split("->", 1)
            pi[textio.parse_term(lhs.strip())] = textio.parse_term(rhs.strip())
        result = plural.mark_dependent(db, k0, l0, pi)
    else:  # pragma: no cover - argparse restricts choices
        raise _Usage(f"unknown op {op!r}")
    if isinstance(result, Udrs):
        result = Database((result,))
    text = textio.print_database(result)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


# --- argument parsing and dispatch ------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="udrs",
        description="validate, disambiguate and evaluate underspecified discourse structures",
    )
    ap.add_argument(
        "--format", choices=("text", "machine"), default="text", help="output style"
    )
    ap.add_argument(
        "--gen-mode",
        choices=sorted(GEN_MODES),
        default="strict-majority",
        help="meaning of the generic quantifier",
    )
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("validate", help="check well-formedness of a sentence file")
    p.add_argument("file")
    p.set_defaults(fn=_cmd_validate)

    p = sub.add_parser("readings", help="enumerate readings and their boxes")
    p.add_argument("file")
    p.set_defaults(fn=_cmd_readings)

    p = sub.add_parser("entail", help="bounded consequence from a database to a goal")
    p.add_argument("--db", required=True)
    p.add_argument("--goal")
    p.add_argument("--bound", type=int)
    p.set_defaults(fn=_cmd_entail)

    p = sub.add_parser("check", help="evaluate a fully specified box in a model")
    p.add_argument("--drs", required=True)
    p.add_argument("--model", required=True)
    p.set_defaults(fn=_cmd_check)

    p = sub.add_parser("consistency", help="search for a model of a box")
    p.add_argument("--drs", required=True)
    p.add_argument("--bound", type=int)
    p.set_defaults(fn=_cmd_consistency)

    p = sub.add_parser(
        "transform", help="apply one monotonic disambiguation step and print the result"
    )
    p.add_argument("file")
    p.add_argument(
        "--op",
        required=True,
        choices=(
            "distribute",
            "collectivize",
            "genericize",
            "cumulate",
            "resolve",
            "abstract",
            "coindex",
            "dep",
        ),
    )
    p.add_argument("--args", nargs="+", default=[])
    p.add_argument("--out", help="write the result here instead of stdout")
    p.set_defaults(fn=_cmd_transform)

    return ap


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    QUANTIFIER_REGISTRY["gen"] = GEN_MODES[args.gen_mode]
    try:
        return args.fn(args)
    except (_Usage, ParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except UdrsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


run = main


if __name__ == "__main__":
    raise SystemExit(main())
