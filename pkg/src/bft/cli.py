"""
Command-line driver.

    bft validate FILE
    bft condition --rule RULE --bba NAME --given EXPR|EVENT [--class-alpha F ...] FILE
    bft compare --bba NAME --given EXPR|EVENT [--class-alpha F ...] FILE
    bft combine --left NAME --right NAME FILE

Exit codes: 0 ok, 2 usage error, 3 invalid scenario, 4 undefined
conditioning, 5 I/O error.
"""

from __future__ import annotations

import argparse
import sys
from typing import Sequence

from . import render
from .algebra import AlgebraError, parse_expr
from .conditioning import (
    ClassParams,
    InvalidFactorError,
    RuleId,
    UndefinedConditioning,
    compare_all,
    condition,
    resolve_factor,
)
from .fusion import conjunctive_combine
from .mass import ConditioningEvent, MassFunction, point_mass, vacuous
from .scenario import Scenario, ScenarioError, ScenarioIOError, read_scenario

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INVALID = 3
EXIT_UNDEFINED = 4
EXIT_IO = 5


class UsageError(Exception):
    pass


def resolve_bba(scenario: Scenario, name: str) -> MassFunction:
    """A named bba; ``vacuous`` is always available unless the file defines it."""
    if name in scenario.bbas:
        return scenario.bbas[name]
    if name == "vacuous":
        return vacuous(scenario.frame)
    known = ", ".join(sorted(scenario.bbas)) or "none"
    raise UsageError(f"unknown bba {name!r} (scenario defines: {known})")


def resolve_event(scenario: Scenario, given: str) -> ConditioningEvent:
    """An event name from the scenario, else a set expression."""
    if given in scenario.events:
        return scenario.events[given]
    try:
        return ConditioningEvent(parse_expr(given, scenario.frame))
    except AlgebraError as exc:
        raise UsageError(f"--given: {exc}") from None
    except ValueError as exc:
        raise UsageError(f"--given {given!r}: {exc}") from None


def _class_params(m: MassFunction, alpha: Sequence[str], beta: Sequence[str]) -> ClassParams | None:
    if not alpha and not beta:
        return None
    try:
        return ClassParams(
            tuple(resolve_factor(n, m) for n in alpha),
            tuple(resolve_factor(n, m) for n in beta),
        )
    except InvalidFactorError as exc:
        raise UsageError(str(exc)) from None


def cmd_condition(
    scenario: Scenario,
    bba_name: str,
    event_expr: str,
    rule: "RuleId | str",
    fmt: str = "tsv",
    class_alpha: Sequence[str] = (),
    class_beta: Sequence[str] = (),
) -> tuple[str, int]:
    m = resolve_bba(scenario, bba_name)
    event = resolve_event(scenario, event_expr)
    try:
        rule = RuleId(str(rule).upper())
    except ValueError:
        raise UsageError(f"unknown rule {rule!r}") from None
    params = _class_params(m, class_alpha, class_beta)
    try:
        report = condition(m, event, rule, params)
    except UndefinedConditioning as exc:
        return f"undefined: {exc}\n", EXIT_UNDEFINED
    except InvalidFactorError as exc:
        raise UsageError(str(exc)) from None
    return render.render_report(report, fmt), EXIT_OK


def cmd_compare(
    scenario: Scenario,
    bba_name: str,
    event_expr: str,
    fmt: str = "tsv",
    class_alpha: Sequence[str] = (),
    class_beta: Sequence[str] = (),
) -> tuple[str, int]:
    m = resolve_bba(scenario, bba_name)
    event = resolve_event(scenario, event_expr)
    params = _class_params(m, class_alpha, class_beta)
    combined, _ = conjunctive_combine(m, point_mass(event.element))
    rows = [
        {"label": bba_name, "kind": "input", "masses": m},
        {"label": "conjunctive", "kind": "combination", "masses": combined},
    ]
    try:
        outcomes = compare_all(m, event, params)
    except InvalidFactorError as exc:
        raise UsageError(str(exc)) from None
    for outcome in outcomes:
        if isinstance(outcome, UndefinedConditioning):
            rows.append({"label": outcome.rule.value, "kind": "rule", "reason": outcome.reason})
        else:
            rows.append({"label": outcome.rule.value, "kind": "rule", "masses": outcome.result})
    return render.render_comparison(event.element, rows, fmt), EXIT_OK


def cmd_combine(scenario: Scenario, left: str, right: str, fmt: str = "tsv") -> tuple[str, int]:
    m1 = resolve_bba(scenario, left)
    m2 = resolve_bba(scenario, right)
    combined, ledger = conjunctive_combine(m1, m2)
    return render.render_combination(left, right, combined, ledger, fmt), EXIT_OK


def cmd_validate(path) -> tuple[str, int]:
    try:
        scenario, issues = read_scenario(path)
    except ScenarioIOError as exc:
        return f"{exc}\n", EXIT_IO
    if issues:
        lines = [f"{path}: {len(issues)} problem(s)"] + [f"  {issue}" for issue in issues]
        return "\n".join(lines) + "\n", EXIT_INVALID
    return (
        f"{path}: ok ({scenario.frame.n} atoms, {scenario.frame.model.kind} model, "
        f"{len(scenario.bbas)} bba(s), {len(scenario.events)} event(s))\n",
        EXIT_OK,
    )


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bft", description="Belief-function conditioning and combination."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a scenario file")
    p.add_argument("file")

    def common(p, with_class=True):
        p.add_argument("--format", choices=render.FORMATS, default="tsv")
        if with_class:
            p.add_argument("--class-alpha", action="append", default=[], metavar="FACTOR",
                           help="CLASS weight factor: mass, cardinality or constant:<v>")
            p.add_argument("--class-beta", action="append", default=[], metavar="FACTOR",
                           help="CLASS inverse weight factor")
        p.add_argument("file")

    p = sub.add_parser("condition", help="apply one conditioning rule")
    p.add_argument("--rule", required=True, type=str.upper, choices=[r.value for r in RuleId])
    p.add_argument("--bba", required=True)
    p.add_argument("--given", required=True, help="event name or set expression")
    common(p)

    p = sub.add_parser("compare", help="apply every rule side by side")
    p.add_argument("--bba", required=True)
    p.add_argument("--given", required=True, help="event name or set expression")
    common(p)

    p = sub.add_parser("combine", help="conjunctive combination of two bbas")
    p.add_argument("--left", required=True)
    p.add_argument("--right", required=True)
    common(p, with_class=False)
    return parser


def run(argv: Sequence[str] | None = None) -> tuple[str, str, int]:
    """Parse arguments and execute; returns (stdout, stderr, exit code)."""
    args = _parser().parse_args(argv)
    if args.command == "validate":
        text, status = cmd_validate(args.file)
        return (text, "", status) if status == EXIT_OK else ("", text, status)
    try:
        scenario, issues = read_scenario(args.file)
    except ScenarioIOError as exc:
        return "", f"bft: {exc}\n", EXIT_IO
    if issues:
        return "", str(ScenarioError(args.file, issues)) + "\n", EXIT_INVALID
    try:
        if args.command == "condition":
            text, status = cmd_condition(
                scenario, args.bba, args.given, args.rule, args.format,
                args.class_alpha, args.class_beta,
            )
        elif args.command == "compare":
            text, status = cmd_compare(
                scenario, args.bba, args.given, args.format, args.class_alpha, args.class_beta
            )
        else:
            text, status = cmd_combine(scenario, args.left, args.right, args.format)
    except UsageError as exc:
        return "", f"bft: {exc}\n", EXIT_USAGE
    if status != EXIT_OK:
        return "", text, status
    return text, "", status


def main(argv: Sequence[str] | None = None) -> int:
    out, err, status = run(argv)
    if out:
        sys.stdout.write(out)
    if err:
        sys.stderr.write(err)
    return status


if __name__ == "__main__":
    sys.exit(main())
