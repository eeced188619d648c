"""``justcheck`` command line.

Exit status: 0 on success or when a property holds, 1 when it fails (or a
system is invalid, or states are not bisimilar), 2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import catalog
from .bisim import strong_bisimilar
from .ccs import Action, ParseError, StateBudgetExceeded, BlockingViolation, DEFAULT_MAX_STATES, \
    explore, format_process, parse
from .clts import CLTS, export_dot, load_json, to_json, validate, format_comps
from .liveness import Criterion, check_liveness, liveness_matrix
from .runs import MalformedRun, classify, parse_run

VERBS = ("parse", "lts", "validate", "classify", "liveness", "matrix", "bisim", "dot", "catalog")


class InputError(Exception):
    pass


def _blocking(text):
    if text is None:
        return None
    return frozenset(Action.parse(a) for a in text.split(",") if a.strip())


def _add_source(p: argparse.ArgumentParser, required: bool = True):
    g = p.add_mutually_exclusive_group(required=required)
    g.add_argument("--example", metavar="NAME", help="catalog system (see `justcheck catalog`)")
    g.add_argument("--ccs", metavar="FILE", help="CCS script defining main")
    g.add_argument("--clts", metavar="FILE", help="CLTS in JSON form")
    p.add_argument("--blocking", metavar="A,B", help="blocking actions (default for CCS: every visible action)")
    p.add_argument("--max-states", type=int, default=DEFAULT_MAX_STATES, help="exploration budget for CCS")


def _load(args) -> tuple[CLTS, dict]:
    blocking = _blocking(args.blocking)
    if args.example:
        c, goals = catalog.load_example(args.example)
    elif args.ccs:
        env, main = parse(Path(args.ccs).read_text(encoding="utf-8"))
        c = explore(main, env, blocking, args.max_states)
        return c, {}
    else:
        c, goals = load_json(args.clts)
    if blocking is not None:
        c = CLTS(c.states, c.transitions, c.initial, blocking, c.terms, c.name)
    return c, goals


def _goal(c: CLTS, goals: dict, text: str) -> frozenset:
    if text in goals:
        return goals[text]
    try:
        return frozenset(c.state(s.strip()) for s in text.split(",") if s.strip())
    except KeyError as exc:
        known = ", ".join(goals) or "none"
        raise InputError(f"{exc.args[0]}; named goals: {known}") from None


def _emit(args, text: str, doc):
    if args.json:
        print(json.dumps(doc, indent=1, ensure_ascii=False))
    else:
        print(text, end="" if text.endswith("\n") else "\n")


def _describe(c: CLTS) -> str:
    lines = [f"{len(c.states)} states, {len(c.transitions)} transitions, initial {c.states[c.initial]}",
             "blocking: {" + ", ".join(sorted(str(a) for a in c.blocking)) + "}"]
    for i, s in enumerate(c.states):
        term = f"  {c.terms[i]}" if c.terms is not None else ""
        lines.append(f"state {s}{term}")
    for t in c.transitions:
        kind = "" if t.id in c.nonblocking else "  (blocking)"
        lines.append(f"t{t.id}: {c.states[t.source]} -{t.label} {format_comps(t.comps)}-> "
                     f"{c.states[t.target]}{kind}")
    return "\n".join(lines)


# --- verbs -----------------------------------------------------------------

def cmd_parse(args) -> int:
    env, main = parse(Path(args.file).read_text(encoding="utf-8"))
    defs = {x: format_process(p) for x, p in env.defs.items()}
    text = "\n".join([f"{x} = {body}" for x, body in defs.items()] + [f"main = {format_process(main)}"])
    _emit(args, text, {"defs": defs, "main": format_process(main)})
    return 0


def cmd_lts(args) -> int:
    c, goals = _load(args)
    _emit(args, _describe(c), to_json(c, goals))
    return 0


def cmd_validate(args) -> int:
    c, _ = _load(args)
    problems = validate(c)
    text = "ok" if not problems else "\n".join(f"violation: {p}" for p in problems)
    doc = {"ok": not problems,
           "violations": [{"t": p.t, **({"v": p.v} if hasattr(p, "v") else {})} for p in problems]}
    _emit(args, text, doc)
    return 0 if not problems else 1


def cmd_classify(args) -> int:
    c, _ = _load(args)
    run = parse_run(c, args.run)
    report = classify(c, run)
    lines = []
    for flag, value in report.flags().items():
        line = f"{flag:14} {'yes' if value else 'no'}"
        if flag in report.witnesses:
            s, what = report.witnesses[flag]
            what = f"t{what}" if isinstance(what, int) else f"task {what or 'ε'}"
            line += f"   ({what} enabled at {c.states[s]} is never served)"
        lines.append(line)
    if not c.is_valid:
        lines.append("note: property (1) unverified")
    doc = {**report.flags(),
           "witnesses": {k: [c.states[s], w] for k, (s, w) in report.witnesses.items()}}
    _emit(args, "\n".join(lines), doc)
    return 0


def cmd_liveness(args) -> int:
    c, goals = _load(args)
    verdict = check_liveness(c, _goal(c, goals, args.goal), Criterion.parse(args.criterion))
    _emit(args, verdict.describe(c), verdict.to_json(c))
    return 0 if verdict.holds else 1


def cmd_matrix(args) -> int:
    if args.paper_fig3:
        entries = catalog.xy_table_entries()
        criteria = list(catalog.XY_TABLE_CRITERIA)
    else:
        if not args.entry:
            raise InputError("give --paper-fig3 or at least one --entry EXAMPLE:GOAL")
        entries = []
        for spec in args.entry:
            name, _, goal = spec.partition(":")
            c, goals = catalog.load_example(name)
            entries.append((name, goal, c, _goal(c, goals, goal)))
        criteria = [k for k in args.criteria.split(",") if k.strip()]
    m = liveness_matrix(entries, criteria, workers=args.workers)
    _emit(args, m.render(), m.to_json())
    return 0


def _load_any(ref: str, blocking) -> CLTS:
    if ref in catalog.CATALOG:
        return catalog.load_example(ref)[0]
    path = Path(ref)
    if path.suffix == ".json":
        return load_json(path)[0]
    env, main = parse(path.read_text(encoding="utf-8"))
    return explore(main, env, blocking)


def cmd_bisim(args) -> int:
    blocking = _blocking(args.blocking)
    c1, c2 = _load_any(args.left, blocking), _load_any(args.right, blocking)
    s1 = args.state1 if args.state1 is not None else c1.states[c1.initial]
    s2 = args.state2 if args.state2 is not None else c2.states[c2.initial]
    res = strong_bisimilar(c1, s1, c2, s2)
    if res:
        text = "bisimilar"
    else:
        text = f"not bisimilar\ndistinguishing formula: {res.formula}\nsequence: {' '.join(res.sequence)}"
    _emit(args, text, {"bisimilar": res.bisimilar, "formula": res.formula,
                       "sequence": list(res.sequence) if res.sequence else None})
    return 0 if res else 1


def cmd_dot(args) -> int:
    c, goals = _load(args)
    goal = _goal(c, goals, args.goal) if args.goal else frozenset()
    print(export_dot(c, goal), end="")
    return 0


def cmd_catalog(args) -> int:
    if args.export:
        for path in catalog.export_catalog(args.export):
            print(path)
        return 0
    rows = []
    for name, ex in catalog.CATALOG.items():
        c, goals = catalog.load_example(name)
        rows.append({"name": name, "states": len(c.states), "transitions": len(c.transitions),
                     "goals": sorted(goals), "notes": ex.notes})
    text = "\n".join(f"{r['name']:16} {r['states']:3} states  goals: {', '.join(r['goals']) or '-':16} {r['notes']}"
                     for r in rows)
    _emit(args, text, rows)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="justcheck", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="verb", metavar="VERB")
    sub.required = True

    def verb(name, help_text, fn, source=True):
        p = sub.add_parser(name, help=help_text, description=help_text)
        p.add_argument("--json", action="store_true", help="machine-readable output")
        if source:
            _add_source(p)
        p.set_defaults(fn=fn)
        return p

    p = verb("parse", "parse a CCS script and print it back", cmd_parse, source=False)
    p.add_argument("file")
    verb("lts", "print the component-labelled transition system", cmd_lts)
    verb("validate", "check the non-interference property", cmd_validate)
    p = verb("classify", "evaluate every completeness criterion on a run", cmd_classify)
    p.add_argument("--run", required=True, help='e.g. "s0 -t1-> s1 @ cycle: s1 -t2-> s1" or JSON')
    p = verb("liveness", "check that every counted run reaches the goal", cmd_liveness)
    p.add_argument("--goal", required=True, help="named goal or comma-separated state names")
    p.add_argument("--criterion", required=True, help=", ".join(k.value for k in Criterion))
    p = verb("matrix", "table of liveness verdicts", cmd_matrix, source=False)
    p.add_argument("--paper-fig3", action="store_true", help="the x/y program table")
    p.add_argument("--entry", action="append", metavar="EXAMPLE:GOAL")
    p.add_argument("--criteria", default="full_fairness,justness,progress,empty")
    p.add_argument("--workers", type=int, default=1)
    p = verb("bisim", "decide strong bisimilarity (components ignored)", cmd_bisim, source=False)
    p.add_argument("left", help="catalog name, .json CLTS or .ccs script")
    p.add_argument("right")
    p.add_argument("--state1")
    p.add_argument("--state2")
    p.add_argument("--blocking", metavar="A,B")
    p = verb("dot", "Graphviz rendering", cmd_dot)
    p.add_argument("--goal")
    p = verb("catalog", "list or export the example systems", cmd_catalog, source=False)
    p.add_argument("--export", metavar="DIR")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (ParseError, InputError, MalformedRun, StateBudgetExceeded, BlockingViolation,
            OSError, ValueError, KeyError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"justcheck {args.verb}: error: {msg}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
