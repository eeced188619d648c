"""Finite runs, lassos, and the completeness criteria evaluated on them.

A lasso ``prefix . cycle^ω`` is decided from finitely many facts: every
suffix of it contains the whole cycle infinitely often, so the fairness
criteria only look at the states and transitions of the cycle.  Justness
obligations are existential and are checked per occurrence, prefix
included.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field

from .clts import CLTS, TaskFamily, component_tasks

__all__ = [
    "Run", "MalformedRun", "CriteriaReport", "is_progressing", "is_just",
    "is_weakly_fair", "is_strongly_fair", "is_j_fair", "classify",
    "parse_run", "format_run",
]


class MalformedRun(ValueError):
    pass


@dataclass(frozen=True)
class Run:
    """``states[0] t1 states[1] ... tn states[n]`` followed, when ``cycle`` is
    nonempty, by the transitions of ``cycle`` repeated forever.

    ``cycle`` holds transition ids only; it must lead from ``states[-1]``
    back to ``states[-1]``.
    """
    states: tuple
    transitions: tuple = ()
    cycle: tuple = ()

    @property
    def last(self) -> int:
        return self.states[-1]

    @property
    def is_infinite(self) -> bool:
        return bool(self.cycle)

    def cycle_states(self, c: CLTS) -> tuple:
        """States visited by the cycle, in order, starting at ``last``."""
        return tuple(c.transition(t).source for t in self.cycle)

    def check(self, c: CLTS) -> None:
        if not self.states:
            raise MalformedRun("a run starts with a state")
        if len(self.states) != len(self.transitions) + 1:
            raise MalformedRun("states and transitions must alternate")
        for s in self.states:
            if not 0 <= s < len(c.states):
                raise MalformedRun(f"unknown state {s}")
        try:
            for i, tid in enumerate(self.transitions):
                t = c.transition(tid)
                if t.source != self.states[i] or t.target != self.states[i + 1]:
                    raise MalformedRun(f"t{tid} does not lead from {c.states[self.states[i]]} "
                                       f"to {c.states[self.states[i + 1]]}")
            at = self.last
            for tid in self.cycle:
                t = c.transition(tid)
                if t.source != at:
                    raise MalformedRun(f"cycle transition t{tid} does not leave {c.states[at]}")
                at = t.target
        except KeyError as exc:
            raise MalformedRun(str(exc)) from None
        if at != self.last:
            raise MalformedRun("cycle does not return to its start state")

    def rotate(self, c: CLTS, k: int) -> "Run":
        """Same infinite path with the cycle entered ``k`` steps later."""
        if not self.cycle:
            return self
        k %= len(self.cycle)
        moved = self.cycle[:k]
        states = list(self.states)
        for tid in moved:
            states.append(c.transition(tid).target)
        return Run(tuple(states), self.transitions + moved, self.cycle[k:] + moved)

    def unroll(self, times: int = 2) -> "Run":
        return Run(self.states, self.transitions, self.cycle * times)


# --- criteria ----------------------------------------------------------------

def _tasks_enabled_at(c: CLTS, tk: TaskFamily, s: int) -> set:
    on = c.enabled[s]
    return {name for name, ts in tk.items() if any(t in ts for t in on)}


def _tasks_enabled_during(c: CLTS, tk: TaskFamily, u: int) -> set:
    tu = c.transition(u)
    on = [t for t in c.enabled[tu.source] if not (c.transition(t).comps & tu.comps)]
    return {name for name, ts in tk.items() if any(t in ts for t in on)}


def _occurring(tk: TaskFamily, tids) -> set:
    tids = set(tids)
    return {name for name, ts in tk.items() if ts & tids}


def _progress_witness(c: CLTS, r: Run):
    if r.cycle or not c.enabled[r.last]:
        return None
    return (r.last, c.enabled[r.last][0])


def is_progressing(c: CLTS, r: Run) -> bool:
    r.check(c)
    return _progress_witness(c, r) is None


def _just_witness(c: CLTS, r: Run):
    comps = {t.id: t.comps for t in c.transitions}
    # interference still to come after position i: prefix tail, then the cycle
    cycle_comps = frozenset().union(*(comps[t] for t in r.cycle)) if r.cycle else frozenset()
    later = [frozenset()] * len(r.states)
    acc = cycle_comps
    later[-1] = acc
    for i in range(len(r.transitions) - 1, -1, -1):
        acc = acc | comps[r.transitions[i]]
        later[i] = acc
    for i, s in enumerate(r.states):
        for t in c.enabled[s]:
            if not (comps[t] & later[i]):
                return (s, t)
    for s in r.cycle_states(c):
        for t in c.enabled[s]:
            if not (comps[t] & cycle_comps):
                return (s, t)
    return None


def is_just(c: CLTS, r: Run) -> bool:
    r.check(c)
    return _just_witness(c, r) is None


def _fair_witness(c: CLTS, r: Run, tk: TaskFamily, mode: str):
    if not r.cycle:
        for name in sorted(_tasks_enabled_at(c, tk, r.last), key=lambda n: (len(n), n)):
            return (r.last, name)
        return None
    states = r.cycle_states(c)
    occurring = _occurring(tk, r.cycle)
    per_state = [_tasks_enabled_at(c, tk, s) for s in states]
    if mode == "strong":
        candidates = set().union(*per_state)
    else:
        candidates = set.intersection(*per_state)
        if mode == "j":
            for u in set(r.cycle):
                candidates &= _tasks_enabled_during(c, tk, u)
    missing = sorted(candidates - occurring, key=lambda n: (len(n), n))
    if not missing:
        return None
    name = missing[0]
    s = next(s for s, on in zip(states, per_state) if name in on)
    return (s, name)


def is_weakly_fair(c: CLTS, r: Run, tk: TaskFamily | None = None) -> bool:
    r.check(c)
    return _fair_witness(c, r, tk if tk is not None else component_tasks(c), "weak") is None


def is_strongly_fair(c: CLTS, r: Run, tk: TaskFamily | None = None) -> bool:
    r.check(c)
    return _fair_witness(c, r, tk if tk is not None else component_tasks(c), "strong") is None


def is_j_fair(c: CLTS, r: Run, tk: TaskFamily | None = None) -> bool:
    r.check(c)
    return _fair_witness(c, r, tk if tk is not None else component_tasks(c), "j") is None


FLAGS = ("progressing", "just", "j_fair", "weakly_fair", "strongly_fair")


@dataclass(frozen=True)
class CriteriaReport:
    progressing: bool
    just: bool
    j_fair: bool
    weakly_fair: bool
    strongly_fair: bool
    witnesses: dict = field(default_factory=dict)

    def flags(self) -> dict:
        return {k: getattr(self, k) for k in FLAGS}

    def satisfies(self, criterion) -> bool:
        """Whether the run counts under ``criterion`` (a Criterion or its value)."""
        key = getattr(criterion, "value", criterion)
        if key == "empty":
            return True
        flag = {"progress": "progressing", "justness": "just", "j_fairness": "j_fair",
                "weak_fairness": "weakly_fair", "strong_fairness": "strongly_fair"}[key]
        return getattr(self, flag)


def classify(c: CLTS, r: Run, tk: TaskFamily | None = None) -> CriteriaReport:
    """Evaluate all five criteria, with component tasks unless ``tk`` is given.

    Witnesses are ``(state, transition id)`` for progress and justness and
    ``(state, task name)`` for the fairness criteria.
    """
    r.check(c)
    tk = tk if tk is not None else component_tasks(c)
    wit = {
        "progressing": _progress_witness(c, r),
        "just": _just_witness(c, r),
        "j_fair": _fair_witness(c, r, tk, "j"),
        "weakly_fair": _fair_witness(c, r, tk, "weak"),
        "strongly_fair": _fair_witness(c, r, tk, "strong"),
    }
    report = CriteriaReport(**{k: v is None for k, v in wit.items()},
                            witnesses={k: v for k, v in wit.items() if v is not None})
    if c.is_valid and tk.tasks == component_tasks(c).tasks:
        chain = [report.strongly_fair, report.weakly_fair, report.j_fair, report.just, report.progressing]
        assert all(b or not a for a, b in zip(chain, chain[1:])), f"hierarchy broken: {report}"
    return report


# --- text and JSON forms ---------------------------------------------------

_STEP = re.compile(r"-t(\d+)->")


def _parse_path(c: CLTS, text: str):
    tokens = text.split()
    if not tokens:
        raise MalformedRun("empty path")
    states, trans = [c.state(tokens[0])], []
    rest = tokens[1:]
    if len(rest) % 2:
        raise MalformedRun(f"dangling step in {text!r}")
    for step, s in zip(rest[::2], rest[1::2]):
        m = _STEP.fullmatch(step)
        if not m:
            raise MalformedRun(f"expected -tN-> but found {step!r}")
        trans.append(int(m.group(1)))
        states.append(c.state(s))
    return states, trans


def parse_run(c: CLTS, text: str) -> Run:
    """Read ``"s0 -t3-> s1 @ cycle: s1 -t7-> s1"`` or the JSON form
    ``{"prefix": [...], "cycle": [...]}`` (alternating state names and
    ``"tN"``/integer transition ids)."""
    text = text.strip()
    try:
        if text.startswith("{"):
            doc = json.loads(text)
            states, trans = _alternating(c, doc.get("prefix", []))
            cycle = []
            if doc.get("cycle"):
                cstates, cycle = _alternating(c, doc["cycle"])
                if cstates[0] != states[-1]:
                    raise MalformedRun("cycle must start at the last prefix state")
            run = Run(tuple(states), tuple(trans), tuple(cycle))
        else:
            head, _, tail = text.partition("@")
            states, trans = _parse_path(c, head)
            cycle = []
            if tail.strip():
                tail = tail.strip()
                if not tail.startswith("cycle:"):
                    raise MalformedRun("expected '@ cycle:'")
                cstates, cycle = _parse_path(c, tail[len("cycle:"):])
                if cstates[0] != states[-1]:
                    raise MalformedRun("cycle must start at the last prefix state")
            run = Run(tuple(states), tuple(trans), tuple(cycle))
    except KeyError as exc:
        raise MalformedRun(str(exc)) from None
    except json.JSONDecodeError as exc:
        raise MalformedRun(f"bad JSON: {exc}") from None
    run.check(c)
    return run


def _alternating(c: CLTS, items):
    if not items:
        raise MalformedRun("empty path")
    states, trans = [c.state(items[0])], []
    for tid, s in zip(items[1::2], items[2::2]):
        trans.append(int(str(tid).lstrip("t")))
        states.append(c.state(s))
    if len(items) % 2 == 0:
        raise MalformedRun("a path must end with a state")
    return states, trans


def format_run(c: CLTS, r: Run) -> str:
    parts = [c.states[r.states[0]]]
    for tid, s in zip(r.transitions, r.states[1:]):
        parts.append(f"-t{tid}-> {c.states[s]}")
    text = " ".join(parts)
    if r.cycle:
        at = r.last
        cyc = [c.states[at]]
        for tid in r.cycle:
            at = c.transition(tid).target
            cyc.append(f"-t{tid}-> {c.states[at]}")
        text += " @ cycle: " + " ".join(cyc)
    return text


def run_to_json(c: CLTS, r: Run) -> dict:
    prefix = [c.states[r.states[0]]]
    for tid, s in zip(r.transitions, r.states[1:]):
        prefix += [f"t{tid}", c.states[s]]
    doc = {"prefix": prefix, "cycle": []}
    if r.cycle:
        at = r.last
        cyc = [c.states[at]]
        for tid in r.cycle:
            at = c.transition(tid).target
            cyc += [f"t{tid}", c.states[at]]
        doc["cycle"] = cyc
    return doc
