"""Component-labelled transition systems.

A CLTS is stored as a tuple of states (display names, indexed by position),
a tuple of :class:`Transition` records and a set ``blocking`` of actions the
environment may refuse.  Transitions keep the id they were given, so runs
and JSON files can refer to them.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable

from . import kernels
from .ccs import Action

__all__ = [
    "Transition", "CLTS", "TaskFamily", "NoninterferenceViolation", "EmptyComponents",
    "validate", "concurrent", "component_tasks", "enabled_nonblocking", "export_dot",
    "from_json", "to_json", "load_json", "format_comps",
]


def _comp_key(c: str):
    return (len(c), c)


def format_comps(comps) -> str:
    return "{" + ",".join(c or "ε" for c in sorted(comps, key=_comp_key)) + "}"


@dataclass(frozen=True)
class Transition:
    id: int
    source: int
    label: Action
    comps: frozenset
    target: int

    def __str__(self):
        return f"t{self.id}: s{self.source} -{self.label} {format_comps(self.comps)}-> s{self.target}"


@dataclass(frozen=True, eq=False)
class CLTS:
    states: tuple
    transitions: tuple
    initial: int
    blocking: frozenset
    terms: tuple | None = None
    name: str = ""

    def __post_init__(self):
        n = len(self.states)
        if n == 0:
            raise ValueError("a CLTS needs at least one state")
        if len(set(self.states)) != n:
            raise ValueError("state names must be unique")
        if not 0 <= self.initial < n:
            raise ValueError(f"initial state {self.initial} out of range")
        seen = set()
        for t in self.transitions:
            if not (0 <= t.source < n and 0 <= t.target < n):
                raise ValueError(f"transition {t.id} leaves the state space")
            if t.id in seen:
                raise ValueError(f"duplicate transition id {t.id}")
            seen.add(t.id)

    # lookups -------------------------------------------------------------

    @cached_property
    def _by_id(self) -> dict:
        return {t.id: t for t in self.transitions}

    @cached_property
    def _state_index(self) -> dict:
        return {name: i for i, name in enumerate(self.states)}

    @cached_property
    def outgoing(self) -> tuple:
        out = [[] for _ in self.states]
        for t in self.transitions:
            out[t.source].append(t)
        return tuple(tuple(sorted(ts, key=lambda t: t.id)) for ts in out)

    @cached_property
    def nonblocking(self) -> frozenset:
        """Ids of transitions whose label is not blocking."""
        return frozenset(t.id for t in self.transitions if t.label not in self.blocking)

    @cached_property
    def enabled(self) -> tuple:
        """Per state, the sorted ids of enabled non-blocking transitions."""
        return tuple(tuple(t.id for t in ts if t.id in self.nonblocking) for ts in self.outgoing)

    @cached_property
    def components(self) -> tuple:
        return tuple(sorted({c for t in self.transitions for c in t.comps}, key=_comp_key))

    @cached_property
    def masks(self) -> dict:
        bit = {c: 1 << i for i, c in enumerate(self.components)}
        return {t.id: sum(bit[c] for c in t.comps) for t in self.transitions}

    @cached_property
    def is_valid(self) -> bool:
        return not validate(self)

    def transition(self, tid: int) -> Transition:
        try:
            return self._by_id[tid]
        except KeyError:
            raise KeyError(f"unknown transition id {tid}") from None

    def state(self, ref) -> int:
        """Resolve a state given by name (or by index)."""
        if isinstance(ref, str) and ref in self._state_index:
            return self._state_index[ref]
        if isinstance(ref, int) and 0 <= ref < len(self.states):
            return ref
        if isinstance(ref, str) and ref.isdigit() and int(ref) < len(self.states):
            return int(ref)
        raise KeyError(f"unknown state {ref!r}")

    def __len__(self):
        return len(self.states)


@dataclass(frozen=True)
class TaskFamily:
    """Tasks keyed by name; each task is a frozenset of transition ids."""
    tasks: dict = field(default_factory=dict)

    def __iter__(self):
        return iter(self.tasks)

    def __len__(self):
        return len(self.tasks)

    def __getitem__(self, key):
        return self.tasks[key]

    def items(self):
        return self.tasks.items()


@dataclass(frozen=True)
class NoninterferenceViolation:
    t: int
    v: int

    def __str__(self):
        return (f"t{self.t} and t{self.v} are concurrent, but after t{self.v} "
                f"no transition with t{self.t}'s label and components is enabled")


@dataclass(frozen=True)
class EmptyComponents:
    t: int

    def __str__(self):
        return f"t{self.t} has an empty component set"


def validate(c: CLTS) -> list:
    """Check non-interference; an empty list means the CLTS is well formed.

    Brute force over all pairs of transitions sharing a source state:
    quadratic in the out-degree.
    """
    problems: list = [EmptyComponents(t.id) for t in c.transitions if not t.comps]
    ts = c.transitions
    labels: dict = {}
    label_ix = [labels.setdefault(t.label, len(labels)) for t in ts]
    masks = c.masks
    bad = kernels.noninterference_violations(
        len(c.states), [t.source for t in ts], [t.target for t in ts], label_ix,
        [masks[t.id] for t in ts])
    problems += [NoninterferenceViolation(ts[i].id, ts[j].id) for i, j in bad
                 if ts[i].comps and ts[j].comps]
    return problems


def concurrent(c: CLTS, t: int, u: int) -> bool:
    """True iff the two transitions share no component."""
    return not (c.transition(t).comps & c.transition(u).comps)


def component_tasks(c: CLTS) -> TaskFamily:
    tasks: dict = {}
    for sigma in c.components:
        tasks[sigma] = frozenset(t.id for t in c.transitions if sigma in t.comps)
    return TaskFamily(tasks)


def enabled_nonblocking(c: CLTS, s) -> frozenset:
    return frozenset(c.enabled[c.state(s)])


# --- JSON ------------------------------------------------------------------

def to_json(c: CLTS, goals: dict | None = None, **extra) -> dict:
    doc = {
        "states": list(c.states),
        "initial": c.states[c.initial],
        "blocking": sorted(str(a) for a in c.blocking),
        "transitions": [
            {"id": t.id, "src": c.states[t.source], "act": str(t.label),
             "comps": sorted(t.comps, key=_comp_key), "tgt": c.states[t.target]}
            for t in c.transitions
        ],
    }
    if c.name:
        doc["name"] = c.name
    if c.terms is not None:
        doc["terms"] = dict(zip(c.states, c.terms))
    if goals:
        doc["goals"] = {k: [c.states[s] for s in sorted(v)] for k, v in goals.items()}
    doc.update(extra)
    return doc


def from_json(doc: dict) -> tuple[CLTS, dict]:
    """Build a CLTS from its JSON form; returns it with its goal sets."""
    try:
        names = [str(s) for s in doc["states"]]
        ix = {name: i for i, name in enumerate(names)}

        def state(ref):
            try:
                return ix[str(ref)]
            except KeyError:
                raise ValueError(f"unknown state {ref!r}") from None

        transitions = []
        for k, t in enumerate(doc.get("transitions", [])):
            comps = t.get("comps", [""])
            for comp in comps:
                if set(comp) - {"L", "R"}:
                    raise ValueError(f"component {comp!r} is not a string over L and R")
            transitions.append(Transition(
                int(t.get("id", k)), state(t["src"]), Action.parse(t["act"]),
                frozenset(comps), state(t["tgt"])))
        terms = doc.get("terms")
        c = CLTS(
            states=tuple(names),
            transitions=tuple(transitions),
            initial=state(doc.get("initial", names[0])),
            blocking=frozenset(Action.parse(a) for a in doc.get("blocking", [])),
            terms=tuple(terms[s] for s in names) if terms else None,
            name=doc.get("name", ""),
        )
        goals = {k: frozenset(state(s) for s in v) for k, v in doc.get("goals", {}).items()}
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed CLTS JSON: {exc}") from exc
    return c, goals


def load_json(path) -> tuple[CLTS, dict]:
    with open(path, encoding="utf-8") as fh:
        return from_json(json.load(fh))


# --- DOT -------------------------------------------------------------------

def _q(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(c: CLTS, goal: Iterable = ()) -> str:
    """Graphviz rendering: goal states shaded, initial state marked by a
    short arrow, edges labelled ``action / {components}``."""
    goal = {c.state(s) for s in goal}
    lines = [f"digraph {_q(c.name or 'clts')} {{", "  rankdir=LR;",
             '  node [shape=circle];', '  __init [shape=point, width=0.05];']
    for i, name in enumerate(c.states):
        attrs = [f"label={_q(name)}"]
        if c.terms is not None:
            attrs.append(f"tooltip={_q(c.terms[i])}")
        if i in goal:
            attrs.append('style=filled, fillcolor="gray70"')
        lines.append(f"  {_q(name)} [{', '.join(attrs)}];")
    lines.append(f"  __init -> {_q(c.states[c.initial])};")
    for t in c.transitions:
        label = f"{t.label} / {format_comps(t.comps)}"
        style = "" if t.id in c.nonblocking else ", style=dashed"
        lines.append(f"  {_q(c.states[t.source])} -> {_q(c.states[t.target])} "
                     f"[label={_q(label)}, id={_q('t' + str(t.id))}{style}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
