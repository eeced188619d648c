"""Liveness checking under completeness criteria.

A goal set ``G`` holds under a criterion iff no run that the criterion
counts avoids ``G`` forever.  :func:`find_counterexample` searches for such
a run: finite runs end in a state without enabled non-blocking transitions;
infinite runs are lassos whose cycle covers a strongly connected set of
transitions meeting the criterion's cycle condition.
"""

from __future__ import annotations

import enum
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from . import kernels
from .clts import CLTS
from .runs import Run, classify, format_run, run_to_json

__all__ = [
    "Criterion", "Verdict", "find_counterexample", "check_liveness",
    "check_full_fairness", "liveness_matrix", "Matrix",
]


class Criterion(enum.Enum):
    EMPTY = "empty"
    PROGRESS = "progress"
    JUSTNESS = "justness"
    J_FAIRNESS = "j_fairness"
    WEAK_FAIRNESS = "weak_fairness"
    STRONG_FAIRNESS = "strong_fairness"
    FULL_FAIRNESS = "full_fairness"

    @property
    def rank(self) -> int:
        return list(Criterion).index(self)

    def __lt__(self, other):
        if not isinstance(other, Criterion):
            return NotImplemented
        return self.rank < other.rank

    def __le__(self, other):
        return self == other or self < other

    @property
    def title(self) -> str:
        return _TITLES[self]

    @classmethod
    def parse(cls, text: str) -> "Criterion":
        key = text.strip().lower().replace("-", "_").replace(" ", "_")
        key = _ALIASES.get(key, key)
        try:
            return cls(key)
        except ValueError:
            names = ", ".join(c.value for c in cls)
            raise ValueError(f"unknown criterion {text!r} (choose from {names})") from None


_TITLES = {
    Criterion.EMPTY: "∅",
    Criterion.PROGRESS: "progress",
    Criterion.JUSTNESS: "justness",
    Criterion.J_FAIRNESS: "J-fairness",
    Criterion.WEAK_FAIRNESS: "weak fairness",
    Criterion.STRONG_FAIRNESS: "strong fairness",
    Criterion.FULL_FAIRNESS: "full fairness",
}

_ALIASES = {
    "∅": "empty", "none": "empty", "just": "justness", "j": "j_fairness",
    "jfair": "j_fairness", "j_fair": "j_fairness", "weak": "weak_fairness",
    "strong": "strong_fairness", "full": "full_fairness",
}

UNVERIFIED = "property (1) unverified"
OPERATIONALIZED = "operationalized: every goal-avoiding reachable state must reach the goal"
FULL_FAIRNESS_READING = "reachability over all transitions; dead ends judged on non-blocking transitions"


@dataclass(frozen=True)
class Verdict:
    holds: bool
    criterion: Criterion
    goal: frozenset
    counterexample: Run | None = None
    notes: tuple = ()

    def describe(self, c: CLTS) -> str:
        head = "HOLDS" if self.holds else "FAILS"
        lines = [f"{head} under {self.criterion.title}"]
        if self.counterexample is not None:
            lines.append("counterexample: " + format_run(c, self.counterexample))
        lines += [f"note: {n}" for n in self.notes]
        return "\n".join(lines)

    def to_json(self, c: CLTS) -> dict:
        return {
            "holds": self.holds,
            "criterion": self.criterion.value,
            "goal": [c.states[s] for s in sorted(self.goal)],
            "counterexample": run_to_json(c, self.counterexample) if self.counterexample else None,
            "notes": list(self.notes),
        }


# --- search helpers --------------------------------------------------------

def _avoiding_bfs(c: CLTS, goal: frozenset):
    """Breadth-first tree of the goal-avoiding part reachable from the
    initial state.  Returns ``(order, parent)`` where ``parent[s]`` is the
    transition that discovered ``s``."""
    parent = {c.initial: None}
    order = [c.initial]
    queue = deque(order)
    while queue:
        s = queue.popleft()
        for t in c.outgoing[s]:
            if t.target not in goal and t.target not in parent:
                parent[t.target] = t
                order.append(t.target)
                queue.append(t.target)
    return order, parent


def _path_to(c: CLTS, parent: dict, s: int) -> Run:
    trans = []
    while parent[s] is not None:
        t = parent[s]
        trans.append(t.id)
        s = t.source
    states = [s]
    for tid in reversed(trans):
        states.append(c.transition(tid).target)
    return Run(tuple(states), tuple(reversed(trans)))


def _sccs(c: CLTS, alive: set, edges: list) -> list:
    """Nontrivial SCCs (those with an internal transition) of the subgraph."""
    n = len(c.states)
    state_alive = [1 if s in alive else 0 for s in range(n)]
    src = [t.source for t in edges]
    tgt = [t.target for t in edges]
    labels = kernels.scc_labels(n, src, tgt, state_alive, [1] * len(edges))
    groups: dict = {}
    for s in sorted(alive):
        groups.setdefault(labels[s], set()).add(s)
    result = []
    for members in groups.values():
        inner = [t for t in edges if t.source in members and t.target in members]
        if inner:
            result.append((frozenset(members), inner))
    return result


def _union_comps(ts) -> frozenset:
    out: frozenset = frozenset()
    for t in ts:
        out = out | t.comps
    return out


def _enabled_tasks(c: CLTS, s: int) -> frozenset:
    return _union_comps(c.transition(t) for t in c.enabled[s])


def _support_ok(c: CLTS, states: frozenset, edges: list, k: Criterion) -> bool:
    """Cycle condition for a lasso whose cycle visits exactly ``states`` and
    ``edges``, with component tasks."""
    occurring = _union_comps(edges)
    if k in (Criterion.EMPTY, Criterion.PROGRESS):
        return True
    if k == Criterion.JUSTNESS:
        return all(c.transition(t).comps & occurring for s in states for t in c.enabled[s])
    per_state = [_enabled_tasks(c, s) for s in states]
    if k == Criterion.STRONG_FAIRNESS:
        return frozenset().union(*per_state) <= occurring
    always = frozenset.intersection(*per_state)
    if k == Criterion.J_FAIRNESS:
        for u in edges:
            during = _union_comps(c.transition(t) for t in c.enabled[u.source]
                                  if not (c.transition(t).comps & u.comps))
            always &= during
    return always <= occurring


def _doomed_states(c: CLTS, states: frozenset, edges: list, k: Criterion) -> set:
    """States that cannot lie on any cycle inside ``states`` meeting ``k``.

    Only meaningful for the criteria whose condition shrinks with the
    support (justness, strong fairness)."""
    occurring = _union_comps(edges)
    if k == Criterion.JUSTNESS:
        return {s for s in states
                if any(not (c.transition(t).comps & occurring) for t in c.enabled[s])}
    return {s for s in states if not _enabled_tasks(c, s) <= occurring}


def _supports(c: CLTS, region: set, k: Criterion) -> list:
    edges = [t for t in c.transitions if t.source in region and t.target in region]
    found = []
    work = _sccs(c, region, edges)
    while work:
        states, inner = work.pop()
        if _support_ok(c, states, inner, k):
            found.append((states, inner))
            continue
        if k not in (Criterion.JUSTNESS, Criterion.STRONG_FAIRNESS):
            # weak and J-fairness only get harder on a smaller support
            continue
        keep = set(states) - _doomed_states(c, states, inner, k)
        sub = [t for t in inner if t.source in keep and t.target in keep]
        work.extend(_sccs(c, keep, sub))
    return found


def _shortest_within(c: CLTS, edges_from: dict, start: int, end: int) -> list:
    if start == end:
        return []
    parent = {start: None}
    queue = deque([start])
    while queue:
        s = queue.popleft()
        for t in edges_from.get(s, ()):
            if t.target not in parent:
                parent[t.target] = t
                if t.target == end:
                    path = []
                    while parent[end] is not None:
                        path.append(parent[end].id)
                        end = parent[end].source
                    return path[::-1]
                queue.append(t.target)
    raise AssertionError("support is not strongly connected")


def _covering_cycle(c: CLTS, edges: list, entry: int) -> tuple:
    """Closed walk from ``entry`` using every transition of ``edges``."""
    edges_from: dict = {}
    for t in sorted(edges, key=lambda t: t.id):
        edges_from.setdefault(t.source, []).append(t)
    uncovered = {t.id for t in edges}
    walk = []
    at = entry
    while uncovered:
        nxt = c.transition(min(uncovered))
        for tid in _shortest_within(c, edges_from, at, nxt.source) + [nxt.id]:
            walk.append(tid)
            uncovered.discard(tid)
        at = nxt.target
    walk += _shortest_within(c, edges_from, at, entry)
    return tuple(walk)


def find_counterexample(c: CLTS, goal, k: Criterion) -> Run | None:
    """A run that avoids ``goal`` and satisfies ``k``, or None.

    Full fairness does not select runs; use :func:`check_full_fairness`.
    """
    k = Criterion.parse(k) if isinstance(k, str) else k
    if k == Criterion.FULL_FAIRNESS:
        raise ValueError("full fairness is checked by check_full_fairness")
    goal = frozenset(c.state(s) for s in goal)
    if c.initial in goal:
        return None
    if k == Criterion.EMPTY:
        return Run((c.initial,))
    order, parent = _avoiding_bfs(c, goal)
    rank = {s: i for i, s in enumerate(order)}

    candidates = [_path_to(c, parent, s) for s in order if not c.enabled[s]]
    supports = _supports(c, set(order), k)
    for states, inner in sorted(supports, key=lambda sup: min(rank[s] for s in sup[0])):
        entry = min(states, key=rank.__getitem__)
        prefix = _path_to(c, parent, entry)
        candidates.append(Run(prefix.states, prefix.transitions, _covering_cycle(c, inner, entry)))

    for run in candidates:
        # only fails on systems violating non-interference
        if classify(c, run).satisfies(k):
            return run
    return None


def check_liveness(c: CLTS, goal, k: Criterion) -> Verdict:
    k = Criterion.parse(k) if isinstance(k, str) else k
    if k == Criterion.FULL_FAIRNESS:
        return check_full_fairness(c, goal)
    goal = frozenset(c.state(s) for s in goal)
    notes = () if c.is_valid else (UNVERIFIED,)
    run = find_counterexample(c, goal, k)
    if run is None:
        return Verdict(True, k, goal, None, notes)
    states = set(run.states) | set(run.cycle_states(c))
    if states & goal or not classify(c, run).satisfies(k):
        raise AssertionError(f"counterexample failed its self-check: {format_run(c, run)}")
    return Verdict(False, k, goal, run, notes)


def check_full_fairness(c: CLTS, goal) -> Verdict:
    """Every goal-avoiding reachable state must still be able to reach the
    goal and must not be a dead end."""
    goal = frozenset(c.state(s) for s in goal)
    notes = (OPERATIONALIZED, FULL_FAIRNESS_READING) + (() if c.is_valid else (UNVERIFIED,))
    k = Criterion.FULL_FAIRNESS
    if c.initial in goal:
        return Verdict(True, k, goal, None, notes)
    incoming: dict = {}
    for t in c.transitions:
        incoming.setdefault(t.target, []).append(t.source)
    can_reach = set(goal)
    queue = deque(goal)
    while queue:
        s = queue.popleft()
        for p in incoming.get(s, ()):
            if p not in can_reach:
                can_reach.add(p)
                queue.append(p)
    order, parent = _avoiding_bfs(c, goal)
    for s in order:
        if s not in can_reach or not c.enabled[s]:
            return Verdict(False, k, goal, _path_to(c, parent, s), notes)
    return Verdict(True, k, goal, None, notes)


# --- matrices --------------------------------------------------------------

@dataclass
class Matrix:
    columns: list          # (system label, goal label)
    criteria: list
    cells: dict = field(default_factory=dict)   # (criterion, column index) -> Verdict
    systems: dict = field(default_factory=dict)

    def sign(self, k: Criterion, j: int) -> str:
        return "+" if self.cells[(k, j)].holds else "-"

    def rows(self) -> list:
        return [[self.sign(k, j) for j in range(len(self.columns))] for k in self.criteria]

    def render(self) -> str:
        if not self.criteria or not self.columns:
            return ""
        width = max(len("Liveness goal:"), *(len(k.title) for k in self.criteria)) + 2
        col = max(5, *(len(s) + 2 for s, _ in self.columns), *(len(g) + 2 for _, g in self.columns))
        lines = ["Liveness goal:".ljust(width) + "".join(g.ljust(col) for _, g in self.columns),
                 "Program".ljust(width) + "".join(s.ljust(col) for s, _ in self.columns)]
        for k, row in zip(self.criteria, self.rows()):
            lines.append(k.title.ljust(width) + "".join(x.ljust(col) for x in row))
        return "\n".join(line.rstrip() for line in lines) + "\n"

    def to_json(self) -> dict:
        return {
            "columns": [{"system": s, "goal": g} for s, g in self.columns],
            "rows": [
                {"criterion": k.value,
                 "cells": [self.cells[(k, j)].to_json(self.systems[j]) for j in range(len(self.columns))]}
                for k in self.criteria
            ],
        }


def liveness_matrix(entries, criteria, workers: int = 1) -> Matrix:
    """Evaluate every ``(system label, goal label, CLTS, goal set)`` entry
    under every criterion.  Cells may be computed in parallel; the result
    does not depend on scheduling."""
    entries = list(entries)
    criteria = [Criterion.parse(k) if isinstance(k, str) else k for k in criteria]
    m = Matrix([(e[0], e[1]) for e in entries], criteria,
               systems={j: e[2] for j, e in enumerate(entries)})
    jobs = [(k, j) for k in criteria for j in range(len(entries))]

    def cell(job):
        k, j = job
        return check_liveness(entries[j][2], entries[j][3], k)

    if workers > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(cell, jobs))
    else:
        results = [cell(job) for job in jobs]
    m.cells = dict(zip(jobs, results))
    return m
