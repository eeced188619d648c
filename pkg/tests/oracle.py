"""Brute-force liveness oracle: enumerate bounded runs and classify each.

Independent of the SCC search in ``justcheck.liveness``; it only relies on
the run classifier.  Finite runs are walks of length <= |S| from the
initial state; lassos are such a walk followed by a closed walk of length
<= |S| + |Tr|.  Closed walks are enumerated up to their transition set,
which is all the classifier looks at on a cycle.
"""

from justcheck.clts import CLTS
from justcheck.runs import Run, classify

CRITERIA = ("empty", "progress", "justness", "j_fairness", "weak_fairness", "strong_fairness")


def _walks(c: CLTS, start: int, avoid: frozenset, max_len: int):
    out = []
    stack = [((start,), ())]
    while stack:
        states, trans = stack.pop()
        out.append((states, trans))
        if len(trans) == max_len:
            continue
        for t in c.outgoing[states[-1]]:
            if t.target not in avoid:
                stack.append((states + (t.target,), trans + (t.id,)))
    return out


def _closed_walks(c: CLTS, start: int, avoid: frozenset, max_len: int):
    best = {}
    found = {}
    stack = [(start, (), frozenset())]
    while stack:
        at, walk, used = stack.pop()
        if walk and at == start and used not in found:
            found[used] = walk
        if len(walk) == max_len:
            continue
        for t in c.outgoing[at]:
            if t.target in avoid:
                continue
            key = (t.target, used | {t.id})
            if best.get(key, max_len + 1) <= len(walk) + 1:
                continue
            best[key] = len(walk) + 1
            stack.append((t.target, walk + (t.id,), used | {t.id}))
    return list(found.values())


def oracle_counterexamples(c: CLTS, goal) -> dict:
    """For each criterion (except full fairness), whether some bounded run
    avoiding ``goal`` satisfies it."""
    goal = frozenset(goal)
    result = {k: False for k in CRITERIA}
    if c.initial in goal:
        return result
    n, m = len(c.states), len(c.transitions)
    cycles = {}
    for states, trans in _walks(c, c.initial, goal, n):
        end = states[-1]
        if end not in cycles:
            cycles[end] = _closed_walks(c, end, goal, n + m)
        runs = [Run(states, trans)] + [Run(states, trans, cyc) for cyc in cycles[end]]
        for run in runs:
            report = classify(c, run)
            for k in CRITERIA:
                if not result[k] and report.satisfies(k):
                    result[k] = True
        if all(result.values()):
            break
    return result
