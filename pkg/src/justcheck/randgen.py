"""Random CLTSs satisfying non-interference, and random runs through them.

Used by the property tests and the benchmark.  Everything is driven by an
explicit ``random.Random`` so results are reproducible.
"""

from __future__ import annotations

import random

from .ccs import Action, TAU
from .clts import CLTS, Transition, NoninterferenceViolation, validate
from .runs import Run

__all__ = ["random_clts", "random_run", "COMPONENT_POOL"]

COMPONENT_POOL = ("L", "R", "LL", "LR", "RL", "RR", "LLL", "LLR")


def _random_comps(rng: random.Random, pool) -> frozenset:
    k = 1 if rng.random() < 0.6 else rng.randint(1, min(3, len(pool)))
    return frozenset(rng.sample(pool, k))


def random_clts(rng: random.Random, max_states: int = 8, max_transitions: int = 14,
                n_components: int = 4, labels=("a", "b", "c", "tau"), tries: int = 50) -> CLTS:
    """A random CLTS passing :func:`validate`.

    Transitions are drawn at random and then closed under non-interference
    by adding the missing transitions; draws that outgrow
    ``max_transitions`` are discarded.
    """
    pool = list(COMPONENT_POOL[:n_components])
    acts = [TAU if a == "tau" else Action.parse(a) for a in labels]
    for _ in range(tries):
        n = rng.randint(1, max_states)
        m = rng.randint(0, max(0, max_transitions - 2))
        raw = [(rng.randrange(n), rng.choice(acts), _random_comps(rng, pool), rng.randrange(n))
               for _ in range(m)]
        raw = list(dict.fromkeys(raw))
        visible = sorted({a for _, a, _, _ in raw if not a.is_tau}, key=Action.sort_key)
        blocking = frozenset(a for a in visible if rng.random() < 0.4)
        while len(raw) <= max_transitions:
            c = CLTS(tuple(f"q{i}" for i in range(n)),
                     tuple(Transition(i, s, a, comps, t) for i, (s, a, comps, t) in enumerate(raw)),
                     0, blocking)
            problems = [p for p in validate(c) if isinstance(p, NoninterferenceViolation)]
            if not problems:
                return c
            t, v = c.transition(problems[0].t), c.transition(problems[0].v)
            target = rng.choice([t.target, v.target, rng.randrange(n)])
            raw.append((v.target, t.label, t.comps, target))
    raise RuntimeError("could not draw a valid CLTS; loosen the limits")


def random_run(rng: random.Random, c: CLTS, max_steps: int = 12, stop: float = 0.15) -> Run:
    """Random walk from the initial state.

    The walk becomes a lasso as soon as it revisits a state and the coin
    says so; otherwise it ends as a finite run.
    """
    states, trans = [c.initial], []
    for _ in range(max_steps):
        out = c.outgoing[states[-1]]
        if not out or rng.random() < stop:
            break
        t = rng.choice(out)
        trans.append(t.id)
        states.append(t.target)
        first = states.index(states[-1])
        if first < len(states) - 1 and rng.random() < 0.5:
            return Run(tuple(states[:first + 1]), tuple(trans[:first]), tuple(trans[first:]))
    return Run(tuple(states), tuple(trans))
