"""Strong bisimilarity of CLTS states, ignoring components and blocking.

Naive signature refinement: each round splits blocks by the set of
``(action, block of successor)`` pairs.  Rounds are kept so that a
Hennessy-Milner formula separating two states can be read back.
"""

from __future__ import annotations

from dataclasses import dataclass

from .clts import CLTS

__all__ = ["Partition", "BisimResult", "quotient", "strong_bisimilar"]


@dataclass(frozen=True)
class Partition:
    blocks: tuple  # frozensets of state indices, ordered by least member

    def block_of(self, s: int) -> frozenset:
        for b in self.blocks:
            if s in b:
                return b
        raise KeyError(s)

    def __len__(self):
        return len(self.blocks)


def _refine(succ: list) -> list:
    """All partitions, as block-number lists, from the trivial one to the
    coarsest stable one."""
    n = len(succ)
    history = [[0] * n]
    while True:
        block = history[-1]
        sigs = {}
        new = []
        for s in range(n):
            sig = (block[s], frozenset((a, block[t]) for a, t in succ[s]))
            new.append(sigs.setdefault(sig, len(sigs)))
        if len(sigs) == len(set(block)):
            return history
        history.append(new)


def _blocks(numbering: list) -> tuple:
    groups: dict = {}
    for s, b in enumerate(numbering):
        groups.setdefault(b, set()).add(s)
    return tuple(sorted((frozenset(g) for g in groups.values()), key=min))


def quotient(c: CLTS) -> Partition:
    succ = [[(str(t.label), t.target) for t in ts] for ts in c.outgoing]
    return Partition(_blocks(_refine(succ)[-1]))


@dataclass(frozen=True)
class BisimResult:
    bisimilar: bool
    formula: str | None = None
    sequence: tuple | None = None

    def __bool__(self):
        return self.bisimilar


def _distinguish(succ: list, history: list, p: int, q: int):
    """HML formula true at ``p`` and false at ``q``, plus its action spine."""
    level = next(i for i, part in enumerate(history) if part[p] != part[q])
    prev = history[level - 1]
    for x, y, negate in ((p, q, False), (q, p, True)):
        ys = {(a, prev[t]) for a, t in succ[y]}
        for a, t in sorted(succ[x]):
            if (a, prev[t]) in ys:
                continue
            rivals = sorted(u for b, u in succ[y] if b == a)
            parts, spine = [], (a,)
            for u in rivals:
                f, sp = _distinguish(succ, history, t, u)
                parts.append(f)
                if len(spine) == 1:
                    spine = (a,) + sp
            body = " & ".join(parts) if parts else "tt"
            if len(parts) > 1:
                body = f"({body})"
            formula = f"<{a}>{body}"
            return (f"!{formula}" if negate else formula), spine
    raise AssertionError("states in different blocks must differ in a signature")


def strong_bisimilar(c1: CLTS, s1, c2: CLTS, s2) -> BisimResult:
    """Decide ``s1 ~ s2`` on the disjoint union of the two systems.

    Actions are matched by their printed name.  When the states differ, the
    result carries a separating formula and the action sequence along its
    leftmost diamonds.
    """
    i1, i2 = c1.state(s1), c2.state(s2)
    off = len(c1.states)
    succ = [[(str(t.label), t.target) for t in ts] for ts in c1.outgoing]
    succ += [[(str(t.label), t.target + off) for t in ts] for ts in c2.outgoing]
    history = _refine(succ)
    if history[-1][i1] == history[-1][i2 + off]:
        return BisimResult(True)
    formula, spine = _distinguish(succ, history, i1, i2 + off)
    return BisimResult(False, formula, spine)
