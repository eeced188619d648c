"""Named example systems with their goal sets.

Hand-drawn systems live as CLTS JSON under ``data/``; CCS systems as
``.ccs`` scripts whose goals are given as process terms; the two counter
programs are generated.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path

from .ccs import Action, normalize, parse, parse_process, explore, format_process
from .clts import CLTS, Transition, from_json, to_json

__all__ = ["Example", "CATALOG", "XY_TABLE_CRITERIA", "names", "load_example", "export_catalog",
           "xy_table_entries", "counter_system", "ccs_source"]


@dataclass(frozen=True)
class Example:
    name: str
    kind: str              # "json", "ccs" or "counter"
    notes: str
    goal_terms: dict = field(default_factory=dict)   # ccs only: goal -> process terms


CATALOG = {e.name: e for e in [
    Example("croissant", "json", "two-state croissant system, cr non-blocking"),
    Example("alice-cataline", "json", "Alice's a-loop (component L) beside Cataline's cr (component R)"),
    Example("phone-Q", "ccs", "(X | b)\\b with X = a.X + 'b.X; default blocking set",
            {"connected": ["(X | 0)\\{b}"]}),
    Example("par-P", "ccs", "Y | tau with Y = a.Y; default blocking set", {"done": ["Y | 0"]}),
    Example("buffer-a", "json", "one-bit buffer, reads blocking"),
    Example("buffer-b", "json", "one-bit buffer, uninteresting actions hidden"),
    Example("buffer-c", "json", "one-bit buffer, abstract cycle"),
    Example("buffer-d", "json", "one-bit buffer that may lose the 1-offering environment"),
    Example("buffer-e", "json", "one-bit buffer with internal choice of the value sent"),
    Example("prog-P-counter", "counter", "x:=1 || repeat y:=y+1, y saturating at 7"),
    Example("prog-Q-counter", "counter", "case y:=y+1 or (x=0 -> x:=1), y saturating at 7"),
    Example("prog-Pprime", "json", "repeat x:=1 || repeat y:=y+1 as one state with two loops"),
]}


def names() -> list:
    return list(CATALOG)


def _data(name: str) -> str:
    return resources.files("justcheck").joinpath("data", name).read_text(encoding="utf-8")


def counter_system(variant: str, limit: int = 7) -> tuple[CLTS, dict]:
    """Unfold the two-state x/y program over ``y`` in ``0..limit``.

    The increment saturates at ``limit`` (a self-loop there).  ``setx``
    carries components ``{L}`` in P and ``{L,R}`` in Q, where it is a case
    of the same loop as the increment.
    """
    if variant not in ("P", "Q"):
        raise ValueError("variant is P or Q")
    setx_comps = frozenset({"L"}) if variant == "P" else frozenset({"L", "R"})
    states = [f"x{x}y{y}" for x in (0, 1) for y in range(limit + 1)]
    ix = {s: i for i, s in enumerate(states)}
    trans = []
    for x in (0, 1):
        for y in range(limit + 1):
            here = ix[f"x{x}y{y}"]
            trans.append(Transition(len(trans), here, Action("name", "incy"), frozenset({"R"}),
                                    ix[f"x{x}y{min(y + 1, limit)}"]))
            if x == 0:
                trans.append(Transition(len(trans), here, Action("name", "setx"), setx_comps,
                                        ix[f"x1y{y}"]))
    c = CLTS(tuple(states), tuple(trans), 0, frozenset(), name=f"prog-{variant}-counter")
    goals = {
        "y7": frozenset(ix[f"x{x}y{limit}"] for x in (0, 1)),
        "x1": frozenset(ix[f"x1y{y}"] for y in range(limit + 1)),
    }
    return c, goals


@lru_cache(maxsize=None)
def load_example(name: str) -> tuple[CLTS, dict]:
    """The catalog system ``name`` and its goal sets (name -> state indices)."""
    try:
        ex = CATALOG[name]
    except KeyError:
        raise KeyError(f"unknown example {name!r}; available: {', '.join(CATALOG)}") from None
    if ex.kind == "json":
        return from_json(json.loads(_data(f"{name}.json")))
    if ex.kind == "counter":
        return counter_system(name.split("-")[1])
    env, main = parse(_data(f"{name}.ccs"))
    c = explore(main, env)
    c = CLTS(c.states, c.transitions, c.initial, c.blocking, c.terms, name=name)
    by_term = {t: i for i, t in enumerate(c.terms)}
    goals = {}
    for goal, terms in ex.goal_terms.items():
        ids = set()
        for text in terms:
            key = format_process(normalize(parse_process(text, env)))
            if key not in by_term:
                raise ValueError(f"goal term {text!r} of {name} is not reachable")
            ids.add(by_term[key])
        goals[goal] = frozenset(ids)
    return c, goals


def ccs_source(name: str) -> str:
    if CATALOG[name].kind != "ccs":
        raise ValueError(f"{name} is not a CCS example")
    return _data(f"{name}.ccs")


def export_catalog(directory) -> list:
    """Write every catalog system as standalone CLTS JSON; returns the paths."""
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    for name, ex in CATALOG.items():
        c, goals = load_example(name)
        doc = to_json(c, goals, notes=ex.notes)
        doc["name"] = name
        path = out / f"{name}.json"
        path.write_text(json.dumps(doc, indent=1, ensure_ascii=False) + "\n", encoding="utf-8")
        paths.append(path)
    return paths


def xy_table_entries() -> list:
    """Columns of the x/y liveness table: (P,y=7), (Q,y=7), (P,x=1), (Q,x=1)."""
    p, pg = load_example("prog-P-counter")
    q, qg = load_example("prog-Q-counter")
    return [("P", "y=7", p, pg["y7"]), ("Q", "y=7", q, qg["y7"]),
            ("P", "x=1", p, pg["x1"]), ("Q", "x=1", q, qg["x1"])]


XY_TABLE_CRITERIA = ("full_fairness", "justness", "progress", "empty")
