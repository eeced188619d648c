"""CCS with guarded choice: syntax, parsing and component-labelled semantics.

Concrete syntax::

    # line comment
    X = a.X + 'b.X          # agent identifiers start upper-case
    main = (X | b) \\ {b}    # names start lower-case, 'b is the co-name

``0`` is the empty choice, ``tau`` the internal action, ``P\\{a,b}`` (or
``P\\a``) restriction and ``P[b/a, d/c]`` relabelling with ``a -> b`` and
``c -> d``.  A bare action ``a`` abbreviates ``a.0``.  Binding strength, from
loosest to tightest: ``|``, ``+``, prefix ``.``, postfix ``\\`` and ``[..]``.

Components are plain strings over ``L`` and ``R``; ``""`` is the empty
component.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Union

__all__ = [
    "Action", "TAU", "Choice", "Parallel", "Restrict", "Relabel", "AgentId",
    "NIL", "Process", "Environment", "ParseError", "GuardednessError",
    "Violation", "StateBudgetExceeded", "BlockingViolation", "parse",
    "parse_process", "check_guarded", "derive_transitions", "explore",
    "normalize", "format_process", "DEFAULT_MAX_STATES",
]

DEFAULT_MAX_STATES = 10_000

_KIND_ORDER = {"tau": 0, "name": 1, "coname": 2}


@dataclass(frozen=True)
class Action:
    kind: str
    base: str | None = None

    def __post_init__(self):
        if self.kind not in _KIND_ORDER:
            raise ValueError(f"unknown action kind {self.kind!r}")
        if (self.kind == "tau") != (self.base is None):
            raise ValueError("tau carries no base name; names and co-names do")

    @classmethod
    def parse(cls, text: str) -> "Action":
        text = text.strip()
        if text in ("tau", "τ"):
            return TAU
        if text.startswith("'"):
            return cls("coname", text[1:])
        if not re.fullmatch(r"[a-z][A-Za-z0-9_]*", text):
            raise ValueError(f"not an action: {text!r}")
        return cls("name", text)

    @property
    def is_tau(self) -> bool:
        return self.kind == "tau"

    def complement(self) -> "Action":
        if self.kind == "tau":
            raise ValueError("complement is undefined for tau")
        return Action("coname" if self.kind == "name" else "name", self.base)

    def sort_key(self):
        return (self.base or "", _KIND_ORDER[self.kind])

    def __str__(self):
        if self.kind == "tau":
            return "tau"
        return self.base if self.kind == "name" else "'" + self.base

    def __repr__(self):
        return f"Action({str(self)!r})"


TAU = Action("tau")


# --- abstract syntax -------------------------------------------------------

@dataclass(frozen=True)
class Choice:
    """Guarded choice; the empty choice is the inactive process 0."""
    branches: tuple = ()


@dataclass(frozen=True)
class Parallel:
    left: "Process"
    right: "Process"


@dataclass(frozen=True)
class Restrict:
    proc: "Process"
    names: frozenset


@dataclass(frozen=True)
class Relabel:
    proc: "Process"
    mapping: tuple  # sorted (old, new) name pairs

    @property
    def fn(self) -> dict:
        return dict(self.mapping)

    def apply(self, a: Action) -> Action:
        if a.is_tau:
            return a
        return Action(a.kind, self.fn.get(a.base, a.base))


@dataclass(frozen=True)
class AgentId:
    name: str


Process = Union[Choice, Parallel, Restrict, Relabel, AgentId]
NIL = Choice(())


@dataclass(frozen=True, eq=False)
class Environment:
    """Defining equations ``X = P``.  Compared by identity."""
    defs: Mapping[str, Process] = field(default_factory=dict)

    def __getitem__(self, name: str) -> Process:
        return self.defs[name]

    def __contains__(self, name: str) -> bool:
        return name in self.defs

    def __iter__(self) -> Iterator[str]:
        return iter(self.defs)

    def __len__(self):
        return len(self.defs)


def term_key(p: Process):
    """Total order on terms, used to canonicalise choices and sort states."""
    if isinstance(p, Choice):
        return (0, tuple((a.sort_key(), term_key(q)) for a, q in p.branches))
    if isinstance(p, Parallel):
        return (1, term_key(p.left), term_key(p.right))
    if isinstance(p, Restrict):
        return (2, tuple(sorted(p.names)), term_key(p.proc))
    if isinstance(p, Relabel):
        return (3, p.mapping, term_key(p.proc))
    return (4, p.name)


def normalize(p: Process) -> Process:
    """Sort and deduplicate choice branches, recursively."""
    if isinstance(p, Choice):
        seen = {(a, normalize(q)) for a, q in p.branches}
        return Choice(tuple(sorted(seen, key=lambda b: (b[0].sort_key(), term_key(b[1])))))
    if isinstance(p, Parallel):
        return Parallel(normalize(p.left), normalize(p.right))
    if isinstance(p, Restrict):
        return Restrict(normalize(p.proc), p.names)
    if isinstance(p, Relabel):
        return Relabel(normalize(p.proc), p.mapping)
    return p


# --- pretty printing -------------------------------------------------------

_PAR, _SUM, _PREFIX, _POSTFIX = range(4)


def _prec(p: Process) -> int:
    if isinstance(p, Parallel):
        return _PAR
    if isinstance(p, Choice):
        return _SUM if len(p.branches) > 1 else _PREFIX if p.branches else _POSTFIX
    return _POSTFIX


def format_process(p: Process, ctx: int = _PAR) -> str:
    if isinstance(p, Choice):
        if not p.branches:
            text = "0"
        else:
            text = " + ".join(f"{a}.{format_process(q, _PREFIX)}" for a, q in p.branches)
    elif isinstance(p, Parallel):
        # left-associative: a right-nested parallel needs brackets
        text = f"{format_process(p.left, _PAR)} | {format_process(p.right, _SUM)}"
    elif isinstance(p, Restrict):
        text = format_process(p.proc, _POSTFIX) + "\\{" + ",".join(sorted(p.names)) + "}"
    elif isinstance(p, Relabel):
        pairs = ", ".join(f"{new}/{old}" for old, new in p.mapping)
        text = f"{format_process(p.proc, _POSTFIX)}[{pairs}]"
    else:
        text = p.name
    return f"({text})" if _prec(p) < ctx else text


# --- parsing ---------------------------------------------------------------

class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        where = f"line {line}, column {col}: " if line is not None else ""
        super().__init__(where + message)
        self.line = line
        self.col = col


@dataclass(frozen=True)
class Violation:
    """An agent whose definition reaches itself without passing a prefix."""
    agent: str
    cycle: tuple

    def __str__(self):
        return f"unguarded recursion through {' -> '.join(self.cycle + (self.cycle[0],))}"


class GuardednessError(ParseError):
    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(str(v) for v in self.violations))


_TOKEN_RE = re.compile(r"""
    (?P<ws>[ \t\r]+)
  | (?P<comment>\#[^\n]*)
  | (?P<nl>\n)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<zero>0)
  | (?P<sym>[.'+|\\{},\[\]/()=])
""", re.VERBOSE)


@dataclass
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    pos, line, line_start, depth = 0, 1, 0, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind, value = m.lastgroup, m.group()
        col = pos - line_start + 1
        if kind == "nl":
            if depth == 0:
                toks.append(_Tok("nl", value, line, col))
            line += 1
            line_start = m.end()
        elif kind == "sym":
            if value in "([{":
                depth += 1
            elif value in ")]}":
                depth -= 1
                if depth < 0:
                    raise ParseError(f"unbalanced {value!r}", line, col)
            toks.append(_Tok(value, value, line, col))
        elif kind in ("ident", "zero"):
            toks.append(_Tok(kind, value, line, col))
        pos = m.end()
    if depth:
        raise ParseError("unbalanced brackets at end of input", line, pos - line_start + 1)
    toks.append(_Tok("eof", "", line, pos - line_start + 1))
    return toks


def _is_agent(name: str) -> bool:
    return name[0].isupper()


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def next(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, kind: str) -> _Tok:
        if self.tok.kind != kind:
            self.fail(f"expected {kind!r}, found {self.tok.text or 'end of input'!r}")
        return self.next()

    def fail(self, msg: str):
        raise ParseError(msg, self.tok.line, self.tok.col)

    def skip_newlines(self):
        while self.tok.kind == "nl":
            self.next()

    def program(self):
        defs: dict[str, Process] = {}
        main = None
        bare = []
        self.skip_newlines()
        while self.tok.kind != "eof":
            t = self.tok
            if t.kind == "ident" and self.toks[self.i + 1].kind == "=":
                if not (_is_agent(t.text) or t.text == "main"):
                    self.fail(f"cannot define name {t.text!r}; agents start upper-case")
                self.next()
                self.next()
                body = self.expr()
                if t.text == "main":
                    if main is not None:
                        raise ParseError("main defined twice", t.line, t.col)
                    main = body
                elif t.text in defs:
                    raise ParseError(f"agent {t.text} defined twice", t.line, t.col)
                else:
                    defs[t.text] = body
            else:
                bare.append((t, self.expr()))
            if self.tok.kind not in ("nl", "eof"):
                self.fail(f"unexpected {self.tok.text!r}")
            self.skip_newlines()
        if bare:
            if main is not None or len(bare) > 1:
                t = bare[-1][0]
                raise ParseError("at most one bare process expression, and only without main", t.line, t.col)
            main = bare[0][1]
        if main is None:
            raise ParseError("no process given (define main = ...)")
        return defs, main

    def expr(self) -> Process:
        p = self.summation()
        while self.tok.kind == "|":
            self.next()
            p = Parallel(p, self.summation())
        return p

    def summation(self) -> Process:
        start = self.tok
        parts = [self.unary()]
        while self.tok.kind == "+":
            self.next()
            parts.append(self.unary())
        if len(parts) == 1:
            return parts[0]
        branches = []
        for part in parts:
            if not isinstance(part, Choice):
                raise ParseError("only guarded choice is supported: every summand needs an action prefix",
                                 start.line, start.col)
            branches.extend(part.branches)
        return Choice(tuple(branches))

    def action(self) -> Action:
        if self.tok.kind == "'":
            self.next()
            t = self.expect("ident")
            if _is_agent(t.text) or t.text == "tau":
                raise ParseError(f"{t.text!r} cannot be a co-name", t.line, t.col)
            return Action("coname", t.text)
        t = self.next()
        return TAU if t.text == "tau" else Action("name", t.text)

    def unary(self) -> Process:
        t = self.tok
        if t.kind == "'" or (t.kind == "ident" and not _is_agent(t.text)):
            if t.kind == "ident" and t.text == "main":
                self.fail("main cannot be referenced")
            a = self.action()
            if self.tok.kind == ".":
                self.next()
                return Choice(((a, self.unary()),))
            return self.postfix(Choice(((a, NIL),)))
        return self.postfix(self.atom())

    def atom(self) -> Process:
        t = self.next()
        if t.kind == "zero":
            return NIL
        if t.kind == "ident" and _is_agent(t.text):
            return AgentId(t.text)
        if t.kind == "(":
            p = self.expr()
            self.expect(")")
            return p
        raise ParseError(f"expected a process, found {t.text or 'end of input'!r}", t.line, t.col)

    def name(self) -> str:
        t = self.expect("ident")
        if _is_agent(t.text) or t.text in ("tau", "main"):
            raise ParseError(f"{t.text!r} is not a channel name", t.line, t.col)
        return t.text

    def postfix(self, p: Process) -> Process:
        while self.tok.kind in ("\\", "["):
            if self.next().kind == "\\":
                if self.tok.kind == "{":
                    self.next()
                    names = set()
                    if self.tok.kind != "}":
                        names.add(self.name())
                        while self.tok.kind == ",":
                            self.next()
                            names.add(self.name())
                    self.expect("}")
                else:
                    names = {self.name()}
                p = Restrict(p, frozenset(names))
            else:
                mapping = {}
                while True:
                    new = self.name()
                    self.expect("/")
                    t = self.tok
                    old = self.name()
                    if old in mapping:
                        raise ParseError(f"{old} relabelled twice", t.line, t.col)
                    mapping[old] = new
                    if self.tok.kind != ",":
                        break
                    self.next()
                self.expect("]")
                p = Relabel(p, tuple(sorted(mapping.items())))
        return p


def _agents_in(p: Process, guarded_only: bool | None = None) -> Iterator[str]:
    """Agent identifiers occurring in ``p``.

    With ``guarded_only=False`` only occurrences not beneath a prefix are
    yielded.
    """
    if isinstance(p, AgentId):
        yield p.name
    elif isinstance(p, Choice):
        if guarded_only is False:
            return
        for _, q in p.branches:
            yield from _agents_in(q, guarded_only)
    elif isinstance(p, Parallel):
        yield from _agents_in(p.left, guarded_only)
        yield from _agents_in(p.right, guarded_only)
    else:
        yield from _agents_in(p.proc, guarded_only)


def parse(text: str, check: bool = True) -> tuple[Environment, Process]:
    """Parse a CCS script into its environment and main process.

    Raises :class:`ParseError` for lexical/syntax errors and undefined
    agents, and :class:`GuardednessError` for unguarded recursion when
    ``check`` is set.
    """
    parser = _Parser(text)
    defs, main = parser.program()
    for owner, body in [("main", main), *defs.items()]:
        for name in _agents_in(body):
            if name not in defs:
                raise ParseError(f"agent {name} used in {owner} but never defined")
    env = Environment(defs)
    if check:
        violations = check_guarded(env, main)
        if violations:
            raise GuardednessError(violations)
    return env, main


def parse_process(text: str, env: Environment | None = None) -> Process:
    """Parse a single process expression against an existing environment."""
    parser = _Parser(text)
    parser.skip_newlines()
    p = parser.expr()
    parser.skip_newlines()
    if parser.tok.kind != "eof":
        parser.fail(f"unexpected {parser.tok.text!r}")
    defs = env.defs if env is not None else {}
    for name in _agents_in(p):
        if name not in defs:
            raise ParseError(f"agent {name} is not defined")
    return p


def check_guarded(env: Environment, root: Process | None = None) -> list[Violation]:
    """Report agents that can reach themselves through unguarded references.

    Only agents reachable from ``root`` are inspected (all agents if
    ``root`` is None).  Each offending agent comes with one witness cycle.
    """
    if root is None:
        todo = list(env)
    else:
        todo = list(dict.fromkeys(_agents_in(root)))
    reachable, seen = [], set(todo)
    while todo:
        x = todo.pop(0)
        reachable.append(x)
        for y in _agents_in(env[x]):
            if y not in seen:
                seen.add(y)
                todo.append(y)

    unguarded = {x: list(dict.fromkeys(_agents_in(env[x], guarded_only=False))) for x in reachable}
    violations = []
    for x in sorted(reachable):
        # shortest unguarded path x -> ... -> x
        parent = {}
        queue = deque([x])
        found = False
        while queue and not found:
            y = queue.popleft()
            for z in unguarded[y]:
                if z == x:
                    cycle = [y]
                    while cycle[-1] != x:
                        cycle.append(parent[cycle[-1]])
                    violations.append(Violation(x, tuple(reversed(cycle))))
                    found = True
                    break
                if z not in parent:
                    parent[z] = y
                    queue.append(z)
    return violations


# --- semantics -------------------------------------------------------------

def _prefix(d: str, comps: frozenset) -> frozenset:
    return frozenset(d + c for c in comps)


def _derive(p: Process, env: Environment, cache: dict) -> frozenset:
    hit = cache.get(p)
    if hit is not None:
        return hit
    if isinstance(p, Choice):
        out = frozenset((a, frozenset({""}), q) for a, q in p.branches)
    elif isinstance(p, Parallel):
        left = _derive(p.left, env, cache)
        right = _derive(p.right, env, cache)
        res = [(a, _prefix("L", c), Parallel(q, p.right)) for a, c, q in left]
        res += [(a, _prefix("R", d), Parallel(p.left, q)) for a, d, q in right]
        for a, c, q in left:
            if a.is_tau:
                continue
            co = a.complement()
            for b, d, r in right:
                if b == co:
                    res.append((TAU, _prefix("L", c) | _prefix("R", d), Parallel(q, r)))
        out = frozenset(res)
    elif isinstance(p, Restrict):
        out = frozenset((a, c, Restrict(q, p.names)) for a, c, q in _derive(p.proc, env, cache)
                        if a.is_tau or a.base not in p.names)
    elif isinstance(p, Relabel):
        out = frozenset((p.apply(a), c, Relabel(q, p.mapping)) for a, c, q in _derive(p.proc, env, cache))
    else:
        out = _derive(env[p.name], env, cache)
    cache[p] = out
    return out


def derive_transitions(p: Process, env: Environment | None = None) -> frozenset:
    """All ``(action, components, successor)`` triples of ``p``.

    ``env`` must be guarded; unguarded recursion does not terminate.
    """
    return _derive(p, env if env is not None else Environment(), {})


class StateBudgetExceeded(RuntimeError):
    def __init__(self, max_states: int, frontier: int):
        super().__init__(f"state budget of {max_states} exceeded with {frontier} states still unexplored")
        self.max_states = max_states
        self.frontier = frontier


class BlockingViolation(ValueError):
    pass


def _relabellings(p: Process) -> Iterator[Relabel]:
    if isinstance(p, Relabel):
        yield p
        yield from _relabellings(p.proc)
    elif isinstance(p, Choice):
        for _, q in p.branches:
            yield from _relabellings(q)
    elif isinstance(p, Parallel):
        yield from _relabellings(p.left)
        yield from _relabellings(p.right)
    elif isinstance(p, Restrict):
        yield from _relabellings(p.proc)


def _check_relabellings(p: Process, env: Environment, blocking: frozenset):
    agents = set(_agents_in(p))
    todo = list(agents)
    while todo:
        for y in _agents_in(env[todo.pop()]):
            if y not in agents:
                agents.add(y)
                todo.append(y)
    for body in [p, *(env[x] for x in sorted(agents))]:
        for rel in _relabellings(body):
            for old, new in rel.mapping:
                for kind in ("name", "coname"):
                    a, b = Action(kind, old), Action(kind, new)
                    if a not in blocking and b in blocking:
                        raise BlockingViolation(
                            f"relabelling [{new}/{old}] maps non-blocking {a} to blocking {b}")


def explore(p: Process, env: Environment | None = None, blocking: Iterable[Action] | None = None,
            max_states: int = DEFAULT_MAX_STATES):
    """Build the reachable component-labelled transition system of ``p``.

    ``blocking=None`` selects the default: every visible action blocks.
    States are numbered in breadth-first order and named ``s0, s1, ...``;
    the process term of each state is kept in ``CLTS.terms``.
    """
    from .clts import CLTS, Transition

    if max_states < 1:
        raise ValueError("max_states must be at least 1")
    env = env if env is not None else Environment()
    if blocking is not None:
        blocking = frozenset(blocking)
        _check_relabellings(p, env, blocking)
    root = normalize(p)
    env = Environment({x: normalize(body) for x, body in env.defs.items()})
    cache: dict = {}
    index = {root: 0}
    terms = [root]
    transitions = []
    queue = deque([root])
    while queue:
        s = queue.popleft()
        succ = sorted(_derive(s, env, cache),
                      key=lambda t: (t[0].sort_key(), tuple(sorted(t[1])), term_key(t[2])))
        for a, comps, q in succ:
            if q not in index:
                if len(terms) >= max_states:
                    raise StateBudgetExceeded(max_states, len(queue) + 1)
                index[q] = len(terms)
                terms.append(q)
                queue.append(q)
            transitions.append(Transition(len(transitions), index[s], a, comps, index[q]))
    if blocking is None:
        blocking = frozenset(t.label for t in transitions if not t.label.is_tau)
    return CLTS(
        states=tuple(f"s{i}" for i in range(len(terms))),
        transitions=tuple(transitions),
        initial=0,
        blocking=blocking,
        terms=tuple(format_process(q) for q in terms),
    )
