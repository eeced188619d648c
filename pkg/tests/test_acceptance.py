"""Acceptance criteria AC1 to AC10.

Each test records one PASS/FAIL line, printed in the terminal summary.
"""

import itertools
import random
import time
from functools import lru_cache

from justcheck import catalog
from justcheck.bisim import strong_bisimilar
from justcheck.ccs import TAU, Action, derive_transitions, explore, format_process, normalize, parse
from justcheck.cli import main
from justcheck.clts import CLTS, NoninterferenceViolation, Transition, validate
from justcheck.liveness import Criterion, check_liveness, find_counterexample
from justcheck.randgen import random_clts, random_run
from justcheck.runs import Run, classify

from oracle import CRITERIA, oracle_counterexamples
from test_clts import violating_fixture

XY_TABLE = [list("++++"), list("+++-"), list("++--"), list("----")]
HIERARCHY = ("strongly_fair", "weakly_fair", "j_fair", "just", "progressing")


def test_ac1_xy_table(record, capsys):
    start = time.perf_counter()
    code = main(["matrix", "--paper-fig3"])
    elapsed = time.perf_counter() - start
    lines = capsys.readouterr().out.splitlines()
    signs = [line.split()[-4:] for line in lines[2:]]
    titles = [line.rsplit(None, 4)[0].strip() for line in lines[2:]]
    ok = code == 0 and signs == XY_TABLE and titles == ["full fairness", "justness", "progress", "∅"] \
        and elapsed < 1.0
    record(1, ok, f"x/y table {'matches' if signs == XY_TABLE else 'differs'}, {elapsed * 1000:.1f} ms")
    assert ok


def test_ac2_phone(record):
    start = time.perf_counter()
    q, qg = catalog.load_example("phone-Q")
    p, pg = catalog.load_example("par-P")
    weak = check_liveness(q, qg["connected"], Criterion.WEAK_FAIRNESS)
    strong = check_liveness(q, qg["connected"], Criterion.STRONG_FAIRNESS)
    just = check_liveness(q, qg["connected"], Criterion.JUSTNESS)
    par = check_liveness(p, pg["done"], Criterion.JUSTNESS)
    a_loop = next(t.id for t in q.transitions if t.source == q.initial and str(t.label) == "a")
    elapsed = time.perf_counter() - start
    ok = (weak.holds and strong.holds and not just.holds
          and just.counterexample == Run((q.initial,), (), (a_loop,))
          and par.holds and elapsed < 1.0)
    record(2, ok, f"weak {weak.holds}, strong {strong.holds}, justness {just.holds}, "
                  f"par-P justness {par.holds}, {elapsed * 1000:.1f} ms")
    assert ok


def test_ac3_croissant_alice(record):
    start = time.perf_counter()
    cr, cg = catalog.load_example("croissant")
    al, ag = catalog.load_example("alice-cataline")
    empty = find_counterexample(cr, cg["eaten"], Criterion.EMPTY)
    prog = check_liveness(cr, cg["eaten"], Criterion.PROGRESS)
    al_prog = check_liveness(al, ag["eaten"], Criterion.PROGRESS)
    al_just = check_liveness(al, ag["eaten"], Criterion.JUSTNESS)
    elapsed = time.perf_counter() - start
    ok = (empty == Run((cr.initial,)) and prog.holds
          and not al_prog.holds and al_prog.counterexample == Run((0,), (), (0,))
          and str(al.transition(0).label) == "a"
          and al_just.holds and elapsed < 1.0)
    record(3, ok, f"croissant empty cex len {len(empty.transitions)}, progress {prog.holds}; "
                  f"alice progress {al_prog.holds}, justness {al_just.holds}")
    assert ok


def test_ac4_bisimilar_but_different(record):
    p, pg = catalog.load_example("par-P")
    q, qg = catalog.load_example("phone-Q")
    bis = strong_bisimilar(p, p.initial, q, q.initial)
    vp = check_liveness(p, pg["done"], Criterion.JUSTNESS).holds
    vq = check_liveness(q, qg["connected"], Criterion.JUSTNESS).holds
    ok = bool(bis) and vp != vq
    record(4, ok, f"bisimilar {bool(bis)}, justness verdicts P={vp} Q={vq}")
    assert ok


@lru_cache(maxsize=None)
def random_suite(n=1000, seed=2024):
    rng = random.Random(seed)
    suite = []
    while len(suite) < n:
        c = random_clts(rng, max_states=8, max_transitions=14, n_components=4)
        r = random_run(rng, c)
        if r.cycle:
            suite.append((c, r))
    return suite


def test_ac5_hierarchy(record):
    suite = random_suite()
    violations = 0
    for c, r in suite:
        assert validate(c) == []
        assert len(c.states) <= 8 and len(c.transitions) <= 14 and len(c.components) <= 4
        f = classify(c, r).flags()
        chain = [f[k] for k in HIERARCHY]
        violations += sum(1 for a, b in zip(chain, chain[1:]) if a and not b)
    ok = len(suite) >= 1000 and violations == 0
    record(5, ok, f"{len(suite)} random validated lassos, {violations} hierarchy violations")
    assert ok


def test_ac6_strictness(record):
    q, _ = catalog.load_example("phone-Q")
    al, _ = catalog.load_example("alice-cataline")
    fq = classify(q, Run((0,), (), (1,))).flags()
    fa = classify(al, Run((0,), (), (0,))).flags()
    weak_not_strong = sum(1 for c, r in random_suite()
                          if (f := classify(c, r).flags())["weakly_fair"] and not f["strongly_fair"])
    ok = (fq["j_fair"] and not fq["weakly_fair"] and fa["progressing"] and not fa["just"]
          and weak_not_strong >= 1)
    record(6, ok, f"phone j_fair&!weak {fq['j_fair'] and not fq['weakly_fair']}, "
                  f"alice progressing&!just {fa['progressing'] and not fa['just']}, "
                  f"{weak_not_strong} weak&!strong lassos in the random suite")
    assert ok


A = Action.parse("a")
COMPS = (frozenset({"L"}), frozenset({"R"}), frozenset({"L", "R"}))


def tiny_family():
    """Every valid CLTS over labels a/tau and components L, R, LR with
    n states and at most k transitions, for (n, k) in a fixed list."""
    for n, k, blockings in ((1, 4, (frozenset({A}), frozenset())), (2, 3, (frozenset({A}), frozenset())),
                            (3, 2, (frozenset({A}),)), (4, 2, (frozenset({A}),))):
        pool = [(s, x, cm, t) for s in range(n) for x in (A, TAU) for cm in COMPS for t in range(n)]
        names = tuple(f"q{i}" for i in range(n))
        for size in range(k + 1):
            for chosen in itertools.combinations(pool, size):
                trans = tuple(Transition(i, *x) for i, x in enumerate(chosen))
                for blocking in blockings:
                    c = CLTS(names, trans, 0, blocking)
                    if c.is_valid:
                        for r in range(n):
                            for goal in itertools.combinations(range(1, n), r):
                                yield c, frozenset(goal)


def random_tiny(n=500, seed=99):
    rng = random.Random(seed)
    for _ in range(n):
        c = random_clts(rng, max_states=4, max_transitions=6, n_components=2, labels=("a", "b", "tau"))
        yield c, frozenset(s for s in range(1, len(c.states)) if rng.random() < 0.35)


def test_ac7_oracle_equivalence(record):
    start = time.perf_counter()
    cases = mismatches = 0
    first = None
    for c, goal in itertools.chain(tiny_family(), random_tiny()):
        want = oracle_counterexamples(c, goal)
        for k in CRITERIA:
            got = find_counterexample(c, goal, k) is not None
            cases += 1
            if got != want[k]:
                mismatches += 1
                first = first or (c, goal, k)
    elapsed = time.perf_counter() - start
    ok = mismatches == 0 and elapsed < 300
    record(7, ok, f"{cases} verdicts compared, {mismatches} mismatches, {elapsed:.1f} s")
    assert ok, first


def test_ac8_property_one(record):
    corpus = [catalog.ccs_source(n) for n, ex in catalog.CATALOG.items() if ex.kind == "ccs"] + [
        "main = a.0 | 'a.0",
        "main = (a.0 | b.0) | ('a.0 + 'b.0)",
        "X = a.X + 'b.X\nmain = (X | b.0 | b.0)\\{b}",
        "B = in.'out.B\nmain = (B[m/out] | B[m/in])\\{m}",
        "C = up.down.C\nmain = C | C | C",
        "S = tau.S + a.S\nmain = (S | 'a.0) | (S | 'a.0)",
    ]
    bad = []
    for src in corpus:
        env, m = parse(src)
        if validate(explore(m, env)):
            bad.append(src)
    fixture = validate(violating_fixture())
    ok = not bad and fixture == [NoninterferenceViolation(0, 1)]
    record(8, ok, f"{len(corpus) - len(bad)}/{len(corpus)} CCS systems valid; "
                  f"fixture reports {[(p.t, p.v) for p in fixture]}")
    assert ok


def test_ac9_phone_transitions(record):
    env, q = parse(catalog.ccs_source("phone-Q"))
    got = {(str(x), frozenset(cm), format_process(normalize(p))) for x, cm, p in derive_transitions(q, env)}
    want = {("a", frozenset({"L"}), format_process(normalize(q))),
            ("tau", frozenset({"L", "R"}), "(X | 0)\\{b}")}
    ok = got == want
    shown = sorted(f"{x} {{{','.join(sorted(cm))}}} {p}" for x, cm, p in got)
    record(9, ok, "; ".join(shown))
    assert ok


def test_ac10_rotation_unrolling(record):
    rng = random.Random(77)
    checked = changed = 0
    while checked < 1000:
        c = random_clts(rng, max_states=8, max_transitions=14, n_components=4)
        r = random_run(rng, c)
        if not r.cycle:
            continue
        base = classify(c, r).flags()
        variants = [r.rotate(c, k) for k in range(1, len(r.cycle) + 1)] + [r.unroll(2), r.unroll(3),
                                                                           r.rotate(c, 1).unroll(2)]
        changed += sum(1 for v in variants if classify(c, v).flags() != base)
        checked += 1
    ok = changed == 0
    record(10, ok, f"{checked} lassos, {changed} flag changes under rotation/unrolling")
    assert ok
