import json

import pytest

from justcheck import catalog
from justcheck.clts import CLTS, TaskFamily, Transition
from justcheck.ccs import Action
from justcheck.runs import (
    MalformedRun, Run, classify, format_run, is_j_fair, is_just, is_progressing,
    is_strongly_fair, is_weakly_fair, parse_run, run_to_json,
)

# phone-Q: t0 s0 -tau {L,R}-> s1, t1 s0 -a {L}-> s0, t2 s1 -a {L}-> s1
PHONE_A_CYCLE = Run((0,), (), (1,))
# alice-cataline: t0 s1 -a {L}-> s1, t1 s1 -cr {R}-> s2, t2 s2 -a {L}-> s2
ALICE_A_CYCLE = Run((0,), (), (0,))
CROISSANT_RUN = Run((0, 1), (0,))


def flags(c, r):
    return classify(c, r).flags()


# --- progress ----------------------------------------------------------------

def test_progress_croissant(croissant):
    c, _ = croissant
    assert is_progressing(c, CROISSANT_RUN)
    assert not is_progressing(c, Run((0,)))


def test_progress_buffer_stuck_after_input():
    c, _ = catalog.load_example("buffer-a")
    assert is_progressing(c, Run((0, 1), (0,)))


# --- justness ------------------------------------------------------------------

def test_justness(alice, phone):
    assert not is_just(alice[0], ALICE_A_CYCLE)
    assert is_just(phone[0], PHONE_A_CYCLE)


def test_justness_after_croissant(alice):
    c, _ = alice
    assert is_just(c, Run((0, 0, 0, 1), (0, 0, 1), (2,)))


def test_justness_obligation_in_prefix():
    # p offers x/{L} and x/{R}; each can still happen after the other
    x = Action.parse("x")
    c = CLTS(("p", "q", "r", "s"), (
        Transition(0, 0, x, frozenset({"L"}), 1),
        Transition(1, 0, x, frozenset({"R"}), 2),
        Transition(2, 1, x, frozenset({"R"}), 3),
        Transition(3, 2, x, frozenset({"L"}), 3),
        Transition(4, 1, x, frozenset({"L"}), 1),
        Transition(5, 3, x, frozenset({"L"}), 3),
    ), 0, frozenset())
    assert c.is_valid
    assert not is_just(c, Run((0, 1), (0,), (4,)))
    assert is_just(c, Run((0, 1, 3), (0, 2), (5,)))


# --- weak and strong fairness ----------------------------------------------

def test_weak_fairness(phone, croissant):
    q, _ = phone
    assert not is_weakly_fair(q, PHONE_A_CYCLE)
    assert is_weakly_fair(q, Run((0, 1), (0,), (2,)))
    assert is_weakly_fair(croissant[0], CROISSANT_RUN)


def test_strong_fairness(phone, alice):
    assert not is_strongly_fair(phone[0], PHONE_A_CYCLE)
    assert not is_strongly_fair(alice[0], ALICE_A_CYCLE)


def test_strong_fairness_all_tasks_in_cycle():
    a = Action.parse("a")
    tau = Action.parse("tau")
    c = CLTS(("p", "q"), (
        Transition(0, 0, a, frozenset({"L"}), 1),
        Transition(1, 1, tau, frozenset({"R"}), 0),
    ), 0, frozenset())
    assert is_strongly_fair(c, Run((0,), (), (0, 1)))


def test_strong_but_not_weak_distinction():
    # task T_R enabled only at p, and p is visited on each lap without R firing
    a, b = Action.parse("a"), Action.parse("b")
    c = CLTS(("p", "q"), (
        Transition(0, 0, a, frozenset({"L"}), 1),
        Transition(1, 1, a, frozenset({"L"}), 0),
        Transition(2, 0, b, frozenset({"R"}), 0),
        Transition(3, 1, b, frozenset({"R"}), 1),
    ), 0, frozenset())
    r = Run((0,), (), (0, 1))
    assert not is_weakly_fair(c, r) and not is_strongly_fair(c, r)
    tk = TaskFamily({"L": frozenset({0, 1}), "Rp": frozenset({2})})
    assert is_weakly_fair(c, r, tk)
    assert not is_strongly_fair(c, r, tk)


def test_explicit_empty_task_family_is_respected(phone):
    assert is_strongly_fair(phone[0], PHONE_A_CYCLE, TaskFamily({}))


# --- J-fairness ----------------------------------------------------------------

def test_j_fairness(phone, par_p, croissant):
    assert is_j_fair(phone[0], PHONE_A_CYCLE)
    assert not is_j_fair(par_p[0], Run((0,), (), (1,)))
    assert is_j_fair(croissant[0], CROISSANT_RUN)


# --- classify ----------------------------------------------------------------

def test_classify_phone_cycle(phone):
    assert flags(phone[0], PHONE_A_CYCLE) == {
        "progressing": True, "just": True, "j_fair": True, "weakly_fair": False, "strongly_fair": False}


def test_classify_alice_cycle(alice):
    assert flags(alice[0], ALICE_A_CYCLE) == {
        "progressing": True, "just": False, "j_fair": False, "weakly_fair": False, "strongly_fair": False}


def test_classify_croissant(croissant):
    assert all(flags(croissant[0], CROISSANT_RUN).values())


def test_classify_witness(alice):
    report = classify(alice[0], ALICE_A_CYCLE)
    assert report.witnesses["just"] == (0, 1)
    assert report.witnesses["strongly_fair"] == (0, "R")


# --- shape checks, rotation, text forms -----------------------------------------

def test_malformed_runs(phone):
    c, _ = phone
    with pytest.raises(MalformedRun):
        Run((0, 0), (0,)).check(c)     # t0 goes to s1
    with pytest.raises(MalformedRun):
        Run((0,), (), (0,)).check(c)   # cycle does not return
    with pytest.raises(MalformedRun):
        Run((0, 1)).check(c)
    with pytest.raises(MalformedRun):
        Run((0,), (), (9,)).check(c)


def test_rotate_and_unroll():
    c, _ = catalog.load_example("buffer-a")
    r = Run((0,), (), (0, 1, 3, 5))
    rot = r.rotate(c, 2)
    assert rot.states == (0, 1, 2) and rot.transitions == (0, 1) and rot.cycle == (3, 5, 0, 1)
    assert r.unroll(3).cycle == (0, 1, 3, 5) * 3
    assert flags(c, r) == flags(c, rot) == flags(c, r.unroll(2))


def test_text_round_trip(phone):
    c, _ = phone
    r = Run((0, 1), (0,), (2,))
    text = format_run(c, r)
    assert text == "s0 -t0-> s1 @ cycle: s1 -t2-> s1"
    assert parse_run(c, text) == r
    assert parse_run(c, json.dumps(run_to_json(c, r))) == r
    assert parse_run(c, '{"prefix": ["s0"], "cycle": ["s0", 1, "s0"]}') == PHONE_A_CYCLE


@pytest.mark.parametrize("text", [
    "", "s0 -t0->", "s0 -x-> s1", "s0 @ cycle: s1 -t2-> s1", "s9", "{bad json",
    "s0 @ loop: s0 -t1-> s0",
])
def test_parse_run_errors(phone, text):
    with pytest.raises(MalformedRun):
        parse_run(phone[0], text)
