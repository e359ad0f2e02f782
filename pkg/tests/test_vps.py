"""Visibly pushdown systems, configurations, runs, and the system parser."""

import pytest

from vldlcheck.alphabet import (PushdownAlphabet, default_alphabet,
                                parse_word_spec)
from vldlcheck.errors import InputError
from vldlcheck.formula import And, Atom, TvpaLibrary
from vldlcheck.vps import (BOTTOM, EMPTY_STACK, Tvpa, Vps, parse_system,
                           run_on_lasso, successors, system_to_str)


def make_alphabet():
    return PushdownAlphabet(["c"], ["r"], ["l"],
                            props={"c": {"p"}, "l": {"q"}})


def generator(ab):
    """Two states producing exactly (c r)^omega."""
    return Vps(["g0", "g1"], ab, ["A"],
               calls=[("g0", "c", "g1", "A")],
               returns=[("g1", "r", "A", "g0")],
               locals_=[],
               initial="g0")


# -------------------------------------------------------------- validation

def test_initial_state_must_exist():
    ab = make_alphabet()
    with pytest.raises(InputError):
        Vps(["q"], ab, [], [], [], [], "other")


def test_bottom_is_a_reserved_stack_symbol():
    ab = make_alphabet()
    with pytest.raises(InputError):
        Vps(["q"], ab, [BOTTOM], [], [], [], "q")


def test_call_may_not_push_bottom():
    ab = make_alphabet()
    with pytest.raises(InputError):
        Vps(["q"], ab, ["A"], [("q", "c", "q", BOTTOM)], [], [], "q")


def test_transitions_respect_symbol_classes():
    ab = make_alphabet()
    with pytest.raises(InputError):
        Vps(["q"], ab, ["A"], [("q", "l", "q", "A")], [], [], "q")
    with pytest.raises(InputError):
        Vps(["q"], ab, ["A"], [], [("q", "c", "A", "q")], [], "q")
    with pytest.raises(InputError):
        Vps(["q"], ab, ["A"], [], [], [("q", "r", "q")], "q")


def test_tvpa_final_states_must_exist():
    ab = make_alphabet()
    with pytest.raises(InputError):
        Tvpa(["q"], ab, [], [], [], [], "q", {"zz"})


def test_tvpa_test_states_must_exist():
    ab = make_alphabet()
    with pytest.raises(InputError):
        Tvpa(["q"], ab, [], [], [], [], "q", {"q"},
             tests={"zz": Atom("p")})


# ------------------------------------------------------------ successors

def test_call_pushes():
    ab = make_alphabet()
    sys_ = generator(ab)
    got = successors(sys_, ("g0", EMPTY_STACK), "c")
    assert got == {("g1", ("A", BOTTOM))}


def test_return_pops():
    ab = make_alphabet()
    sys_ = generator(ab)
    got = successors(sys_, ("g1", ("A", BOTTOM)), "r")
    assert got == {("g0", EMPTY_STACK)}


def test_bottom_return_keeps_empty_stack():
    ab = make_alphabet()
    sys_ = Vps(["q"], ab, [], [], [("q", "r", BOTTOM, "q")], [], "q")
    got = successors(sys_, ("q", EMPTY_STACK), "r")
    assert got == {("q", EMPTY_STACK)}


def test_no_transition_means_no_successor():
    ab = make_alphabet()
    sys_ = generator(ab)
    assert successors(sys_, ("g0", EMPTY_STACK), "r") == set()
    assert successors(sys_, ("g0", EMPTY_STACK), "l") == set()


# ----------------------------------------------------------- run_on_lasso

def test_generator_runs_its_own_trace():
    ab = make_alphabet()
    sys_ = generator(ab)
    assert run_on_lasso(sys_, parse_word_spec("(c r)^w", ab))
    assert run_on_lasso(sys_, parse_word_spec("c r (c r)^w", ab))


def test_generator_rejects_other_traces():
    ab = make_alphabet()
    sys_ = generator(ab)
    assert not run_on_lasso(sys_, parse_word_spec("(l)^w", ab))
    assert not run_on_lasso(sys_, parse_word_spec("c (c r)^w", ab))
    assert not run_on_lasso(sys_, parse_word_spec("r (c r)^w", ab))


def test_run_with_growing_stack():
    # Pushing forever is a legitimate infinite run.
    ab = make_alphabet()
    sys_ = Vps(["q"], ab, ["A"], [("q", "c", "q", "A")], [], [], "q")
    assert run_on_lasso(sys_, parse_word_spec("(c)^w", ab))
    assert not run_on_lasso(sys_, parse_word_spec("(c r)^w", ab))


def test_run_with_draining_period():
    # The period pops pushed frames and refills them.
    ab = make_alphabet()
    sys_ = Vps(["q"], ab, ["A"],
               calls=[("q", "c", "q", "A")],
               returns=[("q", "r", "A", "q"), ("q", "r", BOTTOM, "q")],
               locals_=[("q", "l", "q")],
               initial="q")
    assert run_on_lasso(sys_, parse_word_spec("c c (r c)^w", ab))
    assert run_on_lasso(sys_, parse_word_spec("(r)^w", ab))


def test_empty_system_runs_nothing():
    ab = make_alphabet()
    sys_ = Vps(["q"], ab, [], [], [], [], "q")
    assert not run_on_lasso(sys_, parse_word_spec("(l)^w", ab))


# ----------------------------------------------------------------- parser

def test_parse_system_vps():
    ab = make_alphabet()
    sys_ = parse_system("""
        states: g0 g1;
        initial: g0;
        g0 -c push A-> g1;
        g1 -r pop A-> g0;
    """, ab)
    assert isinstance(sys_, Vps) and not isinstance(sys_, Tvpa)
    assert set(sys_.states) == {"g0", "g1"}
    assert sys_.initial == "g0"
    assert ("g0", "c", "g1", "A") in sys_.calls
    assert ("g1", "r", "A", "g0") in sys_.returns


def test_parse_system_tvpa_with_tests():
    ab = make_alphabet()
    sys_ = parse_system("""
        name: Checker;
        states: s0 s1;
        initial: s0;
        final: s1;
        s0 -l-> s1;
        s0 -r pop ⊥-> s1;
        test s0: p & q;
    """, ab)
    assert isinstance(sys_, Tvpa)
    assert sys_.name == "Checker"
    assert sys_.final == frozenset({"s1"})
    assert sys_.tests["s0"] == And(Atom("p"), Atom("q"))
    assert sys_.tests["s1"] is None
    assert ("s0", "r", BOTTOM, "s1") in sys_.returns


def test_parse_system_round_trip():
    ab = make_alphabet()
    text = """
        name: Checker;
        states: s0 s1;
        initial: s0;
        final: s1;
        s0 -c push A-> s1;
        s1 -r pop A-> s0;
        s0 -l-> s1;
        test s0: p;
    """
    sys_ = parse_system(text, ab)
    again = parse_system(system_to_str(sys_), ab)
    assert isinstance(again, Tvpa)
    assert set(again.states) == set(sys_.states)
    assert again.calls == sys_.calls
    assert again.returns == sys_.returns
    assert again.locals == sys_.locals
    assert again.final == sys_.final
    assert again.tests == sys_.tests


def test_parse_system_rejects_garbage():
    ab = make_alphabet()
    for text in ("initial: q;",                 # no states
                 "states: q;",                  # no initial
                 "states: q; initial: q; q -c-> q;",   # call needs a push
                 "states: q; initial: q; q -zz-> q;"):  # unknown symbol
        with pytest.raises(InputError):
            parse_system(text, ab)


def test_parse_system_test_needs_library_for_modalities():
    ab = make_alphabet()
    lib = TvpaLibrary(ab)
    inner = parse_system("""
        states: s0 s1; initial: s0; final: s1;
        s0 -l-> s1;
    """, ab)
    lib.add("Inner", inner)
    outer = parse_system("""
        states: t0 t1; initial: t0; final: t1;
        t0 -l-> t1;
        test t0: p & q;
    """, ab, library=lib)
    assert isinstance(outer, Tvpa)
