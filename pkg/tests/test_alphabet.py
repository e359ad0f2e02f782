"""Pushdown alphabets, lasso words, and matched-call arithmetic."""

import random

import pytest

from vldlcheck.alphabet import (CALL, LOCAL, RETURN, LassoWord,
                                PushdownAlphabet, cardinal_positions,
                                default_alphabet, is_well_matched,
                                matching_return, parse_alphabet,
                                parse_word_spec, stack_height)
from vldlcheck.errors import InputError


def make_alphabet():
    return PushdownAlphabet(["c", "d"], ["r"], ["l"],
                            props={"c": {"p"}, "l": {"p", "q"}})


def brute_match(lasso, k, bound):
    """Reference matcher: scan every position up to `bound`."""
    target = lasso.height_before(k)
    h = target + 1
    for j in range(k + 1, bound):
        kind = lasso.alphabet.kind(lasso[j])
        if kind == CALL:
            h += 1
        elif kind == RETURN:
            h -= 1
            if h == target:
                return j
    return None


# ---------------------------------------------------------------- alphabet

def test_kind_partition():
    ab = make_alphabet()
    assert ab.kind("c") == CALL and ab.kind("d") == CALL
    assert ab.kind("r") == RETURN
    assert ab.kind("l") == LOCAL
    assert ab.is_call("c") and not ab.is_call("r")
    assert ab.is_return("r") and not ab.is_return("l")


def test_unknown_symbol_rejected():
    ab = make_alphabet()
    with pytest.raises(InputError):
        ab.kind("x")


def test_props_lookup():
    ab = make_alphabet()
    assert ab.props("c") == frozenset({"p"})
    assert ab.props("l") == frozenset({"p", "q"})
    assert ab.props("r") == frozenset()
    assert ab.prop_names() == {"p", "q"}


def test_overlapping_classes_rejected():
    with pytest.raises(InputError):
        PushdownAlphabet(["a"], ["a"], ["l"])


def test_default_alphabet():
    ab = default_alphabet()
    assert set(ab.symbols) == {"c", "r", "l"}
    assert ab.is_call("c") and ab.is_return("r")


def test_parse_alphabet_round_trip():
    text = """
    # a comment
    calls: c d;
    returns: r;
    locals: l m;
    props c = {p, q};
    props m = {q};
    """
    ab = parse_alphabet(text)
    assert set(ab.calls) == {"c", "d"}
    assert set(ab.returns) == {"r"}
    assert set(ab.locals) == {"l", "m"}
    assert ab.props("c") == frozenset({"p", "q"})
    assert ab.props("m") == frozenset({"q"})
    assert ab.props("d") == frozenset()


def test_parse_alphabet_rejects_props_for_unknown_symbol():
    with pytest.raises(InputError):
        parse_alphabet("calls: c; returns: r; locals: l; props x = {p};")


# -------------------------------------------------------------- lasso words

def test_lasso_indexing_is_eventually_periodic():
    ab = make_alphabet()
    w = LassoWord(ab, ("l",), ("c", "r"))
    got = [w[i] for i in range(7)]
    assert got == ["l", "c", "r", "c", "r", "c", "r"]


def test_lasso_canonicalization_merges_rotations():
    ab = make_alphabet()
    a = LassoWord(ab, ("l",), ("c", "r"))
    b = LassoWord(ab, ("l", "c", "r"), ("c", "r"))
    c = LassoWord(ab, ("l", "c"), ("r", "c"))
    d = LassoWord(ab, ("l",), ("c", "r", "c", "r"))
    assert a == b == c == d
    assert str(a) == str(b) == str(c) == str(d)


def test_lasso_requires_nonempty_period():
    ab = make_alphabet()
    with pytest.raises(InputError):
        LassoWord(ab, ("l",), ())


def test_height_before_matches_manual_fold():
    ab = make_alphabet()
    w = LassoWord(ab, ("c", "c", "r"), ("l", "c", "r"))
    h = 0
    for i in range(20):
        assert w.height_before(i) == h
        kind = ab.kind(w[i])
        if kind == CALL:
            h += 1
        elif kind == RETURN and h > 0:
            h -= 1


def test_bottom_return_does_not_go_negative():
    ab = make_alphabet()
    w = LassoWord(ab, ("r", "r"), ("l",))
    assert w.height_before(0) == 0
    assert w.height_before(1) == 0
    assert w.height_before(2) == 0


def test_props_at_and_class_of():
    ab = make_alphabet()
    w = LassoWord(ab, ("d",), ("c", "l", "r"))
    assert w.props_at(2) == frozenset({"p", "q"})
    assert w.props_at(3) == frozenset()
    # positions beyond the prefix are identified modulo the period
    assert w.class_of(0) == 0
    assert w.class_of(1) == 1
    assert w.class_of(4) == w.class_of(1)
    assert w.class_of(5) == w.class_of(8)
    assert w[5] == w[w.class_of(5)]


# ------------------------------------------------------------- word specs

def test_parse_word_spec_finite():
    ab = make_alphabet()
    assert parse_word_spec("c l r", ab) == ("c", "l", "r")
    assert parse_word_spec("", ab) == ()


def test_parse_word_spec_lasso_round_trip():
    ab = make_alphabet()
    w = parse_word_spec("l c (r c)^w", ab)
    assert isinstance(w, LassoWord)
    assert parse_word_spec(str(w), ab) == w


def test_parse_word_spec_rejects_unknown_symbol():
    ab = make_alphabet()
    with pytest.raises(InputError):
        parse_word_spec("c x", ab)
    with pytest.raises(InputError):
        parse_word_spec("c (x)^w", ab)


# ----------------------------------------------------- finite word helpers

def test_is_well_matched_hand_cases():
    ab = make_alphabet()
    assert is_well_matched(ab, ("c", "r"))
    assert is_well_matched(ab, ("l", "c", "l", "r", "l"))
    assert not is_well_matched(ab, ("c",))
    assert not is_well_matched(ab, ("r",))
    assert not is_well_matched(ab, ("r", "c"))
    assert is_well_matched(ab, ())


def test_stack_height_hand_cases():
    ab = make_alphabet()
    assert stack_height(ab, ()) == 0
    assert stack_height(ab, ("c", "c")) == 2
    assert stack_height(ab, ("c", "r")) == 0
    assert stack_height(ab, ("r",)) == 0


# --------------------------------------------------------- matching return

def test_matching_return_hand_cases():
    ab = default_alphabet()
    w = parse_word_spec("l c l r c l (l)^w", ab)
    assert matching_return(w, 1) == 3
    assert matching_return(w, 4) is None
    with pytest.raises(InputError):
        matching_return(w, 0)


def test_matching_return_in_period():
    ab = default_alphabet()
    w = parse_word_spec("(c c r r)^w", ab)
    assert matching_return(w, 0) == 3
    assert matching_return(w, 1) == 2
    assert matching_return(w, 4) == 7


def test_matching_return_crosses_period_boundary():
    # The call at the end of each period is closed in the next one.
    ab = default_alphabet()
    w = parse_word_spec("(c r r c)^w", ab)
    assert matching_return(w, 0) == 1
    assert matching_return(w, 3) == 6


def test_matching_return_none_when_drift_positive():
    # Two calls per return: the trailing call of each period stays open.
    ab = default_alphabet()
    w = parse_word_spec("(c r c)^w", ab)
    assert matching_return(w, 0) == 1
    assert matching_return(w, 2) is None


def test_matching_return_horizon_sweep():
    """The built-in scan bound never misses a match that a far larger
    scan would find, across a seeded corpus of arbitrary lassos."""
    ab = default_alphabet()
    rng = random.Random(90125)
    symbols = list(ab.symbols)
    for _ in range(300):
        prefix = tuple(rng.choice(symbols) for _ in range(rng.randint(0, 6)))
        period = tuple(rng.choice(symbols) for _ in range(rng.randint(1, 6)))
        w = LassoWord(ab, prefix, period)
        u, v = len(w.prefix), len(w.period)
        big = u + 400 * (v + 1) + 400
        for k in range(u + 2 * v):
            if not ab.is_call(w[k]):
                continue
            assert matching_return(w, k) == brute_match(w, k, big), \
                (str(w), k)


def test_matching_return_shift_by_period():
    # Matches inside the loop repeat with the loop.
    ab = default_alphabet()
    rng = random.Random(5150)
    symbols = list(ab.symbols)
    for _ in range(100):
        period = tuple(rng.choice(symbols) for _ in range(rng.randint(1, 5)))
        w = LassoWord(ab, (), period)
        v = len(w.period)
        drift = w.height_before(2 * v) - w.height_before(v)
        if drift != 0:
            continue
        start = 3 * v
        for k in range(start, start + v):
            if not ab.is_call(w[k]):
                continue
            j = matching_return(w, k)
            j2 = matching_return(w, k + v)
            if j is None:
                assert j2 is None
            else:
                assert j2 == j + v


# ------------------------------------------------------- cardinal positions

def test_cardinal_positions_hand_case():
    ab = default_alphabet()
    w = parse_word_spec("l c l r c l (l)^w", ab)
    got = cardinal_positions(w, 10)
    assert got == {0, 1, 3, 4, 5, 6, 7, 8, 9}
    assert 2 not in got


def test_cardinal_positions_flat_word():
    ab = default_alphabet()
    w = parse_word_spec("(l)^w", ab)
    assert cardinal_positions(w, 5) == {0, 1, 2, 3, 4}


def test_cardinal_positions_skips_matched_call_bodies():
    # Position 2 sits inside the matched call at 1, so it is not a step.
    ab = default_alphabet()
    w = parse_word_spec("l c l r (l)^w", ab)
    got = cardinal_positions(w, 6)
    assert 2 not in got
    assert {0, 1, 3, 4, 5} <= got


def test_cardinal_positions_requires_covering_horizon():
    ab = default_alphabet()
    w = parse_word_spec("l c (r l)^w", ab)
    with pytest.raises(InputError):
        cardinal_positions(w, 2)
