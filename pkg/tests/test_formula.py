"""Formula AST, negation normal form, closure, and the formula parser."""

import random

import pytest

from vldlcheck.alphabet import PushdownAlphabet
from vldlcheck.errors import InputError
from vldlcheck.formula import (And, Atom, Box, Diamond, NegAtom, Not, Or,
                               RESERVED_PROP, TvpaLibrary, closure,
                               false_formula, formula_size, formula_to_str,
                               parse_formula, to_nnf, true_formula)
from vldlcheck.vps import Tvpa


def make_alphabet():
    return PushdownAlphabet(["c"], ["r"], ["l"],
                            props={"c": {"p"}, "l": {"q"}})


def one_step_tvpa(ab, name="Step"):
    return Tvpa(["s0", "s1"], ab, ["A"],
                calls=[("s0", "c", "s1", "A")],
                returns=[("s0", "r", "bot", "s1")],
                locals_=[("s0", "l", "s1")],
                initial="s0", final={"s1"}, name=name)


# ------------------------------------------------------------------- basics

def test_atoms_are_hashable_and_comparable():
    assert Atom("p") == Atom("p")
    assert Atom("p") != NegAtom("p")
    assert len({Atom("p"), Atom("p"), NegAtom("p")}) == 2


def test_true_false_use_reserved_prop():
    t = true_formula()
    f = false_formula()
    assert isinstance(t, Or) and isinstance(f, And)
    assert Atom(RESERVED_PROP) in {t.left, t.right}
    assert t != f


# -------------------------------------------------------------------- nnf

def test_nnf_removes_all_negations():
    ab = make_alphabet()
    aut = one_step_tvpa(ab)
    phi = Not(And(Atom("p"), Or(NegAtom("q"), Diamond(aut, Not(Atom("p"))))))
    nnf = to_nnf(phi)

    def scan(f):
        assert not isinstance(f, Not)
        if isinstance(f, (And, Or)):
            scan(f.left)
            scan(f.right)
        elif isinstance(f, (Diamond, Box)):
            scan(f.inner)

    scan(nnf)


def test_nnf_dualizes_connectives():
    assert to_nnf(Not(And(Atom("p"), Atom("q")))) == \
        Or(NegAtom("p"), NegAtom("q"))
    assert to_nnf(Not(Or(Atom("p"), Atom("q")))) == \
        And(NegAtom("p"), NegAtom("q"))
    assert to_nnf(Not(Not(Atom("p")))) == Atom("p")
    assert to_nnf(Not(NegAtom("p"))) == Atom("p")


def test_nnf_dualizes_modalities():
    ab = make_alphabet()
    aut = one_step_tvpa(ab)
    got = to_nnf(Not(Diamond(aut, Atom("p"))))
    assert isinstance(got, Box) and got.inner == NegAtom("p")
    got = to_nnf(Not(Box(aut, Atom("p"))))
    assert isinstance(got, Diamond) and got.inner == NegAtom("p")


def test_nnf_fixes_nnf_input():
    ab = make_alphabet()
    phi = And(Atom("p"), Box(one_step_tvpa(ab), NegAtom("q")))
    assert to_nnf(phi) == phi


def test_nnf_is_involutive_under_double_negation():
    rng = random.Random(1999)
    ab = make_alphabet()
    from vldlcheck.corpus import random_boolean_formula
    for _ in range(50):
        phi = random_boolean_formula(rng, ab)
        assert to_nnf(Not(Not(phi))) == to_nnf(phi)


# ---------------------------------------------------------- closure / size

def test_closure_collects_subformulas():
    phi = And(Atom("p"), Or(Atom("p"), NegAtom("q")))
    cl = closure(phi)
    assert cl == {phi, phi.right, Atom("p"), NegAtom("q")}


def test_closure_enters_automaton_tests():
    ab = make_alphabet()
    test_f = And(Atom("q"), Atom("p"))
    aut = Tvpa(["s0", "s1"], ab, ["A"],
               calls=[], returns=[], locals_=[("s0", "l", "s1")],
               initial="s0", final={"s1"},
               tests={"s0": test_f})
    phi = Diamond(aut, Atom("p"))
    cl = closure(phi)
    assert test_f in cl
    assert Atom("q") in cl


def test_formula_size_counts_automaton_states():
    ab = make_alphabet()
    aut = one_step_tvpa(ab)
    plain = And(Atom("p"), Atom("q"))
    assert formula_size(Diamond(aut, plain)) == \
        len(closure(Diamond(aut, plain))) + 2


# ------------------------------------------------------------------ parser

def test_parse_atoms_and_connectives():
    ab = make_alphabet()
    lib = TvpaLibrary(ab)
    assert parse_formula("p", lib) == Atom("p")
    assert parse_formula("!p", lib) == Not(Atom("p"))
    assert parse_formula("p & q | p", lib) == \
        Or(And(Atom("p"), Atom("q")), Atom("p"))
    assert parse_formula("p & (q | p)", lib) == \
        And(Atom("p"), Or(Atom("q"), Atom("p")))


def test_parse_rejects_undeclared_proposition():
    ab = make_alphabet()
    lib = TvpaLibrary(ab)
    with pytest.raises(InputError):
        parse_formula("nosuch", lib)


def test_parse_modalities():
    ab = make_alphabet()
    lib = TvpaLibrary(ab)
    lib.add("Step", one_step_tvpa(ab))
    phi = parse_formula("<Step> p & [Step] !q", lib)
    assert isinstance(phi, And)
    assert isinstance(phi.left, Diamond) and phi.left.automaton.name == "Step"
    assert isinstance(phi.right, Box)
    assert phi.right.inner == Not(Atom("q"))


def test_parse_unknown_automaton_rejected():
    ab = make_alphabet()
    lib = TvpaLibrary(ab)
    with pytest.raises(InputError):
        parse_formula("<Nope> p", lib)


def test_parse_garbage_rejected():
    ab = make_alphabet()
    lib = TvpaLibrary(ab)
    for text in ("", "p &", "& p", "p q", "(p", "p)"):
        with pytest.raises(InputError):
            parse_formula(text, lib)


def test_parse_round_trips_through_to_str():
    ab = make_alphabet()
    lib = TvpaLibrary(ab)
    lib.add("Step", one_step_tvpa(ab))
    rng = random.Random(777)
    from vldlcheck.corpus import random_nnf_formula
    counter = [0]
    for _ in range(30):
        phi = random_nnf_formula(rng, ab, max_size=8)
        # renderings parse back to the same tree (modulo literal spelling)
        # when the library holds every automaton under its printed name
        for aut in _automata(phi):
            if not aut.name:
                aut.name = "Gen%d" % counter[0]
                counter[0] += 1
            lib.add(aut.name, aut)
        text = formula_to_str(phi)
        assert to_nnf(parse_formula(text, lib)) == to_nnf(phi)


def _automata(phi):
    out = []
    stack = [phi]
    while stack:
        f = stack.pop()
        if isinstance(f, Not):
            stack.append(f.inner)
        elif isinstance(f, (And, Or)):
            stack.extend((f.left, f.right))
        elif isinstance(f, (Diamond, Box)):
            out.append(f.automaton)
            stack.append(f.inner)
            for q in f.automaton.states:
                t = f.automaton.tests.get(q)
                if t is not None:
                    stack.append(t)
    return out


def test_library_lookup():
    ab = make_alphabet()
    lib = TvpaLibrary(ab)
    aut = one_step_tvpa(ab)
    lib.add("Step", aut)
    assert lib.get("Step") is aut
    with pytest.raises(InputError):
        lib.get("Nope")
    # re-adding a name overwrites the binding
    other = one_step_tvpa(ab, name="Step")
    lib.add("Step", other)
    assert lib.get("Step") is other
