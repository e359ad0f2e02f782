"""Seeded random corpora backing the cross-check and property suites.

Every generator takes a `random.Random` so runs are reproducible from a
seed. The automaton and formula generators are deliberately sparse: dense
transition formulas make the tree-side constructions blow up combinatorially
without exercising anything new, so jump commands and Boolean branching are
kept rare and sizes small.
"""

import random

from .aja import AndF, Leaf, OneAja, OrF, go, jump
from .alphabet import LassoWord, PushdownAlphabet, is_well_matched
from .errors import MalformedWitnessError
from .formula import (And, Atom, Box, Diamond, NegAtom, Or, false_formula,
                      formula_size, true_formula)
from .games import BuchiGame
from .stacktree import decode, encode_lasso
from .trees import BOT, RegularTree
from .vps import BOTTOM, Tvpa


def default_corpus_alphabet():
    """One call, one return, two locals, with propositions on three of them."""
    return PushdownAlphabet(
        ["c"], ["r"], ["l", "m"],
        props={"c": {"p"}, "l": {"q"}, "m": {"p", "q"}})


def random_lasso(rng, alphabet, max_prefix=6, max_period=6):
    """A lasso word with unconstrained shape (the period may be unmatched)."""
    symbols = list(alphabet.symbols)
    u = [rng.choice(symbols) for _ in range(rng.randint(0, max_prefix))]
    v = [rng.choice(symbols) for _ in range(rng.randint(1, max_period))]
    return LassoWord(alphabet, u, v)


def random_wm_lasso(rng, alphabet, max_prefix=4, period_budget=5):
    """A lasso whose canonical period is well matched.

    Canonicalization can rotate a well-matched period into an unmatched one,
    so the filter runs on the constructed object, not on the raw draw.
    """
    calls = sorted(alphabet.calls)
    returns = sorted(alphabet.returns)
    locals_ = sorted(alphabet.locals)
    symbols = list(alphabet.symbols)

    def wm(budget):
        if budget <= 0 or not calls or not returns:
            return [rng.choice(locals_)] if locals_ and budget > 0 else []
        k = rng.random()
        if k < 0.4 and locals_:
            return [rng.choice(locals_)] + wm(budget - 1)
        if k < 0.75:
            return [rng.choice(calls)] + wm(budget - 2) + [rng.choice(returns)]
        return []

    while True:
        v = wm(rng.randint(1, period_budget)) or [rng.choice(symbols)]
        u = [rng.choice(symbols) for _ in range(rng.randint(0, max_prefix))]
        word = LassoWord(alphabet, u, v)
        if is_well_matched(alphabet, word.period):
            return word


def _random_transition_formula(rng, states, depth):
    if depth == 0 or rng.random() < 0.6:
        q = rng.choice(states)
        if rng.random() < 0.15:
            return Leaf(jump(rng.choice(states), q))
        return Leaf(go(q))
    ctor = AndF if rng.random() < 0.5 else OrF
    return ctor(tuple(_random_transition_formula(rng, states, depth - 1)
                      for _ in range(2)))


def random_aja(rng, alphabet, max_states=4):
    """A sparse one-way alternating jump automaton over the alphabet."""
    states = ["s%d" % i for i in range(rng.randint(1, max_states))]
    delta = {(q, sym): _random_transition_formula(rng, states, rng.randint(0, 1))
             for q in states for sym in alphabet.symbols}
    accepting = rng.sample(states, rng.randint(1, len(states)))
    return OneAja(states, alphabet, delta, states[0], accepting)


def random_boolean_formula(rng, alphabet, depth=1):
    """A modality-free formula over the alphabet's propositions."""
    props = sorted(alphabet.prop_names())
    if depth == 0 or rng.random() < 0.55:
        if not props:
            return true_formula() if rng.random() < 0.5 else false_formula()
        p = rng.choice(props)
        return Atom(p) if rng.random() < 0.5 else NegAtom(p)
    ctor = And if rng.random() < 0.5 else Or
    return ctor(random_boolean_formula(rng, alphabet, depth - 1),
                random_boolean_formula(rng, alphabet, depth - 1))


def random_tvpa(rng, alphabet, max_states=3, test_prob=0.3, allow_tests=True):
    """A small testing automaton; tests, when allowed, are modality-free."""
    n = rng.randint(1, max_states)
    states = ["t%d" % i for i in range(n)]
    stack_syms = ["A", "B"][:rng.randint(1, 2)]
    calls, returns, locals_ = [], [], []
    for q in states:
        for sym in sorted(alphabet.calls):
            if rng.random() < 0.7:
                calls.append((q, sym, rng.choice(states), rng.choice(stack_syms)))
        for sym in sorted(alphabet.returns):
            if rng.random() < 0.7:
                a = rng.choice(stack_syms + [BOTTOM])
                returns.append((q, sym, a, rng.choice(states)))
        for sym in sorted(alphabet.locals):
            if rng.random() < 0.7:
                locals_.append((q, sym, rng.choice(states)))
    final = rng.sample(states, rng.randint(1, n))
    tests = {}
    if allow_tests:
        for q in states:
            if rng.random() < test_prob:
                tests[q] = random_boolean_formula(rng, alphabet)
    return Tvpa(states, alphabet, stack_syms, calls, returns, locals_,
                states[0], final, tests)


def random_nnf_formula(rng, alphabet, max_size=10, test_nesting=1,
                       tvpa_states=3):
    """A negation-normal-form formula with formula_size at most max_size."""
    props = sorted(alphabet.prop_names())

    def draw(budget):
        roll = rng.random()
        if budget <= 2 or roll < 0.4:
            if not props or rng.random() < 0.1:
                return true_formula() if rng.random() < 0.5 else false_formula()
            p = rng.choice(props)
            return Atom(p) if rng.random() < 0.5 else NegAtom(p)
        if roll < 0.7:
            ctor = And if rng.random() < 0.5 else Or
            half = (budget - 1) // 2
            return ctor(draw(half), draw(budget - 1 - half))
        ctor = Diamond if rng.random() < 0.5 else Box
        aut = random_tvpa(rng, alphabet, max_states=tvpa_states,
                          allow_tests=test_nesting >= 1)
        return ctor(aut, draw(budget - 1 - len(aut.states)))

    while True:
        phi = draw(max_size)
        if formula_size(phi) <= max_size:
            return phi


def cross_check_corpus(seed, formula_count=100, lasso_count=20,
                       alphabet=None, tree_budget=100000):
    """Seeded formulas and lassos for the three-way comparison.

    The comparison builds a tree automaton per formula, and a box over a
    modal operand can make that translation genuinely exponential, so
    formulas whose translation blows past tree_budget construction steps
    are resampled. Returns (formulas, lassos, alphabet)."""
    from .aja2tree import aja_to_stacktree_automaton
    from .errors import ResourceError
    from .vldl2aja import compile_formula

    rng = random.Random(seed)
    alphabet = alphabet or default_corpus_alphabet()
    formulas = []
    while len(formulas) < formula_count:
        phi = random_nnf_formula(rng, alphabet)
        try:
            aja_to_stacktree_automaton(compile_formula(phi, alphabet),
                                       cap=tree_budget)
        except ResourceError:
            continue
        formulas.append(phi)
    lassos = [random_wm_lasso(rng, alphabet) for _ in range(lasso_count)]
    return formulas, lassos, alphabet


def random_game(rng, max_vertices=30):
    """A random Büchi game; some vertices may be dead ends on purpose."""
    n = rng.randint(2, max_vertices)
    vertices = list(range(n))
    owner = {x: rng.randint(0, 1) for x in vertices}
    edges = {}
    for x in vertices:
        out = rng.sample(vertices, min(n, rng.randint(0, 3)))
        edges[x] = tuple(out)
    accepting = set(rng.sample(vertices, rng.randint(0, n)))
    return BuchiGame(owner, edges, accepting, initial=0)


def _unroll_to_node(tree, path):
    """Copy the generator states along `path` so the node at that address
    can be relabeled without touching any other node of the tree."""
    labels = dict(tree.labels)
    left = dict(tree.left)
    right = dict(tree.right)
    fresh = 0

    def copy_of(state):
        nonlocal fresh
        while ("mut", fresh) in labels:
            fresh += 1
        new = ("mut", fresh)
        labels[new] = labels[state]
        left[new] = left[state]
        right[new] = right[state]
        return new

    root = copy_of(tree.root)
    node = root
    for branch in path:
        child = left[node] if branch == "0" else right[node]
        child2 = copy_of(child)
        if branch == "0":
            left[node] = child2
        else:
            right[node] = child2
        node = child2
    return RegularTree(root, labels, left, right), node


def _clearly_not_a_stack_tree(alphabet, tree, depth=12):
    """Certify invalidity independently of the tree-automaton recognizer:
    either decoding fails outright, or decoding succeeds but re-encoding
    disagrees with the tree somewhere in the compared window, so the tree
    is not the encoding of any word."""
    try:
        word = decode(alphabet, tree)
    except MalformedWitnessError:
        return True
    back = encode_lasso(word)

    def differs(a, sa, b, sb, d):
        if a.labels[sa] != b.labels[sb]:
            return True
        if d == 0:
            return False
        return (differs(a, a.left[sa], b, b.left[sb], d - 1)
                or differs(a, a.right[sa], b, b.right[sb], d - 1))

    return differs(tree, tree.root, back, back.root, depth)


def mutate_single_node(rng, lasso, max_depth=7, attempts=400):
    """Encode the lasso and flip one node's label so that the result is
    certifiably not a stack tree. Returns the mutated RegularTree."""
    alphabet = lasso.alphabet
    tree = encode_lasso(lasso)
    labels = sorted(alphabet.symbols) + [BOT]
    for _ in range(attempts):
        path = "".join(rng.choice("01") for _ in range(rng.randint(0, max_depth)))
        mutated, node = _unroll_to_node(tree, path)
        old = mutated.labels[node]
        new = rng.choice([x for x in labels if x != old])
        mutated.labels[node] = new
        if _clearly_not_a_stack_tree(alphabet, mutated):
            return mutated
    raise RuntimeError("no certifiable mutation found; widen the attempts")
