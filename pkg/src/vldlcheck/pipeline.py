"""End-to-end satisfiability and model checking.

satisfiable: formula -> alternating jump automaton -> Büchi tree automaton
over stack-tree encodings -> emptiness game, decoding any witness tree back
to a lasso-word model.

model_check: the traces of a visibly pushdown system become a tree automaton
(all states accepting; a matched call guesses the state its body arrives in
and verifies the guess where the body bottoms out), which is crossed with
the automaton of the negated formula; the spec holds iff the product is
empty, and any witness decodes to a counterexample trace.
"""

import logging
import time
from dataclasses import dataclass, field

from .aja import lasso_accepts
from .aja2tree import aja_to_stacktree_automaton
from .caps import stage_cap
from .errors import InputError, ResourceError, UnsupportedInputError
from .formula import Box, Diamond, Not, formula_size, to_nnf
from .oracle import eval_lasso
from .stacktree import decode, encode_lasso, stack_tree_recognizer
from .treeauto import BuchiTreeAutomaton, contains, intersect, witness
from .trees import BOT
from .vldl2aja import compile_formula
from .vps import BOTTOM, run_on_lasso

log = logging.getLogger(__name__)

_SINK = ("sink",)


@dataclass
class Verdict:
    """Outcome of one decision: answer is Satisfiable, Unsatisfiable,
    Holds, or Violated; witness is the model or counterexample lasso when
    one exists; statistics records per-stage sizes and wall times."""

    answer: str
    witness: object = None
    statistics: dict = field(default_factory=dict)

    def __str__(self):
        if self.witness is None:
            return self.answer
        return "%s: %s" % (self.answer, self.witness)


def _plain(q):
    return ("q", q)


def _pair(q, qg):
    return ("p", q, qg)


def _ret(q, a):
    return ("r", q, a)


def _retpair(q, a, qg):
    return ("rp", q, a, qg)


def vps_to_tree(system, cap=None):
    """Büchi tree automaton accepting exactly the stack-tree encodings of
    the system's traces (the stack-tree recognizer is already factored in).

    Plain states track the run along the spine. A matched call guesses the
    state qg its body arrives in at the matching return: the left child
    checks a return transition from qg, the right child runs the body under
    the obligation to bottom out exactly in qg. Unmatched calls continue on
    the right with the pushed symbol forgotten (nothing may pop it), and
    returns on the spine must pop the bottom marker.
    """
    alphabet = system.alphabet
    limit = stage_cap(cap)
    states_q = list(system.states)
    gamma = list(system.stack_symbols)
    total = len(states_q) * (1 + len(states_q)) * (1 + len(gamma)) + 1
    if total > limit:
        raise ResourceError(
            "system tree automaton needs %d states, above the cap %d"
            % (total, limit), stage="system-translation")

    transitions = {(_SINK, BOT, _SINK, _SINK)}
    for (q, l, q2) in system.locals:
        transitions.add((_plain(q), l, _plain(q2), _SINK))
        for qg in states_q:
            transitions.add((_pair(q, qg), l, _pair(q2, qg), _SINK))
    for (q, c, q2, a) in system.calls:
        transitions.add((_plain(q), c, _SINK, _plain(q2)))
        for qg in states_q:
            transitions.add((_plain(q), c, _ret(qg, a), _pair(q2, qg)))
            for outer in states_q:
                transitions.add((_pair(q, outer), c,
                                 _retpair(qg, a, outer), _pair(q2, qg)))
    for (q, r, a, q2) in system.returns:
        if a == BOTTOM:
            transitions.add((_plain(q), r, _plain(q2), _SINK))
        else:
            transitions.add((_ret(q, a), r, _plain(q2), _SINK))
            for qg in states_q:
                transitions.add((_retpair(q, a, qg), r, _pair(q2, qg), _SINK))
    for q in states_q:
        transitions.add((_pair(q, q), BOT, _SINK, _SINK))

    states = {_SINK}
    states.update(_plain(q) for q in states_q)
    states.update(_pair(q, qg) for q in states_q for qg in states_q)
    states.update(_ret(q, a) for q in states_q for a in gamma)
    states.update(_retpair(q, a, qg)
                  for q in states_q for a in gamma for qg in states_q)
    labels = frozenset(alphabet.symbols) | {BOT}
    raw = BuchiTreeAutomaton(states, labels, transitions,
                             _plain(system.initial), states)
    return intersect(raw, stack_tree_recognizer(alphabet), cap=cap)


def satisfiable(phi, alphabet, cap=None, artifacts=None):
    """Decide whether some lasso word over the alphabet satisfies phi.

    Returns Verdict("Satisfiable", model) with a decoded lasso model, or
    Verdict("Unsatisfiable"). Pass a dict as `artifacts` to receive the
    intermediate automata (keys "aja" and "tree").
    """
    t0 = time.perf_counter()
    nnf = to_nnf(phi)
    auto = compile_formula(nnf, alphabet, cap=cap)
    t1 = time.perf_counter()
    tree = aja_to_stacktree_automaton(auto, cap=cap)
    t2 = time.perf_counter()
    found = witness(tree)
    model = None if found is None else decode(alphabet, found, cap=cap)
    t3 = time.perf_counter()
    if artifacts is not None:
        artifacts["aja"] = auto
        artifacts["tree"] = tree
    stats = {
        "formula_size": formula_size(nnf),
        "aja_states": len(auto.states),
        "tree_states": len(tree.states),
        "tree_transitions": len(tree.transitions),
        "seconds": {
            "compile": t1 - t0,
            "translate": t2 - t1,
            "solve": t3 - t2,
            "total": t3 - t0,
        },
    }
    log.debug("satisfiable: %s", stats)
    if model is None:
        return Verdict("Unsatisfiable", statistics=stats)
    return Verdict("Satisfiable", witness=model, statistics=stats)


def _formula_automata(phi):
    seen = []
    todo = [phi]
    while todo:
        node = todo.pop()
        if isinstance(node, Not):
            todo.append(node.inner)
        elif hasattr(node, "left"):
            todo.extend((node.left, node.right))
        elif isinstance(node, (Diamond, Box)):
            seen.append(node.automaton)
            todo.append(node.inner)
    return seen


def _check_same_alphabet(system, phi):
    want = system.alphabet
    for aut in _formula_automata(phi):
        got = aut.alphabet
        if (set(got.calls) != set(want.calls)
                or set(got.returns) != set(want.returns)
                or set(got.locals) != set(want.locals)):
            raise InputError(
                "formula automaton %r uses a different alphabet than the"
                " system" % (aut.name or "?",))


def model_check(system, phi, cap=None, artifacts=None):
    """Decide whether every trace of the system satisfies phi.

    Returns Verdict("Holds") or Verdict("Violated", counterexample). The
    negation happens on the formula tree before normal form; nothing is
    complemented at the automaton level. Pass a dict as `artifacts` to
    receive the intermediate automata (keys "aja", "formula_tree",
    "system_tree", "product").
    """
    _check_same_alphabet(system, phi)
    alphabet = system.alphabet
    t0 = time.perf_counter()
    negated = to_nnf(Not(phi))
    auto = compile_formula(negated, alphabet, cap=cap)
    t1 = time.perf_counter()
    formula_tree = aja_to_stacktree_automaton(auto, cap=cap)
    t2 = time.perf_counter()
    system_tree = vps_to_tree(system, cap=cap)
    t3 = time.perf_counter()
    product = intersect(system_tree, formula_tree, cap=cap)
    t4 = time.perf_counter()
    found = witness(product)
    cex = None if found is None else decode(alphabet, found, cap=cap)
    t5 = time.perf_counter()
    if artifacts is not None:
        artifacts["aja"] = auto
        artifacts["formula_tree"] = formula_tree
        artifacts["system_tree"] = system_tree
        artifacts["product"] = product
    stats = {
        "formula_size": formula_size(negated),
        "aja_states": len(auto.states),
        "formula_tree_states": len(formula_tree.states),
        "formula_tree_transitions": len(formula_tree.transitions),
        "system_tree_states": len(system_tree.states),
        "system_tree_transitions": len(system_tree.transitions),
        "product_states": len(product.states),
        "product_transitions": len(product.transitions),
        "seconds": {
            "compile": t1 - t0,
            "translate": t2 - t1,
            "system": t3 - t2,
            "product": t4 - t3,
            "solve": t5 - t4,
            "total": t5 - t0,
        },
    }
    log.debug("model_check: %s", stats)
    if cex is None:
        return Verdict("Holds", statistics=stats)
    return Verdict("Violated", witness=cex, statistics=stats)


def validate_model(phi, model, cap=None):
    """True when the model provably satisfies phi: by the independent
    evaluator when the model fits its restrictions, else by the word-level
    acceptance game, else by membership of the encoded tree."""
    nnf = to_nnf(phi)
    try:
        return bool(eval_lasso(nnf, model, cap=cap))
    except UnsupportedInputError:
        pass
    auto = compile_formula(nnf, model.alphabet, cap=cap)
    try:
        return lasso_accepts(auto, model, cap=cap)
    except UnsupportedInputError:
        return contains(aja_to_stacktree_automaton(auto, cap=cap),
                        encode_lasso(model, cap=cap), cap=cap)


def validate_counterexample(system, phi, cex, cap=None):
    """True when cex both embeds as a trace of the system and provably
    violates phi."""
    if not run_on_lasso(system, cex, cap=cap):
        return False
    return not validate_model(phi, cex, cap=cap)
