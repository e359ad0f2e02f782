"""Brute-force VLDL semantics on lasso words, the ground truth for the
compiled constructions.

The evaluator shares no code with the automaton pipeline. Guard automata
are simulated explicitly with their stacks; positions of the lasso are
identified by class (prefix positions individually, periodic positions
modulo the period), and the reachability relation of a guard is closed by
iterating its per-period state transfer until the boundary state set
repeats. This only works when the period is well matched, because then the
stack at consecutive period boundaries is identical and never inspected
again, making one period a pure state-to-state relation.
"""

import time
from dataclasses import dataclass, field

from .aja import lasso_accepts
from .aja2tree import aja_to_stacktree_automaton
from .alphabet import CALL, RETURN, is_well_matched
from .caps import stage_cap
from .errors import ResourceError, UnsupportedInputError
from .formula import (And, Atom, Box, Diamond, NegAtom, Not, Or, closure,
                      formula_to_str)
from .stacktree import encode_lasso
from .treeauto import contains
from .vldl2aja import compile_formula
from .vps import EMPTY_STACK, successors


def test_nesting(phi):
    """Depth of test formulas nested through guard automata: plain atoms
    are 0, a modality whose automaton carries tests is one deeper than the
    deepest test."""
    if isinstance(phi, (Atom, NegAtom)):
        return 0
    if isinstance(phi, Not):
        return test_nesting(phi.inner)
    if isinstance(phi, (And, Or)):
        return max(test_nesting(phi.left), test_nesting(phi.right))
    if isinstance(phi, (Diamond, Box)):
        inner = test_nesting(phi.inner)
        tests = [test_nesting(t) for t in phi.automaton.tests.values()
                 if t is not None]
        return max(inner, 1 + max(tests, default=-1))
    raise UnsupportedInputError("not a formula: %r" % (phi,))


class EvalContext:
    """Memoized evaluation state for one lasso."""

    def __init__(self, lasso, cap=None, max_periods=None):
        self.lasso = lasso
        self.limit = stage_cap(cap)
        self.work = 0
        self.memo = {}
        self.step_cache = {}
        self.max_periods = max_periods

    def charge(self, amount=1):
        self.work += amount
        if self.work > self.limit:
            raise ResourceError("oracle evaluation exceeded %d steps" % self.limit,
                                stage="oracle")


def eval_lasso(phi, lasso, test_nesting_bound=3, cap=None, max_periods=None):
    """Decide (lasso, 0) |= phi by structural recursion.

    Restrictions: the lasso's period must be well matched and the test
    nesting of phi must stay within the bound; both raise
    UnsupportedInputError when violated, never a silent approximation.
    """
    closure(phi)
    if not is_well_matched(lasso.alphabet, lasso.period):
        raise UnsupportedInputError(
            "oracle needs a well-matched period, got %s" % (lasso,))
    depth = test_nesting(phi)
    if depth > test_nesting_bound:
        raise UnsupportedInputError(
            "test nesting %d exceeds the oracle bound %d" % (depth, test_nesting_bound))
    ctx = EvalContext(lasso, cap=cap, max_periods=max_periods)
    return _eval(ctx, phi, 0)


def _eval(ctx, phi, k):
    k = ctx.lasso.class_of(k)
    key = (phi, k)
    if key in ctx.memo:
        return ctx.memo[key]
    if isinstance(phi, Atom):
        out = phi.prop in ctx.lasso.props_at(k)
    elif isinstance(phi, NegAtom):
        out = phi.prop not in ctx.lasso.props_at(k)
    elif isinstance(phi, Not):
        out = not _eval(ctx, phi.inner, k)
    elif isinstance(phi, And):
        out = _eval(ctx, phi.left, k) and _eval(ctx, phi.right, k)
    elif isinstance(phi, Or):
        out = _eval(ctx, phi.left, k) or _eval(ctx, phi.right, k)
    elif isinstance(phi, Diamond):
        ends = endpoint_classes(phi.automaton, ctx.lasso, k, ctx)
        out = any(_eval(ctx, phi.inner, e) for e in sorted(ends))
    elif isinstance(phi, Box):
        ends = endpoint_classes(phi.automaton, ctx.lasso, k, ctx)
        out = all(_eval(ctx, phi.inner, e) for e in sorted(ends))
    else:
        raise UnsupportedInputError("not a formula: %r" % (phi,))
    ctx.memo[key] = out
    return out


def _test_ok(ctx, automaton, q, pos):
    t = automaton.tests.get(q)
    return t is None or _eval(ctx, t, pos)


def endpoint_classes(automaton, lasso, k, ctx=None):
    """Position classes k' with (k, k') in the reachability relation of the
    guard automaton: an accepting run on the infix from k to k' whose test
    obligations all hold, the test of the state at position k + m being
    evaluated at position k + m, both endpoints included."""
    if ctx is None:
        ctx = EvalContext(lasso)
    k = lasso.class_of(k)
    u, v = len(lasso.prefix), len(lasso.period)
    boundary_0 = u if k <= u else u + v
    ends = set()

    # Explicit phase, with real stacks: from k up to the first aligned
    # period boundary. Unmatched returns here pop the bottom marker.
    frontier = {(automaton.initial, EMPTY_STACK)} if _test_ok(ctx, automaton, automaton.initial, k) else set()
    for i in range(k, boundary_0):
        for (q, _stack) in frontier:
            if q in automaton.final:
                ends.add(lasso.class_of(i))
        nxt = set()
        for cfg in frontier:
            ctx.charge()
            for cfg2 in successors(automaton, cfg, lasso[i]):
                if i + 1 == boundary_0 or _test_ok(ctx, automaton, cfg2[0], i + 1):
                    nxt.add(cfg2)
        frontier = nxt
    if k == boundary_0:
        boundary = frozenset([automaton.initial])
    else:
        boundary = frozenset(q for (q, _stack) in frontier)

    # Periodic phase: iterate the one-period transfer until the boundary
    # state set repeats. Stacks below a boundary are never touched again.
    seen = set()
    periods = 0
    while boundary:
        if ctx.max_periods is None:
            if boundary in seen:
                break
            seen.add(boundary)
        elif periods >= ctx.max_periods:
            break
        step_ends, boundary = _period_step(ctx, automaton, boundary)
        ends |= step_ends
        periods += 1
    return ends


def _period_step(ctx, automaton, states):
    """One full period from a boundary state set: (endpoint classes seen
    inside this period, boundary states one period later). Pure in its
    arguments, so results are cached per automaton."""
    key = (id(automaton), states)
    if key in ctx.step_cache:
        return ctx.step_cache[key]
    lasso = ctx.lasso
    u, v = len(lasso.prefix), len(lasso.period)
    ends = set()
    frontier = {(q, ()) for q in states}
    for j in range(v):
        cls = u + j
        alive = set()
        for (q, stack) in frontier:
            ctx.charge()
            if _test_ok(ctx, automaton, q, cls):
                alive.add((q, stack))
                if q in automaton.final:
                    ends.add(cls)
        sym = lasso.period[j]
        kind = lasso.alphabet.kind(sym)
        nxt = set()
        for (q, stack) in alive:
            if kind == CALL:
                for (q1, c, q2, a) in automaton.calls:
                    if q1 == q and c == sym:
                        nxt.add((q2, (a,) + stack))
            elif kind == RETURN:
                # A well-matched period never pops past its own boundary,
                # so the stack here is always nonempty on a return.
                for (q1, r, a, q2) in automaton.returns:
                    if q1 == q and r == sym and stack and stack[0] == a:
                        nxt.add((q2, stack[1:]))
            else:
                for (q1, l, q2) in automaton.locals:
                    if q1 == q and l == sym:
                        nxt.add((q2, stack))
        frontier = nxt
    out = (frozenset(ends), frozenset(q for (q, _stack) in frontier))
    ctx.step_cache[key] = out
    return out


@dataclass
class CrossCheckReport:
    cases: int = 0
    disagreements: list = field(default_factory=list)
    elapsed: float = 0.0

    def ok(self):
        return not self.disagreements

    def summary(self):
        verdict = "all agree" if self.ok() else "%d DISAGREE" % len(self.disagreements)
        return ("cross-check: %d cases, %s, %.1fs"
                % (self.cases, verdict, self.elapsed))


def _three_way(phi, compiled, tree, lasso, cap=None):
    via_oracle = eval_lasso(phi, lasso, cap=cap)
    via_word = lasso_accepts(compiled, lasso, cap=cap)
    via_tree = contains(tree, encode_lasso(lasso, cap=cap), cap=cap)
    return via_oracle, via_word, via_tree


def _shrunk_reproducer(phi, lasso, alphabet, cap=None):
    """Smaller (formula, lasso) still disagreeing, found greedily."""

    def disagrees(f, w):
        try:
            compiled = compile_formula(f, alphabet, cap=cap)
            tree = aja_to_stacktree_automaton(compiled, cap=cap)
            a, b, c = _three_way(f, compiled, tree, w, cap=cap)
        except (ResourceError, UnsupportedInputError):
            return False
        return not (a == b == c)

    changed = True
    while changed:
        changed = False
        if lasso.prefix:
            from .alphabet import LassoWord
            shorter = LassoWord(alphabet, lasso.prefix[1:], lasso.period)
            if disagrees(phi, shorter):
                lasso, changed = shorter, True
                continue
        for sub in _immediate_subformulas(phi):
            if disagrees(sub, lasso):
                phi, changed = sub, True
                break
    return phi, lasso


def _immediate_subformulas(phi):
    if isinstance(phi, (And, Or)):
        return [phi.left, phi.right]
    if isinstance(phi, Not):
        return [phi.inner]
    if isinstance(phi, (Diamond, Box)):
        return [phi.inner]
    return []


def cross_check(formulas, lassos, alphabet, cap=None):
    """Assert oracle = word-level acceptance = tree-level membership on
    every (formula, lasso) pair; disagreements come back with a shrunk
    reproducer instead of crashing the run."""
    report = CrossCheckReport()
    start = time.monotonic()
    for phi in formulas:
        compiled = compile_formula(phi, alphabet, cap=cap)
        tree = aja_to_stacktree_automaton(compiled, cap=cap)
        for lasso in lassos:
            report.cases += 1
            via_oracle, via_word, via_tree = _three_way(phi, compiled, tree, lasso, cap=cap)
            if not (via_oracle == via_word == via_tree):
                small_phi, small_lasso = _shrunk_reproducer(phi, lasso, alphabet, cap=cap)
                report.disagreements.append({
                    "formula": formula_to_str(phi),
                    "lasso": str(lasso),
                    "oracle": via_oracle,
                    "word": via_word,
                    "tree": via_tree,
                    "shrunk_formula": formula_to_str(small_phi),
                    "shrunk_lasso": str(small_lasso),
                })
    report.elapsed = time.monotonic() - start
    return report
