"""Compile NNF formulas into one-way alternating jump automata.

Literals become three-state automata (enter, accept-sink, reject-sink).
Conjunction and disjunction reuse the product-free combinators from
`aja`. Each modality adds a simulation layer over the tested automaton:

* main states (q, b) track runs of the automaton over the prefix read so
  far, with b = 1 once the run has crossed into the scope of a call that
  the copy entered directly instead of jumping over;
* verifier states (q, target, A) walk the body of a matched call and
  settle whether some run from q leaves it through a return popping A
  into `target` (Box refutes that, Diamond confirms it);
* wait states absorb the return a jump lands on, so a summarized copy
  resumes right after it.

A Box keeps every simulation state accepting (universal obligations may
be tracked forever) while a Diamond makes them all rejecting so each
chosen run must actually reach an accepting prefix. State tests attach as
escape disjuncts (Box, compiled from the negated test) or as mandatory
conjuncts (Diamond, compiled positively).
"""

from .aja import (
    Leaf, go, jump, conj, disj, conjoin, disjoin, rename_formula, OneAja,
    _same_symbols,
)
from .caps import stage_cap
from .errors import InputError, ResourceError
from .formula import (
    Atom, NegAtom, Not, And, Or, Diamond, Box, to_nnf, closure,
    formula_to_str,
)
from .vps import BOTTOM

TOP = ("top",)
REJ = ("rej",)


def _literal(alphabet, prop, positive):
    """Three states: the entry reads one symbol and commits to a sink."""
    delta = {}
    for sym in alphabet.symbols:
        holds = prop in alphabet.props(sym)
        verdict = TOP if holds == positive else REJ
        delta[("init", sym)] = Leaf(go(verdict))
        delta[(TOP, sym)] = Leaf(go(TOP))
        delta[(REJ, sym)] = Leaf(go(REJ))
    return OneAja({"init", TOP, REJ}, alphabet, delta, "init", {TOP})


class _Assembly:
    """Mutable state/delta/accepting pools while one modality is built."""

    def __init__(self, alphabet):
        self.alphabet = alphabet
        self.states = set()
        self.delta = {}
        self.accepting = set()

    def add(self, state, accepting=False):
        self.states.add(state)
        if accepting:
            self.accepting.add(state)
        return state

    def top(self):
        if TOP not in self.states:
            self.add(TOP, accepting=True)
            for sym in self.alphabet.symbols:
                self.delta[(TOP, sym)] = Leaf(go(TOP))
        return TOP

    def rej(self):
        if REJ not in self.states:
            self.add(REJ)
            for sym in self.alphabet.symbols:
                self.delta[(REJ, sym)] = Leaf(go(REJ))
        return REJ

    def wait(self, state):
        """One-shot state that swallows the symbol a jump landed on."""
        w = ("w", state)
        if w not in self.states:
            self.add(w)
            for sym in self.alphabet.symbols:
                self.delta[(w, sym)] = Leaf(go(state))
        return w

    def embed(self, tag, auto):
        """Copy a finished automaton in under fresh names; the renamed
        initial state's transitions double as entry formulas."""
        mapping = {q: (tag, q) for q in auto.states}
        for (q, sym), f in auto.delta.items():
            self.delta[(mapping[q], sym)] = rename_formula(f, mapping)
        for q in auto.states:
            self.add(mapping[q], accepting=q in auto.accepting)
        return mapping[auto.initial]

    def entry(self, embedded_initial, symbol):
        return self.delta[(embedded_initial, symbol)]

    def finalize(self, initial, cap=None):
        limit = stage_cap(cap)
        if len(self.states) > limit:
            raise ResourceError(
                "compiled automaton needs %d states (cap %d)"
                % (len(self.states), limit), stage="compile")
        return OneAja(self.states, self.alphabet, self.delta, initial,
                      self.accepting)


def _check_operand(aut, alphabet):
    if not hasattr(aut, "final") or not hasattr(aut, "tests"):
        raise InputError("modality operand %r is not a tested automaton"
                         % (aut,))
    if not _same_symbols(aut.alphabet, alphabet):
        raise InputError("modality operand uses a different alphabet")


def _call_moves(aut, q, sym):
    return sorted((q2, a) for (q1, c, q2, a) in aut.calls
                  if q1 == q and c == sym)


def _bottom_return_moves(aut, q, sym):
    return sorted(q2 for (q1, r, a, q2) in aut.returns
                  if q1 == q and r == sym and a == BOTTOM)


def _local_moves(aut, q, sym):
    return sorted(q2 for (q1, l, q2) in aut.locals if q1 == q and l == sym)


def _embed_tests(asm, aut, compiled_tests):
    """Entry points of the compiled test automata, one per tested state."""
    entries = {}
    embedded = {}
    for q in aut.states:
        key = aut.tests.get(q)
        if key is None:
            entries[q] = None
            continue
        text = formula_to_str(compiled_tests[id(key)][0])
        if text not in embedded:
            idx = len(embedded)
            embedded[text] = asm.embed(("t", idx),
                                       compiled_tests[id(key)][1])
        entries[q] = embedded[text]
    return entries


def _compile_box(aut, inner_auto, compiled_tests, alphabet, cap):
    asm = _Assembly(alphabet)
    inner_entry = asm.embed("i", inner_auto)
    tests = _embed_tests(asm, aut, compiled_tests)
    states = sorted(aut.states)
    gammas = sorted(aut.stack_symbols)

    def chi(q, sym):
        if q in aut.final:
            return asm.entry(inner_entry, sym)
        return Leaf(go(asm.top()))

    def theta(q, sym):
        if tests[q] is None:
            return None
        return asm.entry(tests[q], sym)

    def escape(core, q, sym):
        t = theta(q, sym)
        return core if t is None else disj([core, t])

    mains = [(q, b) for q in states for b in (0, 1)]
    verifiers = [(q, qt, a) for q in states for qt in states for a in gammas]
    for q, b in mains:
        asm.add(("m", q, b), accepting=True)
    for q, qt, a in verifiers:
        asm.add(("v", q, qt, a), accepting=True)

    for q, b in mains:
        for sym in alphabet.calls:
            parts = [chi(q, sym)]
            for (q2, a) in _call_moves(aut, q, sym):
                for q3 in states:
                    parts.append(disj([
                        Leaf(go(("v", q2, q3, a))),
                        Leaf(jump(asm.top(), asm.wait(("m", q3, b)))),
                    ]))
            for (q2, a) in _call_moves(aut, q, sym):
                parts.append(Leaf(go(("m", q2, 1))))
            asm.delta[(("m", q, b), sym)] = escape(conj(parts), q, sym)
        for sym in alphabet.locals:
            parts = [chi(q, sym)]
            parts += [Leaf(go(("m", q2, b)))
                      for q2 in _local_moves(aut, q, sym)]
            asm.delta[(("m", q, b), sym)] = escape(conj(parts), q, sym)
        for sym in alphabet.returns:
            if b == 0:
                parts = [chi(q, sym)]
                parts += [Leaf(go(("m", q2, 0)))
                          for q2 in _bottom_return_moves(aut, q, sym)]
                core = conj(parts)
            else:
                core = conj([chi(q, sym), Leaf(go(asm.top()))])
            asm.delta[(("m", q, b), sym)] = escape(core, q, sym)

    for q, qt, a in verifiers:
        v = ("v", q, qt, a)
        for sym in alphabet.calls:
            parts = []
            for (q2, a2) in _call_moves(aut, q, sym):
                for q3 in states:
                    parts.append(disj([
                        Leaf(go(("v", q2, q3, a2))),
                        Leaf(jump(asm.top(), asm.wait(("v", q3, qt, a)))),
                    ]))
            core = conj(parts) if parts else Leaf(go(asm.top()))
            asm.delta[(v, sym)] = escape(core, q, sym)
        for sym in alphabet.locals:
            parts = [Leaf(go(("v", q2, qt, a)))
                     for q2 in _local_moves(aut, q, sym)]
            core = conj(parts) if parts else Leaf(go(asm.top()))
            asm.delta[(v, sym)] = escape(core, q, sym)
        for sym in alphabet.returns:
            if (q, sym, a, qt) in aut.returns:
                t = theta(q, sym)
                asm.delta[(v, sym)] = t if t is not None else Leaf(go(asm.rej()))
            else:
                asm.delta[(v, sym)] = Leaf(go(asm.top()))

    return asm.finalize(("m", aut.initial, 0), cap)


def _compile_diamond(aut, inner_auto, compiled_tests, alphabet, cap):
    asm = _Assembly(alphabet)
    inner_entry = asm.embed("i", inner_auto)
    tests = _embed_tests(asm, aut, compiled_tests)
    states = sorted(aut.states)
    gammas = sorted(aut.stack_symbols)

    def chi(q, sym):
        if q in aut.final:
            return asm.entry(inner_entry, sym)
        return Leaf(go(asm.rej()))

    def require(core, q, sym):
        if tests[q] is None:
            return core
        return conj([core, asm.entry(tests[q], sym)])

    mains = [(q, b) for q in states for b in (0, 1)]
    verifiers = [(q, qt, a) for q in states for qt in states for a in gammas]
    for q, b in mains:
        asm.add(("m", q, b))
    for q, qt, a in verifiers:
        asm.add(("v", q, qt, a))

    for q, b in mains:
        for sym in alphabet.calls:
            parts = [chi(q, sym)]
            for (q2, a) in _call_moves(aut, q, sym):
                for q3 in states:
                    parts.append(conj([
                        Leaf(go(("v", q2, q3, a))),
                        Leaf(jump(asm.rej(), asm.wait(("m", q3, b)))),
                    ]))
            for (q2, a) in _call_moves(aut, q, sym):
                parts.append(Leaf(go(("m", q2, 1))))
            asm.delta[(("m", q, b), sym)] = require(disj(parts), q, sym)
        for sym in alphabet.locals:
            parts = [chi(q, sym)]
            parts += [Leaf(go(("m", q2, b)))
                      for q2 in _local_moves(aut, q, sym)]
            asm.delta[(("m", q, b), sym)] = require(disj(parts), q, sym)
        for sym in alphabet.returns:
            if b == 0:
                parts = [chi(q, sym)]
                parts += [Leaf(go(("m", q2, 0)))
                          for q2 in _bottom_return_moves(aut, q, sym)]
                core = disj(parts)
            else:
                core = chi(q, sym)
            asm.delta[(("m", q, b), sym)] = require(core, q, sym)

    for q, qt, a in verifiers:
        v = ("v", q, qt, a)
        for sym in alphabet.calls:
            parts = []
            for (q2, a2) in _call_moves(aut, q, sym):
                for q3 in states:
                    parts.append(conj([
                        Leaf(go(("v", q2, q3, a2))),
                        Leaf(jump(asm.rej(), asm.wait(("v", q3, qt, a)))),
                    ]))
            core = disj(parts) if parts else Leaf(go(asm.rej()))
            asm.delta[(v, sym)] = require(core, q, sym)
        for sym in alphabet.locals:
            parts = [Leaf(go(("v", q2, qt, a)))
                     for q2 in _local_moves(aut, q, sym)]
            core = disj(parts) if parts else Leaf(go(asm.rej()))
            asm.delta[(v, sym)] = require(core, q, sym)
        for sym in alphabet.returns:
            if (q, sym, a, qt) in aut.returns:
                if tests[q] is None:
                    asm.delta[(v, sym)] = Leaf(go(asm.top()))
                else:
                    asm.delta[(v, sym)] = asm.entry(tests[q], sym)
            else:
                asm.delta[(v, sym)] = Leaf(go(asm.rej()))

    return asm.finalize(("m", aut.initial, 0), cap)


def _compile_modality(phi, alphabet, memo, cap):
    aut = phi.automaton
    _check_operand(aut, alphabet)
    inner_auto = _compile(phi.inner, alphabet, memo, cap)
    compiled_tests = {}
    for t in aut.tests.values():
        if t is None or id(t) in compiled_tests:
            continue
        oriented = to_nnf(Not(t)) if isinstance(phi, Box) else to_nnf(t)
        compiled_tests[id(t)] = (oriented, _compile(oriented, alphabet,
                                                    memo, cap))
    build = _compile_box if isinstance(phi, Box) else _compile_diamond
    return build(aut, inner_auto, compiled_tests, alphabet, cap)


def _compile(phi, alphabet, memo, cap):
    got = memo.get(phi)
    if got is not None:
        return got
    if isinstance(phi, Atom):
        out = _literal(alphabet, phi.prop, True)
    elif isinstance(phi, NegAtom):
        out = _literal(alphabet, phi.prop, False)
    elif isinstance(phi, And):
        out = conjoin(_compile(phi.left, alphabet, memo, cap),
                      _compile(phi.right, alphabet, memo, cap))
    elif isinstance(phi, Or):
        out = disjoin(_compile(phi.left, alphabet, memo, cap),
                      _compile(phi.right, alphabet, memo, cap))
    elif isinstance(phi, (Diamond, Box)):
        out = _compile_modality(phi, alphabet, memo, cap)
    else:
        raise InputError("cannot compile %r: not in negation normal form"
                         % (phi,))
    limit = stage_cap(cap)
    if len(out) > limit:
        raise ResourceError("compiled automaton needs %d states (cap %d)"
                            % (len(out), limit), stage="compile")
    memo[phi] = out
    return out


def compile_formula(phi, alphabet, cap=None):
    """Automaton whose lasso language is exactly the models of `phi`.

    The formula is normalized first, so negations anywhere are fine;
    tests inside modality operands are compiled per polarity (negated
    under Box, as written under Diamond). Raises InputError when an
    operand automaton's test mentions the operand itself (directly or
    through other automata) and ResourceError when the state count
    passes the stage cap.
    """
    closure(phi)
    return _compile(to_nnf(phi), alphabet, {}, cap)
