"""One-way alternating automata with jump moves, Büchi acceptance.

A command is a pair of targets: on a matched call a jump command moves to
the matching return in the jump target, otherwise the command advances one
position in the direct target. Transitions are positive Boolean formulas
over commands (no constants); a word is accepted iff there is a run choice
(a model of each transition formula) whose every infinite path visits
accepting states infinitely often. Acceptance on lasso words with a
well-matched period is decided exactly by a finite Büchi game over
(position-class, state) pairs.
"""

from collections import namedtuple
from dataclasses import dataclass

from .alphabet import is_well_matched, matching_return
from .caps import stage_cap
from .errors import InputError, ResourceError, UnsupportedInputError
from .games import BuchiGame, solve_buchi_game

DIRECT = "direct"
JUMP = "jump"


@dataclass(frozen=True)
class Command:
    kind: str
    direct_target: object
    jump_target: object

    def __post_init__(self):
        if self.kind not in (DIRECT, JUMP):
            raise InputError("unknown command kind %r" % (self.kind,))


def go(state):
    """Command that always advances directly to `state`."""
    return Command(DIRECT, state, state)


def jump(fallback, state):
    """Command that jumps to the matching return in `state` on matched
    calls, and advances to `fallback` otherwise."""
    return Command(JUMP, fallback, state)


@dataclass(frozen=True)
class Leaf:
    command: Command


@dataclass(frozen=True)
class AndF:
    children: tuple

    def __post_init__(self):
        if not self.children:
            raise InputError("empty conjunction is not representable")


@dataclass(frozen=True)
class OrF:
    children: tuple

    def __post_init__(self):
        if not self.children:
            raise InputError("empty disjunction is not representable")


def conj(parts):
    parts = tuple(parts)
    if not parts:
        raise InputError("empty conjunction is not representable")
    return parts[0] if len(parts) == 1 else AndF(parts)


def disj(parts):
    parts = tuple(parts)
    if not parts:
        raise InputError("empty disjunction is not representable")
    return parts[0] if len(parts) == 1 else OrF(parts)


def commands_of(formula):
    out = []
    stack = [formula]
    while stack:
        f = stack.pop()
        if isinstance(f, Leaf):
            out.append(f.command)
        else:
            stack.extend(f.children)
    return out


def satisfies(formula, commands):
    """Does the command set model the formula?"""
    if isinstance(formula, Leaf):
        return formula.command in commands
    if isinstance(formula, AndF):
        return all(satisfies(c, commands) for c in formula.children)
    return any(satisfies(c, commands) for c in formula.children)


def _prune(sets):
    out = []
    for s in sorted(sets, key=lambda x: (len(x), sorted(map(repr, x)))):
        if not any(t <= s for t in out):
            out.append(s)
    return frozenset(out)


def minimal_models(formula, _memo=None):
    """All inclusion-minimal command sets satisfying the formula."""
    if _memo is None:
        _memo = {}
    cached = _memo.get(formula)
    if cached is not None:
        return cached
    if isinstance(formula, Leaf):
        result = frozenset({frozenset({formula.command})})
    elif isinstance(formula, OrF):
        pool = set()
        for child in formula.children:
            pool |= minimal_models(child, _memo)
        result = _prune(pool)
    elif isinstance(formula, AndF):
        acc = {frozenset()}
        for child in formula.children:
            child_models = minimal_models(child, _memo)
            acc = _prune({a | b for a in acc for b in child_models})
        result = frozenset(acc)
    else:
        raise InputError("not a positive Boolean formula: %r" % (formula,))
    _memo[formula] = result
    return result


class OneAja:
    """states; alphabet; delta: (state, symbol) -> PosBool; initial;
    accepting states."""

    def __init__(self, states, alphabet, delta, initial, accepting):
        self.states = frozenset(states)
        self.alphabet = alphabet
        self.delta = dict(delta)
        self.initial = initial
        self.accepting = frozenset(accepting)
        if initial not in self.states:
            raise InputError("initial state not declared")
        if not self.accepting <= self.states:
            raise InputError("accepting states not declared")
        for q in self.states:
            for sym in alphabet.symbols:
                f = self.delta.get((q, sym))
                if f is None:
                    raise InputError("delta not total: missing (%r, %r)" % (q, sym))
                for cmd in commands_of(f):
                    if (cmd.direct_target not in self.states
                            or cmd.jump_target not in self.states):
                        raise InputError("command %r leaves the state set" % (cmd,))
        self._model_cache = {}
        self._formula_memo = {}

    def transition(self, state, symbol):
        return self.delta[(state, symbol)]

    def models(self, state, symbol):
        key = (state, symbol)
        got = self._model_cache.get(key)
        if got is None:
            got = minimal_models(self.delta[key], self._formula_memo)
            self._model_cache[key] = got
        return got

    def __len__(self):
        return len(self.states)

    def __repr__(self):
        return "OneAja(states=%d)" % len(self.states)


def apply_command(lasso, i, cmd):
    """(next position, next state) when executing the command at position
    i: jump commands land on the matching return of a matched call."""
    if cmd.kind == JUMP and lasso.alphabet.is_call(lasso[i]):
        j = matching_return(lasso, i)
        if j is not None:
            return (j, cmd.jump_target)
    return (i + 1, cmd.direct_target)


def _same_symbols(a1, a2):
    return (a1.calls == a2.calls and a1.returns == a2.returns
            and a1.locals == a2.locals)


def rename_formula(formula, mapping):
    if isinstance(formula, Leaf):
        cmd = formula.command
        return Leaf(Command(cmd.kind, mapping[cmd.direct_target],
                            mapping[cmd.jump_target]))
    if isinstance(formula, AndF):
        return AndF(tuple(rename_formula(c, mapping) for c in formula.children))
    return OrF(tuple(rename_formula(c, mapping) for c in formula.children))


_FRESH_INITIAL = ("init",)


def _combine(a1, a2, make):
    if not _same_symbols(a1.alphabet, a2.alphabet):
        raise InputError("operands use different alphabets")
    map1 = {q: ("1", q) for q in a1.states}
    map2 = {q: ("2", q) for q in a2.states}
    delta = {}
    for (q, sym), f in a1.delta.items():
        delta[(map1[q], sym)] = rename_formula(f, map1)
    for (q, sym), f in a2.delta.items():
        delta[(map2[q], sym)] = rename_formula(f, map2)
    for sym in a1.alphabet.symbols:
        delta[(_FRESH_INITIAL, sym)] = make((
            delta[(map1[a1.initial], sym)],
            delta[(map2[a2.initial], sym)]))
    states = set(map1.values()) | set(map2.values()) | {_FRESH_INITIAL}
    accepting = {map1[q] for q in a1.accepting} | {map2[q] for q in a2.accepting}
    return OneAja(states, a1.alphabet, delta, _FRESH_INITIAL, accepting)


def conjoin(a1, a2):
    """Automaton for the intersection; one fresh initial state."""
    return _combine(a1, a2, AndF)


def disjoin(a1, a2):
    """Automaton for the union; one fresh initial state."""
    return _combine(a1, a2, OrF)


def lasso_accepts(auto, lasso, cap=None):
    """Game-based acceptance on a lasso word with well-matched period.

    Arena: the automaton player picks a minimal model of the transition
    formula at (position class, state); the pathfinder picks a command
    from it. Position classes identify positions past the prefix that
    agree modulo the period; the class value is itself a valid position,
    used as the representative.
    """
    if not _same_symbols(auto.alphabet, lasso.alphabet):
        raise InputError("automaton and word use different alphabets")
    if not is_well_matched(lasso.alphabet, lasso.period):
        raise UnsupportedInputError(
            "acceptance oracle requires a well-matched lasso period")
    limit = stage_cap(cap)
    per = len(lasso.period)
    base = len(lasso.prefix)
    checked = set()

    def check_displacement(k):
        # jump displacement must not depend on which period copy we are in
        if k < base or k in checked:
            return
        checked.add(k)
        j1 = matching_return(lasso, k)
        j2 = matching_return(lasso, k + per)
        if j1 is None:
            assert j2 is None, "jump displacement varies across periods"
        else:
            assert j2 == j1 + per, "jump displacement varies across periods"

    start = ("pos", lasso.class_of(0), auto.initial)
    owner = {start: 0}
    edges = {}
    accepting = set()
    stack = [start]
    while stack:
        v = stack.pop()
        if len(owner) > limit:
            raise ResourceError("acceptance game exceeds the cap",
                                stage="acceptance-game")
        if v[0] == "pos":
            _, k, q = v
            if q in auto.accepting:
                accepting.add(v)
            succ = []
            for model in sorted(auto.models(q, lasso[k]),
                                key=lambda m: sorted(map(repr, m))):
                w = ("mdl", k, q, model)
                succ.append(w)
                if w not in owner:
                    owner[w] = 1
                    stack.append(w)
            edges[v] = succ
        else:
            _, k, _q, model = v
            succ = []
            for cmd in sorted(model, key=repr):
                if cmd.kind == JUMP and lasso.alphabet.is_call(lasso[k]):
                    check_displacement(k)
                pos2, q2 = apply_command(lasso, k, cmd)
                w = ("pos", lasso.class_of(pos2), q2)
                succ.append(w)
                if w not in owner:
                    owner[w] = 0
                    stack.append(w)
            edges[v] = succ
    game = BuchiGame(owner, edges, accepting, initial=start)
    win0, _strategy = solve_buchi_game(game)
    return start in win0


RunDag = namedtuple("RunDag", ["levels", "edges", "initial"])


def run_dag(auto, lasso, depth):
    """Truncated superposition of all runs, for diagnostics: vertices are
    (position, state), edges follow every command of every minimal model."""
    initial = (0, auto.initial)
    vertices = {initial}
    edges = set()
    frontier = [initial]
    while frontier:
        i, q = frontier.pop()
        if i >= depth:
            continue
        for model in auto.models(q, lasso[i]):
            for cmd in model:
                tgt = apply_command(lasso, i, cmd)
                if tgt[0] <= depth:
                    edges.add(((i, q), tgt))
                    if tgt not in vertices:
                        vertices.add(tgt)
                        frontier.append(tgt)
    levels = {}
    for (i, q) in vertices:
        levels.setdefault(i, set()).add(q)
    return RunDag(levels=levels, edges=frozenset(edges), initial=initial)


def formula_to_text(formula):
    if isinstance(formula, Leaf):
        cmd = formula.command
        if cmd.kind == DIRECT:
            return "->%s" % (cmd.direct_target,)
        return "~>(%s|%s)" % (cmd.direct_target, cmd.jump_target)
    sep = " & " if isinstance(formula, AndF) else " | "
    return "(" + sep.join(formula_to_text(c) for c in formula.children) + ")"


def delta_to_text(auto):
    lines = []
    for (q, sym) in sorted(auto.delta, key=repr):
        lines.append("%s, %s: %s"
                     % (q, sym, formula_to_text(auto.delta[(q, sym)])))
    return "\n".join(lines)