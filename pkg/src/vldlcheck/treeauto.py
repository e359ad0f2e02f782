"""Büchi automata over infinite binary trees.

A tree is accepted iff some run (a state labeling of the full binary tree
consistent with the transitions) visits accepting states infinitely often
along every branch. Emptiness and membership of regular trees both reduce
to two-player Büchi games: the Automaton player resolves nondeterminism,
the Pathfinder picks branches.
"""

from .caps import stage_cap
from .errors import InputError, ResourceError
from .games import BuchiGame, solve_buchi_game
from .trees import RegularTree, render_label

__all__ = [
    "BuchiTreeAutomaton", "BuchiGame", "solve_buchi_game", "intersect",
    "is_empty", "witness", "contains", "universal_automaton",
    "automaton_to_dot", "game_to_dot",
]


class BuchiTreeAutomaton:
    """states, label alphabet, transitions (q, label, left, right),
    initial state, accepting states."""

    def __init__(self, states, labels, transitions, initial, accepting):
        self.states = frozenset(states)
        self.labels = frozenset(labels)
        self.transitions = frozenset(transitions)
        self.initial = initial
        self.accepting = frozenset(accepting)
        if initial not in self.states:
            raise InputError("initial state not in state set")
        if not self.accepting <= self.states:
            raise InputError("accepting states not in state set")
        self._index = {}
        for tr in self.transitions:
            if len(tr) != 4:
                raise InputError("transition %r is not a 4-tuple" % (tr,))
            q, a, ql, qr = tr
            if q not in self.states or ql not in self.states or qr not in self.states:
                raise InputError("transition %r uses undeclared states" % (tr,))
            if a not in self.labels:
                raise InputError("transition %r uses undeclared label %r" % (tr, a))
            self._index.setdefault((q, a), []).append(tr)
        self._by_state = {}
        for key in self._index:
            self._index[key].sort(key=repr)
            self._by_state.setdefault(key[0], []).extend(self._index[key])
        for state in self._by_state:
            self._by_state[state].sort(key=repr)

    def moves(self, state, label):
        return self._index.get((state, label), [])

    def all_moves(self, state):
        return self._by_state.get(state, [])

    def __len__(self):
        return len(self.states)

    def __repr__(self):
        return ("BuchiTreeAutomaton(states=%d, transitions=%d)"
                % (len(self.states), len(self.transitions)))


def universal_automaton(labels):
    """Accepts every tree over the given label alphabet."""
    q = "univ"
    trs = {(q, a, q, q) for a in labels}
    return BuchiTreeAutomaton([q], labels, trs, q, [q])


def intersect(t1, t2, cap=None):
    """Product automaton with the standard two-phase Büchi flag:
    phase 1 waits for an accepting state of t1, phase 2 for one of t2,
    and the phase-2 hits are the accepting states of the product."""
    if t1.labels != t2.labels:
        raise InputError("label alphabets differ: %r vs %r"
                         % (sorted(map(str, t1.labels)), sorted(map(str, t2.labels))))
    limit = stage_cap(cap)

    def step(state):
        q1, q2, ph = state
        if ph == 1 and q1 in t1.accepting:
            return 2
        if ph == 2 and q2 in t2.accepting:
            return 1
        return ph

    initial = (t1.initial, t2.initial, 1)
    states = {initial}
    transitions = set()
    frontier = [initial]
    while frontier:
        state = frontier.pop()
        q1, q2, _ph = state
        nph = step(state)
        for (_, a, l1, r1) in t1.all_moves(q1):
            for tr2 in t2.moves(q2, a):
                _, _, l2, r2 = tr2
                left = (l1, l2, nph)
                right = (r1, r2, nph)
                transitions.add((state, a, left, right))
                for nxt in (left, right):
                    if nxt not in states:
                        states.add(nxt)
                        if len(states) > limit:
                            raise ResourceError(
                                "intersection exceeds state cap", stage="intersect")
                        frontier.append(nxt)
    accepting = {s for s in states if s[2] == 2 and s[1] in t2.accepting}
    return BuchiTreeAutomaton(states, t1.labels, transitions, initial, accepting)


def _emptiness_game(auto):
    """Automaton player at ("q", q) picks a transition; Pathfinder at
    ("t", tr) picks the child direction."""
    owner = {}
    edges = {}
    accepting = set()
    start = ("q", auto.initial)
    stack = [start]
    owner[start] = 0
    while stack:
        v = stack.pop()
        if v[0] == "q":
            q = v[1]
            if q in auto.accepting:
                accepting.add(v)
            succ = []
            for tr in auto.all_moves(q):
                w = ("t", tr)
                succ.append(w)
                if w not in owner:
                    owner[w] = 1
                    stack.append(w)
            edges[v] = succ
        else:
            _, _, ql, qr = v[1]
            succ = []
            for q2 in (ql, qr):
                w = ("q", q2)
                succ.append(w)
                if w not in owner:
                    owner[w] = 0
                    stack.append(w)
            edges[v] = succ
    return BuchiGame(owner, edges, accepting, initial=start)


def _solve_emptiness(auto):
    game = _emptiness_game(auto)
    win0, strategy = solve_buchi_game(game)
    return game, win0, strategy


def is_empty(auto):
    _game, win0, _strategy = _solve_emptiness(auto)
    return ("q", auto.initial) not in win0


def witness(auto):
    """A regular tree in L(auto), or None when the language is empty. The
    generator states are the automaton states touched by a memoryless
    winning strategy."""
    _game, win0, strategy = _solve_emptiness(auto)
    if ("q", auto.initial) not in win0:
        return None
    labels = {}
    left = {}
    right = {}
    queue = [auto.initial]
    while queue:
        q = queue.pop()
        if q in labels:
            continue
        _, tr = strategy[("q", q)]
        _, a, ql, qr = tr
        labels[q] = a
        left[q] = ql
        right[q] = qr
        queue.append(ql)
        queue.append(qr)
    return RegularTree(auto.initial, labels, left, right)


def contains(auto, tree, cap=None):
    """Membership of a regular tree's unfolding, via the acceptance game
    over (automaton state, generator state) pairs."""
    if not tree.label_set() <= auto.labels:
        raise InputError("tree labels %r not within automaton alphabet"
                         % (sorted(map(str, tree.label_set() - auto.labels)),))
    limit = stage_cap(cap)
    owner = {}
    edges = {}
    accepting = set()
    start = ("n", auto.initial, tree.root)
    owner[start] = 0
    stack = [start]
    while stack:
        v = stack.pop()
        if len(owner) > limit:
            raise ResourceError("membership game exceeds cap", stage="membership")
        if v[0] == "n":
            _, q, s = v
            if q in auto.accepting:
                accepting.add(v)
            succ = []
            for tr in auto.moves(q, tree.label(s)):
                w = ("e", tr, s)
                succ.append(w)
                if w not in owner:
                    owner[w] = 1
                    stack.append(w)
            edges[v] = succ
        else:
            _, (_, _, ql, qr), s = v
            succ = []
            for q2, s2 in ((ql, tree.left[s]), (qr, tree.right[s])):
                w = ("n", q2, s2)
                succ.append(w)
                if w not in owner:
                    owner[w] = 0
                    stack.append(w)
            edges[v] = succ
    game = BuchiGame(owner, edges, accepting, initial=start)
    win0, _strategy = solve_buchi_game(game)
    return start in win0


def automaton_to_dot(auto):
    lines = ["digraph treeauto {", "  node [shape=circle];"]
    order = sorted(auto.states, key=repr)
    names = {q: "s%d" % i for i, q in enumerate(order)}
    for q in order:
        shape = "doublecircle" if q in auto.accepting else "circle"
        lines.append('  %s [label="%s", shape=%s];'
                     % (names[q], _dot_escape(q), shape))
    lines.append('  init [shape=point];')
    lines.append('  init -> %s;' % names[auto.initial])
    for tr in sorted(auto.transitions, key=repr):
        q, a, ql, qr = tr
        lines.append('  %s -> %s [label="%s/L"];'
                     % (names[q], names[ql], _dot_escape(render_label(a))))
        lines.append('  %s -> %s [label="%s/R"];'
                     % (names[q], names[qr], _dot_escape(render_label(a))))
    lines.append("}")
    return "\n".join(lines)


def game_to_dot(game):
    lines = ["digraph game {"]
    order = sorted(game.owner, key=repr)
    names = {v: "v%d" % i for i, v in enumerate(order)}
    for v in order:
        shape = "box" if game.owner[v] == 1 else "circle"
        peri = ", peripheries=2" if v in game.accepting else ""
        lines.append('  %s [label="%s", shape=%s%s];'
                     % (names[v], _dot_escape(v), shape, peri))
    for v in order:
        for w in game.edges[v]:
            lines.append("  %s -> %s;" % (names[v], names[w]))
    lines.append("}")
    return "\n".join(lines)


def _dot_escape(value):
    text = value if isinstance(value, str) else repr(value)
    return text.replace("\\", "\\\\").replace('"', '\\"')