"""Translate alternating jump automata into Büchi tree automata over
stack-tree encodings, through the breakpoint (owing-set) construction.

Tree states come in three families:

* spine pairs (A, N): copies of the word automaton tracked along the
  current branch, split into those that visited an accepting state since
  the last breakpoint (A) and those still owing one (N); a state with
  N = ∅ is a breakpoint and re-partitions itself before stepping;
* verifier tuples (A, N, A_G, N_G): the same bookkeeping walking the
  body of a matched call, plus the guessed pair (A_G, N_G) of copies
  that must surface at the matching return; the guess is discharged by
  reading the padding that ends the body while the current pair equals
  it exactly;
* a sink consuming padding subtrees.

Copies that jump over a matched call land on the left child (the suffix
from the return) merged with the guess; copies that step into the body
seed the verifier on the right child. Guesses are drawn from the summary
relation of the breakpoint dynamics: the pairs some well-matched body can
actually drive the seed to, computed by saturation before they are needed.
The guess made by an accepting run on a concrete tree is the arrival pair
of that very body, so restricting to summaries never loses a tree, and
every guess offered is realizable, which keeps the enumeration near the
live state space instead of the full powerset.

Two prunings keep the live space small, neither changing the language:

* copies never vanish, so a copy in a state that cannot reach the
  accepting set stays that way forever; on the spine it eventually
  strands the owing side, and in a verifier it can never line up with a
  guess that merges into a viable spine, so any pair touching such a
  state is dropped everywhere (pairs, seeds, guesses);
* the pair reached by one step depends only on the union of the target
  sets the copies pick, so steps are enumerated per copy in target-set
  space with partial unions deduplicated, never materializing the raw
  product of minimal models.
"""

from collections import deque

from .aja import DIRECT, JUMP, commands_of
from .alphabet import CALL, RETURN
from .caps import stage_cap
from .errors import ResourceError
from .stacktree import stack_tree_recognizer
from .treeauto import BuchiTreeAutomaton, intersect
from .trees import BOT

SINK = "sink"

_EMPTY = frozenset()


def _canon(group):
    return tuple(sorted(group, key=repr))


def spine_state(a, n):
    return ("s", _canon(a), _canon(n))


def verifier_state(a, n, ag, ng):
    return ("v", _canon(a), _canon(n), _canon(ag), _canon(ng))


def _doomed(auto):
    """States from which the accepting set is unreachable, over the edges
    any command of any transition formula could take. Copies never vanish,
    so a copy parked in one of these can never help an accepting run."""
    rev = {q: set() for q in auto.states}
    for q in auto.states:
        for sym in auto.alphabet.symbols:
            for cmd in commands_of(auto.transition(q, sym)):
                rev[cmd.direct_target].add(q)
                rev[cmd.jump_target].add(q)
    live = set(auto.accepting)
    todo = list(live)
    while todo:
        for p in rev[todo.pop()]:
            if p not in live:
                live.add(p)
                todo.append(p)
    return frozenset(auto.states) - live


def _merge(landing, guess):
    """Copies jumping onto the return meet the copies the body delivers
    there; an owing listing wins a collision."""
    (ja, jn), (ga, gn) = landing, guess
    n = jn | gn
    a = (ja | ga) - n
    return a, n


class _Summaries:
    """Step, split, and body-summary relations of the breakpoint dynamics.

    Nodes of the summary graph are breakpoint pairs; an edge is one local
    step or one whole call..return block, the block resolved through the
    summaries of its own body seed. summaries(seed) is the set of pairs
    reachable from the seed, the seed included (a body may be empty).
    The least fixpoint is computed by an event worklist: reach sets grow
    monotonically, and each edge insertion, reach extension, and block
    firing is processed exactly once."""

    def __init__(self, auto, limit):
        self.auto = auto
        self.acc = auto.accepting
        self.limit = limit
        self.work = 0
        self.doomed = _doomed(auto)
        self.contrib_cache = {}
        self.step_cache = {}
        self.split_cache = {}
        self.succ = {}
        self.sites = {}
        self.reach = {}
        self.member = {}
        self.dep = {}
        self.fired = set()
        self.events = deque()
        self.sorted_cache = {}

    def _charge(self, amount=1):
        self.work += amount
        if self.work > self.limit:
            raise ResourceError(
                "tree translation needs more than %d steps" % self.limit,
                stage="tree-translation")

    def _contribs(self, state, sym, matched):
        """Target-set contributions of one copy, per surviving minimal
        model: a direct-target set outside matched calls, a (step-in,
        jump-over) pair of target sets at one. Models that doom a copy
        are dropped."""
        key = (state, sym, matched)
        got = self.contrib_cache.get(key)
        if got is None:
            out = set()
            for m in self.auto.models(state, sym):
                if matched:
                    ud = frozenset(c.direct_target for c in m
                                   if c.kind == DIRECT)
                    uj = frozenset(c.jump_target for c in m
                                   if c.kind == JUMP)
                    if (ud | uj) & self.doomed:
                        continue
                    out.add((ud, uj))
                else:
                    u = frozenset(c.direct_target for c in m)
                    if u & self.doomed:
                        continue
                    out.add(u)
            got = tuple(sorted(out, key=repr))
            self.contrib_cache[key] = got
        return got

    def steps(self, a, n, sym):
        """All pairs one step over `sym` can reach, outside matched calls
        (locals, returns, and calls without a matching return, where jump
        commands fall back to their direct target)."""
        key = (_canon(a), _canon(n), sym)
        got = self.step_cache.get(key)
        if got is not None:
            return got
        acc = self.acc
        partials = {(_EMPTY, _EMPTY)}
        for owing, part in ((False, key[0]), (True, key[1])):
            for q in part:
                contribs = self._contribs(q, sym, False)
                if not contribs:
                    partials = None
                    break
                grown = set()
                for (u, nn) in partials:
                    for cu in contribs:
                        self._charge()
                        grown.add((u | cu, nn | (cu - acc) if owing else nn))
                partials = grown
            if partials is None:
                break
        if partials is None:
            got = frozenset()
        else:
            got = frozenset((u - nn, nn) for (u, nn) in partials)
        self.step_cache[key] = got
        return got

    def call_splits(self, a, n, sym):
        """All (body seed, jump landing) pairs a matched call over `sym`
        can produce: direct commands walk into the body, jump commands
        land on the matching return."""
        key = (_canon(a), _canon(n), sym)
        got = self.split_cache.get(key)
        if got is not None:
            return got
        acc = self.acc
        partials = {(_EMPTY, _EMPTY, _EMPTY, _EMPTY)}
        for owing, part in ((False, key[0]), (True, key[1])):
            for q in part:
                contribs = self._contribs(q, sym, True)
                if not contribs:
                    partials = None
                    break
                grown = set()
                for (ud, nd, uj, nj) in partials:
                    for (cd, cj) in contribs:
                        self._charge()
                        if owing:
                            grown.add((ud | cd, nd | (cd - acc),
                                       uj | cj, nj | (cj - acc)))
                        else:
                            grown.add((ud | cd, nd, uj | cj, nj))
                partials = grown
            if partials is None:
                break
        if partials is None:
            got = frozenset()
        else:
            got = frozenset(((ud - nd, nd), (uj - nj, nj))
                            for (ud, nd, uj, nj) in partials)
        self.split_cache[key] = got
        return got

    def _discover(self, pair):
        if pair in self.succ:
            return
        self.succ[pair] = set()
        self.sites[pair] = set()
        self.events.append(("expand", pair))

    def _watch(self, seed):
        """Start tracking the reach set of a body seed."""
        if seed in self.reach:
            return
        self.reach[seed] = set()
        self.dep[seed] = []
        self._discover(seed)
        self.events.append(("reach", seed, seed))

    def _drain(self):
        """Process queued events to the least fixpoint. Handlers are
        idempotent, so duplicate events are cheap skips."""
        events = self.events
        alphabet = self.auto.alphabet
        while events:
            self._charge()
            ev = events.popleft()
            tag = ev[0]
            if tag == "expand":
                pair = ev[1]
                a, n = pair
                for sym in alphabet.symbols:
                    kind = alphabet.kind(sym)
                    if kind == RETURN:
                        continue
                    if kind == CALL:
                        for (seed, landing) in self.call_splits(a, n, sym):
                            events.append(("site", pair, landing, seed))
                    else:
                        for nxt in self.steps(a, n, sym):
                            events.append(("edge", pair, nxt))
            elif tag == "edge":
                pair, nxt = ev[1], ev[2]
                out = self.succ[pair]
                if nxt in out:
                    continue
                out.add(nxt)
                self._discover(nxt)
                for seed in self.member.get(pair, ()):
                    events.append(("reach", seed, nxt))
            elif tag == "site":
                pair, landing, seed = ev[1], ev[2], ev[3]
                key = (landing, seed)
                if key in self.sites[pair]:
                    continue
                self.sites[pair].add(key)
                self._watch(seed)
                self.dep[seed].append((pair, landing))
                for guess in self.reach[seed]:
                    events.append(("fire", pair, landing, guess))
            elif tag == "reach":
                seed, pair = ev[1], ev[2]
                got = self.reach[seed]
                if pair in got:
                    continue
                got.add(pair)
                self.member.setdefault(pair, set()).add(seed)
                self._discover(pair)
                for nxt in self.succ[pair]:
                    events.append(("reach", seed, nxt))
                for (site_pair, landing) in self.dep[seed]:
                    events.append(("fire", site_pair, landing, pair))
            else:
                pair, landing, guess = ev[1], ev[2], ev[3]
                key = (pair, landing, guess)
                if key in self.fired:
                    continue
                self.fired.add(key)
                at_return = _merge(landing, guess)
                for sym in sorted(alphabet.returns):
                    for nxt in self.steps(at_return[0], at_return[1], sym):
                        events.append(("edge", pair, nxt))

    def summaries(self, seed):
        """Live reach set of `seed`; snapshot before mutating iteration."""
        self._watch(seed)
        self._drain()
        return self.reach[seed]

    def sorted_summaries(self, seed):
        """summaries(seed) as a deterministically ordered snapshot,
        re-sorted only when the reach set has grown."""
        got = self.summaries(seed)
        cached = self.sorted_cache.get(seed)
        if cached is None or len(cached) != len(got):
            cached = sorted(got, key=repr)
            self.sorted_cache[seed] = cached
        return cached


def aja_to_tree(auto, cap=None):
    """Büchi tree automaton T with L(T) ∩ st(Σ^ω) = st(L(auto))."""
    limit = stage_cap(cap)
    acc = auto.accepting
    summ = _Summaries(auto, limit)
    alphabet = auto.alphabet
    labels = frozenset(alphabet.symbols) | {BOT}

    states = {SINK}
    accepting = {SINK}
    transitions = {(SINK, BOT, SINK, SINK)}
    queue = deque()

    def emit(transition):
        summ._charge()
        transitions.add(transition)

    def add_spine(a, n):
        st = spine_state(a, n)
        if st not in states:
            states.add(st)
            if not n:
                accepting.add(st)
            queue.append((st, a, n, None))
        return st

    def add_verifier(a, n, ag, ng):
        st = verifier_state(a, n, ag, ng)
        if st not in states:
            states.add(st)
            accepting.add(st)
            queue.append((st, a, n, (ag, ng)))
        return st

    if auto.initial in acc:
        initial = add_spine(frozenset({auto.initial}), frozenset())
    else:
        initial = add_spine(frozenset(), frozenset({auto.initial}))

    while queue:
        if len(states) > limit:
            raise ResourceError(
                "tree translation needs more than %d states" % limit,
                stage="tree-translation")
        st, a, n, guess = queue.popleft()
        if guess is not None and a == guess[0] and n == guess[1]:
            emit((st, BOT, SINK, SINK))
        if guess is None and not n:
            a, n = a & acc, a - acc
        for sym in alphabet.symbols:
            if alphabet.kind(sym) != CALL:
                for (a2, n2) in summ.steps(a, n, sym):
                    if guess is None:
                        emit((st, sym, add_spine(a2, n2), SINK))
                    else:
                        emit((st, sym, add_verifier(a2, n2, *guess), SINK))
                continue
            if guess is None:
                for (a2, n2) in summ.steps(a, n, sym):
                    emit((st, sym, SINK, add_spine(a2, n2)))
            for (seed, landing) in summ.call_splits(a, n, sym):
                for body_arrival in summ.sorted_summaries(seed):
                    a_left, n_left = _merge(landing, body_arrival)
                    ver = add_verifier(seed[0], seed[1], *body_arrival)
                    if guess is None:
                        if a_left or n_left:
                            emit((st, sym, add_spine(a_left, n_left), ver))
                    else:
                        emit((st, sym,
                              add_verifier(a_left, n_left, *guess), ver))

    return BuchiTreeAutomaton(states, labels, transitions, initial,
                              accepting)


def aja_to_stacktree_automaton(auto, cap=None):
    """Tree automaton accepting exactly the stack-tree encodings of the
    lasso words the alternating automaton accepts."""
    return intersect(aja_to_tree(auto, cap=cap),
                     stack_tree_recognizer(auto.alphabet), cap=cap)
