"""Visibly pushdown systems and testing visibly pushdown automata.

A VPS reacts to the alphabet partition: calls push one stack symbol,
returns pop one (popping the bottom marker leaves it in place), locals
leave the stack alone. A TVPA adds final states and a per-state test
formula (None meaning the trivial test true).
"""

from .alphabet import CALL, LOCAL, RETURN
from .caps import stage_cap
from .errors import InputError, ResourceError

BOTTOM = "bot"


class Vps:
    def __init__(self, states, alphabet, stack_symbols, calls, returns, locals_,
                 initial, name=None):
        states = tuple(dict.fromkeys(states))
        if initial not in states:
            raise InputError("initial state %r not among states" % (initial,))
        stack_symbols = tuple(dict.fromkeys(stack_symbols))
        if BOTTOM in stack_symbols:
            raise InputError("stack symbol %r is reserved for the bottom marker" % BOTTOM)
        known = set(states)
        gamma = set(stack_symbols)
        for (q, c, q2, a) in calls:
            if q not in known or q2 not in known:
                raise InputError("call transition uses unknown state")
            if alphabet.kind(c) != CALL:
                raise InputError("%r is not a call symbol" % (c,))
            if a == BOTTOM or a not in gamma:
                raise InputError("call transition pushes invalid symbol %r" % (a,))
        for (q, r, a, q2) in returns:
            if q not in known or q2 not in known:
                raise InputError("return transition uses unknown state")
            if alphabet.kind(r) != RETURN:
                raise InputError("%r is not a return symbol" % (r,))
            if a != BOTTOM and a not in gamma:
                raise InputError("return transition pops unknown symbol %r" % (a,))
        for (q, l, q2) in locals_:
            if q not in known or q2 not in known:
                raise InputError("local transition uses unknown state")
            if alphabet.kind(l) != LOCAL:
                raise InputError("%r is not a local symbol" % (l,))
        self.states = states
        self.alphabet = alphabet
        self.stack_symbols = stack_symbols
        self.calls = frozenset(calls)
        self.returns = frozenset(returns)
        self.locals = frozenset(locals_)
        self.initial = initial
        self.name = name

    def __repr__(self):
        return "%s(states=%d, name=%r)" % (type(self).__name__, len(self.states), self.name)


class Tvpa(Vps):
    def __init__(self, states, alphabet, stack_symbols, calls, returns, locals_,
                 initial, final, tests=None, name=None):
        super().__init__(states, alphabet, stack_symbols, calls, returns, locals_,
                         initial, name=name)
        final = frozenset(final)
        if not final <= set(states):
            raise InputError("final states must be states")
        self.final = final
        self.tests = {q: None for q in states}
        for q, t in (tests or {}).items():
            if q not in self.tests:
                raise InputError("test attached to unknown state %r" % (q,))
            self.tests[q] = t


# A configuration is (state, stack) with the stack a tuple, top first,
# always ending in the bottom marker.
EMPTY_STACK = (BOTTOM,)


def successors(system, cfg, symbol):
    """One-step successors of a configuration under `symbol`."""
    q, stack = cfg
    kind = system.alphabet.kind(symbol)
    out = set()
    if kind == CALL:
        for (q1, c, q2, a) in system.calls:
            if q1 == q and c == symbol:
                out.add((q2, (a,) + stack))
    elif kind == RETURN:
        top = stack[0]
        for (q1, r, a, q2) in system.returns:
            if q1 == q and r == symbol and a == top:
                if top == BOTTOM:
                    out.add((q2, stack))
                else:
                    out.add((q2, stack[1:]))
    else:
        for (q1, l, q2) in system.locals:
            if q1 == q and l == symbol:
                out.add((q2, stack))
    return out


def run_relation(automaton, word, start, cap=None):
    """All states reachable from (start, empty stack) on `word`, each paired
    with the tuple of visited states. Acceptance and tests are the caller's
    business; stacks are discarded at the end.
    """
    limit = stage_cap(cap)
    frontier = {((start, EMPTY_STACK), (start,))}
    explored = 0
    for symbol in word:
        nxt = set()
        for cfg, trace in frontier:
            for cfg2 in successors(automaton, cfg, symbol):
                nxt.add((cfg2, trace + (cfg2[0],)))
                explored += 1
                if explored > limit:
                    raise ResourceError("run_relation exceeded %d configurations" % limit,
                                        stage="run_relation")
        frontier = nxt
    return {(cfg[0], trace) for cfg, trace in frontier}


def traces_prefixes(system, length, cap=None):
    """All trace prefixes of the given length (used by tests to validate
    counterexamples against small systems)."""
    limit = stage_cap(cap)
    out = set()
    frontier = {(system.initial, EMPTY_STACK): {()}}
    explored = 0
    for _ in range(length):
        nxt = {}
        for cfg, words in frontier.items():
            for symbol in system.alphabet.symbols:
                for cfg2 in successors(system, cfg, symbol):
                    bucket = nxt.setdefault(cfg2, set())
                    for w in words:
                        bucket.add(w + (symbol,))
                        explored += 1
                        if explored > limit:
                            raise ResourceError("trace enumeration exceeded cap",
                                                stage="traces_prefixes")
        frontier = nxt
        for words in frontier.values():
            out |= words
    return out


def run_on_lasso(system, lasso, cap=None):
    """Check that the lasso embeds as an infinite run of the system.

    Unrolls the prefix and then periods until either a boundary
    configuration repeats exactly (the segment between the repeats can loop
    forever) or one period pumps: it returns to its entry state with the
    entry stack as an untouched suffix, never having popped into it.
    Returns True when an infinite run along the lasso provably exists.
    """
    limit = stage_cap(cap)
    frontier = {(system.initial, EMPTY_STACK)}
    for sym in lasso.prefix:
        frontier = {c2 for c in frontier for c2 in successors(system, c, sym)}
        if not frontier:
            return False
        if len(frontier) > limit:
            raise ResourceError("lasso validation exceeded cap", stage="run_on_lasso")
    seen_boundaries = [frontier]
    rounds = len(lasso.prefix) + 2 * len(system.states) + 8
    for _ in range(rounds):
        if any(_period_pumps(system, lasso.period, cfg, limit)
               for cfg in seen_boundaries[-1]):
            return True
        cur = seen_boundaries[-1]
        for sym in lasso.period:
            cur = {c2 for c in cur for c2 in successors(system, c, sym)}
            if not cur:
                return False
            if len(cur) > limit:
                raise ResourceError("lasso validation exceeded cap", stage="run_on_lasso")
        if any(cur & earlier for earlier in seen_boundaries):
            return True
        seen_boundaries.append(cur)
    return False


def _period_pumps(system, period, start_cfg, limit):
    """One period from start_cfg ending in the same state with the entry
    stack as an unpopped suffix; such a segment can repeat forever."""
    q0, s0 = start_cfg
    base = len(s0)
    frontier = {(q0, s0, base)}
    for sym in period:
        is_return = system.alphabet.kind(sym) == RETURN
        nxt = set()
        for (q, s, lo) in frontier:
            for (q2, s2) in successors(system, (q, s), sym):
                lo2 = min(lo, len(s2))
                if is_return and len(s2) == len(s):
                    # pop on the bottom marker: reads the bottom, so the
                    # segment is not replayable on a taller stack
                    lo2 = 0
                nxt.add((q2, s2, lo2))
                if len(nxt) > limit:
                    raise ResourceError("lasso validation exceeded cap",
                                        stage="run_on_lasso")
        frontier = nxt
        if not frontier:
            return False
    for (q, s, lo) in frontier:
        if q == q0 and lo >= base and len(s) >= base and s[len(s) - base:] == s0:
            return True
    return False


def parse_system(text, alphabet, library=None):
    """Parse the system format:

        states: q0 q1;  initial: q0;  final: q1;
        q0 -c push A-> q1;  q1 -r pop A-> q0;  q0 -l-> q0;
        test q0: p & q;

    Returns a Tvpa when final states or tests are present, else a Vps.
    `library` supplies named automata for formulas inside tests.
    """
    import re

    from .formula import TvpaLibrary, parse_formula

    stripped = "\n".join(line.split("#", 1)[0] for line in text.splitlines())
    states = None
    initial = None
    final = None
    tests_src = {}
    calls, returns, locals_ = [], [], []
    stack_syms = []
    name = None
    for stmt in stripped.split(";"):
        stmt = stmt.strip()
        if not stmt:
            continue
        m = re.match(r"^(states|initial|final|name)\s*:\s*(.*)$", stmt, re.S)
        if m:
            key, val = m.group(1), m.group(2).split()
            if key == "states":
                states = val
            elif key == "initial":
                if len(val) != 1:
                    raise InputError("initial takes exactly one state")
                initial = val[0]
            elif key == "final":
                final = val
            else:
                name = val[0] if val else None
            continue
        m = re.match(r"^test\s+(\S+)\s*:\s*(.*)$", stmt, re.S)
        if m:
            tests_src[m.group(1)] = m.group(2)
            continue
        m = re.match(r"^(\S+)\s*-\s*(\S+)\s+push\s+(\S+)\s*->\s*(\S+)$", stmt)
        if m:
            q, c, a, q2 = m.groups()
            calls.append((q, c, q2, a))
            if a not in stack_syms:
                stack_syms.append(a)
            continue
        m = re.match(r"^(\S+)\s*-\s*(\S+)\s+pop\s+(\S+)\s*->\s*(\S+)$", stmt)
        if m:
            q, r, a, q2 = m.groups()
            if a == "⊥":
                a = BOTTOM
            returns.append((q, r, a, q2))
            if a != BOTTOM and a not in stack_syms:
                stack_syms.append(a)
            continue
        m = re.match(r"^(\S+)\s*-\s*(\S+)\s*->\s*(\S+)$", stmt)
        if m:
            q, l, q2 = m.groups()
            locals_.append((q, l, q2))
            continue
        raise InputError("cannot parse system statement %r" % stmt)
    if states is None:
        raise InputError("system file declares no states")
    if initial is None:
        raise InputError("system file declares no initial state")
    if final is None and not tests_src:
        return Vps(states, alphabet, stack_syms, calls, returns, locals_, initial,
                   name=name)
    lib = library or TvpaLibrary(alphabet)
    tests = {}
    for q, src in tests_src.items():
        tests[q] = parse_formula(src, lib)
    return Tvpa(states, alphabet, stack_syms, calls, returns, locals_, initial,
                final or (), tests, name=name)


def system_to_str(system):
    """Inverse of parse_system, up to whitespace."""
    from .formula import formula_to_str

    lines = []
    if system.name:
        lines.append("name: %s;" % system.name)
    lines.append("states: %s;" % " ".join(system.states))
    lines.append("initial: %s;" % system.initial)
    if isinstance(system, Tvpa):
        lines.append("final: %s;" % " ".join(sorted(system.final)))
    for (q, c, q2, a) in sorted(system.calls):
        lines.append("%s -%s push %s-> %s;" % (q, c, a, q2))
    for (q, r, a, q2) in sorted(system.returns):
        lines.append("%s -%s pop %s-> %s;" % (q, r, a, q2))
    for (q, l, q2) in sorted(system.locals):
        lines.append("%s -%s-> %s;" % (q, l, q2))
    if isinstance(system, Tvpa):
        for q in system.states:
            t = system.tests.get(q)
            if t is not None:
                lines.append("test %s: %s;" % (q, formula_to_str(t)))
    return "\n".join(lines)
