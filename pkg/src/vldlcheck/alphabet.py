"""Pushdown alphabets, finite and lasso words, stack heights, matching.

A pushdown alphabet partitions its symbols into calls (push), returns (pop)
and locals (no stack effect). Words are plain tuples of symbol names; the
ultimately periodic omega-words that serve as witnesses everywhere are
`LassoWord` objects, canonicalized so that structural equality coincides
with equality of the denoted omega-words.
"""

import re

from .errors import InputError

CALL = "call"
RETURN = "return"
LOCAL = "local"


class PushdownAlphabet:
    """Immutable symbol partition with optional proposition sets per symbol."""

    def __init__(self, calls, returns, locals_, props=None):
        calls = tuple(dict.fromkeys(calls))
        returns = tuple(dict.fromkeys(returns))
        locals_ = tuple(dict.fromkeys(locals_))
        symbols = calls + returns + locals_
        if not symbols:
            raise InputError("alphabet must contain at least one symbol")
        if len(set(symbols)) != len(symbols):
            raise InputError("alphabet partition is not disjoint")
        self._kind = {}
        for s in calls:
            self._kind[s] = CALL
        for s in returns:
            self._kind[s] = RETURN
        for s in locals_:
            self._kind[s] = LOCAL
        self.calls = frozenset(calls)
        self.returns = frozenset(returns)
        self.locals = frozenset(locals_)
        self.symbols = symbols
        self._props = {}
        for sym, ps in (props or {}).items():
            if sym not in self._kind:
                raise InputError("props given for unknown symbol %r" % (sym,))
            self._props[sym] = frozenset(ps)

    def __contains__(self, symbol):
        return symbol in self._kind

    def kind(self, symbol):
        try:
            return self._kind[symbol]
        except KeyError:
            raise InputError("symbol %r is not in the alphabet" % (symbol,)) from None

    def props(self, symbol):
        self.kind(symbol)
        return self._props.get(symbol, frozenset())

    def prop_names(self):
        out = set()
        for ps in self._props.values():
            out |= ps
        return out

    def is_call(self, symbol):
        return self.kind(symbol) == CALL

    def is_return(self, symbol):
        return self.kind(symbol) == RETURN

    def __repr__(self):
        return "PushdownAlphabet(calls=%s, returns=%s, locals=%s)" % (
            sorted(self.calls), sorted(self.returns), sorted(self.locals))


# The CLI's built-in alphabet for `encode` when no file is given.
def default_alphabet():
    return PushdownAlphabet(["c"], ["r"], ["l"])


def stack_height(alphabet, word):
    """sh(w): net call/return balance of a finite word, floored at 0."""
    h = 0
    for sym in word:
        k = alphabet.kind(sym)
        if k == CALL:
            h += 1
        elif k == RETURN and h > 0:
            h -= 1
    return h


def is_well_matched(alphabet, word):
    """True iff word contains no unmatched return and no unmatched call."""
    h = 0
    for sym in word:
        k = alphabet.kind(sym)
        if k == CALL:
            h += 1
        elif k == RETURN:
            if h == 0:
                return False
            h -= 1
    return h == 0


class LassoWord:
    """The omega-word prefix . period^omega, canonicalized on construction.

    Canonical form: the period is primitive (not a power of a shorter word)
    and the prefix is shortest among representations of the same omega-word,
    obtained by rotating trailing prefix letters into the period.
    """

    __slots__ = ("alphabet", "prefix", "period")

    def __init__(self, alphabet, prefix, period):
        prefix = tuple(prefix)
        period = tuple(period)
        if not period:
            raise InputError("lasso period must be nonempty")
        for sym in prefix + period:
            alphabet.kind(sym)
        period = _primitive_root(period)
        while prefix and prefix[-1] == period[-1]:
            prefix = prefix[:-1]
            period = period[-1:] + period[:-1]
        self.alphabet = alphabet
        self.prefix = prefix
        self.period = period

    def __getitem__(self, i):
        if i < 0:
            raise IndexError(i)
        if i < len(self.prefix):
            return self.prefix[i]
        return self.period[(i - len(self.prefix)) % len(self.period)]

    def class_of(self, i):
        """Canonical representative position: positions beyond the prefix
        are identified modulo the period."""
        u = len(self.prefix)
        if i < u:
            return i
        return u + (i - u) % len(self.period)

    def props_at(self, i):
        return self.alphabet.props(self[i])

    def height_before(self, k):
        """sh of the length-k prefix of the omega-word."""
        h = 0
        for i in range(k):
            kind = self.alphabet.kind(self[i])
            if kind == CALL:
                h += 1
            elif kind == RETURN and h > 0:
                h -= 1
        return h

    def __eq__(self, other):
        return (isinstance(other, LassoWord)
                and self.prefix == other.prefix
                and self.period == other.period)

    def __hash__(self):
        return hash((self.prefix, self.period))

    def __str__(self):
        body = " ".join(self.period)
        if self.prefix:
            return "%s (%s)^w" % (" ".join(self.prefix), body)
        return "(%s)^w" % body

    def __repr__(self):
        return "LassoWord(%r, %r)" % (self.prefix, self.period)


def _primitive_root(word):
    n = len(word)
    for d in range(1, n + 1):
        if n % d == 0 and word == word[:d] * (n // d):
            return word[:d]
    return word


def _match_horizon(alpha, k):
    """Index beyond which a match for the call at k cannot exist.

    Covers both the prefix remainder and the periodic drift; validated in
    the test suite by a brute-force sweep against a much larger scan.
    """
    u, v = len(alpha.prefix), len(alpha.period)
    nesting = 0
    h = 0
    for i in range(u + 2 * v):
        kind = alpha.alphabet.kind(alpha[i])
        if kind == CALL:
            h += 1
        elif kind == RETURN and h > 0:
            h -= 1
        nesting = max(nesting, h)
    return max(k, u) + (nesting + 2) * v * (v + 1) + v


def matching_return(alpha, k, horizon=None):
    """Smallest k' > k with alpha_k' a return at the call's entry height,
    or None when the call at k is unmatched."""
    if not alpha.alphabet.is_call(alpha[k]):
        raise InputError("position %d does not hold a call" % k)
    end = horizon if horizon is not None else _match_horizon(alpha, k)
    target = alpha.height_before(k)
    h = target + 1
    i = k + 1
    while i <= end:
        kind = alpha.alphabet.kind(alpha[i])
        if kind == CALL:
            h += 1
        elif kind == RETURN:
            h -= 1
            if h == target:
                return i
        i += 1
    return None


def cardinal_positions(alpha, horizon):
    """Steps of alpha plus matching returns of calls at steps, below horizon.

    A position k is a step when the stack height before k never strictly
    exceeds any later before-height; equivalently the height before k is the
    infimum of all heights from k on.
    """
    if horizon < len(alpha.prefix) + len(alpha.period):
        raise InputError("horizon must cover prefix plus one period")
    u, v = len(alpha.prefix), len(alpha.period)
    # Simulate far enough that the floored height sequence has settled into
    # its eventual regime (pure drift or a cycle) for several repeats.
    window = horizon + 4 * (v + 2) * (v + 1) + u + 16
    before = [0] * (window + 1)
    h = 0
    for i in range(window):
        before[i] = h
        kind = alpha.alphabet.kind(alpha[i])
        if kind == CALL:
            h += 1
        elif kind == RETURN and h > 0:
            h -= 1
    before[window] = h
    suffix_min = [0] * (window + 1)
    m = before[window]
    for i in range(window, -1, -1):
        m = min(m, before[i])
        suffix_min[i] = m
    out = set()
    for k in range(horizon):
        if before[k] <= suffix_min[k]:
            out.add(k)
            if alpha.alphabet.is_call(alpha[k]):
                mr = matching_return(alpha, k)
                if mr is not None and mr < horizon:
                    out.add(mr)
    return out


_WORD_RE = re.compile(r"^\s*(?P<u>[^()]*?)\s*(?:\(\s*(?P<v>[^()]+?)\s*\)\s*\^\s*w)?\s*$")


def parse_word_spec(text, alphabet):
    """Parse `u (v)^w` into a LassoWord, or a bare finite word into a tuple."""
    m = _WORD_RE.match(text)
    if not m:
        raise InputError("cannot parse word spec %r" % text)
    u = tuple(m.group("u").split())
    for sym in u:
        alphabet.kind(sym)
    if m.group("v") is None:
        return u
    v = tuple(m.group("v").split())
    if not v:
        raise InputError("empty period in word spec %r" % text)
    return LassoWord(alphabet, u, v)


def parse_alphabet(text):
    """Parse the alphabet file format:

        calls: c1 c2; returns: r1; locals: l1 l2;
        props c1 = {p, q};

    Whitespace-insensitive, `#` starts a line comment.
    """
    stripped = "\n".join(line.split("#", 1)[0] for line in text.splitlines())
    calls, returns, locals_, props = None, None, None, {}
    for stmt in stripped.split(";"):
        stmt = stmt.strip()
        if not stmt:
            continue
        m = re.match(r"^(calls|returns|locals)\s*:\s*(.*)$", stmt, re.S)
        if m:
            names = tuple(m.group(2).split())
            if m.group(1) == "calls":
                calls = names
            elif m.group(1) == "returns":
                returns = names
            else:
                locals_ = names
            continue
        m = re.match(r"^props\s+(\S+)\s*=\s*\{(.*)\}$", stmt, re.S)
        if m:
            sym = m.group(1)
            names = {p.strip() for p in m.group(2).split(",") if p.strip()}
            props[sym] = names
            continue
        raise InputError("cannot parse alphabet statement %r" % stmt)
    if calls is None and returns is None and locals_ is None:
        raise InputError("alphabet file declares no symbols")
    return PushdownAlphabet(calls or (), returns or (), locals_ or (), props)
