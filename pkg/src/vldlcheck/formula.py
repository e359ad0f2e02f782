"""VLDL abstract syntax, parsing, negation normal form, closure, size.

Formulas are immutable dataclasses with structural equality, so equal
subformulas are interchangeable keys in memo tables. Modalities hold the
guarding automaton object itself (compared by identity), never a name.
"""

import re
from dataclasses import dataclass

from .errors import InputError

# Reserved proposition used to desugar the surface constants true/false.
RESERVED_PROP = "__tt"


@dataclass(frozen=True)
class Atom:
    prop: str


@dataclass(frozen=True)
class NegAtom:
    prop: str


@dataclass(frozen=True)
class Not:
    inner: object


@dataclass(frozen=True)
class And:
    left: object
    right: object


@dataclass(frozen=True)
class Or:
    left: object
    right: object


@dataclass(frozen=True)
class Diamond:
    automaton: object
    inner: object


@dataclass(frozen=True)
class Box:
    automaton: object
    inner: object


def true_formula():
    return Or(Atom(RESERVED_PROP), NegAtom(RESERVED_PROP))


def false_formula():
    return And(Atom(RESERVED_PROP), NegAtom(RESERVED_PROP))


def to_nnf(phi):
    """Push negation to the atoms; Diamond/Box swap under Not (the duality),
    automata and their tests are left untouched."""
    if isinstance(phi, (Atom, NegAtom)):
        return phi
    if isinstance(phi, And):
        return And(to_nnf(phi.left), to_nnf(phi.right))
    if isinstance(phi, Or):
        return Or(to_nnf(phi.left), to_nnf(phi.right))
    if isinstance(phi, Diamond):
        return Diamond(phi.automaton, to_nnf(phi.inner))
    if isinstance(phi, Box):
        return Box(phi.automaton, to_nnf(phi.inner))
    if isinstance(phi, Not):
        inner = phi.inner
        if isinstance(inner, Atom):
            return NegAtom(inner.prop)
        if isinstance(inner, NegAtom):
            return Atom(inner.prop)
        if isinstance(inner, Not):
            return to_nnf(inner.inner)
        if isinstance(inner, And):
            return Or(to_nnf(Not(inner.left)), to_nnf(Not(inner.right)))
        if isinstance(inner, Or):
            return And(to_nnf(Not(inner.left)), to_nnf(Not(inner.right)))
        if isinstance(inner, Diamond):
            return Box(inner.automaton, to_nnf(Not(inner.inner)))
        if isinstance(inner, Box):
            return Diamond(inner.automaton, to_nnf(Not(inner.inner)))
    raise InputError("not a formula: %r" % (phi,))


def _nontrivial_tests(automaton):
    return [t for t in automaton.tests.values() if t is not None]


def _direct_automata(phi):
    """Automata guarding modalities in phi, not descending into their tests."""
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
    return out


def _check_noncircular(phi):
    """The subformula relation through automaton tests must be acyclic."""
    WHITE, GREY, BLACK = 0, 1, 2
    color = {}

    def visit(aut):
        c = color.get(id(aut), WHITE)
        if c == GREY:
            raise InputError("circular subformula relation through automaton tests")
        if c == BLACK:
            return
        color[id(aut)] = GREY
        for t in _nontrivial_tests(aut):
            for nxt in _direct_automata(t):
                visit(nxt)
        color[id(aut)] = BLACK

    for aut in _direct_automata(phi):
        visit(aut)


def closure(phi):
    """cl(phi): all subformulas, including test formulas inside automata,
    transitively. Raises on a circular subformula relation."""
    _check_noncircular(phi)
    out = set()
    stack = [phi]
    while stack:
        f = stack.pop()
        if f in out:
            continue
        out.add(f)
        if isinstance(f, Not):
            stack.append(f.inner)
        elif isinstance(f, (And, Or)):
            stack.extend((f.left, f.right))
        elif isinstance(f, (Diamond, Box)):
            stack.append(f.inner)
            stack.extend(_nontrivial_tests(f.automaton))
    return out


def formula_size(phi):
    """|cl(phi)| plus automaton state counts, once per modality occurrence
    in the (test-transitive) syntax tree."""
    cl = closure(phi)

    def autos(f):
        if isinstance(f, Not):
            return autos(f.inner)
        if isinstance(f, (And, Or)):
            return autos(f.left) + autos(f.right)
        if isinstance(f, (Diamond, Box)):
            n = len(f.automaton.states) + autos(f.inner)
            for t in _nontrivial_tests(f.automaton):
                n += autos(t)
            return n
        return 0

    return len(cl) + autos(phi)


def formula_to_str(phi):
    if isinstance(phi, Atom):
        return phi.prop
    if isinstance(phi, NegAtom):
        return "!" + phi.prop
    if isinstance(phi, Not):
        return "!(%s)" % formula_to_str(phi.inner)
    if isinstance(phi, And):
        return "(%s & %s)" % (formula_to_str(phi.left), formula_to_str(phi.right))
    if isinstance(phi, Or):
        return "(%s | %s)" % (formula_to_str(phi.left), formula_to_str(phi.right))
    if isinstance(phi, Diamond):
        return "<%s> (%s)" % (_aut_name(phi.automaton), formula_to_str(phi.inner))
    if isinstance(phi, Box):
        return "[%s] (%s)" % (_aut_name(phi.automaton), formula_to_str(phi.inner))
    raise InputError("not a formula: %r" % (phi,))


def _aut_name(aut):
    return getattr(aut, "name", None) or "A%x" % (id(aut) & 0xFFFF)


class TvpaLibrary:
    """Named automata over one alphabet, the context for parse_formula."""

    def __init__(self, alphabet, automata=None):
        self.alphabet = alphabet
        self.automata = dict(automata or {})

    def add(self, name, automaton):
        self.automata[name] = automaton

    def get(self, name):
        try:
            return self.automata[name]
        except KeyError:
            raise InputError("unknown automaton name %r" % name) from None


_TOKEN_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_']*|[!&|()<>\[\]]|\S")


def _tokenize(text):
    tokens = []
    for lineno, line in enumerate(text.splitlines() or [""], start=1):
        line = line.split("#", 1)[0]
        for m in _TOKEN_RE.finditer(line):
            tokens.append((m.group(0), lineno, m.start() + 1))
    return tokens


class _Parser:
    def __init__(self, tokens, library):
        self.tokens = tokens
        self.pos = 0
        self.library = library
        props = library.alphabet.prop_names()
        self.known_props = props | {RESERVED_PROP}

    def error(self, message):
        if self.pos < len(self.tokens):
            tok, line, col = self.tokens[self.pos]
            raise InputError("%s at line %d col %d (near %r)" % (message, line, col, tok))
        raise InputError("%s at end of input" % message)

    def peek(self):
        return self.tokens[self.pos][0] if self.pos < len(self.tokens) else None

    def take(self, expected=None):
        tok = self.peek()
        if tok is None or (expected is not None and tok != expected):
            self.error("expected %r" % expected if expected else "unexpected end")
        self.pos += 1
        return tok

    def parse(self):
        f = self.or_expr()
        if self.peek() is not None:
            self.error("trailing input")
        return f

    def or_expr(self):
        f = self.and_expr()
        while self.peek() == "|":
            self.take()
            f = Or(f, self.and_expr())
        return f

    def and_expr(self):
        f = self.unary()
        while self.peek() == "&":
            self.take()
            f = And(f, self.unary())
        return f

    def unary(self):
        tok = self.peek()
        if tok == "!":
            self.take()
            return Not(self.unary())
        if tok == "<":
            self.take()
            name = self.ident()
            self.take(">")
            return Diamond(self.library.get(name), self.unary())
        if tok == "[":
            self.take()
            name = self.ident()
            self.take("]")
            return Box(self.library.get(name), self.unary())
        if tok == "(":
            self.take()
            f = self.or_expr()
            self.take(")")
            return f
        if tok == "true":
            self.take()
            return true_formula()
        if tok == "false":
            self.take()
            return false_formula()
        if tok is not None and re.fullmatch(r"[A-Za-z_][A-Za-z0-9_']*", tok):
            if tok not in self.known_props:
                self.error("proposition %r not declared by the alphabet" % tok)
            self.take()
            return Atom(tok)
        self.error("expected a formula")

    def ident(self):
        tok = self.take()
        if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_']*", tok):
            self.error("expected an identifier")
        return tok


def parse_formula(text, library):
    return _Parser(_tokenize(text), library).parse()
