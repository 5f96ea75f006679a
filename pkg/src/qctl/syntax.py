"""Formula AST, concrete syntax, printer and structural metrics."""

from __future__ import annotations

import re
from dataclasses import dataclass, fields
from enum import Enum
from typing import Iterable, Iterator


class Formula:
    """Base class of all formula nodes.

    Nodes are immutable; the structural hash is computed once and cached,
    since generated formulas share large subterms by reference.
    """

    __slots__ = ()

    def __hash__(self):
        h = self.__dict__.get("_h")
        if h is None:
            h = hash((type(self).__name__,) + tuple(getattr(self, f.name) for f in fields(self)))
            object.__setattr__(self, "_h", h)
        return h

    def __and__(self, other):
        return And(self, other)

    def __or__(self, other):
        return Or(self, other)

    def __invert__(self):
        return Not(self)

    def __rshift__(self, other):
        return Implies(self, other)

    def __str__(self):
        return render(self)


def _node(cls):
    cls = dataclass(frozen=True, eq=True)(cls)
    cls.__hash__ = Formula.__hash__  # keep the cached structural hash
    return cls


@_node
class Top(Formula):
    pass


@_node
class Bottom(Formula):
    pass


@_node
class Prop(Formula):
    name: str


@_node
class Not(Formula):
    arg: Formula


@_node
class And(Formula):
    left: Formula
    right: Formula


@_node
class Or(Formula):
    left: Formula
    right: Formula


@_node
class Implies(Formula):
    left: Formula
    right: Formula


@_node
class Iff(Formula):
    left: Formula
    right: Formula


@_node
class EX(Formula):
    arg: Formula


@_node
class AX(Formula):
    arg: Formula


@_node
class EF(Formula):
    arg: Formula


@_node
class AG(Formula):
    arg: Formula


@_node
class AF(Formula):
    arg: Formula


@_node
class EXEF(Formula):
    arg: Formula


@_node
class AXAG(Formula):
    arg: Formula


@_node
class EU(Formula):
    left: Formula
    right: Formula


@_node
class AU(Formula):
    left: Formula
    right: Formula


@_node
class Exists(Formula):
    var: str
    body: Formula


@_node
class Forall(Formula):
    var: str
    body: Formula


TRUE = Top()
FALSE = Bottom()

BINARY = (And, Or, Implies, Iff)
UNARY_TEMPORAL = (EX, AX, EF, AG, AF, EXEF, AXAG)
UNTIL = (EU, AU)
QUANTIFIERS = (Exists, Forall)

_BIN_SYMBOL = {And: "&", Or: "|", Implies: "->", Iff: "<->"}
_BIN_PREC = {Iff: 1, Implies: 2, Or: 3, And: 4}
_UNARY_NAME = {EX: "EX", AX: "AX", EF: "EF", AG: "AG", AF: "AF", EXEF: "EXEF", AXAG: "AXAG"}

KEYWORDS = {"EX", "AX", "EF", "AG", "AF", "EXEF", "AXAG", "exists", "forall", "true", "false", "U"}
NAME_RE = re.compile(r"[A-Za-z0-9_]+")


def is_prop_name(name: str) -> bool:
    return bool(NAME_RE.fullmatch(name)) and name not in KEYWORDS


# small builders -----------------------------------------------------------

def P(name: str) -> Prop:
    return Prop(name)


def conj(items: Iterable[Formula]) -> Formula:
    """Left-nested conjunction; the empty conjunction is true."""
    out = None
    for f in items:
        out = f if out is None else And(out, f)
    return TRUE if out is None else out


def disj(items: Iterable[Formula]) -> Formula:
    """Left-nested disjunction; the empty disjunction is false."""
    out = None
    for f in items:
        out = f if out is None else Or(out, f)
    return FALSE if out is None else out


def ex_n(k: int, f: Formula) -> Formula:
    for _ in range(k):
        f = EX(f)
    return f


def exists_many(names: Iterable[str], body: Formula) -> Formula:
    for name in reversed(list(names)):
        body = Exists(name, body)
    return body


def forall_many(names: Iterable[str], body: Formula) -> Formula:
    for name in reversed(list(names)):
        body = Forall(name, body)
    return body


def children(f: Formula) -> tuple:
    if isinstance(f, (Top, Bottom, Prop)):
        return ()
    if isinstance(f, (Not,) + UNARY_TEMPORAL):
        return (f.arg,)
    if isinstance(f, BINARY + UNTIL):
        return (f.left, f.right)
    return (f.body,)


# parsing ------------------------------------------------------------------

class ParseError(ValueError):
    def __init__(self, message, line, column, expected=()):
        self.line = line
        self.column = column
        self.expected = frozenset(expected)
        exp = ""
        if self.expected:
            exp = "; expected one of: " + ", ".join(sorted(self.expected))
        super().__init__(f"{message} at line {line}, column {column}{exp}")


_TOKEN_RE = re.compile(r"<->|->|[&|~().\[\]]|[A-Za-z0-9_]+")


@dataclass
class _Tok:
    kind: str  # "sym", "name" or "eof"
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list:
    toks = []
    pos, line, line_start = 0, 1, 0
    while True:
        while pos < len(text) and text[pos].isspace():
            if text[pos] == "\n":
                line, line_start = line + 1, pos + 1
            pos += 1
        col = pos - line_start + 1
        if pos >= len(text):
            toks.append(_Tok("eof", "", line, col))
            return toks
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        word = m.group(0)
        kind = "name" if NAME_RE.fullmatch(word) else "sym"
        toks.append(_Tok(kind, word, line, col))
        pos = m.end()


_UNARY_START = {"~", "(", "EX", "AX", "EF", "AG", "AF", "EXEF", "AXAG", "E[", "A[",
                "true", "false", "exists", "forall", "<prop>"}


class _Parser:
    def __init__(self, text):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self, k=0):
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def fail(self, expected, tok=None):
        tok = tok or self.peek()
        found = "end of input" if tok.kind == "eof" else repr(tok.text)
        raise ParseError(f"unexpected {found}", tok.line, tok.col, expected)

    def expect_sym(self, sym):
        tok = self.peek()
        if tok.kind == "sym" and tok.text == sym:
            self.i += 1
            return tok
        self.fail({sym})

    def formula(self):
        tok = self.peek()
        if tok.kind == "name" and tok.text in ("exists", "forall"):
            return self.quant()
        return self.binary(1)

    def quant(self):
        tok = self.peek()
        self.i += 1
        name = self.peek()
        if name.kind != "name" or not is_prop_name(name.text):
            self.fail({"<prop>"})
        self.i += 1
        self.expect_sym(".")
        body = self.formula()
        return (Exists if tok.text == "exists" else Forall)(name.text, body)

    _OPS = {1: ("<->", Iff), 2: ("->", Implies), 3: ("|", Or), 4: ("&", And)}

    def binary(self, level):
        if level > 4:
            return self.unary()
        sym, cls = self._OPS[level]
        left = self.binary(level + 1)
        while True:
            tok = self.peek()
            if tok.kind == "sym" and tok.text == sym:
                self.i += 1
                right = self.binary(level + 1)
                left = cls(left, right)
            else:
                return left

    def unary(self):
        tok = self.peek()
        if tok.kind == "sym":
            if tok.text == "~":
                self.i += 1
                return Not(self.unary())
            if tok.text == "(":
                self.i += 1
                f = self.formula()
                self.expect_sym(")")
                return f
            self.fail(_UNARY_START)
        if tok.kind == "eof":
            self.fail(_UNARY_START)
        word = tok.text
        if word in ("E", "A"):
            nxt = self.peek(1)
            if nxt.kind == "sym" and nxt.text == "[":
                self.i += 2
                left = self.formula()
                u = self.peek()
                if not (u.kind == "name" and u.text == "U"):
                    self.fail({"U"})
                self.i += 1
                right = self.formula()
                self.expect_sym("]")
                return (EU if word == "E" else AU)(left, right)
        if word in ("exists", "forall"):
            return self.quant()
        if word in _UNARY_BY_NAME:
            self.i += 1
            return _UNARY_BY_NAME[word](self.unary())
        if word == "true":
            self.i += 1
            return TRUE
        if word == "false":
            self.i += 1
            return FALSE
        if not is_prop_name(word):
            self.fail(_UNARY_START)
        self.i += 1
        return Prop(word)


_UNARY_BY_NAME = {v: k for k, v in _UNARY_NAME.items()}


def parse(text: str) -> Formula:
    p = _Parser(text)
    f = p.formula()
    tok = p.peek()
    if tok.kind != "eof":
        p.fail({"&", "|", "->", "<->", "end of input"})
    return f


# rendering ----------------------------------------------------------------

_ATOM = 5


def _prec(f):
    if isinstance(f, BINARY):
        return _BIN_PREC[type(f)]
    if isinstance(f, QUANTIFIERS):
        return 0
    return _ATOM


def _render(f, need, out):
    wrap = _prec(f) < need
    if wrap:
        out.append("(")
    if isinstance(f, Top):
        out.append("true")
    elif isinstance(f, Bottom):
        out.append("false")
    elif isinstance(f, Prop):
        out.append(f.name)
    elif isinstance(f, Not):
        out.append("~")
        _render(f.arg, _ATOM, out)
    elif isinstance(f, UNARY_TEMPORAL):
        out.append(_UNARY_NAME[type(f)] + " ")
        _render(f.arg, _ATOM, out)
    elif isinstance(f, BINARY):
        p = _BIN_PREC[type(f)]
        _render(f.left, p, out)
        out.append(f" {_BIN_SYMBOL[type(f)]} ")
        _render(f.right, p + 1, out)
    elif isinstance(f, UNTIL):
        out.append("E[ " if isinstance(f, EU) else "A[ ")
        _render(f.left, 0, out)
        out.append(" U ")
        _render(f.right, 0, out)
        out.append(" ]")
    else:
        out.append(("exists " if isinstance(f, Exists) else "forall ") + f.var + ". ")
        _render(f.body, 0 if isinstance(f.body, QUANTIFIERS) else _ATOM, out)
    if wrap:
        out.append(")")


def render(f: Formula) -> str:
    out: list = []
    _render(f, 0, out)
    return "".join(out)


# metrics ------------------------------------------------------------------

def _fold(f, leaf, combine):
    """Bottom-up fold over the formula DAG, visiting shared nodes once."""
    memo: dict = {}
    stack = [f]
    while stack:
        g = stack[-1]
        if id(g) in memo:
            stack.pop()
            continue
        kids = children(g)
        pending = [c for c in kids if id(c) not in memo]
        if pending:
            stack.extend(pending)
            continue
        stack.pop()
        memo[id(g)] = combine(g, [memo[id(c)] for c in kids]) if kids else leaf(g)
    return memo[id(f)]


def modal_depth(f: Formula) -> int:
    def combine(g, vals):
        m = max(vals)
        if isinstance(g, (EXEF, AXAG)):
            return m + 2
        if isinstance(g, UNARY_TEMPORAL + UNTIL):
            return m + 1
        return m

    return _fold(f, lambda g: 0, combine)


def length(f: Formula) -> int:
    return _fold(f, lambda g: 1, lambda g, vals: 1 + sum(vals))


def free_props(f: Formula) -> frozenset:
    def leaf(g):
        return frozenset([g.name]) if isinstance(g, Prop) else frozenset()

    def combine(g, vals):
        if isinstance(g, QUANTIFIERS):
            return vals[0] - {g.var}
        return frozenset().union(*vals)

    return _fold(f, leaf, combine)


def all_props(f: Formula) -> frozenset:
    """Every proposition name occurring in f, bound or free."""
    def leaf(g):
        return frozenset([g.name]) if isinstance(g, Prop) else frozenset()

    def combine(g, vals):
        s = frozenset().union(*vals)
        return s | {g.var} if isinstance(g, QUANTIFIERS) else s

    return _fold(f, leaf, combine)


def operators(f: Formula) -> frozenset:
    """Set of node classes occurring in f."""
    return _fold(f, lambda g: frozenset([type(g)]), lambda g, vals: frozenset([type(g)]).union(*vals))


def quantifier_count(f: Formula) -> int:
    return _fold(f, lambda g: 0, lambda g, vals: sum(vals) + isinstance(g, QUANTIFIERS))


def is_prenex(f: Formula) -> bool:
    while isinstance(f, QUANTIFIERS):
        f = f.body
    return quantifier_count(f) == 0


def subformulas(f: Formula) -> Iterator[Formula]:
    """Distinct subformula objects, children before parents."""
    seen: set = set()
    order: list = []

    def visit(g):
        stack = [(g, False)]
        while stack:
            h, done = stack.pop()
            if done:
                order.append(h)
                continue
            if id(h) in seen:
                continue
            seen.add(id(h))
            stack.append((h, True))
            for c in children(h):
                stack.append((c, False))

    visit(f)
    return iter(order)


class Fragment(Enum):
    EX_ONLY = "EX_ONLY"
    EF_ONLY = "EF_ONLY"
    EXEF_ONLY = "EXEF_ONLY"
    FULL = "FULL"


FRAGMENT_OPS = {
    Fragment.EX_ONLY: {EX, AX},
    Fragment.EF_ONLY: {EF, AG},
    Fragment.EXEF_ONLY: {EXEF, AXAG},
}

TEMPORAL = set(UNARY_TEMPORAL) | set(UNTIL)


def in_fragment(f: Formula, frag: Fragment) -> bool:
    if frag is Fragment.FULL:
        return True
    return (operators(f) & TEMPORAL) <= FRAGMENT_OPS[frag]


def fragment_of(f: Formula) -> Fragment:
    """Smallest fragment containing every temporal operator of f.

    A formula without temporal operators belongs to every fragment and is
    reported as EX_ONLY, the first one in the fixed order.
    """
    ops = operators(f) & TEMPORAL
    for frag in (Fragment.EX_ONLY, Fragment.EF_ONLY, Fragment.EXEF_ONLY):
        if ops <= FRAGMENT_OPS[frag]:
            return frag
    return Fragment.FULL


def desugar(f: Formula) -> Formula:
    """Rewrite into Prop/Not/And/EX/EU/AU/Exists (plus the constant true)."""
    def leaf(g):
        if isinstance(g, Bottom):
            return Not(TRUE)
        return g

    def combine(g, v):
        if isinstance(g, Not):
            return Not(v[0])
        if isinstance(g, And):
            return And(v[0], v[1])
        if isinstance(g, Or):
            return Not(And(Not(v[0]), Not(v[1])))
        if isinstance(g, Implies):
            return Not(And(v[0], Not(v[1])))
        if isinstance(g, Iff):
            return And(Not(And(v[0], Not(v[1]))), Not(And(v[1], Not(v[0]))))
        if isinstance(g, EX):
            return EX(v[0])
        if isinstance(g, AX):
            return Not(EX(Not(v[0])))
        if isinstance(g, EF):
            return EU(TRUE, v[0])
        if isinstance(g, AG):
            return Not(EU(TRUE, Not(v[0])))
        if isinstance(g, AF):
            return AU(TRUE, v[0])
        if isinstance(g, EXEF):
            return EX(EU(TRUE, v[0]))
        if isinstance(g, AXAG):
            return Not(EX(EU(TRUE, Not(v[0]))))
        if isinstance(g, EU):
            return EU(v[0], v[1])
        if isinstance(g, AU):
            return AU(v[0], v[1])
        if isinstance(g, Exists):
            return Exists(g.var, v[0])
        return Not(Exists(g.var, Not(v[0])))

    return _fold(f, leaf, combine)


def substitute_prop(f: Formula, old: str, new: str) -> Formula:
    """Rename free occurrences of proposition `old` to `new`."""
    if isinstance(f, Prop):
        return Prop(new) if f.name == old else f
    if isinstance(f, (Top, Bottom)):
        return f
    if isinstance(f, QUANTIFIERS):
        if f.var == old:
            return f
        return type(f)(f.var, substitute_prop(f.body, old, new))
    return type(f)(*[substitute_prop(c, old, new) for c in children(f)])
