"""Terms and identities over the (pointed) quasigroup signature.

Grammar (ASCII): variables ``[a-z][a-z0-9]*`` except the reserved ``e``
(the loop constant); ``1`` is the adjoined unit, legal only in
sequence-product contexts.  Operators ``*``, ``\\``, ``/``; the divisions
bind tighter than ``*`` and operators of equal precedence associate left;
parentheses override.  Note this differs from the typeset convention where
juxtaposition binds tightest, so e.g. ``(x * y) / y`` must be written with
the explicit parentheses.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Mapping, Optional, Union

from .algebra import FiniteAlgebra, Op, apply
from .errors import (
    NoVariableError,
    ParseError,
    SignatureError,
    UnsupportedLanguageError,
)


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class ConstE:
    """The distinguished constant of the loop language."""


@dataclass(frozen=True)
class ConstUnit:
    """The adjoined unit of the extended algebra S^1."""


@dataclass(frozen=True)
class Node:
    op: Op
    left: "Term"
    right: "Term"


Term = Union[Var, ConstE, ConstUnit, Node]

E = ConstE()
UNIT = ConstUnit()


# -- parsing ----------------------------------------------------------------

_OPS = {"*": Op.MUL, "\\": Op.LDIV, "/": Op.RDIV}
_PREC = {Op.MUL: 1, Op.LDIV: 2, Op.RDIV: 2}


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    i = 0
    while i < len(text):
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if c in _OPS or c in "()":
            tokens.append(("sym", c, i))
            i += 1
            continue
        if c == "1":
            if i + 1 < len(text) and text[i + 1].isalnum():
                raise ParseError("'1' must stand alone", i)
            tokens.append(("unit", "1", i))
            i += 1
            continue
        if c.isalpha() and c.islower():
            j = i + 1
            while j < len(text) and (text[j].islower() or text[j].isdigit()):
                j += 1
            name = text[i:j]
            tokens.append(("const_e" if name == "e" else "var", name, i))
            i = j
            continue
        raise ParseError(f"unexpected character {c!r}", i)
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self):
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of input", len(self.text))
        self.pos += 1
        return tok

    def parse(self) -> Term:
        t = self.expr(0)
        tok = self.peek()
        if tok is not None:
            raise ParseError(f"unexpected {tok[1]!r}", tok[2])
        return t

    def expr(self, min_prec: int) -> Term:
        left = self.atom()
        while True:
            tok = self.peek()
            if tok is None or tok[0] != "sym" or tok[1] not in _OPS:
                return left
            op = _OPS[tok[1]]
            prec = _PREC[op]
            if prec < min_prec:
                return left
            self.take()
            right = self.expr(prec + 1)  # left-associative within a level
            left = Node(op, left, right)

    def atom(self) -> Term:
        kind, text, at = self.take()
        if kind == "var":
            return Var(text)
        if kind == "const_e":
            return E
        if kind == "unit":
            return UNIT
        if kind == "sym" and text == "(":
            inner = self.expr(0)
            tok = self.take()
            if tok[0] != "sym" or tok[1] != ")":
                raise ParseError("expected ')'", tok[2])
            return inner
        raise ParseError(f"unexpected {text!r}", at)


def parse_term(text: str) -> Term:
    return _Parser(text).parse()


def format_term(t: Term) -> str:
    """Minimal-parenthesis rendering; ``parse_term`` round-trips it."""

    def go(t: Term, parent_prec: int, is_right: bool) -> str:
        if isinstance(t, Var):
            return t.name
        if isinstance(t, ConstE):
            return "e"
        if isinstance(t, ConstUnit):
            return "1"
        prec = _PREC[t.op]
        s = f"{go(t.left, prec, False)} {t.op.value} {go(t.right, prec, True)}"
        if prec < parent_prec or (prec == parent_prec and is_right):
            return f"({s})"
        return s

    return go(t, 0, False)


# -- identities --------------------------------------------------------------


@dataclass(frozen=True)
class Identity:
    lhs: Term
    rhs: Term

    def __str__(self):
        return f"{format_term(self.lhs)} = {format_term(self.rhs)}"


def parse_identity(text: str) -> Identity:
    if text.count("=") != 1:
        raise ParseError("an identity needs exactly one '='")
    lhs, rhs = text.split("=")
    return Identity(parse_term(lhs), parse_term(rhs))


def parse_identity_file(text: str) -> list[Identity]:
    """One identity per line, '#' starts a comment."""
    out = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            out.append(parse_identity(line))
    return out


# -- structure queries -------------------------------------------------------


def subterms(t: Term) -> Iterator[Term]:
    yield t
    if isinstance(t, Node):
        yield from subterms(t.left)
        yield from subterms(t.right)


def term_size(t: Term) -> int:
    return sum(1 for _ in subterms(t))


def variables(t: Term) -> list[str]:
    """Distinct variable names in in-order (left to right) appearance."""
    seen: dict[str, None] = {}

    def walk(t):
        if isinstance(t, Var):
            seen.setdefault(t.name)
        elif isinstance(t, Node):
            walk(t.left)
            walk(t.right)

    walk(t)
    return list(seen)


def head(t: Term) -> str:
    """Leftmost variable of the term; constants are skipped."""
    vs = variables(t)
    if not vs:
        raise NoVariableError(f"term {format_term(t)} has no variables")
    return vs[0]


def tail(t: Term) -> str:
    """Rightmost variable of the term; constants are skipped."""
    last = None

    def walk(t):
        nonlocal last
        if isinstance(t, Var):
            last = t.name
        elif isinstance(t, Node):
            walk(t.left)
            walk(t.right)

    walk(t)
    if last is None:
        raise NoVariableError(f"term {format_term(t)} has no variables")
    return last


def uses_const_e(t: Term) -> bool:
    return any(isinstance(s, ConstE) for s in subterms(t))


def uses_unit(t: Term) -> bool:
    return any(isinstance(s, ConstUnit) for s in subterms(t))


# -- evaluation and checking -------------------------------------------------


def evaluate(t: Term, alg: FiniteAlgebra, assignment: Mapping[str, int]) -> int:
    if isinstance(t, Var):
        return assignment[t.name]
    if isinstance(t, ConstE):
        if alg.point is None:
            raise SignatureError("term uses 'e' but the algebra has no point")
        return alg.point
    if isinstance(t, ConstUnit):
        raise UnsupportedLanguageError("the unit '1' is not part of this algebra")
    return apply(alg, t.op, evaluate(t.left, alg, assignment), evaluate(t.right, alg, assignment))


def identity_variables(ident: Identity) -> list[str]:
    """Sorted distinct variable names of both sides."""
    return sorted(set(variables(ident.lhs)) | set(variables(ident.rhs)))


def check_identity(alg: FiniteAlgebra, ident: Identity) -> Optional[dict[str, int]]:
    """Exhaustively check the identity over all assignments.

    Returns None when the identity holds, otherwise the first
    counterexample in lexicographic assignment order (variables sorted
    by name).
    """
    if uses_unit(ident.lhs) or uses_unit(ident.rhs):
        raise UnsupportedLanguageError("identity checking rejects the unit '1'")
    names = identity_variables(ident)
    for values in itertools.product(alg.elements(), repeat=len(names)):
        assignment = dict(zip(names, values))
        if evaluate(ident.lhs, alg, assignment) != evaluate(ident.rhs, alg, assignment):
            return assignment
    return None


def holds(alg: FiniteAlgebra, ident: Identity) -> bool:
    return check_identity(alg, ident) is None
