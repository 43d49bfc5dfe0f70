"""Formula language: AST, parser, printer and substitution.

Concrete syntax (ASCII)::

    _|_   bottom            ~    negation (sugar for  f -> _|_)
    &     conjunction       |    disjunction
    ->    implication       <->  biconditional (sugar, right-assoc like ->)
    []    box               <>   nabla (possibility)     <*>  diamond

Unary operators bind tightest, then ``&``, then ``|``, then ``->``/``<->``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable, Iterator, Mapping, Union

__all__ = [
    "Atom", "Bottom", "And", "Or", "Implies", "Box", "Nabla", "Diamond",
    "BOT", "Formula", "FormulaSyntaxError", "UnboundMetavariable",
    "parse", "to_text", "atoms", "substitute", "neg", "iff",
    "subformulas", "depth", "is_modal_free",
]


@dataclass(frozen=True)
class Atom:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Bottom:
    def __str__(self) -> str:
        return "_|_"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Box:
    body: "Formula"


@dataclass(frozen=True)
class Nabla:
    body: "Formula"


@dataclass(frozen=True)
class Diamond:
    body: "Formula"


Formula = Union[Atom, Bottom, And, Or, Implies, Box, Nabla, Diamond]
BOT = Bottom()

_BINARY = (And, Or, Implies)
_UNARY = (Box, Nabla, Diamond)

IDENT_RE = re.compile(r"[a-z][a-zA-Z0-9_]*")


def neg(f: Formula) -> Implies:
    return Implies(f, BOT)


def iff(f: Formula, g: Formula) -> And:
    return And(Implies(f, g), Implies(g, f))


# --------------------------------------------------------------------- parsing


class FormulaSyntaxError(ValueError):
    """Raised by :func:`parse`; ``offset`` is a 0-based character index."""

    def __init__(self, text: str, offset: int, expected: str):
        self.text = text
        self.offset = offset
        self.expected = expected
        found = text[offset:offset + 8] or "end of input"
        super().__init__(f"at offset {offset}: expected {expected}, found {found!r}")


_TOKEN_RE = re.compile(
    r"(?P<ws>\s+)|(?P<op>_\|_|<->|<\*>|<>|->|\[\]|[~&|()])|(?P<ident>[a-z][a-zA-Z0-9_]*)"
)


def _tokenize(text: str) -> list[tuple[str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise FormulaSyntaxError(text, pos, "a formula token")
        if m.lastgroup != "ws":
            tokens.append((m.group(), pos))
        pos = m.end()
    tokens.append(("", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> str:
        return self.tokens[self.i][0]

    def offset(self) -> int:
        return self.tokens[self.i][1]

    def advance(self) -> str:
        tok = self.tokens[self.i][0]
        self.i += 1
        return tok

    def fail(self, expected: str):
        raise FormulaSyntaxError(self.text, self.offset(), expected)

    def impl(self) -> Formula:
        left = self.disj()
        if self.peek() == "->":
            self.advance()
            return Implies(left, self.impl())
        if self.peek() == "<->":
            self.advance()
            return iff(left, self.impl())
        return left

    def disj(self) -> Formula:
        f = self.conj()
        while self.peek() == "|":
            self.advance()
            f = Or(f, self.conj())
        return f

    def conj(self) -> Formula:
        f = self.unary()
        while self.peek() == "&":
            self.advance()
            f = And(f, self.unary())
        return f

    def unary(self) -> Formula:
        tok = self.peek()
        if tok == "~":
            self.advance()
            return neg(self.unary())
        if tok == "[]":
            self.advance()
            return Box(self.unary())
        if tok == "<>":
            self.advance()
            return Nabla(self.unary())
        if tok == "<*>":
            self.advance()
            return Diamond(self.unary())
        return self.atomterm()

    def atomterm(self) -> Formula:
        tok = self.peek()
        if tok == "_|_":
            self.advance()
            return BOT
        if tok == "(":
            self.advance()
            f = self.impl()
            if self.peek() != ")":
                self.fail("')'")
            self.advance()
            return f
        if tok and IDENT_RE.fullmatch(tok):
            self.advance()
            return Atom(tok)
        self.fail("an atom, '_|_', '(' or a unary operator")


def parse(text: str) -> Formula:
    p = _Parser(text)
    f = p.impl()
    if p.peek() != "":
        p.fail("end of input or a binary connective")
    return f


# -------------------------------------------------------------------- printing

_PREC_IMPL, _PREC_DISJ, _PREC_CONJ, _PREC_UNARY = range(4)

_ASCII = {"bot": "_|_", "neg": "~", "and": " & ", "or": " | ", "imp": " -> ",
          "iff": " <-> ", Box: "[]", Nabla: "<>", Diamond: "<*>"}
_UNICODE = {"bot": "⊥", "neg": "¬", "and": " ∧ ", "or": " ∨ ", "imp": " → ",
            "iff": " ↔ ", Box: "□", Nabla: "∇", Diamond: "◇"}


def _as_iff(f: Formula):
    if (isinstance(f, And) and isinstance(f.left, Implies) and isinstance(f.right, Implies)
            and f.left.left == f.right.right and f.left.right == f.right.left):
        return f.left.left, f.left.right
    return None


def _prec(f: Formula) -> int:
    if isinstance(f, Implies):
        return _PREC_UNARY if f.right == BOT else _PREC_IMPL
    if isinstance(f, And):
        return _PREC_IMPL if _as_iff(f) else _PREC_CONJ
    if isinstance(f, Or):
        return _PREC_DISJ
    return _PREC_UNARY


def to_text(f: Formula, unicode: bool = False) -> str:
    """Render with minimal parentheses; ``parse(to_text(f)) == f``."""
    sym = _UNICODE if unicode else _ASCII

    def wrap(g: Formula, min_prec: int) -> str:
        s = go(g)
        return f"({s})" if _prec(g) < min_prec else s

    def go(g: Formula) -> str:
        if isinstance(g, Atom):
            return g.name
        if isinstance(g, Bottom):
            return sym["bot"]
        if isinstance(g, _UNARY):
            return sym[type(g)] + wrap(g.body, _PREC_UNARY)
        if isinstance(g, Implies):
            if g.right == BOT:
                return sym["neg"] + wrap(g.left, _PREC_UNARY)
            return wrap(g.left, _PREC_DISJ) + sym["imp"] + wrap(g.right, _PREC_IMPL)
        if isinstance(g, And):
            pair = _as_iff(g)
            if pair:
                return wrap(pair[0], _PREC_DISJ) + sym["iff"] + wrap(pair[1], _PREC_IMPL)
            return wrap(g.left, _PREC_CONJ) + sym["and"] + wrap(g.right, _PREC_UNARY)
        if isinstance(g, Or):
            return wrap(g.left, _PREC_DISJ) + sym["or"] + wrap(g.right, _PREC_CONJ)
        raise TypeError(f"not a formula: {g!r}")

    return go(f)


# ------------------------------------------------------------ structural tools


def subformulas(f: Formula) -> Iterator[Formula]:
    """Post-order traversal (children before parents)."""
    if isinstance(f, _BINARY):
        yield from subformulas(f.left)
        yield from subformulas(f.right)
    elif isinstance(f, _UNARY):
        yield from subformulas(f.body)
    yield f


def atoms(f: Formula) -> set[str]:
    return {g.name for g in subformulas(f) if isinstance(g, Atom)}


def depth(f: Formula) -> int:
    if isinstance(f, _BINARY):
        return 1 + max(depth(f.left), depth(f.right))
    if isinstance(f, _UNARY):
        return 1 + depth(f.body)
    return 0


def is_modal_free(f: Formula) -> bool:
    return not any(isinstance(g, _UNARY) for g in subformulas(f))


class UnboundMetavariable(KeyError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"no binding for metavariable {name!r}")

    def __str__(self) -> str:
        return self.args[0]


def map_formula(f: Formula, on_atom: Callable[[Atom], Formula]) -> Formula:
    if isinstance(f, Atom):
        return on_atom(f)
    if isinstance(f, _BINARY):
        return type(f)(map_formula(f.left, on_atom), map_formula(f.right, on_atom))
    if isinstance(f, _UNARY):
        return type(f)(map_formula(f.body, on_atom))
    return f


def substitute(scheme: Formula, mapping: Mapping[str, Formula]) -> Formula:
    """Uniformly replace every atom of ``scheme`` by its image in ``mapping``."""

    def image(a: Atom) -> Formula:
        try:
            return mapping[a.name]
        except KeyError:
            raise UnboundMetavariable(a.name) from None

    return map_formula(scheme, image)
