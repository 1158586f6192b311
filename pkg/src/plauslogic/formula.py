"""Propositional formulas over plausible propositions.

Grammar, loosest binding first::

    implies := or ( '=>' implies )?          # right associative
    or      := and ( ('or' | '|') and )*
    and     := unary ( ('and' | '&') unary )*
    unary   := ('not' | '!') unary | atom | '(' implies ')'

Evaluation is bottom-up: every connective node tensors the likelihoods of
its children and pushes the result through the connective's admissible map,
so repeated occurrences of an atom count as independent events.
:func:`compile_boolean` gives the shared-variable reading instead.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Mapping, Sequence, Union

from .connectives import and_map, implies_map, not_map, or_map
from .likelihood import AdmissibleMap, Likelihood, apply, tensor


@dataclass(frozen=True)
class Atom:
    name: str

    def __post_init__(self):
        if not self.name:
            raise ValueError("atom names must be nonempty")


@dataclass(frozen=True)
class Not:
    child: "Formula"


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


Formula = Union[Atom, Not, And, Or, Implies]


class ParseError(ValueError):
    def __init__(self, message: str, position: int, expected: Sequence[str] = ()):
        self.position = position
        self.expected = tuple(sorted(set(expected)))
        detail = f" (expected one of: {', '.join(self.expected)})" if self.expected else ""
        super().__init__(f"{message} at position {position}{detail}")


class EvaluationError(ValueError):
    """Base class for semantic errors raised during evaluation or compilation."""


class UnboundAtomError(EvaluationError):
    def __init__(self, name: str):
        super().__init__(f"atom {name!r} is not bound")
        self.name = name


class ArityMismatchError(EvaluationError):
    pass


# -- lexer -------------------------------------------------------------------

_KEYWORDS = {"not": "NOT", "and": "AND", "or": "OR"}
_SYMBOLS = {"!": "NOT", "¬": "NOT", "&": "AND", "∧": "AND", "|": "OR", "∨": "OR",
            "=>": "IMPLIES", "⇒": "IMPLIES", "(": "LPAREN", ")": "RPAREN"}
_TOKEN_RE = re.compile(r"\s*(?:(?P<ident>[^\W\d]\w*)|(?P<sym>=>|[!¬&∧|∨⇒()]))", re.UNICODE)

_DISPLAY = {"NOT": "not", "AND": "and", "OR": "or", "IMPLIES": "=>",
            "LPAREN": "(", "RPAREN": ")", "IDENT": "identifier", "EOF": "end of input"}


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    pos: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos == len(text):
            break
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        start = m.start("ident") if m.group("ident") else m.start("sym")
        if m.group("ident"):
            word = m.group("ident")
            tokens.append(_Token(_KEYWORDS.get(word, "IDENT"), word, start))
        else:
            sym = m.group("sym")
            tokens.append(_Token(_SYMBOLS[sym], sym, start))
        pos = m.end()
    tokens.append(_Token("EOF", "", len(text)))
    return tokens


# -- parser ------------------------------------------------------------------

class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    @property
    def tok(self) -> _Token:
        return self.tokens[self.i]

    def fail(self, *expected: str):
        tok = self.tok
        found = "end of input" if tok.kind == "EOF" else repr(tok.text)
        raise ParseError(f"unexpected {found}", tok.pos, [_DISPLAY[e] for e in expected])

    def parse(self) -> Formula:
        node = self.implies()
        if self.tok.kind != "EOF":
            self.fail("IMPLIES", "OR", "AND", "EOF")
        return node

    def implies(self) -> Formula:
        left = self.disjunction()
        if self.tok.kind == "IMPLIES":
            self.i += 1
            return Implies(left, self.implies())
        return left

    def disjunction(self) -> Formula:
        node = self.conjunction()
        while self.tok.kind == "OR":
            self.i += 1
            node = Or(node, self.conjunction())
        return node

    def conjunction(self) -> Formula:
        node = self.unary()
        while self.tok.kind == "AND":
            self.i += 1
            node = And(node, self.unary())
        return node

    def unary(self) -> Formula:
        tok = self.tok
        if tok.kind == "NOT":
            self.i += 1
            return Not(self.unary())
        if tok.kind == "IDENT":
            self.i += 1
            return Atom(tok.text)
        if tok.kind == "LPAREN":
            self.i += 1
            node = self.implies()
            if self.tok.kind != "RPAREN":
                self.fail("RPAREN", "IMPLIES", "OR", "AND")
            self.i += 1
            return node
        self.fail("NOT", "IDENT", "LPAREN")


def parse(text: str) -> Formula:
    """Parse formula text into an AST, raising :class:`ParseError` on bad input."""
    return _Parser(text).parse()


_PRECEDENCE = {Implies: 1, Or: 2, And: 3, Not: 4, Atom: 5}


def to_text(f: Formula) -> str:
    """Render with the fewest parentheses that still parse back to ``f``."""
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, Not):
        inner = to_text(f.child)
        return f"not {inner}" if _PRECEDENCE[type(f.child)] >= 4 else f"not ({inner})"
    prec = _PRECEDENCE[type(f)]
    op = {And: "and", Or: "or", Implies: "=>"}[type(f)]
    left, right = to_text(f.left), to_text(f.right)
    # and/or are left associative, => is right associative
    if isinstance(f, Implies):
        left_paren = _PRECEDENCE[type(f.left)] <= prec
        right_paren = _PRECEDENCE[type(f.right)] < prec
    else:
        left_paren = _PRECEDENCE[type(f.left)] < prec
        right_paren = _PRECEDENCE[type(f.right)] <= prec
    if left_paren:
        left = f"({left})"
    if right_paren:
        right = f"({right})"
    return f"{left} {op} {right}"


def atoms(f: Formula) -> list[str]:
    """Distinct atom names in order of first appearance."""
    seen: dict[str, None] = {}

    def walk(node):
        if isinstance(node, Atom):
            seen.setdefault(node.name)
        elif isinstance(node, Not):
            walk(node.child)
        else:
            walk(node.left)
            walk(node.right)

    walk(f)
    return list(seen)


def _as_formula(f: Formula | str) -> Formula:
    return parse(f) if isinstance(f, str) else f


# -- semantics ---------------------------------------------------------------

def evaluate(f: Formula | str, env: Mapping[str, Likelihood]) -> Likelihood:
    """Likelihood of ``f`` with every atom occurrence treated as independent."""
    f = _as_formula(f)
    names = atoms(f)
    for name in names:
        if name not in env:
            raise UnboundAtomError(name)
    arities = {env[name].k for name in names}
    if len(arities) > 1:
        raise ArityMismatchError(
            f"atoms have different arities {sorted(arities)}; lift them to a common arity first")
    k = arities.pop()

    def ev(node) -> Likelihood:
        if isinstance(node, Atom):
            return env[node.name]
        if isinstance(node, Not):
            return apply(not_map(k), ev(node.child))
        g = {And: and_map, Or: or_map, Implies: implies_map}[type(node)](k)
        return apply(g, tensor(ev(node.left), ev(node.right)))

    return ev(f)


def truth_class(f: Formula | str, assignment: Mapping[str, int], k: int = 2) -> int:
    """Deterministic evaluation on class indices (shared-variable semantics)."""
    f = _as_formula(f)
    if isinstance(f, Atom):
        try:
            return assignment[f.name]
        except KeyError:
            raise UnboundAtomError(f.name) from None
    if isinstance(f, Not):
        return k - 1 - truth_class(f.child, assignment, k)
    a = truth_class(f.left, assignment, k)
    b = truth_class(f.right, assignment, k)
    if isinstance(f, And):
        return max(a, b)
    if isinstance(f, Or):
        return min(a, b)
    return min(k - 1 - a, b)


def compile_boolean(f: Formula | str, atom_order: Sequence[str] | None = None,
                    k: int = 2) -> AdmissibleMap:
    """Compile ``f`` to one admissible map from the joint atom space to ``k`` classes.

    Columns enumerate assignments to ``atom_order`` with the first atom most
    significant, matching :func:`~plauslogic.likelihood.tensor_all` over the
    atoms in that order.  Repeated atoms are the same variable here.
    """
    f = _as_formula(f)
    order = list(atom_order) if atom_order is not None else atoms(f)
    missing = [a for a in atoms(f) if a not in order]
    if missing:
        raise UnboundAtomError(missing[0])
    if len(set(order)) != len(order):
        raise ValueError(f"atom order has duplicates: {order}")
    targets = tuple(truth_class(f, dict(zip(order, combo)), k)
                    for combo in itertools.product(range(k), repeat=len(order)))
    return AdmissibleMap(k ** len(order), k, targets)

