"""Terms over the Heyting signature {0, 1, ~, &, |, ->}, Horn sequents, and
the registry of named intermediate logics.

Grammar (loosest binding first)::

    imp  := or ("->" imp)?          # right associative
    or   := and ("|" and)*
    and  := not ("&" not)*
    not  := "~" not | atom
    atom := VAR | "0" | "1" | "(" imp ")"

Sequents are ``eq, eq, ... |- eq`` with ``eq := term "=" term``; a bare term
``t`` stands for ``|- 1 = t``.  Unicode spellings (¬ ∧ ∨ ⇒ → ⊢ ⊤ ⊥) are
accepted on input; output always uses ASCII.
"""

from __future__ import annotations

import re
from collections.abc import Iterator, Mapping
from dataclasses import dataclass
from itertools import product
from typing import Any, Protocol, Union

from .errors import ParseError, UnboundVariable, UnknownLogic


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Zero:
    pass


@dataclass(frozen=True)
class One:
    pass


@dataclass(frozen=True)
class Not:
    arg: Term


@dataclass(frozen=True)
class And:
    left: Term
    right: Term


@dataclass(frozen=True)
class Or:
    left: Term
    right: Term


@dataclass(frozen=True)
class Imp:
    left: Term
    right: Term


Term = Union[Var, Zero, One, Not, And, Or, Imp]

ZERO, ONE = Zero(), One()

_PREC = {Imp: 1, Or: 2, And: 3, Not: 4, Var: 5, Zero: 5, One: 5}
_SYM = {Imp: "->", Or: "|", And: "&"}


def variables(t: Term) -> list[str]:
    """Free variables in order of first occurrence."""
    seen: dict[str, None] = {}

    def walk(u):
        if isinstance(u, Var):
            seen.setdefault(u.name)
        elif isinstance(u, Not):
            walk(u.arg)
        elif isinstance(u, (And, Or, Imp)):
            walk(u.left)
            walk(u.right)

    walk(t)
    return list(seen)


def subterms(t: Term) -> Iterator[Term]:
    yield t
    if isinstance(t, Not):
        yield from subterms(t.arg)
    elif isinstance(t, (And, Or, Imp)):
        yield from subterms(t.left)
        yield from subterms(t.right)


def to_text(t: Term) -> str:
    """Print with the fewest parentheses that reparse to the same tree."""
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Zero):
        return "0"
    if isinstance(t, One):
        return "1"
    if isinstance(t, Not):
        return "~" + _wrap(t.arg, _PREC[Not])
    p = _PREC[type(t)]
    if isinstance(t, Imp):
        left, right = _wrap(t.left, p + 1), _wrap(t.right, p)
    else:
        left, right = _wrap(t.left, p), _wrap(t.right, p + 1)
    return f"{left} {_SYM[type(t)]} {right}"


def _wrap(t: Term, need: int) -> str:
    s = to_text(t)
    return s if _PREC[type(t)] >= need else f"({s})"


# -- parsing ------------------------------------------------------------

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<turnstile>\|-|⊢)
  | (?P<imp>->|⇒|→)
  | (?P<not>~|¬)
  | (?P<and>&|∧)
  | (?P<or>\||∨)
  | (?P<lpar>\()
  | (?P<rpar>\))
  | (?P<eq>=)
  | (?P<comma>,)
  | (?P<zero>0|⊥)
  | (?P<one>1|⊤)
  | (?P<var>[a-z][a-zA-Z0-9_]*)
""", re.VERBOSE)


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    index: int   # 1-based token number
    column: int


def _tokenize(text: str) -> list[_Tok]:
    toks: list[_Tok] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", len(toks) + 1, pos, text)
        if m.lastgroup != "ws":
            toks.append(_Tok(m.lastgroup, m.group(), len(toks) + 1, pos))
        pos = m.end()
    toks.append(_Tok("end", "", len(toks) + 1, len(text)))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def take(self, kind: str) -> _Tok:
        t = self.tok
        if t.kind != kind:
            self.fail(f"expected {kind}")
        self.i += 1
        return t

    def fail(self, expected: str = ""):
        t = self.tok
        what = "end of input" if t.kind == "end" else repr(t.text)
        msg = f"unexpected {what}" + (f" ({expected})" if expected else "")
        raise ParseError(msg, t.index, t.column, self.text)

    def imp(self) -> Term:
        left = self.or_()
        if self.tok.kind == "imp":
            self.i += 1
            return Imp(left, self.imp())
        return left

    def or_(self) -> Term:
        t = self.and_()
        while self.tok.kind == "or":
            self.i += 1
            t = Or(t, self.and_())
        return t

    def and_(self) -> Term:
        t = self.not_()
        while self.tok.kind == "and":
            self.i += 1
            t = And(t, self.not_())
        return t

    def not_(self) -> Term:
        if self.tok.kind == "not":
            self.i += 1
            return Not(self.not_())
        return self.atom()

    def atom(self) -> Term:
        t = self.tok
        if t.kind == "var":
            self.i += 1
            return Var(t.text)
        if t.kind == "zero":
            self.i += 1
            return ZERO
        if t.kind == "one":
            self.i += 1
            return ONE
        if t.kind == "lpar":
            self.i += 1
            inner = self.imp()
            self.take("rpar")
            return inner
        self.fail("expected a term")

    def equation(self) -> tuple[Term, Term]:
        left = self.imp()
        self.take("eq")
        return left, self.imp()


def parse_term(text: str) -> Term:
    p = _Parser(text)
    t = p.imp()
    if p.tok.kind != "end":
        p.fail("expected end of input")
    return t


@dataclass(frozen=True)
class HornSequent:
    """``premises |-_context conclusion`` where every formula is an equation."""

    context: tuple[str, ...]
    premises: tuple[tuple[Term, Term], ...]
    conclusion: tuple[Term, Term]

    def __post_init__(self):
        names = set(self.context)
        for left, right in (*self.premises, self.conclusion):
            for v in variables(left) + variables(right):
                if v not in names:
                    raise ValueError(f"variable {v!r} is not in the context {self.context}")

    @classmethod
    def of(cls, premises, conclusion) -> HornSequent:
        ctx: dict[str, None] = {}
        for left, right in (*premises, conclusion):
            for v in variables(left) + variables(right):
                ctx.setdefault(v)
        return cls(tuple(ctx), tuple(premises), conclusion)

    @classmethod
    def axiom(cls, term: Term) -> HornSequent:
        return cls.of((), (ONE, term))

    def __str__(self) -> str:
        eqs = ", ".join(f"{to_text(a)} = {to_text(b)}" for a, b in self.premises)
        a, b = self.conclusion
        return f"{eqs}{' ' if eqs else ''}|- {to_text(a)} = {to_text(b)}"


def parse_sequent(text: str) -> HornSequent:
    p = _Parser(text)
    if not any(t.kind == "turnstile" for t in p.toks):
        t = p.imp()
        if p.tok.kind == "eq":
            p.i += 1
            rhs = p.imp()
            if p.tok.kind != "end":
                p.fail("expected end of input")
            return HornSequent.of((), (t, rhs))
        if p.tok.kind != "end":
            p.fail("expected end of input")
        return HornSequent.axiom(t)
    premises = []
    if p.tok.kind != "turnstile":
        premises.append(p.equation())
        while p.tok.kind == "comma":
            p.i += 1
            premises.append(p.equation())
    p.take("turnstile")
    conclusion = p.equation()
    if p.tok.kind != "end":
        p.fail("expected end of input")
    return HornSequent.of(premises, conclusion)


# -- named logics -------------------------------------------------------

@dataclass(frozen=True)
class LogicSpec:
    """An intermediate logic presented by the single axiom ``|- 1 = axiom``."""

    name: str
    axiom: Term

    @property
    def variables(self) -> list[str]:
        return variables(self.axiom)

    @property
    def admissible(self) -> bool:
        return is_admissible(self.axiom)

    @property
    def uses_implication(self) -> bool:
        return uses_implication(self.axiom)

    def sequent(self) -> HornSequent:
        return HornSequent.axiom(self.axiom)

    def __str__(self) -> str:
        return f"{self.name}: {to_text(self.axiom)}"


_AXIOMS = {
    "classical": "p | ~p",
    "demorgan": "~p | ~~p",
    "goedel_dummett": "(p -> q) | (q -> p)",
    "kreisel_putnam": "(~p -> q | r) -> (~p -> q) | (~p -> r)",
}
_ALIASES = {"boolean": "classical", "de_morgan": "demorgan", "gd": "goedel_dummett",
            "godel_dummett": "goedel_dummett", "kp": "kreisel_putnam"}


def registry() -> dict[str, LogicSpec]:
    return {name: LogicSpec(name, parse_term(ax)) for name, ax in _AXIOMS.items()}


def lookup(name: str) -> LogicSpec:
    key = _ALIASES.get(name, name)
    if key not in _AXIOMS:
        raise UnknownLogic(name)
    return LogicSpec(key, parse_term(_AXIOMS[key]))


def as_logic(x: LogicSpec | Term | str) -> LogicSpec:
    """Accept a registry name, a term text, a term, or a LogicSpec."""
    if isinstance(x, LogicSpec):
        return x
    if isinstance(x, str):
        key = _ALIASES.get(x, x)
        if key in _AXIOMS or re.fullmatch(r"[a-z][a-zA-Z0-9_]*", x.strip()):
            # a bare identifier is a registry name, never a one-variable axiom
            return lookup(key.strip())
        return LogicSpec(x, parse_term(x))
    return LogicSpec(to_text(x), x)


def uses_implication(t: Term) -> bool:
    return any(isinstance(u, Imp) for u in subterms(t))


def is_admissible(t: Term) -> bool:
    """True for a join of terms built from variables, 0, 1, ~, & and -> only."""
    if isinstance(t, Or):
        return is_admissible(t.left) and is_admissible(t.right)
    return not any(isinstance(u, Or) for u in subterms(t))


# -- evaluation in a Heyting algebra -------------------------------------

class HeytingAlgebra(Protocol):
    def elements(self) -> list: ...
    def bottom(self) -> Any: ...
    def top(self) -> Any: ...
    def meet(self, x, y) -> Any: ...
    def join(self, x, y) -> Any: ...
    def imp(self, x, y) -> Any: ...
    def neg(self, x) -> Any: ...


def evaluate(t: Term, alg: HeytingAlgebra, env: Mapping[str, Any]):
    if isinstance(t, Var):
        try:
            return env[t.name]
        except KeyError:
            raise UnboundVariable(t.name) from None
    if isinstance(t, Zero):
        return alg.bottom()
    if isinstance(t, One):
        return alg.top()
    if isinstance(t, Not):
        return alg.neg(evaluate(t.arg, alg, env))
    a = evaluate(t.left, alg, env)
    b = evaluate(t.right, alg, env)
    if isinstance(t, And):
        return alg.meet(a, b)
    if isinstance(t, Or):
        return alg.join(a, b)
    return alg.imp(a, b)


@dataclass
class Verdict:
    """Outcome of a validity check; ``witness`` is the first failing
    assignment in lexicographic order, ``where`` the object/stage if any."""

    holds: bool
    witness: dict[str, Any] | None = None
    where: Any = None

    def __bool__(self) -> bool:
        return self.holds


def as_sequent(x) -> HornSequent:
    if isinstance(x, HornSequent):
        return x
    if isinstance(x, LogicSpec):
        return x.sequent()
    if isinstance(x, str):
        return parse_sequent(x)
    return HornSequent.axiom(x)


def holds_in(x, alg: HeytingAlgebra) -> Verdict:
    """Check a Horn sequent (or logic/term/text) under every assignment."""
    seq = as_sequent(x)
    elems = alg.elements()
    for values in product(elems, repeat=len(seq.context)):
        env = dict(zip(seq.context, values))
        if all(evaluate(a, alg, env) == evaluate(b, alg, env) for a, b in seq.premises):
            a, b = seq.conclusion
            if evaluate(a, alg, env) != evaluate(b, alg, env):
                return Verdict(False, env)
    return Verdict(True)


def eval_in_frame(t: Term | str, frame: HeytingAlgebra, assignment: Mapping[str, Any]):
    if isinstance(t, str):
        t = parse_term(t)
    return evaluate(t, frame, assignment)


def holds_in_frame(x, frame: HeytingAlgebra) -> Verdict:
    return holds_in(x, frame)
