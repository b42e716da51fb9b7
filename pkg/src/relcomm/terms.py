"""Term syntax trees over an omega-group signature.

Terms are the common syntax for identities, verbal values and commutator
words.  The concrete syntax is an s-expression::

    x0, x1, ...          variables
    e                    the unit constant
    (mul t1 t2)          group multiplication
    (inv t)              group inverse
    (opname t1 ... tk)   extra operation from the ambient signature

Identities may also be written ``lhs = rhs``; they are normalised to the
single term ``lhs * rhs^-1`` at parse time, so every identity reads
"term = unit".
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator

from .errors import ArityMismatch, ParseError

MUL = "mul"
INV = "inv"
UNIT_NAME = "e"
RESERVED = {MUL, INV, UNIT_NAME}


@dataclass(frozen=True)
class Term:
    pass


@dataclass(frozen=True)
class Var(Term):
    index: int

    def __post_init__(self):
        if self.index < 0:
            raise ParseError(f"variable index must be >= 0, got {self.index}")


@dataclass(frozen=True)
class Unit(Term):
    pass


@dataclass(frozen=True)
class Apply(Term):
    op: str
    args: tuple[Term, ...]


E = Unit()


def var(i: int) -> Term:
    return Var(i)


def mul(a: Term, b: Term) -> Term:
    return Apply(MUL, (a, b))


def inv(a: Term) -> Term:
    return Apply(INV, (a,))


def op(name: str, *args: Term) -> Term:
    return Apply(name, tuple(args))


def mul_chain(*terms: Term) -> Term:
    """Left-associated product of one or more terms."""
    if not terms:
        return E
    acc = terms[0]
    for t in terms[1:]:
        acc = mul(acc, t)
    return acc


def group_commutator(a: Term, b: Term) -> Term:
    return mul_chain(a, b, inv(a), inv(b))


def arity(t: Term) -> int:
    """1 + the largest variable index occurring in ``t`` (0 if none)."""
    m = -1
    for node in walk(t):
        if isinstance(node, Var):
            m = max(m, node.index)
    return m + 1


def walk(t: Term) -> Iterator[Term]:
    stack = [t]
    while stack:
        node = stack.pop()
        yield node
        if isinstance(node, Apply):
            stack.extend(node.args)


def substitute(t: Term, replacements: dict[int, Term]) -> Term:
    """Replace each Var(i) by replacements[i] (identity if missing)."""
    if isinstance(t, Var):
        return replacements.get(t.index, t)
    if isinstance(t, Apply):
        return Apply(t.op, tuple(substitute(a, replacements) for a in t.args))
    return t


def shift_vars(t: Term, offset: int) -> Term:
    if isinstance(t, Var):
        return Var(t.index + offset)
    if isinstance(t, Apply):
        return Apply(t.op, tuple(shift_vars(a, offset) for a in t.args))
    return t


def ring_degree(t: Term, bilinear_ops: frozenset[str] = frozenset({"r*"})) -> int:
    """Total degree of ``t`` read as a polynomial over a linear ring.

    The group operation is addition (degree = max of the arguments), the
    inverse is negation, and each bilinear extra operation adds degrees.
    This bound drives the exact degree-bounded instance sampling.
    """
    if isinstance(t, Var):
        return 1
    if isinstance(t, Unit):
        return 0
    assert isinstance(t, Apply)
    degs = [ring_degree(a, bilinear_ops) for a in t.args]
    if t.op in bilinear_ops:
        return sum(degs)
    return max(degs) if degs else 0


# ---------------------------------------------------------------------------
# concrete syntax

_TOKEN = re.compile(r"\(|\)|[^\s()]+")
_VAR = re.compile(r"^x(\d+)$")


def _tokens(text: str) -> list[str]:
    return _TOKEN.findall(text)


def parse_term(text: str) -> Term:
    toks = _tokens(text)
    if not toks:
        raise ParseError("empty term")
    pos = 0

    def parse() -> Term:
        nonlocal pos
        if pos >= len(toks):
            raise ParseError(f"unexpected end of term in {text!r}")
        tok = toks[pos]
        pos += 1
        if tok == "(":
            if pos >= len(toks) or toks[pos] in ("(", ")"):
                raise ParseError(f"expected operation name in {text!r}")
            name = toks[pos]
            if name == "+":  # ring documents write the group op additively
                name = MUL
            pos += 1
            args = []
            while pos < len(toks) and toks[pos] != ")":
                args.append(parse())
            if pos >= len(toks):
                raise ParseError(f"unbalanced '(' in {text!r}")
            pos += 1  # consume ')'
            if _VAR.match(name) or name == UNIT_NAME:
                raise ParseError(f"{name!r} cannot be applied in {text!r}")
            return Apply(name, tuple(args))
        if tok == ")":
            raise ParseError(f"unbalanced ')' in {text!r}")
        m = _VAR.match(tok)
        if m:
            return Var(int(m.group(1)))
        if tok == UNIT_NAME:
            return E
        raise ParseError(f"unknown token {tok!r} in {text!r}")

    t = parse()
    if pos != len(toks):
        raise ParseError(f"trailing tokens in {text!r}")
    return t


def parse_identity(text: str) -> Term:
    """Parse an identity; ``lhs = rhs`` normalises to ``lhs * rhs^-1``."""
    if "=" in text:
        lhs, _, rhs = text.partition("=")
        left = parse_term(lhs)
        right = rhs.strip()
        if right in ("e", "1", "0"):
            return left
        return mul(left, inv(parse_term(right)))
    return parse_term(text)


def term_to_str(t: Term) -> str:
    if isinstance(t, Var):
        return f"x{t.index}"
    if isinstance(t, Unit):
        return UNIT_NAME
    assert isinstance(t, Apply)
    inner = " ".join(term_to_str(a) for a in t.args)
    return f"({t.op} {inner})" if inner else f"({t.op})"


def check_resolves(t: Term, op_arities: dict[str, int]) -> None:
    """Check every Apply node against the signature's arity map."""
    from .errors import UnknownOperation

    for node in walk(t):
        if isinstance(node, Apply):
            expected = op_arities.get(node.op)
            if expected is None:
                raise UnknownOperation(
                    f"operation {node.op!r} not in signature")
            if len(node.args) != expected:
                raise ArityMismatch(
                    f"operation {node.op!r} expects {expected} arguments, "
                    f"got {len(node.args)}")
