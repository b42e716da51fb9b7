import numpy as np
import pytest
from hypothesis import given, strategies as st

from relcomm.algebra import eval_term
from relcomm.errors import ArityMismatch, ParseError, UnknownOperation
from relcomm.terms import (Apply, Unit, Var, arity, check_resolves,
                           group_commutator, inv, mul, parse_identity,
                           parse_term, ring_degree, substitute, term_to_str,
                           var)


def test_parse_basic():
    t = parse_term("(mul x0 (inv x1))")
    assert t == mul(var(0), inv(var(1)))
    assert parse_term("e") == Unit()
    assert parse_term("x7") == Var(7)
    assert parse_term("(r* x0 x0)") == Apply("r*", (Var(0), Var(0)))


@pytest.mark.parametrize("bad", [
    "", "(", ")", "(mul x0", "x0)", "(e x0)", "((mul) x0)",
    "(mul x0 x1) trailing", "yz",
])
def test_parse_errors(bad):
    with pytest.raises(ParseError):
        parse_term(bad)


def test_identity_normalisation():
    t = parse_identity("(r* x0 x0) = x1")
    assert t == mul(parse_term("(r* x0 x0)"), inv(var(1)))
    assert parse_identity("(mul x0 x0) = e") == parse_term("(mul x0 x0)")
    assert parse_identity("(mul x0 x0)") == parse_term("(mul x0 x0)")


def test_roundtrip_and_arity():
    s = "(mul (mul (mul x0 x1) (inv x0)) (inv x1))"
    t = parse_term(s)
    assert term_to_str(t) == s
    assert arity(t) == 2
    assert arity(parse_term("e")) == 0
    assert arity(parse_term("x3")) == 4


def test_check_resolves():
    sig = {"mul": 2, "inv": 1, "d": 1}
    check_resolves(parse_term("(d (mul x0 x1))"), sig)
    with pytest.raises(UnknownOperation):
        check_resolves(parse_term("(c x0)"), sig)
    with pytest.raises(ArityMismatch):
        check_resolves(parse_term("(d x0 x1)"), sig)


def test_ring_degree():
    assert ring_degree(parse_term("x0")) == 1
    assert ring_degree(parse_term("(mul x0 x1)")) == 1
    assert ring_degree(parse_term("(r* x0 x0)")) == 2
    assert ring_degree(parse_term("(r* (r* x0 x0) x0)")) == 3
    assert ring_degree(parse_term("(mul (r* x0 x1) (inv x2))")) == 2
    assert ring_degree(parse_term("e")) == 0


def test_eval_examples(s3, ring_a4):
    # identity term
    assert eval_term(s3, parse_term("x0"), (4,)) == 4
    # x * x^-1 = e
    assert eval_term(s3, parse_term("(mul x0 (inv x0))"), (3,)) == 0
    # ring square by table lookup
    a = int(ring_a4.ops.vec_to_code(np.array([1, 0, 0])))
    sq = eval_term(ring_a4, parse_term("(r* x0 x0)"), (a,))
    assert ring_a4.element_repr(sq) == "a^2"


def test_eval_errors(s3):
    with pytest.raises(ArityMismatch):
        eval_term(s3, parse_term("(mul x0 x1)"), (1,))
    with pytest.raises(UnknownOperation):
        eval_term(s3, parse_term("(d x0)"), (1,))


# random terms over the plain group signature
def _terms(depth):
    if depth == 0:
        return st.one_of(st.builds(Var, st.integers(0, 2)),
                         st.just(Unit()))
    sub = _terms(depth - 1)
    return st.one_of(
        st.builds(Var, st.integers(0, 2)),
        st.just(Unit()),
        st.builds(lambda a, b: mul(a, b), sub, sub),
        st.builds(inv, sub),
    )


@given(t=_terms(3), s=_terms(2),
       assignment=st.tuples(*[st.integers(0, 5)] * 3),
       i=st.integers(0, 2))
def test_substitution_respected(t, s, assignment, i):
    from relcomm.constructions import build_group
    alg = build_group("symmetric:3")
    substituted = substitute(t, {i: s})
    lhs = eval_term(alg, substituted, assignment)
    inner = eval_term(alg, s, assignment)
    new_assignment = list(assignment)
    new_assignment[i] = inner
    rhs = eval_term(alg, t, tuple(new_assignment))
    assert lhs == rhs


def test_commutator_word(s3):
    t = group_commutator(var(0), var(1))
    # two commuting elements give e
    assert eval_term(s3, t, (0, 3)) == 0
    # a transposition and a 3-cycle do not commute in S3
    vals = {eval_term(s3, t, (a, b)) for a in range(6) for b in range(6)}
    assert vals != {0}
