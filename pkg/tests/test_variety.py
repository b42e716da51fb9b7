import numpy as np
import pytest

from helpers import naive_verbal_set, pxm_algebra_corpus
from relcomm.algebra import direct_power, eval_term, materialize
from relcomm.constructions import build_group, named_ideal
from relcomm.hom import FuncHom, quotient
from relcomm.sets import generate_subalgebra, whole_algebra
from relcomm.terms import arity, parse_identity
from relcomm.variety import (IdentityBasis, abelianization_basis,
                             basis_from_strings, preset_basis, reflection,
                             satisfies, verbal_values, xm_identity)


def test_satisfies_examples(s3, c2, c4):
    exp2 = preset_basis("exp2", c2.signature)
    assert satisfies(c2, exp2)
    assert not satisfies(c4, exp2)
    ab = abelianization_basis(s3.signature)
    assert not satisfies(s3, ab)
    assert satisfies(c4, ab)
    assert satisfies(s3, IdentityBasis(()))  # empty basis is vacuous


def test_abelianization_basis_shapes(s3, ring_a4):
    from relcomm.pxmod import PXM_SIGNATURE
    assert len(abelianization_basis(s3.signature).identities) == 1
    ring_ab = abelianization_basis(ring_a4.signature)
    assert len(ring_ab.identities) == 2
    assert [arity(t) for t in ring_ab.identities] == [2, 4]
    assert len(abelianization_basis(PXM_SIGNATURE).identities) == 3


def test_verbal_values_c4(c4):
    exp2 = preset_basis("exp2", c4.signature)
    v = verbal_values(whole_algebra(c4), exp2)
    assert list(v.elements) == [0, 2]


def test_verbal_values_vanish_when_satisfied(c2):
    exp2 = preset_basis("exp2", c2.signature)
    assert verbal_values(whole_algebra(c2), exp2).is_trivial


def test_verbal_values_ring(ring_a4):
    exp2 = preset_basis("exp2", ring_a4.signature)
    v = verbal_values(whole_algebra(ring_a4), exp2)
    names = sorted(ring_a4.element_repr(c) for c in v.codes())
    assert names == sorted(["0", "a^2", "a^3", "a^2 + a^3"])


def test_verbal_matches_naive_oracle(s3, d4):
    for alg in (s3, d4):
        for preset in ("abelian", "exp2"):
            basis = preset_basis(preset, alg.signature)
            engine = verbal_values(whole_algebra(alg), basis)
            naive = naive_verbal_set(alg, np.arange(alg.size),
                                     basis.identities)
            assert np.array_equal(engine.elements, naive)


def test_verbal_on_subalgebra(s3):
    # values on a subalgebra stay inside it and use only its parameters
    sub = None
    for x in range(1, 6):
        cand = generate_subalgebra(s3, [x])
        if cand.size == 3:
            sub = cand
            break
    ab = abelianization_basis(s3.signature)
    v = verbal_values(sub, ab)
    assert v.is_trivial  # the 3-element subgroup is abelian


def test_reflection(s3, ring_a4):
    ab = abelianization_basis(s3.signature)
    target, proj = reflection(s3, ab)
    assert target.size == 2
    assert satisfies(target, ab)
    # re-reflecting is an isomorphism (trivial kernel, same size)
    target2, proj2 = reflection(target, ab)
    assert target2.size == target.size
    assert proj2.kernel().is_trivial

    exp2 = preset_basis("exp2", ring_a4.signature)
    rt, rp = reflection(ring_a4, exp2)
    assert rt.size == 2
    assert satisfies(rt, exp2)
    prod = rt.ops.rmul(np.eye(1, rt.ops.dim, dtype=np.int64),
                       np.eye(1, rt.ops.dim, dtype=np.int64))
    assert not prod.any()  # 2-element ring with zero multiplication


def test_satisfies_iff_verbal_trivial():
    corpus = [build_group(k) for k in
              ("cyclic:2", "cyclic:4", "symmetric:3", "dihedral:4")]
    corpus += pxm_algebra_corpus(16)
    for alg in corpus:
        for preset in ("abelian", "exp2"):
            basis = preset_basis(preset, alg.signature)
            assert satisfies(alg, basis) == \
                verbal_values(whole_algebra(alg), basis).is_trivial


def test_abelian_iff_mul_is_hom():
    """satisfies(abelianization) iff (a,b) -> ab is a homomorphism from
    the direct square (exhaustive, small carriers)."""
    corpus = [build_group(k) for k in
              ("cyclic:4", "symmetric:3", "quaternion",
               "cyclic:2xcyclic:2")]
    corpus += pxm_algebra_corpus(16)
    for alg in corpus:
        square = direct_power(alg, 2)
        src = whole_algebra(square)
        def mul_map(codes):
            a, b = square.ops.decode(codes)
            return alg.ops.mul(a, b)
        hom = FuncHom(src, alg, mul_map)
        is_ab = satisfies(alg, abelianization_basis(alg.signature))
        assert is_ab == hom.check()


def test_xm_identity_on_units():
    from relcomm.pxmod import to_pxm
    from helpers import c4_over_c2_module
    alg = to_pxm(c4_over_c2_module())
    assert eval_term(alg, xm_identity(), (0, 0)) == 0


def test_basis_from_strings_and_resolution(ring_a4):
    basis = basis_from_strings(["(r* x0 x0) = e"], name="sq")
    basis.resolve_in(ring_a4.signature)
    v = verbal_values(whole_algebra(ring_a4), basis)
    assert v.size == 4
    from relcomm.errors import UnknownOperation
    bad = basis_from_strings(["(d x0)"])
    with pytest.raises(UnknownOperation):
        bad.resolve_in(ring_a4.signature)


def test_verbal_table_vs_linear_backends(ring_a4):
    """Exhaustive table scan equals degree-bounded linear sampling."""
    tables = materialize(ring_a4)
    for preset in ("exp2", "cube", "abelian"):
        basis_l = preset_basis(preset, ring_a4.signature)
        basis_t = preset_basis(preset, tables.signature)
        v_l = verbal_values(whole_algebra(ring_a4), basis_l)
        v_t = verbal_values(whole_algebra(tables), basis_t)
        assert np.array_equal(v_l.codes(), v_t.elements)
