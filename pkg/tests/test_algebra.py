import numpy as np
import pytest

from helpers import isomorphic_groups
from relcomm.algebra import (LinearOps, OmegaAlgebra, Signature, TableOps,
                             direct_power, direct_product, materialize,
                             validate_algebra)
from relcomm.constructions import build_group
from relcomm.errors import (ConstantViolation, GroupAxiomViolation,
                            SchemaError, SizeGuardExceeded, ValidationError)
from relcomm.hom import power_projections
from relcomm.sets import whole_algebra


def _cyclic_tables(n):
    mul = (np.arange(n)[:, None] + np.arange(n)[None, :]) % n
    inv = (-np.arange(n)) % n
    return mul, inv


def test_validate_c3():
    mul, inv = _cyclic_tables(3)
    alg = OmegaAlgebra("C3", Signature(), TableOps(3, mul, inv, {}))
    assert validate_algebra(alg) is alg


def test_validate_broken_inverse():
    mul, inv = _cyclic_tables(3)
    inv = inv.copy()
    inv[1] = 1  # 1*1 = 2 != e
    alg = OmegaAlgebra("broken", Signature(), TableOps(3, mul, inv, {}))
    with pytest.raises(GroupAxiomViolation):
        validate_algebra(alg)


def test_validate_broken_associativity():
    mul, inv = _cyclic_tables(3)
    mul = mul.copy()
    mul[1, 1] = 1  # keeps unit laws intact but breaks associativity
    alg = OmegaAlgebra("broken", Signature(), TableOps(3, mul, inv, {}))
    with pytest.raises(GroupAxiomViolation) as exc:
        validate_algebra(alg)
    assert "associativity" in str(exc.value) or "inverse" in str(exc.value)


def test_validate_constant_violation():
    mul, inv = _cyclic_tables(2)
    omega = np.array([1, 1])  # omega(e) = g
    alg = OmegaAlgebra("bad-op", Signature((("w", 1),)),
                       TableOps(2, mul, inv, {"w": omega}))
    with pytest.raises(ConstantViolation):
        validate_algebra(alg)


def test_signature_rules():
    with pytest.raises(ValidationError):
        Signature((("mul", 2),))
    with pytest.raises(ValidationError):
        Signature((("w", 1), ("w", 2)))
    with pytest.raises(ValidationError):
        Signature((("w", 0),))


def test_direct_power_size_and_projections(c6):
    cube = direct_power(c6, 3)
    assert cube.size == 216
    projections = power_projections(cube, c6)
    assert len(projections) == 3
    for proj in projections:
        assert proj.check()


def test_direct_power_guard(c6):
    with pytest.raises(SizeGuardExceeded):
        direct_power(c6, 4)


def test_c2_times_c3_is_c6(c2, c6):
    c3 = build_group("cyclic:3")
    prod = materialize(direct_product([c2, c3]))
    assert prod.size == 6
    assert isomorphic_groups(prod, c6)


def test_materialize_linear_matches_codes(ring_a4):
    tables = materialize(ring_a4)
    assert tables.size == ring_a4.size
    # index alignment: products agree after lexicographic coding
    ops_l = ring_a4.ops
    for a in range(8):
        for b in range(8):
            va = ops_l.code_to_vec(a)
            vb = ops_l.code_to_vec(b)
            sum_lin = int(ops_l.vec_to_code(ops_l.add(va, vb)))
            assert sum_lin == int(tables.ops.mul(np.int64(a), np.int64(b)))
            prod_lin = int(ops_l.vec_to_code(ops_l.rmul(va, vb)[0]))
            assert prod_lin == int(
                tables.ops.extra["r*"][a, b])


def test_linear_ops_validation():
    # non-commutative structure constants are rejected
    t = np.zeros((2, 2, 2), dtype=np.int64)
    t[0, 1, 0] = 1  # e0*e1 = e0 but e1*e0 = 0
    with pytest.raises(ValidationError):
        validate_algebra(OmegaAlgebra(
            "bad", Signature((("r*", 2),)),
            LinearOps(2, ("x", "y"), t)))


def test_op_is_hom_flags(ring_a4):
    from relcomm.pxmod import to_pxm
    from helpers import c4_over_c2_module
    alg = to_pxm(c4_over_c2_module())
    assert alg.op_is_hom("d")
    assert alg.op_is_hom("c")
    tables = materialize(ring_a4)
    assert not tables.op_is_hom("r*")


def test_element_repr(ring_a4, s3):
    assert ring_a4.element_repr(0) == "0"
    assert s3.element_repr(0) == "(0, 1, 2)"


def test_closure_cap_guard(s3):
    from relcomm.config import default_config
    from relcomm.sets import generate_subalgebra
    tiny = default_config().with_overrides(closure_cap=3)
    with pytest.raises(SizeGuardExceeded):
        generate_subalgebra(s3, [1, 3], tiny)


def test_carrier_cap_guard(c6):
    from relcomm.config import default_config
    tiny = default_config().with_overrides(carrier_cap=4)
    with pytest.raises(SizeGuardExceeded):
        materialize(direct_power(c6, 2), tiny)


def test_big_carrier_codes_roundtrip():
    """Lexicographic codes fall back to python ints past 2^62."""
    from relcomm.constructions import TruncatedRingSpec, build_ring
    ring = build_ring(TruncatedRingSpec(p=23, generators=("a",),
                                        nil_squares=False, max_degree=24))
    ops = ring.ops
    assert ops.size == 23 ** 24
    vec = np.zeros(24, dtype=np.int64)
    vec[0] = 7
    vec[23] = 11
    code = ops.vec_to_code(vec)
    assert isinstance(code, int)
    assert np.array_equal(ops.code_to_vec(code), vec)
    assert ops.vec_to_code(np.zeros(24, dtype=np.int64)) == 0
