import numpy as np
import pytest

from helpers import c4_over_c2_module, naive_normal_closure, pxm_corpus
from relcomm.constructions import build_group
from relcomm.errors import ValidationError
from relcomm.pxmod import (PrecrossedModule, Submodule, is_crossed,
                           peiffer_commutator, peiffer_crosscheck,
                           peiffer_elements, pxm_equivalence_iso,
                           submodule_to_subset, to_precrossed, to_pxm,
                           validate_normal_submodule, validate_precrossed,
                           validate_pxm_algebra, whole_submodule, xm_basis)
from relcomm.sets import Ideal, generate_subalgebra, is_ideal, whole_algebra
from relcomm.variety import satisfies


def _trivial_module(c, g, name="trivial"):
    action = np.tile(np.arange(c.size, dtype=np.int64), (g.size, 1))
    return PrecrossedModule(c_group=c, g_group=g,
                            boundary=np.zeros(c.size, dtype=np.int64),
                            action=action, name=name)


def test_validate_good_module():
    x = c4_over_c2_module()
    assert validate_precrossed(x) is x


def test_validate_rejects_bad_boundary(c4, c2):
    # boundary that is not a homomorphism
    x = PrecrossedModule(c_group=c4, g_group=c2,
                         boundary=np.array([0, 1, 1, 1]),
                         action=np.tile(np.arange(4), (2, 1)))
    with pytest.raises(ValidationError):
        validate_precrossed(x)


def test_validate_rejects_incompatible_action(c4, c2):
    # inversion action with zero boundary is fine; a boundary that breaks
    # the conjugation compatibility is not
    s3 = build_group("symmetric:3")
    action = np.zeros((6, 6), dtype=np.int64)
    for g in range(6):
        action[g] = np.arange(6)
    x = PrecrossedModule(c_group=s3, g_group=s3,
                         boundary=np.arange(6),
                         action=action, name="broken")
    # trivial action but identity boundary: compat forces conjugation
    with pytest.raises(ValidationError):
        validate_precrossed(x)


def test_to_pxm_trivial(c2):
    x = _trivial_module(c2, c2)
    alg = to_pxm(x)
    assert alg.size == 4
    assert np.array_equal(alg.ops.extra["d"], alg.ops.extra["c"])
    validate_pxm_algebra(alg)


def test_to_pxm_size(c4, c2):
    assert to_pxm(c4_over_c2_module()).size == 8
    s3 = build_group("symmetric:3")
    assert to_pxm(_trivial_module(s3, c2)).size == 12


def test_roundtrip_module_to_carrier_and_back():
    for x in pxm_corpus()[:6]:
        alg = to_pxm(x)
        y = to_precrossed(alg)
        assert np.array_equal(y.c_group.ops.mul_table, x.c_group.ops.mul_table)
        assert np.array_equal(y.g_group.ops.mul_table, x.g_group.ops.mul_table)
        assert np.array_equal(y.boundary, x.boundary)
        assert np.array_equal(y.action, x.action)


def test_roundtrip_carrier_to_module_and_back():
    for x in pxm_corpus()[:6]:
        alg = to_pxm(x)
        y = to_precrossed(alg)
        iso = pxm_equivalence_iso(y, alg)
        assert iso.check()


def test_kernel_of_d_description():
    for x in pxm_corpus()[:5]:
        alg = to_pxm(x)
        ops = alg.ops
        idx = np.arange(alg.size)
        d = ops.extra["d"]
        kd = idx[d == 0]
        expr = np.unique(ops.mul(ops.inv(idx), d[idx]))
        assert np.array_equal(np.sort(expr), kd)


def test_degenerate_carrier():
    # d = c = constant unit: G part is trivial
    c3 = build_group("cyclic:3")
    one = build_group("cyclic:1")
    x = _trivial_module(c3, one)
    alg = to_pxm(x)
    y = to_precrossed(alg)
    assert y.g_group.size == 1
    assert np.all(y.boundary == 0)


def test_peiffer_examples(s3):
    # crossed module: trivial Peiffer commutator
    x = _trivial_module(build_group("cyclic:4"), build_group("cyclic:2"))
    assert is_crossed(x)
    w = whole_submodule(x)
    assert list(peiffer_commutator(x, w, w).k) == [0]

    # S3 over the trivial group: Peiffer elements are plain commutators
    one = build_group("cyclic:1")
    xs3 = _trivial_module(s3, one)
    ws3 = whole_submodule(xs3)
    p = peiffer_commutator(xs3, ws3, ws3)
    comms = []
    ops = s3.ops
    for a in range(6):
        for b in range(6):
            comms.append(int(ops.mul(ops.mul(ops.mul(np.int64(a), np.int64(b)),
                                             ops.inv(np.int64(a))),
                                     ops.inv(np.int64(b)))))
    oracle = naive_normal_closure(ops, np.arange(6),
                                  np.unique(np.asarray(comms)))
    assert np.array_equal(p.k, oracle)

    # the C4-over-C2 example: {e, c^2}
    xc = c4_over_c2_module()
    wc = whole_submodule(xc)
    assert list(peiffer_commutator(xc, wc, wc).k) == [0, 2]


def test_is_crossed_examples():
    assert is_crossed(_trivial_module(build_group("cyclic:4"),
                                      build_group("cyclic:2")))
    assert not is_crossed(c4_over_c2_module())
    one = build_group("cyclic:1")
    assert is_crossed(_trivial_module(one, build_group("symmetric:3"),
                                      name="C trivial"))
    assert not is_crossed(_trivial_module(build_group("symmetric:3"), one))


def test_xm_basis_checks():
    basis = xm_basis()
    crossed = _trivial_module(build_group("cyclic:4"),
                              build_group("cyclic:2"))
    assert satisfies(to_pxm(crossed), basis)
    assert not satisfies(to_pxm(c4_over_c2_module()), basis)


def test_crossed_iff_peiffer_iff_xm():
    basis = xm_basis()
    for x in pxm_corpus():
        w = whole_submodule(x)
        trivial = len(peiffer_commutator(x, w, w).k) == 1
        assert is_crossed(x) == trivial
        assert is_crossed(x) == satisfies(to_pxm(x), basis)


def test_normal_submodule_validation():
    x = c4_over_c2_module()
    good = Submodule(np.array([0, 2]), np.array([0]))
    validate_normal_submodule(x, good)
    # K not a subgroup
    with pytest.raises(ValidationError):
        validate_normal_submodule(x, Submodule(np.array([1]), np.array([0])))
    # boundary image escapes S: K = whole C4, S = {e}
    with pytest.raises(ValidationError):
        validate_normal_submodule(
            x, Submodule(np.arange(4), np.array([0])))


def test_submodule_ideal_correspondence():
    """A normal precrossed submodule corresponds to an ideal of the
    semidirect carrier, and non-normal subsets do not."""
    x = c4_over_c2_module()
    alg = to_pxm(x)
    whole = whole_algebra(alg)
    good = Submodule(np.array([0, 2]), np.array([0]))
    validate_normal_submodule(x, good)
    codes = submodule_to_subset(x, good)
    assert is_ideal(whole, Ideal(whole, elements=codes))
    # the full module is an ideal of itself
    codes_all = submodule_to_subset(x, whole_submodule(x))
    assert is_ideal(whole, Ideal(whole, elements=codes_all))
    # a subgroup pair that fails normality is not an ideal:
    # K = {e} with S = G displaces C outside K
    bad = Submodule(np.array([0]), np.array([0, 1]))
    with pytest.raises(ValidationError):
        validate_normal_submodule(x, bad)
    bad_codes = submodule_to_subset(x, bad)
    assert not is_ideal(whole, Ideal(whole, elements=bad_codes))


def test_peiffer_crosscheck_examples(s3):
    xc = c4_over_c2_module()
    wc = whole_submodule(xc)
    assert peiffer_crosscheck(xc, wc, wc)
    crossed = _trivial_module(build_group("cyclic:4"),
                              build_group("cyclic:2"))
    w = whole_submodule(crossed)
    assert peiffer_crosscheck(crossed, w, w)
    one = build_group("cyclic:1")
    xs3 = _trivial_module(s3, one)
    ws3 = whole_submodule(xs3)
    assert peiffer_crosscheck(xs3, ws3, ws3)
    # proper submodule pair
    assert peiffer_crosscheck(xc, Submodule(np.array([0, 2]),
                                            np.array([0])), wc)
