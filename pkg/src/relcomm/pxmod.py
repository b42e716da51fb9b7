"""Precrossed modules, their omega-group presentation, and the Peiffer
commutator.

A precrossed module is a group homomorphism ``boundary: C -> G`` with a
left action of G on C by automorphisms satisfying
``boundary(^g c) = g boundary(c) g^-1``.  It is equivalently an
omega-group over the signature with unary operations ``d`` and ``c``
satisfying ``d(xy)=d(x)d(y)``, ``c(xy)=c(x)c(y)``, ``dd=cd=d`` and
``dc=cc=c``: the semidirect carrier ``G x C`` with ``d(g,c)=(g,1)`` and
``c(g,c)=(g boundary(c), 1)``.  Both directions are implemented and the
round trips are canonical.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import (GROUP_SIGNATURE, OmegaAlgebra, PXM_SIGNATURE, TableOps,
                      validate_algebra)
from .config import RunConfig, resolve
from .errors import ValidationError
from .hom import TableHom
from .sets import Ideal, generate_ideal, generate_subalgebra, \
    whole_algebra
from .variety import IdentityBasis, preset_basis


@dataclass
class PrecrossedModule:
    c_group: OmegaAlgebra
    g_group: OmegaAlgebra
    boundary: np.ndarray          # index map |C| -> G
    action: np.ndarray            # (|G|, |C|) -> C
    name: str = "precrossed module"

    @property
    def c_size(self) -> int:
        return self.c_group.size

    @property
    def g_size(self) -> int:
        return self.g_group.size


@dataclass
class Submodule:
    """A precrossed submodule given by its element sets K <= C, S <= G."""

    k: np.ndarray
    s: np.ndarray

    def __post_init__(self):
        self.k = np.unique(np.asarray(self.k, dtype=np.int64))
        self.s = np.unique(np.asarray(self.s, dtype=np.int64))


def whole_submodule(x: PrecrossedModule) -> Submodule:
    return Submodule(np.arange(x.c_size), np.arange(x.g_size))


def validate_precrossed(x: PrecrossedModule,
                        config: RunConfig | None = None) -> PrecrossedModule:
    cfg = resolve(config)
    for grp in (x.c_group, x.g_group):
        if grp.signature.extra_ops:
            raise ValidationError("precrossed components must be plain groups")
        validate_algebra(grp, cfg)
    nc, ng = x.c_size, x.g_size
    if x.boundary.shape != (nc,):
        raise ValidationError("boundary must map every element of C")
    if x.action.shape != (ng, nc):
        raise ValidationError("action must be a |G| x |C| table")
    co, go = x.c_group.ops, x.g_group.ops
    a = np.repeat(np.arange(nc), nc)
    b = np.tile(np.arange(nc), nc)
    if not np.array_equal(x.boundary[co.mul(a, b)],
                          go.mul(x.boundary[a], x.boundary[b])):
        raise ValidationError("boundary is not a homomorphism")
    if int(x.boundary[0]) != 0:
        raise ValidationError("boundary must fix the unit")
    # action: unit acts trivially, each g acts by an automorphism,
    # and the action is a homomorphism G -> Aut(C)
    if not np.array_equal(x.action[0], np.arange(nc)):
        raise ValidationError("the unit of G must act trivially")
    for g in range(ng):
        row = x.action[g]
        if len(np.unique(row)) != nc:
            raise ValidationError(f"G element {g} does not act bijectively")
        if not np.array_equal(row[co.mul(a, b)], co.mul(row[a], row[b])):
            raise ValidationError(f"G element {g} does not act by an "
                                  "automorphism")
    gg = np.repeat(np.arange(ng), ng)
    hh = np.tile(np.arange(ng), ng)
    lhs = x.action[go.mul(gg, hh)]
    rhs = x.action[gg[:, None], x.action[hh]]
    if not np.array_equal(lhs, rhs):
        raise ValidationError("action is not a left group action")
    # compatibility: boundary(^g c) = g boundary(c) g^-1
    for g in range(ng):
        lhs_b = x.boundary[x.action[g]]
        rhs_b = go.mul(go.mul(np.int64(g), x.boundary[np.arange(nc)]),
                       go.inv(np.int64(g)))
        if not np.array_equal(lhs_b, rhs_b):
            raise ValidationError(
                f"boundary incompatible with the action of G element {g}")
    return x


def _is_subgroup(grp: OmegaAlgebra, subset: np.ndarray) -> bool:
    sub = generate_subalgebra(grp, subset)
    return np.array_equal(sub.elements, np.unique(np.append(subset, 0)))


def validate_normal_submodule(x: PrecrossedModule, sub: Submodule,
                              config: RunConfig | None = None) -> Submodule:
    cfg = resolve(config)
    co, go = x.c_group.ops, x.g_group.ops
    if sub.k.size and (sub.k.min() < 0 or sub.k.max() >= x.c_size):
        raise ValidationError("submodule K out of range")
    if sub.s.size and (sub.s.min() < 0 or sub.s.max() >= x.g_size):
        raise ValidationError("submodule S out of range")
    K = np.unique(np.append(sub.k, 0))
    S = np.unique(np.append(sub.s, 0))
    if not _is_subgroup(x.c_group, K):
        raise ValidationError("K is not a subgroup of C")
    if not _is_subgroup(x.g_group, S):
        raise ValidationError("S is not a subgroup of G")
    kc = generate_ideal(whole_algebra(x.c_group, cfg), K, cfg)
    if not np.array_equal(kc.elements, K):
        raise ValidationError("K is not normal in C")
    sc = generate_ideal(whole_algebra(x.g_group, cfg), S, cfg)
    if not np.array_equal(sc.elements, S):
        raise ValidationError("S is not normal in G")
    if not np.all(np.isin(x.boundary[K], S)):
        raise ValidationError("boundary does not map K into S")
    acted = x.action[:, K]
    if not np.all(np.isin(acted, K)):
        raise ValidationError("K is not stable under the action of G")
    # ^s c * c^-1 in K for all s in S, c in C
    c_all = np.arange(x.c_size)
    for s in S:
        disp = co.mul(x.action[int(s)], co.inv(c_all))
        if not np.all(np.isin(disp, K)):
            raise ValidationError(
                f"S element {int(s)} displaces C outside K")
    return Submodule(K, S)


# ---------------------------------------------------------------------------
# the equivalence with (d, c) omega-groups


def to_pxm(x: PrecrossedModule, config: RunConfig | None = None) -> OmegaAlgebra:
    """Semidirect carrier G x C with d(g,c)=(g,1), c(g,c)=(g boundary(c),1)."""
    cfg = resolve(config)
    validate_precrossed(x, cfg)
    nc, ng = x.c_size, x.g_size
    n = nc * ng
    cfg.guard(n, "carrier_cap", "semidirect carrier")
    co, go = x.c_group.ops, x.g_group.ops

    g1 = np.repeat(np.arange(ng), nc)   # code -> g part
    c1 = np.tile(np.arange(nc), ng)     # code -> c part

    def enc(g, c):
        return g * nc + c

    ga = np.repeat(np.arange(n), n)
    gb = np.tile(np.arange(n), n)
    prod_g = go.mul(g1[ga], g1[gb])
    acted = x.action[g1[ga], c1[gb]]
    prod_c = co.mul(c1[ga], acted)
    mul_table = enc(prod_g, prod_c).reshape(n, n)

    inv_g = go.inv(g1)
    inv_c = x.action[inv_g, co.inv(c1)]
    inv_table = enc(inv_g, inv_c)

    d_table = enc(g1, np.zeros(n, dtype=np.int64))
    # target map: (g,c) |-> (boundary(c)*g, 1).  With the product
    # (g,c)(g',c') = (gg', c * ^g c'), this order (not g*boundary(c)) is
    # what makes the map a homomorphism for nonabelian G; restricted to
    # the kernel of d it still recovers the boundary.
    c_table = enc(go.mul(x.boundary[c1], g1), np.zeros(n, dtype=np.int64))

    names = tuple(
        f"({x.g_group.element_repr(int(g))},{x.c_group.element_repr(int(c))})"
        for g, c in zip(g1, c1))
    alg = OmegaAlgebra(name=f"PXM({x.name})", signature=PXM_SIGNATURE,
                       ops=TableOps(n, mul_table, inv_table,
                                    {"d": d_table, "c": c_table}),
                       element_names=names)
    validate_algebra(alg, cfg)
    validate_pxm_algebra(alg)
    return alg


def validate_pxm_algebra(alg: OmegaAlgebra) -> OmegaAlgebra:
    """Check the (d, c) identities pointwise."""
    if dict(alg.signature.extra_ops) != {"d": 1, "c": 1}:
        raise ValidationError("a precrossed carrier needs unary ops d and c")
    ops = alg.ops
    n = alg.size
    idx = np.arange(n)
    d = ops.apply("d", [idx])
    c = ops.apply("c", [idx])
    a = np.repeat(idx, n)
    b = np.tile(idx, n)
    if not np.array_equal(ops.apply("d", [ops.mul(a, b)]),
                          ops.mul(d[a], d[b])):
        raise ValidationError("d is not a homomorphism")
    if not np.array_equal(ops.apply("c", [ops.mul(a, b)]),
                          ops.mul(c[a], c[b])):
        raise ValidationError("c is not a homomorphism")
    if not (np.array_equal(d[d], d) and np.array_equal(c[d], d)):
        raise ValidationError("dd = cd = d fails")
    if not (np.array_equal(d[c], c) and np.array_equal(c[c], c)):
        raise ValidationError("dc = cc = c fails")
    return alg


def to_precrossed(alg: OmegaAlgebra,
                  config: RunConfig | None = None) -> PrecrossedModule:
    """Kernel-of-d / image-of-d presentation with conjugation action."""
    cfg = resolve(config)
    validate_pxm_algebra(alg)
    ops = alg.ops
    n = alg.size
    idx = np.arange(n)
    d = ops.apply("d", [idx])
    c = ops.apply("c", [idx])
    K = idx[d == 0]
    G = np.unique(d)
    k_pos = {int(k): i for i, k in enumerate(K)}
    g_pos = {int(g): i for i, g in enumerate(G)}

    def _group_on(codes, pos):
        m = len(codes)
        a = np.repeat(codes, m)
        b = np.tile(codes, m)
        mul = np.array([pos[int(v)] for v in ops.mul(a, b)],
                       dtype=np.int64).reshape(m, m)
        inv = np.array([pos[int(v)] for v in ops.inv(codes)], dtype=np.int64)
        names = tuple(alg.element_repr(int(v)) for v in codes)
        return OmegaAlgebra(name="subgroup", signature=GROUP_SIGNATURE,
                            ops=TableOps(m, mul, inv, {}),
                            element_names=names)

    c_group = _group_on(K, k_pos)
    c_group.name = f"K[d] of {alg.name}"
    g_group = _group_on(G, g_pos)
    g_group.name = f"I[d] of {alg.name}"
    boundary = np.array([g_pos[int(v)] for v in c[K]], dtype=np.int64)
    action = np.zeros((len(G), len(K)), dtype=np.int64)
    for i, g in enumerate(G):
        conj = ops.mul(ops.mul(np.int64(g), K), ops.inv(np.int64(g)))
        action[i] = [k_pos[int(v)] for v in conj]
    x = PrecrossedModule(c_group=c_group, g_group=g_group,
                         boundary=boundary, action=action,
                         name=f"P({alg.name})")
    return validate_precrossed(x, cfg)


def pxm_equivalence_iso(x: PrecrossedModule, alg: OmegaAlgebra,
                        config: RunConfig | None = None) -> TableHom:
    """Canonical isomorphism  a |-> (d(a), a d(a)^-1)  from a (d, c) carrier
    onto the semidirect carrier of its precrossed module."""
    cfg = resolve(config)
    semidirect = to_pxm(x, cfg)
    ops = alg.ops
    n = alg.size
    idx = np.arange(n)
    d = ops.apply("d", [idx])
    K = idx[d == 0]
    G = np.unique(d)
    k_pos = {int(k): i for i, k in enumerate(K)}
    g_pos = {int(g): i for i, g in enumerate(G)}
    kpart = ops.mul(idx, ops.inv(d))
    codes = np.array([g_pos[int(g)] * len(K) + k_pos[int(k)]
                      for g, k in zip(d, kpart)], dtype=np.int64)
    hom = TableHom(whole_algebra(alg, cfg), semidirect, codes)
    if len(np.unique(codes)) != n or not hom.check(cfg):
        raise ValidationError("equivalence map failed to be an isomorphism")
    return hom


def submodule_to_subset(x: PrecrossedModule, sub: Submodule) -> np.ndarray:
    """Element codes {(s, k)} of a submodule inside the semidirect carrier."""
    nc = x.c_size
    return np.sort((sub.s[:, None] * nc + sub.k[None, :]).ravel())


# ---------------------------------------------------------------------------
# Peiffer machinery


def peiffer_elements(x: PrecrossedModule, k: np.ndarray, l: np.ndarray) -> np.ndarray:
    """All <k,l> = k l k^-1 (^{boundary(k)} l)^-1 and <l,k>."""
    co = x.c_group.ops
    def one_side(ks, ls):
        a = np.repeat(ks, len(ls))
        b = np.tile(ls, len(ks))
        conj = co.mul(co.mul(a, b), co.inv(a))
        acted = x.action[x.boundary[a], b]
        return co.mul(conj, co.inv(acted))
    return np.unique(np.concatenate([one_side(k, l), one_side(l, k)]))


def peiffer_commutator(x: PrecrossedModule, ksub: Submodule, lsub: Submodule,
                       config: RunConfig | None = None) -> Submodule:
    """Normal closure, inside K v L, of the Peiffer elements.

    Returned as the normal precrossed submodule with trivial G part.
    """
    cfg = resolve(config)
    ksub = validate_normal_submodule(x, ksub, cfg)
    lsub = validate_normal_submodule(x, lsub, cfg)
    join = generate_subalgebra(x.c_group,
                               np.concatenate([ksub.k, lsub.k]), cfg)
    gens = peiffer_elements(x, ksub.k, lsub.k)
    closure = generate_ideal(join, gens, cfg)
    return Submodule(closure.elements, np.array([0], dtype=np.int64))


def is_crossed(x: PrecrossedModule) -> bool:
    """Peiffer identity: ^{boundary(c)} c' = c c' c^-1 for all c, c'."""
    nc = x.c_size
    co = x.c_group.ops
    a = np.repeat(np.arange(nc), nc)
    b = np.tile(np.arange(nc), nc)
    lhs = x.action[x.boundary[a], b]
    rhs = co.mul(co.mul(a, b), co.inv(a))
    return bool(np.array_equal(lhs, rhs))


def xm_basis() -> IdentityBasis:
    """The single identity whose subvariety is the crossed modules."""
    return preset_basis("xm", PXM_SIGNATURE)


def peiffer_crosscheck(x: PrecrossedModule, ksub: Submodule, lsub: Submodule,
                       config: RunConfig | None = None) -> bool:
    """Engine commutator with the crossed-module basis, transported back,
    must equal the Peiffer commutator with trivial G part."""
    from .commutator import relative_commutator

    cfg = resolve(config)
    alg = to_pxm(x, cfg)
    whole = whole_algebra(alg, cfg)
    ksub = validate_normal_submodule(x, ksub, cfg)
    lsub = validate_normal_submodule(x, lsub, cfg)
    m = Ideal(whole, elements=submodule_to_subset(x, ksub))
    n = Ideal(whole, elements=submodule_to_subset(x, lsub))
    engine = relative_commutator(m, n, xm_basis(), cfg)
    peiffer = peiffer_commutator(x, ksub, lsub, cfg)
    expected = np.sort(peiffer.k)  # codes (e, k) = k in the semidirect carrier
    return np.array_equal(engine.result.elements, expected)
