"""Independent oracles and shared corpus builders for the test suite.

Everything here is deliberately naive (python-loop fixpoints over raw
operation tables) so it exercises none of the engine's closure code.
"""

from __future__ import annotations

import numpy as np

from relcomm.algebra import OmegaAlgebra
from relcomm.constructions import TruncatedRingSpec, build_group, build_ring
from relcomm.demos import (c4_over_c2_module, standard_pxm_corpus,
                           _naive_normal_closure, _naive_ring_product_ideal)
from relcomm.pxmod import to_pxm

__all__ = [
    "naive_subalgebra", "naive_ideal", "naive_verbal_set",
    "naive_normal_closure", "naive_ring_product_ideal", "center_of",
    "group_corpus", "ring_corpus", "pxm_corpus", "c4_over_c2_module",
    "isomorphic_groups",
]

naive_normal_closure = _naive_normal_closure
naive_ring_product_ideal = _naive_ring_product_ideal


def _op_value(alg: OmegaAlgebra, name: str, args: tuple[int, ...]) -> int:
    return int(alg.ops.apply(name, [np.int64(a) for a in args]))


def naive_subalgebra(alg: OmegaAlgebra, seed) -> np.ndarray:
    """Fixpoint closure under every operation, one element at a time."""
    S = {0} | {int(x) for x in seed}
    ops = [("mul", 2), ("inv", 1), *alg.signature.extra_ops]
    changed = True
    while changed:
        changed = False
        cur = list(S)
        for name, ar in ops:
            if ar == 1:
                for x in cur:
                    v = _op_value(alg, name, (x,))
                    if v not in S:
                        S.add(v)
                        changed = True
            elif ar == 2:
                for x in cur:
                    for y in cur:
                        v = _op_value(alg, name, (x, y))
                        if v not in S:
                            S.add(v)
                            changed = True
            else:
                from itertools import product
                for tup in product(cur, repeat=ar):
                    v = _op_value(alg, name, tup)
                    if v not in S:
                        S.add(v)
                        changed = True
    return np.asarray(sorted(S), dtype=np.int64)


def naive_ideal(alg: OmegaAlgebra, host: np.ndarray, gens) -> np.ndarray:
    """Smallest subset closed as a subgroup, under conjugation by the host,
    and under one-coordinate translations of every extra operation with
    parameters from the host."""
    from itertools import product

    host_list = [int(h) for h in host]
    S = {0} | {int(g) for g in gens}
    changed = True
    while changed:
        changed = False
        cur = list(S)
        for x in cur:
            v = _op_value(alg, "inv", (x,))
            if v not in S:
                S.add(v)
                changed = True
        cur = list(S)
        for x in cur:
            for y in cur:
                v = _op_value(alg, "mul", (x, y))
                if v not in S:
                    S.add(v)
                    changed = True
        cur = list(S)
        for h in host_list:
            hi = _op_value(alg, "inv", (h,))
            for x in cur:
                v = _op_value(alg, "mul",
                              (_op_value(alg, "mul", (h, x)), hi))
                if v not in S:
                    S.add(v)
                    changed = True
        for name, ar in alg.signature.extra_ops:
            cur = list(S)
            for params in product(host_list, repeat=ar):
                base = _op_value(alg, name, params)
                base_inv = _op_value(alg, "inv", (base,))
                for j in range(ar):
                    for x in cur:
                        shifted = list(params)
                        shifted[j] = _op_value(alg, "mul", (x, params[j]))
                        val = _op_value(alg, name, tuple(shifted))
                        v = _op_value(alg, "mul", (val, base_inv))
                        if v not in S:
                            S.add(v)
                            changed = True
    return np.asarray(sorted(S), dtype=np.int64)


def naive_verbal_set(alg: OmegaAlgebra, host: np.ndarray, identities) -> np.ndarray:
    """All identity-instance values on the host, then naive ideal closure."""
    from itertools import product
    from relcomm.algebra import eval_term
    from relcomm.terms import arity

    vals = set()
    for t in identities:
        a = max(1, arity(t))
        for tup in product([int(h) for h in host], repeat=a):
            vals.add(eval_term(alg, t, tup))
    return naive_ideal(alg, host, vals)


def center_of(alg: OmegaAlgebra) -> np.ndarray:
    n = alg.size
    out = []
    for z in range(n):
        if all(_op_value(alg, "mul", (z, x)) == _op_value(alg, "mul", (x, z))
               for x in range(n)):
            out.append(z)
    return np.asarray(out, dtype=np.int64)


def isomorphic_groups(a: OmegaAlgebra, b: OmegaAlgebra) -> bool:
    """Exhaustive isomorphism search for small plain groups."""
    from itertools import permutations
    if a.size != b.size:
        return False
    n = a.size
    am = a.ops.mul_table
    bm = b.ops.mul_table
    for perm in permutations(range(1, n)):
        f = np.array([0, *perm], dtype=np.int64)
        if np.array_equal(f[am], bm[f[:, None], f[None, :]]):
            return True
    return False


# ---------------------------------------------------------------------------
# corpora


def group_corpus() -> list[OmegaAlgebra]:
    kinds = ["cyclic:1", "cyclic:2", "cyclic:3", "cyclic:4", "cyclic:5",
             "cyclic:6", "cyclic:2xcyclic:2", "cyclic:8", "cyclic:2xcyclic:4",
             "symmetric:3", "dihedral:4", "quaternion", "dihedral:6",
             "symmetric:4"]
    return [build_group(k) for k in kinds]


def ring_corpus() -> list[OmegaAlgebra]:
    specs = [
        TruncatedRingSpec(p=2, generators=("a",), nil_squares=False,
                          max_degree=3),
        TruncatedRingSpec(p=2, generators=("a",), nil_squares=False,
                          max_degree=4),
        TruncatedRingSpec(p=3, generators=("a",), nil_squares=False,
                          max_degree=2),
        TruncatedRingSpec(p=2, generators=("a", "b"), nil_squares=True,
                          max_degree=2),
        TruncatedRingSpec(p=5, generators=("a",), nil_squares=False,
                          max_degree=3),
    ]
    return [build_ring(s) for s in specs]


def pxm_corpus():
    return standard_pxm_corpus()


def pxm_algebra_corpus(max_size: int = 36) -> list[OmegaAlgebra]:
    return [to_pxm(x) for x in standard_pxm_corpus()
            if x.c_size * x.g_size <= max_size]
