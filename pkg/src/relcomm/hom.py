"""Homomorphisms and quotient constructions.

A homomorphism always knows its source as a :class:`Subalgebra` (possibly
the whole carrier) and its target algebra.  Three concrete kinds:

* :class:`TableHom`  -- explicit value per source element;
* :class:`FuncHom`   -- vectorised code function (product projections);
* :class:`LinearHom` -- an ``F_p`` matrix applied to coefficient vectors.
"""

from __future__ import annotations

import numpy as np

from .algebra import LinearOps, OmegaAlgebra, TableOps
from .config import RunConfig, resolve
from .errors import ValidationError
from .sets import (Ideal, SpanBuilder, Subalgebra, coset_partition,
                   span_basis, whole_algebra)


class Homomorphism:
    def __init__(self, source: Subalgebra, target: OmegaAlgebra):
        self.source = source
        self.target = target

    def apply(self, items):
        raise NotImplementedError

    def image_subset(self, subset: Subalgebra):
        """Image of a subset of the source, as canonical target data."""
        if subset.is_linear:
            return span_basis(self.apply(subset.basis), self.target.ops.p,
                              self.target.ops.dim)
        return np.unique(self.apply(subset.elements))

    def push_ideal(self, ideal: Subalgebra,
                   config: RunConfig | None = None) -> Ideal:
        """Image of an ideal along a surjection, as an ideal of the target."""
        data = self.image_subset(ideal)
        tgt = whole_algebra(self.target, config)
        if isinstance(self.target.ops, LinearOps):
            return Ideal(tgt, basis=data)
        return Ideal(tgt, elements=data)

    def kernel(self, config: RunConfig | None = None) -> Ideal:
        raise NotImplementedError

    def check(self, config: RunConfig | None = None) -> bool:
        """Exhaustively verify the homomorphism property (test helper)."""
        cfg = resolve(config)
        src, tgt = self.source.parent, self.target
        if self.source.is_linear:
            b = self.source.basis
            if len(b) == 0:
                return True
            r = len(b)
            a = np.repeat(b, r, axis=0)
            c = np.tile(b, (r, 1))
            lhs = self.apply(src.ops.rmul(a, c))
            rhs = tgt.ops.rmul(self.apply(a), self.apply(c))
            return bool(np.array_equal(lhs % tgt.ops.p, rhs % tgt.ops.p))
        S = self.source.elements
        cfg.guard(len(S) ** 2, "tuple_cap", "homomorphism check")
        a = np.repeat(S, len(S))
        b = np.tile(S, len(S))
        if not np.array_equal(self.apply(src.ops.mul(a, b)),
                              tgt.ops.mul(self.apply(a), self.apply(b))):
            return False
        if not np.array_equal(self.apply(src.ops.inv(S)),
                              tgt.ops.inv(self.apply(S))):
            return False
        if int(np.asarray(self.apply(np.array([0], dtype=np.int64)))[0]) != 0:
            return False
        for name, ar in src.signature.extra_ops:
            if ar == 1:
                args = [S]
            elif ar == 2:
                args = [a, b]
            else:
                grids = np.meshgrid(*([S] * ar), indexing="ij")
                args = [g.ravel() for g in grids]
            lhs = self.apply(src.ops.apply(name, args))
            rhs = tgt.ops.apply(name, [self.apply(x) for x in args])
            if not np.array_equal(lhs, rhs):
                return False
        return True


class TableHom(Homomorphism):
    def __init__(self, source: Subalgebra, target: OmegaAlgebra,
                 images: np.ndarray):
        super().__init__(source, target)
        self.images = np.asarray(images, dtype=np.int64)
        if len(self.images) != len(source.elements):
            raise ValidationError("image table must align with the source")

    def apply(self, items):
        items = np.asarray(items, dtype=np.int64)
        pos = np.searchsorted(self.source.elements, items)
        return self.images[pos]

    def kernel(self, config: RunConfig | None = None) -> Ideal:
        codes = self.source.elements[self.images == 0]
        return Ideal(self.source, elements=codes)


class FuncHom(Homomorphism):
    def __init__(self, source: Subalgebra, target: OmegaAlgebra, fn):
        super().__init__(source, target)
        self.fn = fn

    def apply(self, items):
        return self.fn(np.asarray(items, dtype=np.int64))

    def kernel(self, config: RunConfig | None = None) -> Ideal:
        S = self.source.elements
        return Ideal(self.source, elements=S[self.apply(S) == 0])


class LinearHom(Homomorphism):
    """v |-> v @ matrix over F_p; kernel basis is precomputed."""

    def __init__(self, source: Subalgebra, target: OmegaAlgebra,
                 matrix: np.ndarray, kernel_basis: np.ndarray):
        super().__init__(source, target)
        self.matrix = np.asarray(matrix, dtype=np.int64)
        self.kernel_basis = np.asarray(kernel_basis, dtype=np.int64)

    def apply(self, items):
        p = self.target.ops.p
        v = np.atleast_2d(np.asarray(items, dtype=np.int64))
        return (v @ self.matrix) % p

    def kernel(self, config: RunConfig | None = None) -> Ideal:
        return Ideal(self.source, basis=self.kernel_basis)


# ---------------------------------------------------------------------------
# quotients


def quotient(host: Subalgebra, ideal: Ideal,
             config: RunConfig | None = None) -> tuple[OmegaAlgebra, Homomorphism]:
    """Quotient omega-group of ``host`` by an ideal, plus the projection.

    The unit's class gets index 0; classes are ordered by their smallest
    member, so the construction is canonical.
    """
    if not host.contains_all(ideal.basis if ideal.is_linear
                             else ideal.elements):
        raise ValidationError("quotient ideal must lie inside the host")
    if host.is_linear:
        return _linear_quotient(host, ideal, config)
    return _table_quotient(host, ideal, config)


def _table_quotient(host: Subalgebra, ideal: Ideal, config: RunConfig | None):
    cfg = resolve(config)
    alg = host.parent
    ops = alg.ops
    reps, class_ids = coset_partition(host, ideal.elements)
    q = len(reps)
    cfg.guard(q, "carrier_cap", "quotient carrier")

    def to_class(codes):
        pos = np.searchsorted(host.elements, codes)
        return class_ids[pos]

    a = np.repeat(reps, q)
    b = np.tile(reps, q)
    mul_table = to_class(ops.mul(a, b)).reshape(q, q)
    inv_table = to_class(ops.inv(reps))
    extra = {}
    for name, ar in alg.signature.extra_ops:
        if ar == 1:
            extra[name] = to_class(ops.apply(name, [reps]))
        else:
            cfg.guard(q ** ar, "tuple_cap", f"quotient table for {name!r}")
            grids = np.meshgrid(*([reps] * ar), indexing="ij")
            extra[name] = to_class(
                ops.apply(name, [g.ravel() for g in grids])).reshape((q,) * ar)
    names = tuple(f"[{alg.element_repr(int(r))}]" for r in reps)
    target = OmegaAlgebra(name=f"{alg.name}/{{{ideal.size}}}",
                          signature=alg.signature,
                          ops=TableOps(q, mul_table, inv_table, extra),
                          element_names=names)
    proj = TableHom(host, target, class_ids)
    return target, proj


def _matrix_inverse_mod_p(M: np.ndarray, p: int) -> np.ndarray:
    n = len(M)
    A = np.hstack([M % p, np.eye(n, dtype=np.int64)])
    for col in range(n):
        pivots = np.nonzero(A[col:, col])[0]
        if len(pivots) == 0:
            raise ValidationError("matrix not invertible mod p")
        pr = col + pivots[0]
        A[[col, pr]] = A[[pr, col]]
        A[col] = (A[col] * pow(int(A[col, col]), p - 2, p)) % p
        other = A[:, col].copy()
        other[col] = 0
        A = (A - np.outer(other, A[col])) % p
    return A[:, n:]


def _linear_quotient(host: Subalgebra, ideal: Ideal, config: RunConfig | None):
    ops = host.parent.ops
    p, dim = ops.p, ops.dim
    ib = ideal.basis
    # complement of the ideal inside the host span
    sb = SpanBuilder(p, dim)
    if len(ib):
        sb.add(ib)
    comp_rows = []
    for row in host.basis:
        reduced = sb.reduce(row)[0]
        if reduced.any():
            sb.add(reduced)
            comp_rows.append(reduced)
    comp = np.asarray(comp_rows, dtype=np.int64) if comp_rows \
        else np.zeros((0, dim), dtype=np.int64)
    r = len(comp)

    # full-rank frame: ideal rows, complement rows, then padding
    frame_sb = SpanBuilder(p, dim)
    frame_rows = []
    for row in np.vstack([ib, comp]) if (len(ib) + r) else np.zeros((0, dim)):
        frame_rows.append(row)
        frame_sb.add(row)
    for j in range(dim):
        e = np.zeros(dim, dtype=np.int64)
        e[j] = 1
        if not frame_sb.contains(e[None, :])[0]:
            frame_rows.append(e)
            frame_sb.add(e)
    E = np.asarray(frame_rows, dtype=np.int64)
    Einv = _matrix_inverse_mod_p(E.T % p, p)
    # coordinates of v in the frame: E.T @ coeffs = v.T  =>  coeffs = Einv @ v.T
    proj_matrix = Einv.T[:, len(ib):len(ib) + r] % p

    # quotient ring structure constants from complement representatives
    tensor = np.zeros((r, r, r), dtype=np.int64)
    if r:
        a = np.repeat(comp, r, axis=0)
        b = np.tile(comp, (r, 1))
        prods = ops.rmul(a, b)
        coords = (prods @ proj_matrix) % p
        tensor = coords.reshape(r, r, r)
    labels = tuple(f"q{i}" for i in range(r))
    target = OmegaAlgebra(name=f"{host.parent.name}/(rank {len(ib)})",
                          signature=host.parent.signature,
                          ops=LinearOps(p, labels, tensor))
    proj = LinearHom(host, target, proj_matrix, kernel_basis=ib)
    return target, proj


def power_projections(power_alg: OmegaAlgebra,
                      base: OmegaAlgebra,
                      config: RunConfig | None = None) -> list[Homomorphism]:
    """Coordinate projections of a virtual product, as homomorphisms."""
    src = whole_algebra(power_alg, config)
    prod_ops = power_alg.ops
    out = []
    for j in range(prod_ops.k):
        def fn(codes, j=j):
            return prod_ops.decode(codes)[j]
        out.append(FuncHom(src, base, fn))
    return out
