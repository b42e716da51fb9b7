"""Subalgebras, ideals, and the closure algorithms behind them.

Two representations, matching the two carrier backends:

* table/product carriers: a subset is a sorted array of element codes;
* linear carriers: every additive subgroup is an ``F_p``-subspace (the
  additive group has exponent p), so subsets are canonical row-reduced
  bases and membership is a rank test.

``generate_ideal`` computes the 1-class of the congruence generated by
pairing the generators with the unit.  On table carriers this is a
worklist closure with three rule families applied to every element that
ever enters the ideal:

* subgroup closure (orbit under right multiplication by the accumulated
  generator list);
* conjugation by a generating set of the host;
* for every extra operation, the one-coordinate translations
  ``w(c_1,..,i*c_j,..,c_k) * w(c_1,..,c_k)^{-1}``; when the operation is a
  homomorphism these collapse to ``w(e,..,i,..,e)``.

Telescoping one coordinate at a time shows the resulting set is exactly
the unit class of the generated congruence, i.e. the set of all
ideal-term values over the generators.
"""

from __future__ import annotations

import numpy as np

from .algebra import OmegaAlgebra
from .config import RunConfig, resolve
from .errors import SizeGuardExceeded, ValidationError

# ---------------------------------------------------------------------------
# F_p row spaces


class SpanBuilder:
    """Incrementally maintained reduced row basis of a subspace of F_p^dim."""

    def __init__(self, p: int, dim: int):
        self.p = p
        self.dim = dim
        self.rows = np.zeros((0, dim), dtype=np.int64)
        self.pivots: list[int] = []

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, vecs: np.ndarray) -> np.ndarray:
        """Reduce a batch of vectors modulo the current span."""
        v = np.atleast_2d(np.asarray(vecs, dtype=np.int64)) % self.p
        v = v.copy()
        for r, c in enumerate(self.pivots):
            coeff = v[:, c].copy()
            nz = coeff != 0
            if nz.any():
                v[nz] = (v[nz] - np.outer(coeff[nz], self.rows[r])) % self.p
        return v

    def add(self, vecs: np.ndarray) -> bool:
        """Add vectors to the span; True if the rank grew."""
        v = self.reduce(vecs)
        grew = False
        while True:
            nonzero = np.nonzero(v.any(axis=1))[0]
            if len(nonzero) == 0:
                break
            row = v[nonzero[0]]
            c = int(np.nonzero(row)[0][0])
            row = (row * pow(int(row[c]), self.p - 2, self.p)) % self.p
            # keep existing rows reduced against the new pivot
            if self.rank:
                coeff = self.rows[:, c].copy()
                nz = coeff != 0
                if nz.any():
                    self.rows[nz] = (self.rows[nz]
                                     - np.outer(coeff[nz], row)) % self.p
            self.rows = np.vstack([self.rows, row[None, :]])
            self.pivots.append(c)
            grew = True
            v = v[nonzero]
            coeff = v[:, c].copy()
            nz = coeff != 0
            if nz.any():
                v[nz] = (v[nz] - np.outer(coeff[nz], row)) % self.p
        return grew

    def contains(self, vecs: np.ndarray) -> np.ndarray:
        v = self.reduce(vecs)
        return ~v.any(axis=1)

    def basis(self) -> np.ndarray:
        """Canonical basis: rows sorted by pivot column."""
        if not self.pivots:
            return np.zeros((0, self.dim), dtype=np.int64)
        order = np.argsort(np.asarray(self.pivots))
        return self.rows[order].copy()


def span_basis(vecs, p: int, dim: int) -> np.ndarray:
    sb = SpanBuilder(p, dim)
    if len(vecs):
        sb.add(np.asarray(vecs))
    return sb.basis()


def subspace_intersection(a: np.ndarray, b: np.ndarray, p: int, dim: int) -> np.ndarray:
    """Zassenhaus: rref of [A|A; B|0]; rows with zero left half span A^B."""
    if len(a) == 0 or len(b) == 0:
        return np.zeros((0, dim), dtype=np.int64)
    top = np.hstack([a, a])
    bottom = np.hstack([b, np.zeros_like(b)])
    sb = SpanBuilder(p, 2 * dim)
    sb.add(np.vstack([top, bottom]))
    rows = sb.basis()
    left_zero = ~rows[:, :dim].any(axis=1)
    return span_basis(rows[left_zero, dim:], p, dim)


def enumerate_subspace(basis: np.ndarray, p: int, cap: int) -> np.ndarray:
    """All vectors of the row space (rank must stay small)."""
    r = len(basis)
    total = p ** r
    if total > cap:
        raise SizeGuardExceeded(
            f"subspace enumeration needs {total} > {cap} elements")
    if r == 0:
        return np.zeros((1, basis.shape[1] if basis.ndim == 2 else 0),
                        dtype=np.int64)
    coeffs = np.indices((p,) * r).reshape(r, -1).T
    return (coeffs @ basis) % p


# ---------------------------------------------------------------------------
# subsets of a carrier


def _sorted_unique(codes) -> np.ndarray:
    return np.unique(np.asarray(codes, dtype=np.int64))


def _isin_sorted(sorted_arr: np.ndarray, values: np.ndarray) -> np.ndarray:
    if len(sorted_arr) == 0:
        return np.zeros(np.shape(values), dtype=bool)
    values = np.asarray(values, dtype=np.int64)
    idx = np.searchsorted(sorted_arr, values)
    idx = np.minimum(idx, len(sorted_arr) - 1)
    return sorted_arr[idx] == values


class Subalgebra:
    """A subset of a carrier that contains the unit and is operation-closed."""

    def __init__(self, parent: OmegaAlgebra,
                 elements: np.ndarray | None = None,
                 basis: np.ndarray | None = None):
        self.parent = parent
        self.elements = None if elements is None else _sorted_unique(elements)
        self.basis = None if basis is None else np.asarray(basis, dtype=np.int64)
        self._gens: np.ndarray | None = None
        self._sb: SpanBuilder | None = None

    # -- shared interface ------------------------------------------------

    @property
    def is_linear(self) -> bool:
        return self.basis is not None

    @property
    def size(self) -> int:
        if self.is_linear:
            return self.parent.ops.p ** len(self.basis)
        return len(self.elements)

    @property
    def rank(self) -> int:
        if not self.is_linear:
            raise ValidationError("rank is only defined on linear subsets")
        return len(self.basis)

    def contains(self, items) -> np.ndarray:
        if self.is_linear:
            return self._span().contains(np.atleast_2d(np.asarray(items)))
        return _isin_sorted(self.elements, np.asarray(items, dtype=np.int64))

    def contains_all(self, items) -> bool:
        return bool(np.all(self.contains(items)))

    def _span(self) -> SpanBuilder:
        if self._sb is None:
            ops = self.parent.ops
            sb = SpanBuilder(ops.p, ops.dim)
            if len(self.basis):
                sb.add(self.basis)
            self._sb = sb
        return self._sb

    def set_key(self) -> bytes:
        """Canonical hashable identity of the underlying subset."""
        if self.is_linear:
            return self.basis.tobytes() + bytes([1])
        return self.elements.tobytes() + bytes([0])

    def same_set(self, other: "Subalgebra") -> bool:
        return self.set_key() == other.set_key()

    @property
    def is_trivial(self) -> bool:
        return self.size == 1

    def codes(self, config: RunConfig | None = None) -> np.ndarray:
        """Element codes, enumerated (guarded for linear carriers)."""
        if not self.is_linear:
            return self.elements
        cfg = resolve(config)
        ops = self.parent.ops
        vecs = enumerate_subspace(self.basis, ops.p, cfg.closure_cap)
        return np.sort(ops.vec_to_code(vecs))

    def vectors(self, config: RunConfig | None = None) -> np.ndarray:
        if not self.is_linear:
            raise ValidationError("vectors() is only for linear subsets")
        cfg = resolve(config)
        return enumerate_subspace(self.basis, self.parent.ops.p,
                                  cfg.closure_cap)

    def generating_set(self, config: RunConfig | None = None) -> np.ndarray:
        """Small generating set (as subalgebra); greedy, cached."""
        if self._gens is not None:
            return self._gens
        if self.is_linear:
            self._gens = self.basis
            return self._gens
        gens: list[int] = []
        closed = np.array([0], dtype=np.int64)
        for x in self.elements:
            x = int(x)
            if _isin_sorted(closed, np.array([x]))[0]:
                continue
            gens.append(x)
            closed = _closure_codes(self.parent,
                                    np.asarray(gens, dtype=np.int64), config)
        self._gens = np.asarray(gens, dtype=np.int64)
        return self._gens

    def __repr__(self):
        kind = "linear" if self.is_linear else "table"
        return f"Subalgebra({self.parent.name}, {kind}, size={self.size})"


class Ideal(Subalgebra):
    """A subalgebra that is the unit class of a congruence of ``ambient``."""

    def __init__(self, ambient: Subalgebra,
                 elements: np.ndarray | None = None,
                 basis: np.ndarray | None = None):
        super().__init__(ambient.parent, elements=elements, basis=basis)
        self.ambient = ambient

    def as_subalgebra(self) -> Subalgebra:
        return Subalgebra(self.parent, elements=self.elements,
                          basis=self.basis)

    def __repr__(self):
        return (f"Ideal(size={self.size} of host size {self.ambient.size} "
                f"in {self.parent.name})")


def whole_algebra(alg: OmegaAlgebra, config: RunConfig | None = None) -> Subalgebra:
    if alg.is_linear:
        return Subalgebra(alg, basis=np.eye(alg.ops.dim, dtype=np.int64))
    cfg = resolve(config)
    cfg.guard(alg.size, "closure_cap", "whole-carrier subset")
    return Subalgebra(alg, elements=np.arange(alg.size, dtype=np.int64))


def trivial_ideal(ambient: Subalgebra) -> Ideal:
    if ambient.is_linear:
        dim = ambient.parent.ops.dim
        return Ideal(ambient, basis=np.zeros((0, dim), dtype=np.int64))
    return Ideal(ambient, elements=np.array([0], dtype=np.int64))


def whole_ideal(ambient: Subalgebra) -> Ideal:
    """The ambient subalgebra viewed as an ideal of itself."""
    return Ideal(ambient, elements=ambient.elements, basis=ambient.basis)


# ---------------------------------------------------------------------------
# closures, table backends


def _orbit(alg: OmegaAlgebra, start: np.ndarray, gens: np.ndarray,
           cfg: RunConfig) -> np.ndarray:
    """Closure of ``start ∪ {e}`` under right multiplication by ``gens``.

    When ``start ⊆ <gens>`` this is exactly the subgroup generated.
    """
    ops = alg.ops
    S = _sorted_unique(np.concatenate([start, np.array([0], dtype=np.int64)]))
    if len(gens) == 0:
        return S
    frontier = S
    while len(frontier):
        prods = np.unique(ops.mul(frontier[:, None], gens[None, :]).ravel())
        new = prods[~_isin_sorted(S, prods)]
        if len(new) == 0:
            break
        S = np.union1d(S, new)
        if len(S) > cfg.closure_cap:
            raise SizeGuardExceeded(
                f"subgroup closure grew past closure_cap={cfg.closure_cap}")
        frontier = new
    return S


def _extra_op_images(alg: OmegaAlgebra, S: np.ndarray, cfg: RunConfig) -> np.ndarray:
    """Values of all extra operations on tuples from S (guarded)."""
    out = []
    for name, ar in alg.signature.extra_ops:
        count = len(S) ** ar
        if count > cfg.tuple_cap:
            raise SizeGuardExceeded(
                f"closing under {name!r} needs {count} tuples "
                f"> tuple_cap={cfg.tuple_cap}")
        if ar == 1:
            out.append(alg.ops.apply(name, [S]))
        else:
            grids = np.meshgrid(*([S] * ar), indexing="ij")
            out.append(alg.ops.apply(name, [g.ravel() for g in grids]))
    if not out:
        return np.zeros(0, dtype=np.int64)
    return np.unique(np.concatenate(out))


def _closure_codes(alg: OmegaAlgebra, seed: np.ndarray,
                   config: RunConfig | None = None,
                   start: np.ndarray | None = None) -> np.ndarray:
    cfg = resolve(config)
    gens = _sorted_unique(seed) if len(seed) else np.zeros(0, dtype=np.int64)
    S = start if start is not None else np.array([0], dtype=np.int64)
    while True:
        S = _orbit(alg, S, gens, cfg)
        imgs = _extra_op_images(alg, S, cfg)
        new = imgs[~_isin_sorted(S, imgs)] if len(imgs) else imgs
        if len(new) == 0:
            return S
        gens = np.union1d(gens, new)


def generate_subalgebra(alg: OmegaAlgebra, seed,
                        config: RunConfig | None = None) -> Subalgebra:
    """Smallest subset containing ``seed`` and the unit, closed under all
    operations."""
    if alg.is_linear:
        return _linear_subalgebra(alg, seed, config)
    seed = np.asarray(seed, dtype=np.int64)
    if seed.size and (seed.min() < 0 or seed.max() >= alg.size):
        raise ValidationError("seed contains out-of-range element codes")
    return Subalgebra(alg, elements=_closure_codes(alg, seed, config))


def _linear_subalgebra(alg: OmegaAlgebra, seed,
                       config: RunConfig | None = None) -> Subalgebra:
    ops = alg.ops
    sb = SpanBuilder(ops.p, ops.dim)
    seed = np.atleast_2d(np.asarray(seed, dtype=np.int64)) \
        if np.size(seed) else np.zeros((0, ops.dim), dtype=np.int64)
    if len(seed):
        sb.add(seed)
    while True:
        rows = sb.basis()
        if len(rows) == 0:
            break
        r = len(rows)
        a = np.repeat(rows, r, axis=0)
        b = np.tile(rows, (r, 1))
        prods = ops.rmul(a, b)
        if not sb.add(prods):
            break
    return Subalgebra(alg, basis=sb.basis())


def generate_ideal(host: Subalgebra, gens,
                   config: RunConfig | None = None) -> Ideal:
    """1-class of the congruence of ``host`` generated by ``gens ~ e``."""
    if host.is_linear:
        return _linear_ideal(host, gens, config)
    cfg = resolve(config)
    alg = host.parent
    ops = alg.ops
    gens = _sorted_unique(gens) if np.size(gens) else np.zeros(0, dtype=np.int64)
    if len(gens) and not host.contains_all(gens):
        raise ValidationError("ideal generators must lie in the host")
    host_gens = host.generating_set(config)
    hom_ops, generic_ops = [], []
    for name, ar in alg.signature.extra_ops:
        (hom_ops if alg.op_is_hom(name) else generic_ops).append((name, ar))

    I = np.array([0], dtype=np.int64)
    genlist = np.zeros(0, dtype=np.int64)
    queue = gens[gens != 0]
    while len(queue):
        genlist = np.union1d(genlist, queue)
        newI = _orbit(alg, np.union1d(I, queue), genlist, cfg)
        fresh = newI[~_isin_sorted(I, newI)]
        I = newI
        candidates = []
        if len(fresh):
            # conjugation by host generators
            for g in host_gens:
                candidates.append(ops.conjugate(np.int64(g), fresh))
            # homomorphic extra ops: images of fresh elements per slot
            for name, ar in hom_ops:
                for j in range(ar):
                    args = [np.zeros(len(fresh), dtype=np.int64)] * ar
                    args = list(args)
                    args[j] = fresh
                    candidates.append(ops.apply(name, args))
            # generic extra ops: one-coordinate translations over all host
            # parameter tuples
            for name, ar in generic_ops:
                candidates.extend(
                    _generic_translations(alg, host, name, ar, fresh, cfg))
        if candidates:
            cand = np.unique(np.concatenate(candidates))
            queue = cand[~_isin_sorted(I, cand)]
        else:
            queue = np.zeros(0, dtype=np.int64)
    return Ideal(host, elements=I)


def _generic_translations(alg: OmegaAlgebra, host: Subalgebra, name: str,
                          ar: int, fresh: np.ndarray, cfg: RunConfig):
    ops = alg.ops
    H = host.elements
    count = (len(H) ** ar) * len(fresh) * ar
    if count > cfg.tuple_cap:
        raise SizeGuardExceeded(
            f"ideal closure under {name!r} needs {count} translations "
            f"> tuple_cap={cfg.tuple_cap}")
    grids = np.meshgrid(*([H] * ar), indexing="ij")
    params = [g.ravel() for g in grids]
    base = ops.apply(name, params)
    base_inv = ops.inv(base)
    out = []
    for j in range(ar):
        shifted = ops.mul(fresh[:, None], params[j][None, :])
        args = [p[None, :] for p in params]
        args[j] = shifted
        vals = ops.apply(name, args)
        out.append(np.unique(ops.mul(vals, base_inv[None, :])))
    return out


def _linear_ideal(host: Subalgebra, gens,
                  config: RunConfig | None = None) -> Ideal:
    ops = host.parent.ops
    gens = np.atleast_2d(np.asarray(gens, dtype=np.int64)) \
        if np.size(gens) else np.zeros((0, ops.dim), dtype=np.int64)
    if len(gens) and not host.contains_all(gens):
        raise ValidationError("ideal generators must lie in the host")
    sb = SpanBuilder(ops.p, ops.dim)
    if len(gens):
        sb.add(gens)
    hb = host.basis
    while True:
        rows = sb.basis()
        if len(rows) == 0 or len(hb) == 0:
            break
        a = np.repeat(rows, len(hb), axis=0)
        b = np.tile(hb, (len(rows), 1))
        if not sb.add(ops.rmul(a, b)):
            break
    return Ideal(host, basis=sb.basis())


# ---------------------------------------------------------------------------
# derived operations


def is_ideal(host: Subalgebra, subset: Subalgebra | Ideal,
             config: RunConfig | None = None) -> bool:
    """Spec test: a subset is an ideal iff regenerating it is a no-op."""
    if subset.is_linear:
        regen = generate_ideal(host, subset.basis, config)
    else:
        regen = generate_ideal(host, subset.elements, config)
    return regen.same_set(subset)


def meet_join_ideals(a: Ideal, b: Ideal,
                     config: RunConfig | None = None) -> tuple[Ideal, Ideal]:
    if not a.ambient.same_set(b.ambient):
        raise ValidationError("meet/join needs ideals of the same ambient")
    alg = a.parent
    if a.is_linear:
        ops = alg.ops
        meet_basis = subspace_intersection(a.basis, b.basis, ops.p, ops.dim)
        meet = Ideal(a.ambient, basis=meet_basis)
        union = np.vstack([a.basis, b.basis])
        host_j = _linear_subalgebra(alg, union, config)
        join = generate_ideal(host_j, union, config)
        return meet, Ideal(a.ambient, basis=join.basis)
    meet = Ideal(a.ambient, elements=np.intersect1d(a.elements, b.elements))
    union = np.union1d(a.elements, b.elements)
    host_j = generate_subalgebra(alg, union, config)
    join = generate_ideal(host_j, union, config)
    return meet, Ideal(a.ambient, elements=join.elements)


def m_to_the_n(m, n, alg: OmegaAlgebra,
               config: RunConfig | None = None) -> Ideal:
    """Ideal of <m ∪ n> generated by m (the ideal-term value set)."""
    if alg.is_linear:
        m = np.atleast_2d(np.asarray(m, dtype=np.int64)) if np.size(m) \
            else np.zeros((0, alg.ops.dim), dtype=np.int64)
        n = np.atleast_2d(np.asarray(n, dtype=np.int64)) if np.size(n) \
            else np.zeros((0, alg.ops.dim), dtype=np.int64)
        host = _linear_subalgebra(alg, np.vstack([m, n]), config)
        return generate_ideal(host, m, config)
    m = np.asarray(m, dtype=np.int64)
    n = np.asarray(n, dtype=np.int64)
    host = generate_subalgebra(alg, np.concatenate([m, n]), config)
    return generate_ideal(host, m, config)


def enumerate_ideals(host: Subalgebra,
                     config: RunConfig | None = None) -> list[Ideal]:
    """All ideals of ``host``: principal ideals closed under pairwise joins."""
    cfg = resolve(config)
    cfg.guard(host.size, "oracle_cap", "ideal enumeration carrier")
    found: dict[bytes, Ideal] = {}

    def note(i: Ideal):
        found.setdefault(i.set_key(), i)

    note(trivial_ideal(host))
    if host.is_linear:
        for vec in host.vectors(cfg):
            if not vec.any():
                continue
            note(generate_ideal(host, vec[None, :], cfg))
    else:
        for h in host.elements:
            if h == 0:
                continue
            note(generate_ideal(host, np.array([h], dtype=np.int64), cfg))
    while True:
        items = list(found.values())
        added = False
        for i in range(len(items)):
            for j in range(i + 1, len(items)):
                a, b = items[i], items[j]
                if a.is_linear:
                    union = np.vstack([a.basis, b.basis])
                else:
                    union = np.union1d(a.elements, b.elements)
                join = generate_ideal(host, union, cfg)
                key = join.set_key()
                if key not in found:
                    found[key] = join
                    added = True
        if not added:
            break
    out = list(found.values())
    out.sort(key=lambda i: (i.size, i.set_key()))
    return out


def coset_partition(host: Subalgebra, ideal_elements: np.ndarray):
    """Partition a table-backed host into cosets of an ideal.

    Returns ``(reps, class_ids)``: canonical representatives in ascending
    code order (the unit's class first) and, aligned with
    ``host.elements``, the class index of every element.
    """
    ops = host.parent.ops
    elems = host.elements
    n = len(elems)
    class_ids = np.full(n, -1, dtype=np.int64)
    reps = []
    I = ideal_elements
    for pos in range(n):
        if class_ids[pos] >= 0:
            continue
        x = elems[pos]
        coset = ops.mul(I, np.int64(x))
        positions = np.searchsorted(elems, np.sort(coset))
        class_ids[positions] = len(reps)
        reps.append(int(x))
    return np.asarray(reps, dtype=np.int64), class_ids
