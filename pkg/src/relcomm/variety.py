"""Identity bases, identity-value ideals, and reflections.

A subvariety is given by a finite list of identities ``w_j = e``.  The
set of all values of all consequences of those identities on a subalgebra
``S`` equals the ideal of ``S`` generated by the plain instance values
``w_j(u)``, ``u`` over ``S`` (see ``docs/instance-span.md`` for the proof).
That reduction is what makes every computation here finite and exact.

Two instance engines:

* table carriers: scan tuples of coset representatives modulo the ideal
  built so far, restarting whenever new generators shrink the quotient;
  a complete clean pass certifies exactness;
* linear carriers: a term of syntactic degree ``d`` is a polynomial map
  in the coefficients, so its value span is already spanned by instances
  with at most ``d`` nonzero coefficients (inclusion-exclusion over
  monomial supports; valid in every characteristic).  Instances are
  enumerated over bounded supports and evaluated sparsely.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product

import numpy as np

from .algebra import (LinearOps, OmegaAlgebra, ProductOps, RING_MUL,
                      Signature, eval_term_codes)
from .config import RunConfig, resolve
from .errors import (ParseError, SizeGuardExceeded, UnknownOperation,
                     ValidationError)
from .hom import Homomorphism, quotient
from .sets import (Ideal, SpanBuilder, Subalgebra, coset_partition,
                   generate_ideal, trivial_ideal, whole_algebra)
from .terms import (Apply, Term, Unit, Var, arity, check_resolves,
                    group_commutator, inv, mul, mul_chain, op, parse_identity,
                    ring_degree, term_to_str, var)


@dataclass(frozen=True)
class IdentityBasis:
    """A finite list of identities, each read as ``term = e``."""

    identities: tuple[Term, ...]
    name: str | None = None

    def __post_init__(self):
        for t in self.identities:
            if not isinstance(t, Term):
                raise ValidationError("identities must be Terms")

    def resolve_in(self, sig: Signature) -> None:
        arities = sig.arity_map
        for t in self.identities:
            check_resolves(t, arities)

    def max_arity(self) -> int:
        return max((arity(t) for t in self.identities), default=0)

    def describe(self) -> list[str]:
        return [term_to_str(t) for t in self.identities]


def basis_from_strings(strings, name: str | None = None) -> IdentityBasis:
    return IdentityBasis(tuple(parse_identity(s) for s in strings), name)


def abelianization_basis(sig: Signature) -> IdentityBasis:
    """Identities forcing every operation to distribute over the product.

    One group-commutator identity plus, per extra operation ``w`` of arity
    k, the arity-2k identity ``w(x*y) * w(y)^-1 * w(x)^-1``.
    """
    terms: list[Term] = [group_commutator(var(0), var(1))]
    for name, k in sig.extra_ops:
        xs = [var(i) for i in range(k)]
        ys = [var(k + i) for i in range(k)]
        prods = [mul(x, y) for x, y in zip(xs, ys)]
        terms.append(mul(mul(op(name, *prods), inv(op(name, *ys))),
                         inv(op(name, *xs))))
    return IdentityBasis(tuple(terms), name="abelian")


def xm_identity() -> Term:
    """x^-1 d(x) y^-1 c(y) d(x)^-1 x c(y)^-1 y over the (d, c) signature."""
    x, y = var(0), var(1)
    return mul_chain(inv(x), op("d", x), inv(y), op("c", y),
                     inv(op("d", x)), x, inv(op("c", y)), y)


PRESET_NAMES = ("abelian", "exp2", "cube", "xm")


def preset_basis(name: str, sig: Signature) -> IdentityBasis:
    """Named bases; power presets use the ring product when available."""
    has_rmul = any(n == RING_MUL for n, _ in sig.extra_ops)
    if name == "abelian":
        return abelianization_basis(sig)
    if name == "exp2":
        t = op(RING_MUL, var(0), var(0)) if has_rmul else mul(var(0), var(0))
        return IdentityBasis((t,), name="exp2")
    if name == "cube":
        if has_rmul:
            t = op(RING_MUL, op(RING_MUL, var(0), var(0)), var(0))
        else:
            t = mul(mul(var(0), var(0)), var(0))
        return IdentityBasis((t,), name="cube")
    if name == "xm":
        basis = IdentityBasis((xm_identity(),), name="xm")
        basis.resolve_in(sig)
        return basis
    raise ParseError(f"unknown basis preset {name!r}; "
                     f"known: {', '.join(PRESET_NAMES)}")


# ---------------------------------------------------------------------------
# table carriers: tuple scans over coset representatives


def _base_tables(alg: OmegaAlgebra) -> list[OmegaAlgebra]:
    """Factor algebras of a (possibly product) table carrier."""
    if isinstance(alg.ops, ProductOps):
        seen: dict[int, OmegaAlgebra] = {}
        for f in alg.ops.factors:
            seen.setdefault(id(f), OmegaAlgebra(
                name=alg.name, signature=alg.signature, ops=f))
        return list(seen.values())
    return [alg]


def _scan_tuples(alg: OmegaAlgebra, reps: np.ndarray, term: Term, a: int,
                 is_ok, cfg: RunConfig, collect_cap: int) -> np.ndarray:
    """Evaluate ``term`` on all a-tuples over ``reps``; return values that
    fail ``is_ok`` (early exit once enough is found at a chunk wave).

    With ``cfg.threads > 1`` chunks are evaluated by a thread pool in
    fixed-size waves; waves complete atomically, so the collected set does
    not depend on scheduling.
    """
    R = len(reps)
    total = R ** a
    cfg.guard(total, "tuple_cap", f"identity scan over {R}^{a} tuples")
    chunk = 1 << 16

    def eval_chunk(start: int):
        idx = np.arange(start, min(total, start + chunk), dtype=np.int64)
        cols = []
        for pos in range(a):
            div = R ** (a - 1 - pos)
            cols.append(reps[(idx // div) % R])
        vals = eval_term_codes(alg, term, cols)
        mask = ~is_ok(vals)
        if mask.any():
            return np.unique(vals[mask]), int(mask.sum())
        return None, 0

    bad: list[np.ndarray] = []
    found = 0
    starts = range(0, total, chunk)
    if cfg.threads > 1:
        from concurrent.futures import ThreadPoolExecutor
        from itertools import islice
        it = iter(starts)
        with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            while found < collect_cap:
                wave = list(islice(it, cfg.threads * 2))
                if not wave:
                    break
                for viol, count in pool.map(eval_chunk, wave):
                    if viol is not None:
                        bad.append(viol)
                        found += count
    else:
        for start in starts:
            viol, count = eval_chunk(start)
            if viol is not None:
                bad.append(viol)
                found += count
                if found >= collect_cap:
                    break
    if not bad:
        return np.zeros(0, dtype=np.int64)
    return np.unique(np.concatenate(bad))


def _presample_tuples(alg: OmegaAlgebra, space: np.ndarray, term: Term,
                      a: int, is_ok, rng: np.random.Generator,
                      count: int) -> np.ndarray:
    cols = [space[rng.integers(0, len(space), size=count)] for _ in range(a)]
    vals = eval_term_codes(alg, term, cols)
    mask = ~is_ok(vals)
    return np.unique(vals[mask]) if mask.any() else np.zeros(0, dtype=np.int64)


def satisfies(alg: OmegaAlgebra, basis: IdentityBasis,
              config: RunConfig | None = None) -> bool:
    """True iff every identity evaluates to the unit on every tuple."""
    cfg = resolve(config)
    basis.resolve_in(alg.signature)
    if alg.is_linear:
        span = _linear_instance_span(whole_algebra(alg, cfg), basis, cfg)
        return span.rank == 0
    codes = whole_algebra(alg, cfg).elements
    ok = lambda vals: vals == 0
    for t in basis.identities:
        a = max(1, arity(t))
        if len(_scan_tuples(alg, codes, t, a, ok, cfg, collect_cap=1)):
            return False
    return True


def verbal_values(s: Subalgebra, basis: IdentityBasis,
                  config: RunConfig | None = None) -> Ideal:
    """Ideal of ``s`` generated by all basis-instance values on ``s``."""
    cfg = resolve(config)
    basis.resolve_in(s.parent.signature)
    if s.is_linear:
        span = _linear_instance_span(s, basis, cfg)
        return generate_ideal(s, span.basis(), cfg)
    return _table_verbal(s, basis, cfg)


def active_identities(alg: OmegaAlgebra, basis: IdentityBasis,
                      cfg: RunConfig) -> list[Term]:
    """Drop identities every base factor satisfies.

    An identity holding on all factors holds on the product and on every
    subalgebra of it, so it contributes only trivial instance values.
    """
    factors = _base_tables(alg)
    if any(f.is_linear for f in factors):
        return list(basis.identities)
    out = []
    for t in basis.identities:
        single = IdentityBasis((t,))
        try:
            if all(satisfies(f, single, cfg) for f in factors):
                continue
        except SizeGuardExceeded:
            pass
        out.append(t)
    return out


def _table_verbal(s: Subalgebra, basis: IdentityBasis, cfg: RunConfig) -> Ideal:
    alg = s.parent
    identities = active_identities(alg, basis, cfg)
    if not identities:
        return trivial_ideal(s)
    rng = np.random.default_rng(cfg.seed)
    gens = np.zeros(0, dtype=np.int64)
    current = trivial_ideal(s)
    while True:
        reps, _ = coset_partition(s, current.elements)
        in_ideal = lambda vals: current.contains(vals)
        new: list[np.ndarray] = []
        for t in identities:
            a = max(1, arity(t))
            if len(reps) > 1:
                pre = _presample_tuples(alg, reps, t, a, in_ideal, rng,
                                        count=min(4096, cfg.tuple_cap))
                if len(pre):
                    new.append(pre)
                    continue
            viol = _scan_tuples(alg, reps, t, a, in_ideal, cfg,
                                collect_cap=1 << 12)
            if len(viol):
                new.append(viol)
        if not new:
            return current
        gens = np.union1d(gens, np.concatenate(new))
        current = generate_ideal(s, gens, cfg)


# ---------------------------------------------------------------------------
# linear carriers: bounded-support instance enumeration


class _SparseVals:
    """Batch of vectors sum_t coeff[:, t] * basis_rows[idx[:, t]]."""

    __slots__ = ("idx", "coeff")

    def __init__(self, idx: np.ndarray, coeff: np.ndarray):
        self.idx = idx
        self.coeff = coeff

    @property
    def width(self) -> int:
        return self.idx.shape[1]


class _LinearEvaluator:
    """Evaluate terms over sparse combinations of subalgebra basis rows.

    Products are taken through precomputed pair products and
    right-multiplication matrices of the basis rows, so the cost scales
    with the support width rather than the ambient dimension cubed.
    """

    def __init__(self, ops: LinearOps, rows: np.ndarray):
        self.ops = ops
        self.rows = np.asarray(rows, dtype=np.int64) % ops.p
        self.m = len(self.rows)
        self.D = ops.dim
        self._pair: np.ndarray | None = None
        self._rmat: np.ndarray | None = None

    def pair_products(self) -> np.ndarray:
        if self._pair is None:
            t = self.ops.mul_tensor
            half = np.einsum("ia,abk->ibk", self.rows, t) % self.ops.p
            self._pair = np.einsum("jb,ibk->ijk", self.rows, half) % self.ops.p
        return self._pair

    def right_mats(self) -> np.ndarray:
        if self._rmat is None:
            t = self.ops.mul_tensor
            self._rmat = np.einsum("jb,abl->jal", self.rows, t) % self.ops.p
        return self._rmat

    def densify(self, v) -> np.ndarray:
        if isinstance(v, np.ndarray):
            return v
        if v.width == 0:
            n = len(v.idx)
            return np.zeros((n, self.D), dtype=np.int64)
        gathered = self.rows[v.idx]  # (n, w, D)
        return np.einsum("nw,nwd->nd", v.coeff, gathered) % self.ops.p

    def _mul_sparse_sparse(self, a: _SparseVals, b: _SparseVals) -> np.ndarray:
        pair = self.pair_products()
        n = len(a.idx)
        out = np.zeros((n, self.D), dtype=np.int64)
        for sidx in range(a.width):
            for tidx in range(b.width):
                c = a.coeff[:, sidx] * b.coeff[:, tidx]
                out += c[:, None] * pair[a.idx[:, sidx], b.idx[:, tidx]]
        return out % self.ops.p

    def _mul_dense_sparse(self, dense: np.ndarray, sp: _SparseVals) -> np.ndarray:
        rmats = self.right_mats().astype(np.float64)
        n = len(dense)
        out = np.zeros((n, self.D), dtype=np.int64)
        df = dense.astype(np.float64)
        for tpos in range(sp.width):
            col = sp.idx[:, tpos]
            coeff = sp.coeff[:, tpos]
            for j in np.unique(col):
                mask = col == j
                prod = df[mask] @ rmats[j]
                out[mask] = (out[mask]
                             + coeff[mask, None] * prod.astype(np.int64))
        return out % self.ops.p

    def _mul_dense_dense(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        t = self.ops.mul_tensor.astype(np.float64)
        n, D = a.shape
        out = np.empty((n, D), dtype=np.int64)
        step = max(1, (1 << 22) // (D * D))
        flat = t.reshape(D, D * D)
        for s in range(0, n, step):
            tmp = a[s:s + step].astype(np.float64) @ flat
            tmp = tmp.reshape(-1, D, D)
            vals = np.einsum("njk,nj->nk", tmp, b[s:s + step].astype(np.float64))
            out[s:s + step] = vals.astype(np.int64) % self.ops.p
        return out

    def ring_mul(self, a, b):
        a_sp = isinstance(a, _SparseVals)
        b_sp = isinstance(b, _SparseVals)
        if a_sp and b_sp:
            if a.width * b.width <= 64:
                return self._mul_sparse_sparse(a, b)
            a = self.densify(a)
            a_sp = False
        if a_sp:
            return self._mul_dense_sparse(self.densify(b), a)
        if b_sp:
            return self._mul_dense_sparse(a, b)
        return self._mul_dense_dense(a, self.densify(b))

    def add(self, a, b):
        if isinstance(a, _SparseVals) and isinstance(b, _SparseVals):
            if a.width + b.width <= 12:
                return _SparseVals(np.hstack([a.idx, b.idx]),
                                   np.hstack([a.coeff, b.coeff]))
        return (self.densify(a) + self.densify(b)) % self.ops.p

    def neg(self, a):
        if isinstance(a, _SparseVals):
            return _SparseVals(a.idx, (-a.coeff) % self.ops.p)
        return (-a) % self.ops.p

    def eval(self, t: Term, slots: list[_SparseVals], n: int):
        if isinstance(t, Var):
            return slots[t.index]
        if isinstance(t, Unit):
            return _SparseVals(np.zeros((n, 0), dtype=np.int64),
                               np.zeros((n, 0), dtype=np.int64))
        assert isinstance(t, Apply)
        if t.op == "mul":
            return self.add(self.eval(t.args[0], slots, n),
                            self.eval(t.args[1], slots, n))
        if t.op == "inv":
            return self.neg(self.eval(t.args[0], slots, n))
        if t.op == RING_MUL:
            return self.ring_mul(self.eval(t.args[0], slots, n),
                                 self.eval(t.args[1], slots, n))
        raise UnknownOperation(f"operation {t.op!r} not supported on rings")

    def eval_dense(self, t: Term, slots: list[_SparseVals], n: int) -> np.ndarray:
        return self.densify(self.eval(t, slots, n))


def _support_count(N: int, d: int, p: int) -> int:
    total = 0
    acc = 1
    for j in range(1, min(N, d) + 1):
        acc = acc * (N - j + 1) // j
        total += acc * (p - 1) ** j
    return total


def _linear_instance_span(s: Subalgebra, basis: IdentityBasis,
                          cfg: RunConfig) -> SpanBuilder:
    """Span of all identity-instance values on a linear subalgebra.

    Exact via bounded supports: a value of a term of syntactic degree d is
    an F_p-combination of values at assignments with at most d nonzero
    coefficients over the subalgebra basis.
    """
    ops = s.parent.ops
    assert isinstance(ops, LinearOps)
    rows = s.basis
    m = len(rows)
    span = SpanBuilder(ops.p, ops.dim)
    if m == 0:
        return span
    ev = _LinearEvaluator(ops, rows)
    nonzero = np.arange(1, ops.p, dtype=np.int64)
    for t in basis.identities:
        a = arity(t)
        if a == 0:
            continue  # closed term evaluates to the unit vector
        d = min(ring_degree(t), a * m)
        if d == 0:
            continue
        count = _support_count(a * m, d, ops.p)
        cfg.guard(count, "tuple_cap", "bounded-support instance enumeration")
        slot_ids = np.arange(a * m)
        for j in range(1, d + 1):
            combos = np.asarray(list(combinations(slot_ids, j)),
                                dtype=np.int64)
            if len(combos) == 0:
                continue
            coeff_grid = np.asarray(list(product(nonzero, repeat=j)),
                                    dtype=np.int64)
            chunk = max(1, (1 << 16) // max(1, len(coeff_grid)))
            for cs in range(0, len(combos), chunk):
                cc = combos[cs:cs + chunk]
                n_inst = len(cc) * len(coeff_grid)
                idx_rep = np.repeat(cc, len(coeff_grid), axis=0)
                coeff_rep = np.tile(coeff_grid, (len(cc), 1))
                slots = _build_slots(idx_rep, coeff_rep, a, m, n_inst)
                vals = ev.eval_dense(t, slots, n_inst)
                span.add(vals)
    return span


def _build_slots(slot_pairs: np.ndarray, coeffs: np.ndarray, a: int, m: int,
                 n: int) -> list[_SparseVals]:
    """Distribute (variable, basis-row) assignments into per-variable
    sparse batches of uniform width."""
    j = slot_pairs.shape[1]
    var_of = slot_pairs // m
    row_of = slot_pairs % m
    slots = []
    for v in range(a):
        mask = var_of == v
        width = int(mask.sum(axis=1).max()) if j else 0
        idx = np.zeros((n, width), dtype=np.int64)
        cf = np.zeros((n, width), dtype=np.int64)
        if width:
            order = np.argsort(~mask, axis=1, kind="stable")[:, :width]
            rows_sel = np.take_along_axis(row_of, order, axis=1)
            coeff_sel = np.take_along_axis(coeffs, order, axis=1)
            mask_sel = np.take_along_axis(mask, order, axis=1)
            idx = np.where(mask_sel, rows_sel, 0)
            cf = np.where(mask_sel, coeff_sel, 0)
        slots.append(_SparseVals(idx, cf))
    return slots


# ---------------------------------------------------------------------------
# reflection


def reflection(alg: OmegaAlgebra, basis: IdentityBasis,
               config: RunConfig | None = None) -> tuple[OmegaAlgebra, Homomorphism]:
    """Quotient by the identity-value ideal of the whole algebra.

    The result satisfies the basis; the projection is initial among maps
    to algebras satisfying it (not checked, documented).
    """
    cfg = resolve(config)
    host = whole_algebra(alg, cfg)
    v = verbal_values(host, basis, cfg)
    return quotient(host, v, cfg)
