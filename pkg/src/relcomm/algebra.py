"""Finite omega-group carriers.

An omega-group is a finite group with extra operations, all of which fix
the unit.  Elements are canonical integer codes:

* **Table backend** -- elements ``0..n-1`` with one lookup table per
  operation; the unit is index 0.
* **Product backend** -- tuples over table carriers, encoded mixed-radix
  into a single integer; operations act componentwise and are computed on
  the fly (the full product is never materialised).
* **Linear backend** -- elements of a nilpotent commutative ring over
  ``Z/p`` are coefficient vectors over a monomial basis; the group
  operation is addition and multiplication comes from structure constants.
  The code of a vector is its lexicographic rank, so the unit (zero) is 0.

All operations are pure and vectorised over numpy arrays of codes
(respectively coefficient matrices for the linear backend).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce

import numpy as np

from .config import RunConfig, resolve
from .errors import (ArityMismatch, ConstantViolation, GroupAxiomViolation,
                     SchemaError, UnknownOperation, ValidationError)
from .terms import (Apply, Term, Unit, Var, UNIT_NAME, MUL, INV, RESERVED,
                    arity as term_arity)

RING_MUL = "r*"


@dataclass(frozen=True)
class Signature:
    """Extra operations on top of the implicit group structure."""

    extra_ops: tuple[tuple[str, int], ...] = ()

    def __post_init__(self):
        seen = set()
        for name, ar in self.extra_ops:
            if name in RESERVED:
                raise ValidationError(f"operation name {name!r} is reserved")
            if name in seen:
                raise ValidationError(f"duplicate operation name {name!r}")
            if ar < 1:
                raise ValidationError(
                    f"extra operation {name!r} must have arity >= 1")
            seen.add(name)

    @property
    def arity_map(self) -> dict[str, int]:
        m = {MUL: 2, INV: 1}
        m.update(dict(self.extra_ops))
        return m

    def names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.extra_ops)


GROUP_SIGNATURE = Signature()
RING_SIGNATURE = Signature(extra_ops=((RING_MUL, 2),))
PXM_SIGNATURE = Signature(extra_ops=(("d", 1), ("c", 1)))


class TableOps:
    """Materialised operation tables on carrier ``0..n-1``."""

    def __init__(self, n: int, mul_table, inv_table, extra: dict[str, np.ndarray]):
        self.n = int(n)
        self.mul_table = np.ascontiguousarray(mul_table, dtype=np.int64)
        self.inv_table = np.ascontiguousarray(inv_table, dtype=np.int64)
        self.extra = {k: np.ascontiguousarray(v, dtype=np.int64)
                      for k, v in extra.items()}
        self._hom_flags: dict[str, bool] = {}

    @property
    def size(self) -> int:
        return self.n

    def mul(self, a, b):
        return self.mul_table[a, b]

    def inv(self, a):
        return self.inv_table[a]

    def apply(self, name: str, args):
        if name == MUL:
            return self.mul(*args)
        if name == INV:
            return self.inv(*args)
        table = self.extra.get(name)
        if table is None:
            raise UnknownOperation(f"operation {name!r} not in backend")
        if len(args) != table.ndim:
            raise ArityMismatch(
                f"operation {name!r} expects {table.ndim} args, got {len(args)}")
        return table[tuple(args)]

    def conjugate(self, g, x):
        """g * x * g^-1 elementwise."""
        return self.mul(self.mul(g, x), self.inv(g))


class ProductOps:
    """Componentwise operations on a product of table carriers.

    Codes are mixed-radix integers; nothing of size ``prod(n_i)`` is ever
    allocated.
    """

    def __init__(self, factors: tuple[TableOps, ...]):
        if not factors:
            raise ValidationError("product needs at least one factor")
        self.factors = tuple(factors)
        self.sizes = tuple(f.n for f in factors)
        self.size = reduce(lambda a, b: a * b, self.sizes, 1)
        # radix[i] = product of sizes of later factors
        radix = []
        acc = 1
        for s in reversed(self.sizes):
            radix.append(acc)
            acc *= s
        self.radix = tuple(reversed(radix))

    @property
    def k(self) -> int:
        return len(self.factors)

    def encode(self, columns) -> np.ndarray:
        acc = np.zeros_like(np.asarray(columns[0], dtype=np.int64))
        for col, r in zip(columns, self.radix):
            acc = acc + np.asarray(col, dtype=np.int64) * r
        return acc

    def decode(self, codes) -> list[np.ndarray]:
        codes = np.asarray(codes, dtype=np.int64)
        cols = []
        for s, r in zip(self.sizes, self.radix):
            cols.append((codes // r) % s)
        return cols

    def _zip_apply(self, fn_per_factor, arg_lists):
        cols = [fn_per_factor(i, [a[i] for a in arg_lists])
                for i in range(self.k)]
        return self.encode(cols)

    def mul(self, a, b):
        da, db = self.decode(a), self.decode(b)
        return self.encode([f.mul(x, y)
                            for f, x, y in zip(self.factors, da, db)])

    def inv(self, a):
        da = self.decode(a)
        return self.encode([f.inv(x) for f, x in zip(self.factors, da)])

    def apply(self, name: str, args):
        if name == MUL:
            return self.mul(*args)
        if name == INV:
            return self.inv(*args)
        decoded = [self.decode(a) for a in args]
        return self.encode([
            f.apply(name, [d[i] for d in decoded])
            for i, f in enumerate(self.factors)])

    def conjugate(self, g, x):
        return self.mul(self.mul(g, x), self.inv(g))


class LinearOps:
    """Nilpotent commutative ring over Z/p as a structure-constant algebra.

    The group operation is vector addition; the single extra operation
    ``r*`` is the bilinear multiplication ``e_i e_j = sum_k T[i,j,k] e_k``.
    """

    def __init__(self, p: int, labels: tuple[str, ...], mul_tensor):
        self.p = int(p)
        self.labels = tuple(labels)
        self.dim = len(labels)
        self.mul_tensor = np.ascontiguousarray(mul_tensor, dtype=np.int64) % p
        if self.mul_tensor.shape != (self.dim, self.dim, self.dim):
            raise SchemaError("structure tensor shape mismatch")

    @property
    def size(self) -> int:
        return self.p ** self.dim

    def add(self, a, b):
        return (a + b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def rmul(self, a, b):
        a = np.atleast_2d(np.asarray(a, dtype=np.int64))
        b = np.atleast_2d(np.asarray(b, dtype=np.int64))
        out = np.einsum("ni,nj,ijk->nk", a, b, self.mul_tensor) % self.p
        return out

    # --- code <-> coefficient vector (lexicographic rank, unit = 0) ---

    def vec_to_code(self, vecs) -> np.ndarray | int:
        vecs = np.asarray(vecs, dtype=np.int64)
        single = vecs.ndim == 1
        v = np.atleast_2d(vecs)
        if self.size < (1 << 62):
            weights = self.p ** np.arange(self.dim - 1, -1, -1, dtype=np.int64)
            codes = (v * weights).sum(axis=1)
        else:
            codes = np.array([int("".join(map(str, row)), self.p) if self.p <= 10
                              else self._big_code(row) for row in v],
                             dtype=object)
        return int(codes[0]) if single else codes

    def _big_code(self, row) -> int:
        acc = 0
        for c in row:
            acc = acc * self.p + int(c)
        return acc

    def code_to_vec(self, codes) -> np.ndarray:
        if np.isscalar(codes) or isinstance(codes, int):
            codes = [codes]
            single = True
        else:
            single = False
        out = np.zeros((len(codes), self.dim), dtype=np.int64)
        for r, code in enumerate(codes):
            c = int(code)
            for i in range(self.dim - 1, -1, -1):
                out[r, i] = c % self.p
                c //= self.p
        return out[0] if single else out

    def poly_str(self, vec) -> str:
        parts = []
        for c, label in zip(np.asarray(vec, dtype=np.int64) % self.p,
                            self.labels):
            c = int(c)
            if c == 0:
                continue
            parts.append(label if c == 1 else f"{c}*{label}")
        return " + ".join(parts) if parts else "0"


Backend = TableOps | ProductOps | LinearOps


@dataclass
class OmegaAlgebra:
    """A finite omega-group: a signature plus a concrete backend."""

    name: str
    signature: Signature
    ops: Backend
    element_names: tuple[str, ...] | None = None
    _hom_flags: dict[str, bool] = field(default_factory=dict, repr=False)

    @property
    def size(self) -> int:
        return self.ops.size

    @property
    def is_linear(self) -> bool:
        return isinstance(self.ops, LinearOps)

    @property
    def unit(self) -> int:
        return 0

    def element_repr(self, code: int) -> str:
        if self.is_linear:
            return self.ops.poly_str(self.ops.code_to_vec(int(code)))
        if self.element_names is not None:
            return self.element_names[int(code)]
        return str(int(code))

    def arity_of(self, name: str) -> int:
        m = self.signature.arity_map
        if name not in m:
            raise UnknownOperation(f"operation {name!r} not in signature")
        return m[name]

    # --- homomorphism detection (table backends) ----------------------

    def op_is_hom(self, name: str) -> bool:
        """True iff the named extra operation is a homomorphism A^k -> A.

        Used to shrink ideal-closure rules: for a homomorphic op the
        translation ``w(c..,i*c_j,..c) w(c)^{-1}`` collapses to
        ``w(e,..,i,..,e)`` independently of the parameters.
        """
        if name in self._hom_flags:
            return self._hom_flags[name]
        ops = self.ops
        if isinstance(ops, ProductOps):
            flag = _table_op_is_hom(ops.factors[0], name)
            for f in ops.factors[1:]:
                flag = flag and _table_op_is_hom(f, name)
        elif isinstance(ops, TableOps):
            flag = _table_op_is_hom(ops, name)
        else:
            flag = False  # r* is bilinear, not a homomorphism
        self._hom_flags[name] = flag
        return flag


def _table_op_is_hom(ops: TableOps, name: str) -> bool:
    table = ops.extra[name]
    k = table.ndim
    n = ops.n
    if k == 1:
        a, b = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
        return bool(np.array_equal(table[ops.mul(a, b)],
                                   ops.mul(table[a], table[b])))
    if n ** (2 * k) > (1 << 26):
        return False  # too big to certify; fall back to generic closure rules
    grids = np.meshgrid(*([np.arange(n)] * (2 * k)), indexing="ij")
    left = grids[:k]
    right = grids[k:]
    prod_args = [ops.mul(x, y) for x, y in zip(left, right)]
    return bool(np.array_equal(table[tuple(prod_args)],
                               ops.mul(table[tuple(left)],
                                       table[tuple(right)])))


# ---------------------------------------------------------------------------
# term evaluation


def eval_term_codes(alg: OmegaAlgebra, t: Term, columns: list[np.ndarray]):
    """Vectorised evaluation on integer codes (table/product backends)."""
    if isinstance(t, Var):
        if t.index >= len(columns):
            raise ArityMismatch(
                f"term needs variable x{t.index} but assignment has "
                f"{len(columns)} entries")
        return columns[t.index]
    if isinstance(t, Unit):
        shape = np.shape(columns[0]) if columns else ()
        return np.zeros(shape, dtype=np.int64)
    assert isinstance(t, Apply)
    args = [eval_term_codes(alg, a, columns) for a in t.args]
    return alg.ops.apply(t.op, args)


def eval_term_vectors(alg: OmegaAlgebra, t: Term, slots: list[np.ndarray]):
    """Vectorised evaluation on coefficient matrices (linear backend)."""
    ops = alg.ops
    assert isinstance(ops, LinearOps)
    if isinstance(t, Var):
        if t.index >= len(slots):
            raise ArityMismatch(
                f"term needs variable x{t.index} but assignment has "
                f"{len(slots)} entries")
        return slots[t.index]
    if isinstance(t, Unit):
        ref = slots[0] if slots else np.zeros((1, ops.dim), dtype=np.int64)
        return np.zeros_like(ref)
    assert isinstance(t, Apply)
    if t.op == MUL:
        return ops.add(eval_term_vectors(alg, t.args[0], slots),
                       eval_term_vectors(alg, t.args[1], slots))
    if t.op == INV:
        return ops.neg(eval_term_vectors(alg, t.args[0], slots))
    if t.op == RING_MUL:
        return ops.rmul(eval_term_vectors(alg, t.args[0], slots),
                        eval_term_vectors(alg, t.args[1], slots))
    raise UnknownOperation(f"operation {t.op!r} not supported on rings")


def eval_term(alg: OmegaAlgebra, t: Term, assignment) -> int:
    """Evaluate at a single assignment of element codes; returns a code."""
    from .terms import check_resolves
    check_resolves(t, alg.signature.arity_map)
    need = term_arity(t)
    if len(assignment) < need:
        raise ArityMismatch(
            f"term has arity {need} but assignment has {len(assignment)}")
    if alg.is_linear:
        ops = alg.ops
        slots = [ops.code_to_vec(int(a))[None, :] for a in assignment]
        if not slots:
            slots = [np.zeros((1, ops.dim), dtype=np.int64)]
        out = eval_term_vectors(alg, t, slots)
        return int(ops.vec_to_code(out[0]))
    cols = [np.asarray([int(a)], dtype=np.int64) for a in assignment]
    if not cols:
        cols = [np.zeros(1, dtype=np.int64)]
    return int(eval_term_codes(alg, t, cols)[0])


# ---------------------------------------------------------------------------
# validation


def validate_algebra(alg: OmegaAlgebra, config: RunConfig | None = None) -> OmegaAlgebra:
    """Check every omega-group invariant; returns the algebra on success."""
    cfg = resolve(config)
    ops = alg.ops
    if isinstance(ops, LinearOps):
        _validate_linear(ops)
        return alg
    if isinstance(ops, ProductOps):
        for f in ops.factors:
            _validate_tables(f, cfg)
        return alg
    _validate_tables(ops, cfg)
    return alg


def _validate_tables(ops: TableOps, cfg: RunConfig) -> None:
    n = ops.n
    cfg.guard(n, "carrier_cap", "table algebra carrier")
    if ops.mul_table.shape != (n, n):
        raise SchemaError(f"mul table must be {n}x{n}")
    if ops.inv_table.shape != (n,):
        raise SchemaError(f"inv table must have length {n}")
    for name, table in ops.extra.items():
        if table.shape != (n,) * table.ndim:
            raise SchemaError(f"table for {name!r} has wrong shape")
        if table.min() < 0 or table.max() >= n:
            raise SchemaError(f"table for {name!r} has out-of-range entries")
    if ops.mul_table.min() < 0 or ops.mul_table.max() >= n:
        raise SchemaError("mul table has out-of-range entries")
    if ops.inv_table.min() < 0 or ops.inv_table.max() >= n:
        raise SchemaError("inv table has out-of-range entries")

    idx = np.arange(n)
    if not np.array_equal(ops.mul_table[0, :], idx):
        a = int(np.argmax(ops.mul_table[0, :] != idx))
        raise GroupAxiomViolation(f"unit law fails: e*{a} != {a}")
    if not np.array_equal(ops.mul_table[:, 0], idx):
        a = int(np.argmax(ops.mul_table[:, 0] != idx))
        raise GroupAxiomViolation(f"unit law fails: {a}*e != {a}")
    if not np.all(ops.mul_table[idx, ops.inv_table] == 0):
        a = int(np.argmax(ops.mul_table[idx, ops.inv_table] != 0))
        raise GroupAxiomViolation(f"inverse law fails: {a}*inv({a}) != e")
    if not np.all(ops.mul_table[ops.inv_table, idx] == 0):
        a = int(np.argmax(ops.mul_table[ops.inv_table, idx] != 0))
        raise GroupAxiomViolation(f"inverse law fails: inv({a})*{a} != e")

    # associativity, chunked over the first coordinate
    chunk = max(1, min(n, (1 << 24) // max(1, n * n)))
    for start in range(0, n, chunk):
        a = np.arange(start, min(n, start + chunk))
        left = ops.mul_table[ops.mul_table[a][:, :, None],
                             np.arange(n)[None, None, :]]
        right = ops.mul_table[a[:, None, None],
                              ops.mul_table[None, :, :]]
        if not np.array_equal(left, right):
            bad = np.argwhere(left != right)[0]
            trip = (int(a[bad[0]]), int(bad[1]), int(bad[2]))
            raise GroupAxiomViolation(
                f"associativity fails at triple {trip}")

    for name, table in ops.extra.items():
        if int(table[(0,) * table.ndim]) != 0:
            raise ConstantViolation(
                f"extra operation {name!r} does not fix the unit: "
                f"{name}(e,...,e) = {int(table[(0,) * table.ndim])}")


def _validate_linear(ops: LinearOps) -> None:
    p, d, t = ops.p, ops.dim, ops.mul_tensor
    if p < 2 or any(p % q == 0 for q in range(2, int(p ** 0.5) + 1)):
        raise SchemaError(f"coefficient modulus {p} is not prime")
    if not np.array_equal(t, t.transpose(1, 0, 2) % p):
        raise ValidationError("ring multiplication is not commutative")
    left = np.einsum("ijm,mkl->ijkl", t, t) % p
    right = np.einsum("jkm,iml->ijkl", t, t) % p
    if not np.array_equal(left, right):
        bad = np.argwhere(left != right)[0]
        raise ValidationError(
            f"ring multiplication not associative on basis triple "
            f"({ops.labels[bad[0]]}, {ops.labels[bad[1]]}, {ops.labels[bad[2]]})")


# ---------------------------------------------------------------------------
# products


def direct_power(alg: OmegaAlgebra, k: int, config: RunConfig | None = None) -> OmegaAlgebra:
    """k-fold direct power with componentwise operations (virtual)."""
    cfg = resolve(config)
    cfg.guard(k, "power_cap", "direct power exponent")
    if alg.is_linear:
        return _linear_power(alg, k)
    base = alg.ops
    if isinstance(base, ProductOps):
        factors = base.factors * k
    else:
        factors = (base,) * k
    prod = ProductOps(factors)
    out = OmegaAlgebra(name=f"{alg.name}^{k}", signature=alg.signature,
                       ops=prod)
    out._hom_flags = dict(alg._hom_flags)
    return out


def direct_product(algs: list[OmegaAlgebra], config: RunConfig | None = None) -> OmegaAlgebra:
    """Direct product of table-backed algebras over a common signature."""
    cfg = resolve(config)
    cfg.guard(len(algs), "power_cap", "direct product arity")
    sig = algs[0].signature
    for a in algs[1:]:
        if a.signature != sig:
            raise ValidationError("product factors must share a signature")
    factors = []
    for a in algs:
        if isinstance(a.ops, TableOps):
            factors.append(a.ops)
        elif isinstance(a.ops, ProductOps):
            factors.extend(a.ops.factors)
        else:
            raise ValidationError("direct_product needs table backends")
    name = " x ".join(a.name for a in algs)
    return OmegaAlgebra(name=name, signature=sig, ops=ProductOps(factors))


def _linear_power(alg: OmegaAlgebra, k: int) -> OmegaAlgebra:
    ops = alg.ops
    assert isinstance(ops, LinearOps)
    d = ops.dim
    tensor = np.zeros((d * k, d * k, d * k), dtype=np.int64)
    labels = []
    for c in range(k):
        s = c * d
        tensor[s:s + d, s:s + d, s:s + d] = ops.mul_tensor
        labels.extend(f"{lab}#{c}" for lab in ops.labels)
    return OmegaAlgebra(name=f"{alg.name}^{k}", signature=alg.signature,
                        ops=LinearOps(ops.p, tuple(labels), tensor))


def materialize(alg: OmegaAlgebra, config: RunConfig | None = None) -> OmegaAlgebra:
    """Render any backend as explicit tables (small carriers only)."""
    cfg = resolve(config)
    n = alg.size
    cfg.guard(n, "carrier_cap", f"materialising {alg.name}")
    if isinstance(alg.ops, TableOps):
        return alg
    if alg.is_linear:
        ops = alg.ops
        vecs = _all_vectors(ops)
        codes = ops.vec_to_code(vecs)
        order = np.argsort(codes)
        vecs = vecs[order]  # codes are now 0..n-1 in order
        index = {tuple(v): i for i, v in enumerate(vecs)}
        a_idx = np.repeat(np.arange(n), n)
        b_idx = np.tile(np.arange(n), n)
        sums = ops.add(vecs[a_idx], vecs[b_idx])
        mul_table = np.array([index[tuple(v)] for v in sums],
                             dtype=np.int64).reshape(n, n)
        negs = ops.neg(vecs)
        inv_table = np.array([index[tuple(v)] for v in negs], dtype=np.int64)
        prods = ops.rmul(vecs[a_idx], vecs[b_idx])
        rmul_table = np.array([index[tuple(v)] for v in prods],
                              dtype=np.int64).reshape(n, n)
        names = tuple(ops.poly_str(v) for v in vecs)
        return OmegaAlgebra(name=f"{alg.name} (tables)",
                            signature=alg.signature,
                            ops=TableOps(n, mul_table, inv_table,
                                         {RING_MUL: rmul_table}),
                            element_names=names)
    prod = alg.ops
    codes = np.arange(n, dtype=np.int64)
    a_idx = np.repeat(codes, n)
    b_idx = np.tile(codes, n)
    mul_table = prod.mul(a_idx, b_idx).reshape(n, n)
    inv_table = prod.inv(codes)
    extra = {}
    for name, ar in alg.signature.extra_ops:
        if ar == 1:
            extra[name] = prod.apply(name, [codes])
        elif ar == 2:
            extra[name] = prod.apply(name, [a_idx, b_idx]).reshape(n, n)
        else:
            grids = np.meshgrid(*([codes] * ar), indexing="ij")
            extra[name] = prod.apply(name, [g.ravel() for g in grids]) \
                .reshape((n,) * ar)
    return OmegaAlgebra(name=f"{alg.name} (tables)", signature=alg.signature,
                        ops=TableOps(n, mul_table, inv_table, extra))


def _all_vectors(ops: LinearOps) -> np.ndarray:
    grids = np.meshgrid(*([np.arange(ops.p)] * ops.dim), indexing="ij")
    return np.stack([g.ravel() for g in grids], axis=1).astype(np.int64)
