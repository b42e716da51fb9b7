"""Builders for the finite algebras used in tests, demos and documents.

Groups come as explicit tables (cyclic, dihedral, symmetric, quaternion,
and direct products of those).  Rings come as truncated polynomial rings
over ``Z/p``: a finite monomial basis with structure constants, which the
linear backend consumes directly.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import combinations_with_replacement, permutations

import numpy as np

from .algebra import (GROUP_SIGNATURE, LinearOps, OmegaAlgebra,
                      RING_SIGNATURE, TableOps, direct_product,
                      validate_algebra)
from .config import RunConfig, resolve
from .errors import ParseError, ValidationError
from .sets import Ideal, generate_ideal, whole_algebra


# ---------------------------------------------------------------------------
# groups


def _tables_from_elements(elements, compose, invert, names=None) -> TableOps:
    index = {e: i for i, e in enumerate(elements)}
    n = len(elements)
    mul = np.zeros((n, n), dtype=np.int64)
    inv = np.zeros(n, dtype=np.int64)
    for i, a in enumerate(elements):
        inv[i] = index[invert(a)]
        for j, b in enumerate(elements):
            mul[i, j] = index[compose(a, b)]
    return TableOps(n, mul, inv, {})


def cyclic_group(n: int) -> OmegaAlgebra:
    if n < 1:
        raise ValidationError("cyclic group order must be >= 1")
    elements = list(range(n))
    ops = _tables_from_elements(elements,
                               lambda a, b: (a + b) % n,
                               lambda a: (-a) % n)
    names = tuple("e" if k == 0 else f"g^{k}" if k > 1 else "g"
                  for k in range(n))
    return OmegaAlgebra(name=f"C{n}", signature=GROUP_SIGNATURE, ops=ops,
                        element_names=names)


def symmetric_group(n: int) -> OmegaAlgebra:
    if n < 1 or n > 5:
        raise ValidationError("symmetric groups supported for 1 <= n <= 5")
    elements = sorted(permutations(range(n)))  # identity sorts first
    def compose(a, b):  # (a*b)(i) = a(b(i))
        return tuple(a[b[i]] for i in range(n))
    def invert(a):
        out = [0] * n
        for i, v in enumerate(a):
            out[v] = i
        return tuple(out)
    ops = _tables_from_elements(elements, compose, invert)
    names = tuple(str(p) for p in elements)
    return OmegaAlgebra(name=f"S{n}", signature=GROUP_SIGNATURE, ops=ops,
                        element_names=names)


def dihedral_group(n: int) -> OmegaAlgebra:
    """Symmetries of the n-gon, order 2n; elements (rotation, flip)."""
    if n < 1:
        raise ValidationError("dihedral parameter must be >= 1")
    elements = [(r, f) for f in (0, 1) for r in range(n)]
    def compose(a, b):
        r1, f1 = a
        r2, f2 = b
        if f1 == 0:
            return ((r1 + r2) % n, f2)
        return ((r1 - r2) % n, 1 - f2)
    def invert(a):
        r, f = a
        return ((-r) % n, 0) if f == 0 else (r, 1)
    ops = _tables_from_elements(elements, compose, invert)
    names = tuple(("e" if r == 0 else f"r^{r}") if f == 0
                  else ("s" if r == 0 else f"r^{r}s")
                  for r, f in elements)
    return OmegaAlgebra(name=f"D{n}", signature=GROUP_SIGNATURE, ops=ops,
                        element_names=names)


def quaternion_group() -> OmegaAlgebra:
    """Q8 = {1, -1, i, -i, j, -j, k, -k} with sign-tracked products."""
    units = ["1", "i", "j", "k"]
    elements = [(s, u) for u in units for s in (1, -1)]
    elements.sort(key=lambda e: (units.index(e[1]), -e[0]))
    table = {
        ("1", "1"): (1, "1"), ("1", "i"): (1, "i"),
        ("1", "j"): (1, "j"), ("1", "k"): (1, "k"),
        ("i", "1"): (1, "i"), ("i", "i"): (-1, "1"),
        ("i", "j"): (1, "k"), ("i", "k"): (-1, "j"),
        ("j", "1"): (1, "j"), ("j", "i"): (-1, "k"),
        ("j", "j"): (-1, "1"), ("j", "k"): (1, "i"),
        ("k", "1"): (1, "k"), ("k", "i"): (1, "j"),
        ("k", "j"): (-1, "i"), ("k", "k"): (-1, "1"),
    }
    def compose(a, b):
        s, u = table[(a[1], b[1])]
        return (s * a[0] * b[0], u)
    def invert(a):
        s, u = a
        return (s, u) if u == "1" else (-s, u)
    ops = _tables_from_elements(elements, compose, invert)
    names = tuple(("" if s == 1 else "-") + u for s, u in elements)
    return OmegaAlgebra(name="Q8", signature=GROUP_SIGNATURE, ops=ops,
                        element_names=names)


_GROUP_ATOM = re.compile(r"^(cyclic|symmetric|dihedral|quaternion)(?::(\d+))?$")


def build_group(kind: str, config: RunConfig | None = None) -> OmegaAlgebra:
    """Build a group from a kind string.

    Atoms: ``cyclic:N``, ``symmetric:N``, ``dihedral:N`` (order 2N),
    ``quaternion``.  Direct products join atoms with ``x``, e.g.
    ``cyclic:2xcyclic:3``.
    """
    cfg = resolve(config)
    parts = [p.strip() for p in kind.split("x")]
    factors = []
    for part in parts:
        m = _GROUP_ATOM.match(part)
        if not m:
            raise ParseError(f"cannot parse group kind {part!r}")
        name, arg = m.group(1), m.group(2)
        if name == "quaternion":
            if arg not in (None, "8"):
                raise ParseError("only quaternion:8 is available")
            factors.append(quaternion_group())
            continue
        if arg is None:
            raise ParseError(f"group kind {part!r} needs a size, e.g. {name}:3")
        n = int(arg)
        if name == "cyclic":
            factors.append(cyclic_group(n))
        elif name == "symmetric":
            factors.append(symmetric_group(n))
        else:
            factors.append(dihedral_group(n))
    if len(factors) == 1:
        alg = factors[0]
    else:
        from .algebra import materialize
        total = 1
        for f in factors:
            total *= f.size
        cfg.guard(total, "carrier_cap", "direct product carrier")
        alg = materialize(direct_product(factors, cfg), cfg)
        alg.name = kind
    cfg.guard(alg.size, "carrier_cap", "group carrier")
    return alg


# ---------------------------------------------------------------------------
# truncated polynomial rings


@dataclass(frozen=True)
class TruncatedRingSpec:
    """Commutative nonunital polynomial ring over Z/p, truncated.

    Monomials of degree above ``max_degree`` vanish; with ``nil_squares``
    every generator square vanishes too (leaving squarefree monomials).
    """

    p: int
    generators: tuple[str, ...]
    nil_squares: bool
    max_degree: int

    def __post_init__(self):
        if self.max_degree < 1:
            raise ValidationError("max_degree must be >= 1")
        if not self.generators:
            raise ValidationError("ring needs at least one generator")
        if len(set(self.generators)) != len(self.generators):
            raise ValidationError("ring generator names must be distinct")
        for g in self.generators:
            if not re.match(r"^[A-Za-z][A-Za-z0-9_]*$", g):
                raise ValidationError(f"bad generator name {g!r}")


def _monomials(spec: TruncatedRingSpec) -> list[tuple[int, ...]]:
    """Surviving monomials as sorted generator-index multisets, ordered by
    (degree, lexicographic)."""
    g = len(spec.generators)
    out = []
    for deg in range(1, spec.max_degree + 1):
        for combo in combinations_with_replacement(range(g), deg):
            if spec.nil_squares and len(set(combo)) != len(combo):
                continue
            out.append(combo)
    return out


def monomial_label(spec: TruncatedRingSpec, mono: tuple[int, ...]) -> str:
    from collections import Counter
    parts = []
    counts = Counter(mono)
    for gi in sorted(counts):
        k = counts[gi]
        name = spec.generators[gi]
        parts.append(name if k == 1 else f"{name}^{k}")
    return "*".join(parts)


def build_ring(spec: TruncatedRingSpec,
               config: RunConfig | None = None) -> OmegaAlgebra:
    cfg = resolve(config)
    monos = _monomials(spec)
    dim = len(monos)
    cfg.guard(dim, "dimension_cap", "ring basis dimension")
    index = {m: i for i, m in enumerate(monos)}
    tensor = np.zeros((dim, dim, dim), dtype=np.int64)
    for i, a in enumerate(monos):
        for j, b in enumerate(monos):
            prod = tuple(sorted(a + b))
            if len(prod) > spec.max_degree:
                continue
            if spec.nil_squares and len(set(prod)) != len(prod):
                continue
            k = index.get(prod)
            if k is not None:
                tensor[i, j, k] = 1
    labels = tuple(monomial_label(spec, m) for m in monos)
    name = "Z/{}[{}]{}deg<={}".format(
        spec.p, ",".join(spec.generators),
        " nil-squares " if spec.nil_squares else " ", spec.max_degree)
    alg = OmegaAlgebra(name=name, signature=RING_SIGNATURE,
                       ops=LinearOps(spec.p, labels, tensor))
    return validate_algebra(alg, cfg)


# ---------------------------------------------------------------------------
# element expressions


_POLY_TERM = re.compile(r"^\s*(\d+)?\s*\*?\s*([A-Za-z0-9_^*\s]*?)\s*$")


def parse_polynomial(alg: OmegaAlgebra, text: str) -> np.ndarray:
    """Parse ``"a1*a2*b + 2*b"`` into a coefficient vector of ``alg``."""
    ops = alg.ops
    if not isinstance(ops, LinearOps):
        raise ParseError("polynomial expressions need a ring algebra")
    label_index = {lab: i for i, lab in enumerate(ops.labels)}
    vec = np.zeros(ops.dim, dtype=np.int64)
    text = text.strip()
    if text in ("0", ""):
        return vec
    for raw in text.replace("-", "+-").split("+"):
        raw = raw.strip()
        if not raw:
            continue
        sign = 1
        if raw.startswith("-"):
            sign = -1
            raw = raw[1:].strip()
        coeff = 1
        factors = []
        for piece in raw.split("*"):
            piece = piece.strip()
            if not piece:
                continue
            if piece.isdigit():
                coeff *= int(piece)
            else:
                factors.append(piece)
        if not factors:
            raise ParseError(f"constant term {raw!r} not allowed "
                             "(the ring has no unit)")
        mono = _normalise_monomial(factors)
        if mono not in label_index:
            raise ParseError(f"monomial {mono!r} is not a basis monomial "
                             f"of {alg.name}")
        vec[label_index[mono]] = (vec[label_index[mono]]
                                  + sign * coeff) % ops.p
    return vec


def _normalise_monomial(factors: list[str]) -> str:
    expanded = []
    for f in factors:
        if "^" in f:
            base, _, exp = f.partition("^")
            if not exp.isdigit():
                raise ParseError(f"bad exponent in {f!r}")
            expanded.extend([base.strip()] * int(exp))
        else:
            expanded.append(f)
    expanded.sort()
    from collections import Counter
    counts = Counter(expanded)
    parts = []
    for name in sorted(counts):
        k = counts[name]
        parts.append(name if k == 1 else f"{name}^{k}")
    return "*".join(parts)


def parse_element(alg: OmegaAlgebra, expr) -> int | np.ndarray:
    """An element expression: an integer code, or a polynomial string."""
    if isinstance(expr, int):
        if not (0 <= expr < alg.size):
            raise ParseError(f"element code {expr} out of range")
        if alg.is_linear:
            return alg.ops.code_to_vec(expr)
        return expr
    if isinstance(expr, str):
        if alg.is_linear:
            return parse_polynomial(alg, expr)
        if expr.isdigit():
            return parse_element(alg, int(expr))
        if alg.element_names and expr in alg.element_names:
            return alg.element_names.index(expr)
        raise ParseError(f"unknown element {expr!r}")
    raise ParseError(f"cannot interpret element expression {expr!r}")


def named_ideal(alg: OmegaAlgebra, gens,
                config: RunConfig | None = None) -> Ideal:
    """Ideal of the whole algebra generated by element expressions."""
    cfg = resolve(config)
    host = whole_algebra(alg, cfg)
    parsed = [parse_element(alg, g) for g in gens]
    if alg.is_linear:
        data = np.asarray(parsed, dtype=np.int64) if parsed \
            else np.zeros((0, alg.ops.dim), dtype=np.int64)
    else:
        data = np.asarray(parsed, dtype=np.int64)
    return generate_ideal(host, data, cfg)
