"""Relative commutators of ideals, exactly, via a triple-power construction.

For ideals ``M, N`` of a common algebra and a finite identity basis, the
commutator relative to the subvariety the basis defines is the ideal of
``H = M v N`` generated by two families:

* difference instances ``v(m n) v(n)^-1 v(m)^-1`` over all identity
  consequences ``v`` and tuples from ``M`` and ``N``;
* plain instances ``v(p)`` over tuples from ``M ^ N``.

The infinite quantification over consequences is eliminated by building
``T <= H^3``, the subalgebra generated by ``(m, m, e)`` and ``(n, e, n)``:
every element of ``T`` has the shape ``(t(m,n), t(m,1), t(1,n))``, so the
identity-value ideal of ``T`` enumerates exactly all difference instances
via ``(a, b, c) |-> a c^-1 b^-1`` (both inclusions are proved in
``docs/instance-span.md``).  The meet family reduces to basis instances on
``M ^ N`` by the same instance-span argument.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .algebra import OmegaAlgebra, direct_power
from .config import RunConfig, resolve
from .errors import InvariantViolation, ValidationError
from .hom import quotient
from .sets import (Ideal, Subalgebra, generate_ideal, generate_subalgebra,
                   enumerate_ideals, subspace_intersection, trivial_ideal,
                   whole_algebra, whole_ideal, _linear_subalgebra)
from .terms import arity as term_arity
from .variety import (IdentityBasis, _linear_instance_span, _scan_tuples,
                      abelianization_basis, verbal_values)


@dataclass
class TripleAlgebra:
    """T <= H^3 generated by (m, m, e) over M and (n, e, n) over N."""

    host: Subalgebra
    power: OmegaAlgebra
    carrier: Subalgebra
    left: Ideal
    right: Ideal

    @property
    def size(self) -> int:
        return self.carrier.size


@dataclass
class CommutatorReport:
    result: Ideal
    witnesses: list[dict]
    stats: dict


# ---------------------------------------------------------------------------
# hosts and the triple construction


def join_host(m: Ideal, n: Ideal, config: RunConfig | None = None) -> Subalgebra:
    if m.parent is not n.parent:
        raise ValidationError("ideals must live in the same algebra")
    if m.is_linear:
        return _linear_subalgebra(m.parent, np.vstack([m.basis, n.basis]),
                                  config)
    return generate_subalgebra(m.parent,
                               np.concatenate([m.elements, n.elements]),
                               config)


def build_triple(m: Ideal, n: Ideal,
                 config: RunConfig | None = None) -> TripleAlgebra:
    """Close ``{(g,g,e)} ∪ {(h,e,h)}`` under all operations inside H^3.

    Generating sets of M and N suffice: both embeddings are
    homomorphisms, so terms applied to embedded generators realise every
    ``(m, m, e)`` and ``(n, e, n)``.
    """
    cfg = resolve(config)
    host = join_host(m, n, cfg)
    alg = m.parent
    power = direct_power(alg, 3, cfg)
    if m.is_linear:
        q = alg.ops.dim
        rows = []
        for v in m.basis:
            rows.append(np.concatenate([v, v, np.zeros(q, dtype=np.int64)]))
        for v in n.basis:
            rows.append(np.concatenate([v, np.zeros(q, dtype=np.int64), v]))
        seed = np.asarray(rows, dtype=np.int64) if rows \
            else np.zeros((0, 3 * q), dtype=np.int64)
        carrier = generate_subalgebra(power, seed, cfg)
    else:
        gm = m.generating_set(cfg)
        gn = n.generating_set(cfg)
        zeros_m = np.zeros(len(gm), dtype=np.int64)
        zeros_n = np.zeros(len(gn), dtype=np.int64)
        seed = np.concatenate([
            power.ops.encode([gm, gm, zeros_m]),
            power.ops.encode([gn, zeros_n, gn]),
        ])
        carrier = generate_subalgebra(power, seed, cfg)
    return TripleAlgebra(host=host, power=power, carrier=carrier,
                         left=m, right=n)


def triple_coordinate_check(triple: TripleAlgebra) -> bool:
    """Second coordinates lie in M, third in N; generator products glue."""
    if triple.carrier.is_linear:
        q = triple.left.parent.ops.dim
        b = triple.carrier.basis
        return (triple.left.contains_all(b[:, q:2 * q])
                and triple.right.contains_all(b[:, 2 * q:]))
    cols = triple.power.ops.decode(triple.carrier.elements)
    return (triple.left.contains_all(cols[1])
            and triple.right.contains_all(cols[2]))


# ---------------------------------------------------------------------------
# generator bundles


@dataclass
class GeneratorBundle:
    """Commutator generators plus witness metadata and statistics."""

    host: Subalgebra
    codes: np.ndarray | None = None        # table backends
    rows: np.ndarray | None = None         # linear backend
    code_sources: dict = field(default_factory=dict)
    stats: dict = field(default_factory=dict)

    def is_trivial(self) -> bool:
        if self.rows is not None:
            return not self.rows.any()
        return bool(np.all(self.codes == 0))


def _difference_generators(triple: TripleAlgebra, basis: IdentityBasis,
                           cfg: RunConfig) -> GeneratorBundle:
    t0 = time.perf_counter()
    verbal = verbal_values(triple.carrier, basis, cfg)
    t1 = time.perf_counter()
    bundle = GeneratorBundle(host=triple.host)
    alg = triple.left.parent
    if triple.carrier.is_linear:
        q = alg.ops.dim
        rows = verbal.basis
        diff = (rows[:, :q] - rows[:, q:2 * q] - rows[:, 2 * q:]) % alg.ops.p
        bundle.rows = diff
        for r, src in zip(diff, rows):
            if r.any():
                bundle.code_sources[tuple(r)] = {
                    "kind": "commutator-triple",
                    "triple": [alg.ops.poly_str(src[:q]),
                               alg.ops.poly_str(src[q:2 * q]),
                               alg.ops.poly_str(src[2 * q:])],
                }
    else:
        elems = verbal.elements
        a, b, c = triple.power.ops.decode(elems)
        ops = alg.ops
        vals = ops.mul(ops.mul(a, ops.inv(c)), ops.inv(b))
        bundle.codes = np.unique(vals)
        firsts = {}
        for i, v in enumerate(vals):
            v = int(v)
            if v and v not in firsts:
                firsts[v] = i
        for v, i in firsts.items():
            bundle.code_sources[v] = {
                "kind": "commutator-triple",
                "triple": [alg.element_repr(int(a[i])),
                           alg.element_repr(int(b[i])),
                           alg.element_repr(int(c[i]))],
            }
    bundle.stats = {
        "triple_size": triple.size,
        "verbal_size": verbal.size,
        "verbal_ms": round(1000 * (t1 - t0), 3),
    }
    return bundle


def _meet_generators(m: Ideal, n: Ideal, host: Subalgebra,
                     basis: IdentityBasis, cfg: RunConfig) -> GeneratorBundle:
    alg = m.parent
    bundle = GeneratorBundle(host=host)
    if m.is_linear:
        meet_basis = subspace_intersection(m.basis, n.basis, alg.ops.p,
                                           alg.ops.dim)
        meet = Subalgebra(alg, basis=meet_basis)
        span = _linear_instance_span(meet, basis, cfg)
        bundle.rows = span.basis()
        for r in bundle.rows:
            bundle.code_sources[tuple(r)] = {"kind": "meet-instance"}
        bundle.stats = {"meet_size": meet.size}
        return bundle
    meet = np.intersect1d(m.elements, n.elements)
    vals: list[np.ndarray] = []
    from .variety import active_identities
    never = lambda v: np.zeros(np.shape(v), dtype=bool)
    for t in active_identities(alg, basis, cfg):
        a = max(1, term_arity(t))
        got = _scan_tuples(alg, meet, t, a, never, cfg,
                           collect_cap=1 << 62)
        if len(got):
            vals.append(got)
    bundle.codes = np.unique(np.concatenate(vals)) if vals \
        else np.zeros(0, dtype=np.int64)
    for v in bundle.codes:
        if v:
            bundle.code_sources.setdefault(int(v), {"kind": "meet-instance"})
    bundle.stats = {"meet_size": len(meet)}
    return bundle


def _merge_bundles(host: Subalgebra, bundles: list[GeneratorBundle]) -> GeneratorBundle:
    out = GeneratorBundle(host=host)
    if host.is_linear:
        rows = [b.rows for b in bundles if b.rows is not None and len(b.rows)]
        dim = host.parent.ops.dim
        out.rows = np.vstack(rows) if rows \
            else np.zeros((0, dim), dtype=np.int64)
    else:
        codes = [b.codes for b in bundles if b.codes is not None]
        out.codes = np.unique(np.concatenate(codes)) if codes \
            else np.zeros(0, dtype=np.int64)
    for b in bundles:
        for k, v in b.code_sources.items():
            out.code_sources.setdefault(k, v)
        out.stats.update(b.stats)
    return out


def _close_with_witnesses(bundle: GeneratorBundle, cfg: RunConfig):
    """Ideal closure of the generators; record the first generator that
    strictly enlarges the ideal at each growth step."""
    host = bundle.host
    alg = host.parent
    witnesses: list[dict] = []
    if host.is_linear:
        current = trivial_ideal(host)
        taken: list[np.ndarray] = []
        for row in bundle.rows:
            if not row.any() or current.contains(row[None, :])[0]:
                continue
            taken.append(row)
            src = bundle.code_sources.get(tuple(row), {"kind": "generator"})
            witnesses.append(dict(src, value=alg.ops.poly_str(row)))
            current = generate_ideal(host, np.asarray(taken), cfg)
        return current, witnesses
    current = trivial_ideal(host)
    taken_codes: list[int] = []
    for code in bundle.codes:
        code = int(code)
        if code == 0 or current.contains(np.array([code]))[0]:
            continue
        taken_codes.append(code)
        src = bundle.code_sources.get(code, {"kind": "generator"})
        witnesses.append(dict(src, value=alg.element_repr(code),
                              value_code=code))
        current = generate_ideal(host, np.asarray(taken_codes,
                                                  dtype=np.int64), cfg)
    return current, witnesses


def _report(bundle: GeneratorBundle, host: Subalgebra, cfg: RunConfig,
            t_start: float) -> CommutatorReport:
    result, witnesses = _close_with_witnesses(bundle, cfg)
    stats = dict(bundle.stats)
    stats["host_size"] = host.size
    stats["result_size"] = result.size
    stats["total_ms"] = round(1000 * (time.perf_counter() - t_start), 3)
    return CommutatorReport(result=result, witnesses=witnesses, stats=stats)


# ---------------------------------------------------------------------------
# public operations


def c_values(m: Ideal, n: Ideal, basis: IdentityBasis,
             config: RunConfig | None = None) -> CommutatorReport:
    """Ideal of H generated by the difference instances only."""
    cfg = resolve(config)
    t0 = time.perf_counter()
    triple = build_triple(m, n, cfg)
    bundle = _difference_generators(triple, basis, cfg)
    return _report(bundle, triple.host, cfg, t0)


def relative_commutator(m: Ideal, n: Ideal, basis: IdentityBasis,
                        config: RunConfig | None = None) -> CommutatorReport:
    """The commutator of M and N relative to the basis's subvariety."""
    cfg = resolve(config)
    t0 = time.perf_counter()
    triple = build_triple(m, n, cfg)
    diff = _difference_generators(triple, basis, cfg)
    meet = _meet_generators(m, n, triple.host, basis, cfg)
    bundle = _merge_bundles(triple.host, [diff, meet])
    return _report(bundle, triple.host, cfg, t0)


def higgins_commutator(m: Ideal, n: Ideal,
                       config: RunConfig | None = None) -> CommutatorReport:
    """The commutator relative to the abelian subvariety."""
    return relative_commutator(
        m, n, abelianization_basis(m.parent.signature), config)


def _commutator_is_trivial(m: Ideal, n: Ideal, basis: IdentityBasis,
                           cfg: RunConfig) -> bool:
    """Generator-level triviality: no ideal closure required."""
    triple = build_triple(m, n, cfg)
    diff = _difference_generators(triple, basis, cfg)
    if not diff.is_trivial():
        return False
    meet = _meet_generators(m, n, triple.host, basis, cfg)
    return meet.is_trivial()


def is_central(n: Ideal, alg: OmegaAlgebra, basis: IdentityBasis,
               config: RunConfig | None = None) -> bool:
    """Centrality as commutator triviality against the whole algebra."""
    cfg = resolve(config)
    whole = whole_ideal(whole_algebra(alg, cfg))
    return _commutator_is_trivial(n, whole, basis, cfg)


def is_central_direct(n: Ideal, alg: OmegaAlgebra, basis: IdentityBasis,
                      config: RunConfig | None = None) -> bool:
    """Direct centrality test inside A^2.

    P <= A^2 is generated by (n, e) and (a, a); its elements have the
    shape (t(n, a), t(1, a)), so asking every identity value on P to have
    equal coordinates enumerates exactly all values v(n a) v(a)^-1.
    """
    cfg = resolve(config)
    square = direct_power(alg, 2, cfg)
    if alg.is_linear:
        q = alg.ops.dim
        rows = [np.concatenate([v, np.zeros(q, dtype=np.int64)])
                for v in n.basis]
        rows += [np.concatenate([v, v]) for v in np.eye(q, dtype=np.int64)]
        carrier = generate_subalgebra(square, np.asarray(rows), cfg)
        verbal = verbal_values(carrier, basis, cfg)
        diff = (verbal.basis[:, :q] - verbal.basis[:, q:]) % alg.ops.p
        return not diff.any()
    whole = whole_algebra(alg, cfg)
    gn = n.generating_set(cfg)
    ga = whole.generating_set(cfg)
    seed = np.concatenate([
        square.ops.encode([gn, np.zeros(len(gn), dtype=np.int64)]),
        square.ops.encode([ga, ga]),
    ])
    carrier = generate_subalgebra(square, seed, cfg)
    verbal = verbal_values(carrier, basis, cfg)
    p_col, q_col = square.ops.decode(verbal.elements)
    return bool(np.array_equal(p_col, q_col))


def universal_oracle(m: Ideal, n: Ideal, basis: IdentityBasis,
                     config: RunConfig | None = None) -> Ideal:
    """Smallest ideal I of H whose quotient kills the commutator.

    Independent semantics: enumerate every ideal of H, keep those whose
    projection trivialises the commutator of the images, return the
    minimum, and verify it is contained in every kept ideal.
    """
    cfg = resolve(config)
    host = join_host(m, n, cfg)
    cfg.guard(host.size, "oracle_cap", "universal-property search")
    kept: list[Ideal] = []
    for ideal in enumerate_ideals(host, cfg):
        target, proj = quotient(host, ideal, cfg)
        qm = proj.push_ideal(_restrict(m, host), cfg)
        qn = proj.push_ideal(_restrict(n, host), cfg)
        if _commutator_is_trivial(qm, qn, basis, cfg):
            kept.append(ideal)
    if not kept:
        raise InvariantViolation("no ideal trivialises the commutator; "
                                 "the whole host should")
    kept.sort(key=lambda i: i.size)
    minimum = kept[0]
    for other in kept:
        data = minimum.basis if minimum.is_linear else minimum.elements
        if not other.contains_all(data):
            raise InvariantViolation(
                "universal-property oracle found no unique minimum")
    return minimum


def _restrict(ideal: Ideal, host: Subalgebra) -> Ideal:
    """View an ideal of a larger ambient as an ideal of the host."""
    return Ideal(host, elements=ideal.elements, basis=ideal.basis)


def image_condition(alg: OmegaAlgebra, basis: IdentityBasis,
                    config: RunConfig | None = None) -> bool:
    """Difference-instance ideal equals the plain instance-value ideal."""
    cfg = resolve(config)
    whole = whole_ideal(whole_algebra(alg, cfg))
    cv = c_values(whole, whole, basis, cfg)
    vv = verbal_values(whole_algebra(alg, cfg), basis, cfg)
    return cv.result.same_set(vv)
