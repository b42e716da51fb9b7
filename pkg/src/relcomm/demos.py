"""Packaged demonstrations.

Each demo is a set of assertions, not a printout: it recomputes the
claimed (in)equalities with the engine, verifies them against independent
oracles where one exists, and raises ``InvariantViolation`` on any
mismatch.  A demo that returns is a passing regression test for the
engine's central reduction.
"""

from __future__ import annotations

import numpy as np

from .algebra import OmegaAlgebra, materialize
from .commutator import (c_values, image_condition, relative_commutator,
                         higgins_commutator)
from .config import RunConfig, resolve
from .constructions import (TruncatedRingSpec, build_group, build_ring,
                            named_ideal, parse_element)
from .errors import InvariantViolation
from .hom import LinearHom, quotient
from .pxmod import (PrecrossedModule, is_crossed, peiffer_commutator,
                    peiffer_crosscheck, to_pxm, whole_submodule)
from .reporting import commutator_report
from .sets import (enumerate_ideals, meet_join_ideals, whole_algebra,
                   whole_ideal)
from .variety import preset_basis


def _check(ok: bool, what: str, failures: list[str]):
    if not ok:
        failures.append(what)


def _finish(report: dict, failures: list[str], headline: str) -> dict:
    if failures:
        raise InvariantViolation(
            "demo failed: " + "; ".join(failures))
    report["headline"] = headline
    report["ok"] = True
    return report


# ---------------------------------------------------------------------------
# counterexample 2: squares basis over Z/2[a], a^4 = 0


def cex2_ring(config: RunConfig | None = None) -> OmegaAlgebra:
    return build_ring(TruncatedRingSpec(p=2, generators=("a",),
                                        nil_squares=False, max_degree=3),
                      resolve(config))


def demo_cex2(config: RunConfig | None = None) -> dict:
    cfg = resolve(config)
    ring = cex2_ring(cfg)
    basis = preset_basis("exp2", ring.signature)
    whole = whole_algebra(ring, cfg)
    R = whole_ideal(whole)
    cv = c_values(R, R, basis, cfg)
    rc = relative_commutator(R, R, basis, cfg)
    a2 = parse_element(ring, "a^2")

    failures: list[str] = []
    in_rc = bool(rc.result.contains(a2[None, :])[0])
    in_cv = bool(cv.result.contains(a2[None, :])[0])
    _check(in_rc, "a^2 must lie in the full commutator", failures)
    _check(not in_cv, "a^2 must avoid the difference-instance ideal",
           failures)
    cv_names = sorted(ring.element_repr(int(c)) for c in cv.result.codes(cfg))
    rc_names = sorted(ring.element_repr(int(c)) for c in rc.result.codes(cfg))
    _check(cv_names == sorted(["0", "a^3"]),
           f"difference ideal is {cv_names}", failures)
    _check(rc_names == sorted(["0", "a^2", "a^3", "a^2 + a^3"]),
           f"full commutator is {rc_names}", failures)
    img = image_condition(ring, basis, cfg)
    _check(img is False, "image condition must fail on this ring", failures)

    # same computation on the rendered operation tables (backend agreement)
    tables = materialize(ring, cfg)
    tbasis = preset_basis("exp2", tables.signature)
    twhole = whole_ideal(whole_algebra(tables, cfg))
    cv_t = c_values(twhole, twhole, tbasis, cfg)
    rc_t = relative_commutator(twhole, twhole, tbasis, cfg)
    agree = (np.array_equal(cv_t.result.elements, cv.result.codes(cfg))
             and np.array_equal(rc_t.result.elements, rc.result.codes(cfg)))
    _check(agree, "table backend disagrees with the linear backend",
           failures)

    report = {
        "ring": ring.name,
        "basis": basis.describe(),
        "c_values": commutator_report(cv, cfg),
        "relative_commutator": commutator_report(rc, cfg),
        "a2_in_relative_commutator": in_rc,
        "a2_in_c_values": in_cv,
        "image_condition": img,
        "backend_agreement": agree,
    }
    return _finish(
        report, failures,
        "a^2 in [R,R]_B: true; a^2 in C_B(R,R): false")


# ---------------------------------------------------------------------------
# counterexample 1: cubes basis over the Z/5 squarefree model


def cex1_model(config: RunConfig | None = None) -> OmegaAlgebra:
    return build_ring(TruncatedRingSpec(p=5, generators=("a1", "a2", "b"),
                                        nil_squares=True, max_degree=3),
                      resolve(config))


def cex1_stage(config: RunConfig | None = None) -> OmegaAlgebra:
    """The same ring before killing generator squares (dimension 19)."""
    return build_ring(TruncatedRingSpec(p=5, generators=("a1", "a2", "b"),
                                        nil_squares=False, max_degree=3),
                      resolve(config))


def demo_cex1(config: RunConfig | None = None) -> dict:
    cfg = resolve(config)
    failures: list[str] = []
    model = cex1_model(cfg)
    basis = preset_basis("cube", model.signature)
    S = named_ideal(model, ["b"], cfg)
    R1 = named_ideal(model, ["a1", "b"], cfg)
    R2 = named_ideal(model, ["a2", "b"], cfg)
    rep1 = relative_commutator(S, R1, basis, cfg)
    rep2 = relative_commutator(S, R2, basis, cfg)
    _check(rep1.result.is_trivial, "[S,R1] must vanish in the model",
           failures)
    _check(rep2.result.is_trivial, "[S,R2] must vanish in the model",
           failures)
    join = meet_join_ideals(R1, R2, cfg)[1]
    rep_join = relative_commutator(S, join, basis, cfg)
    witness = parse_element(model, "a1*a2*b")
    _check(bool(rep_join.result.contains(witness[None, :])[0]),
           "a1*a2*b must lie in [S, R1 v R2]", failures)
    _check(not rep_join.result.is_trivial,
           "[S, R1 v R2] must be nonzero", failures)
    join_additivity_fails = (rep1.result.is_trivial
                             and rep2.result.is_trivial
                             and not rep_join.result.is_trivial)
    _check(join_additivity_fails, "join non-additivity", failures)

    # the quotient staging: the model is the image of the untruncated ring
    # under killing the generator squares
    stage = cex1_stage(cfg)
    sq = named_ideal(stage, ["a1^2", "a2^2", "b^2"], cfg)
    target, proj = quotient(whole_algebra(stage, cfg), sq, cfg)
    iso_ok = _stage_matches_model(model, stage, target, proj)
    _check(iso_ok, "stage ring / squares must be the model", failures)

    sbasis = preset_basis("cube", stage.signature)
    SI = named_ideal(stage, ["b", "a1^2", "a2^2"], cfg)
    R1I = named_ideal(stage, ["a1", "b", "a2^2"], cfg)
    RJI = named_ideal(stage, ["a1", "a2", "b"], cfg)
    up1 = relative_commutator(SI, R1I, sbasis, cfg)
    _check(not up1.result.is_trivial,
           "[S v I, R1 v I] is nonzero upstairs", failures)
    _check(sq.contains_all(up1.result.basis),
           "[S v I, R1 v I] lands inside the squares ideal", failures)
    up1_image = proj.push_ideal(up1.result, cfg)
    _check(up1_image.is_trivial,
           "the quotient kills [S v I, R1 v I]", failures)
    upj = relative_commutator(SI, RJI, sbasis, cfg)
    _check(not sq.contains_all(upj.result.basis),
           "[S v I, R1 v R2 v I] escapes the squares ideal", failures)
    upj_image = proj.push_ideal(upj.result, cfg)
    _check(not upj_image.is_trivial,
           "the joined commutator survives the quotient", failures)

    report = {
        "model": model.name,
        "basis": basis.describe(),
        "S_R1": commutator_report(rep1, cfg),
        "S_R2": commutator_report(rep2, cfg),
        "S_join": commutator_report(rep_join, cfg),
        "witness": "a1*a2*b",
        "join_additivity_fails": join_additivity_fails,
        "stage": {
            "ring": stage.name,
            "quotient_is_model": iso_ok,
            "upstairs_S_R1_size": int(up1.result.size),
            "upstairs_S_R1_in_squares": True,
            "upstairs_S_R1_image_size": int(up1_image.size),
            "upstairs_S_join_size": int(upj.result.size),
            "upstairs_S_join_image_size": int(upj_image.size),
        },
    }
    return _finish(
        report, failures,
        "[S,R1]_B = {0} = [S,R2]_B but a1*a2*b in [S, R1 v R2]_B: "
        "joins are not preserved, and the quotient by the squares ideal "
        "collapses nonzero commutators")


def _stage_matches_model(model: OmegaAlgebra, stage: OmegaAlgebra,
                         target: OmegaAlgebra, proj) -> bool:
    """Map each model monomial through the stage quotient and check the
    induced linear map is a ring isomorphism."""
    stage_labels = {lab: i for i, lab in enumerate(stage.ops.labels)}
    rows = []
    for lab in model.ops.labels:
        if lab not in stage_labels:
            return False
        vec = np.zeros(stage.ops.dim, dtype=np.int64)
        vec[stage_labels[lab]] = 1
        rows.append(proj.apply(vec[None, :])[0])
    matrix = np.asarray(rows, dtype=np.int64)
    if target.ops.dim != model.ops.dim:
        return False
    from .sets import span_basis
    full_rank = len(span_basis(matrix, model.ops.p, target.ops.dim)) \
        == model.ops.dim
    hom = LinearHom(whole_algebra(model), target, matrix,
                    kernel_basis=np.zeros((0, model.ops.dim), dtype=np.int64))
    return full_rank and hom.check()


# ---------------------------------------------------------------------------
# Higgins agreement demo


def _naive_normal_closure(ops, carrier: np.ndarray, gens: np.ndarray) -> np.ndarray:
    """Fixpoint closure under products, inverses and conjugation; written
    independently of the engine's ideal machinery."""
    S = set(int(x) for x in gens) | {0}
    changed = True
    while changed:
        changed = False
        cur = list(S)
        for x in cur:
            ix = int(ops.inv(np.int64(x)))
            if ix not in S:
                S.add(ix)
                changed = True
        cur = list(S)
        for x in cur:
            for y in cur:
                v = int(ops.mul(np.int64(x), np.int64(y)))
                if v not in S:
                    S.add(v)
                    changed = True
        cur = list(S)
        for h in carrier:
            h = np.int64(h)
            for x in cur:
                v = int(ops.mul(ops.mul(h, np.int64(x)), ops.inv(h)))
                if v not in S:
                    S.add(v)
                    changed = True
    return np.asarray(sorted(S), dtype=np.int64)


def _naive_ring_product_ideal(tables: OmegaAlgebra, m: np.ndarray,
                              n: np.ndarray) -> np.ndarray:
    """Ideal generated by all products m*n and n*m, on rendered tables."""
    ops = tables.ops
    prods = set()
    for x in m:
        for y in n:
            prods.add(int(ops.extra["r*"][int(x), int(y)]))
            prods.add(int(ops.extra["r*"][int(y), int(x)]))
    S = set(prods) | {0}
    carrier = range(tables.size)
    changed = True
    while changed:
        changed = False
        cur = list(S)
        for x in cur:
            for y in cur:
                v = int(ops.mul_table[x, y])
                if v not in S:
                    S.add(v)
                    changed = True
        cur = list(S)
        for x in cur:
            for r in carrier:
                for v in (int(ops.extra["r*"][x, r]),
                          int(ops.extra["r*"][r, x])):
                    if v not in S:
                        S.add(v)
                        changed = True
    return np.asarray(sorted(S), dtype=np.int64)


def demo_higgins(config: RunConfig | None = None) -> dict:
    cfg = resolve(config)
    failures: list[str] = []
    group_results = []
    for kind in ("symmetric:3", "dihedral:4", "quaternion"):
        alg = build_group(kind, cfg)
        whole = whole_algebra(alg, cfg)
        ideals = enumerate_ideals(whole, cfg)
        pairs = 0
        for m in ideals:
            for n in ideals:
                rep = higgins_commutator(m, n, cfg)
                me, ne = m.elements, n.elements
                a = np.repeat(me, len(ne))
                b = np.tile(ne, len(me))
                ops = alg.ops
                comms = np.unique(ops.mul(ops.mul(ops.mul(a, b), ops.inv(a)),
                                          ops.inv(b)))
                host = rep.result.ambient
                oracle = _naive_normal_closure(ops, host.elements, comms)
                if not np.array_equal(rep.result.elements, oracle):
                    failures.append(
                        f"{kind}: engine != normal closure for sizes "
                        f"{m.size},{n.size}")
                pairs += 1
        group_results.append({"group": kind, "ideals": len(ideals),
                              "pairs": pairs})

    ring = cex2_ring(cfg)
    tables = materialize(ring, cfg)
    whole_t = whole_algebra(tables, cfg)
    ideals_t = enumerate_ideals(whole_t, cfg)
    ring_pairs = 0
    for m in ideals_t:
        for n in ideals_t:
            rep = higgins_commutator(m, n, cfg)
            oracle = _naive_ring_product_ideal(tables, m.elements, n.elements)
            if not np.array_equal(rep.result.elements, oracle):
                failures.append(
                    f"ring: engine != product ideal for sizes "
                    f"{m.size},{n.size}")
            ring_pairs += 1

    report = {
        "groups": group_results,
        "ring": {"name": ring.name, "ideals": len(ideals_t),
                 "pairs": ring_pairs},
    }
    return _finish(report, failures,
                   "abelian-basis commutators equal Higgins commutators on "
                   "every ideal pair (groups and rings)")


# ---------------------------------------------------------------------------
# Peiffer demo and the shared precrossed corpus


def _conjugation_module(alg: OmegaAlgebra, name: str) -> PrecrossedModule:
    n = alg.size
    ops = alg.ops
    action = np.zeros((n, n), dtype=np.int64)
    idx = np.arange(n)
    for g in range(n):
        action[g] = ops.mul(ops.mul(np.int64(g), idx), ops.inv(np.int64(g)))
    return PrecrossedModule(c_group=alg, g_group=alg,
                            boundary=idx.copy(), action=action, name=name)


def _trivial_module(c: OmegaAlgebra, g: OmegaAlgebra, name: str) -> PrecrossedModule:
    action = np.tile(np.arange(c.size, dtype=np.int64), (g.size, 1))
    boundary = np.zeros(c.size, dtype=np.int64)
    return PrecrossedModule(c_group=c, g_group=g, boundary=boundary,
                            action=action, name=name)


def c4_over_c2_module() -> PrecrossedModule:
    """C4 over C2: the generator of C2 inverts C4; boundary is onto."""
    c4 = build_group("cyclic:4")
    c2 = build_group("cyclic:2")
    action = np.array([[0, 1, 2, 3], [0, 3, 2, 1]], dtype=np.int64)
    boundary = np.array([0, 1, 0, 1], dtype=np.int64)
    return PrecrossedModule(c_group=c4, g_group=c2, boundary=boundary,
                            action=action, name="C4 over C2 (inversion)")


def standard_pxm_corpus() -> list[PrecrossedModule]:
    """At least ten precrossed modules with semidirect carrier <= 64."""
    c1 = build_group("cyclic:1")
    c2 = build_group("cyclic:2")
    c3 = build_group("cyclic:3")
    c4 = build_group("cyclic:4")
    c8 = build_group("cyclic:8")
    v4 = build_group("cyclic:2xcyclic:2")
    s3 = build_group("symmetric:3")
    d4 = build_group("dihedral:4")
    q8 = build_group("quaternion")

    swap = np.array([[0, 1, 2, 3], [0, 2, 1, 3]], dtype=np.int64)
    swap_module = PrecrossedModule(
        c_group=v4, g_group=c2, boundary=np.zeros(4, dtype=np.int64),
        action=swap, name="V4 over C2 (swap)")
    inversion_nodel = PrecrossedModule(
        c_group=c4, g_group=c2, boundary=np.zeros(4, dtype=np.int64),
        action=np.array([[0, 1, 2, 3], [0, 3, 2, 1]], dtype=np.int64),
        name="C4 over C2 (inversion, zero boundary)")
    return [
        _trivial_module(c2, c2, "C2 over C2 (trivial, crossed)"),
        c4_over_c2_module(),
        _trivial_module(s3, c1, "S3 over 1"),
        _trivial_module(d4, c1, "D4 over 1"),
        _trivial_module(q8, c1, "Q8 over 1"),
        swap_module,
        inversion_nodel,
        _conjugation_module(c3, "C3 conjugation"),
        _conjugation_module(c4, "C4 conjugation"),
        _conjugation_module(s3, "S3 conjugation"),
        _conjugation_module(c8, "C8 conjugation"),
    ]


def demo_peiffer(config: RunConfig | None = None) -> dict:
    cfg = resolve(config)
    failures: list[str] = []
    rows = []
    corpus = standard_pxm_corpus()
    for x in corpus:
        carrier = to_pxm(x, cfg)
        whole = whole_submodule(x)
        peiffer = peiffer_commutator(x, whole, whole, cfg)
        crossed = is_crossed(x)
        ok = peiffer_crosscheck(x, whole, whole, cfg)
        if not ok:
            failures.append(f"crosscheck failed on {x.name}")
        if crossed and len(peiffer.k) != 1:
            failures.append(f"crossed module {x.name} has nontrivial "
                            "Peiffer commutator")
        rows.append({"module": x.name, "carrier_size": int(carrier.size),
                     "crossed": crossed,
                     "peiffer_size": int(len(peiffer.k)),
                     "crosscheck": ok})
    # the two required reference points
    c4c2 = [r for r in rows if r["module"].startswith("C4 over C2 (inversion)")]
    _check(any(r["peiffer_size"] == 2 and not r["crossed"] for r in c4c2),
           "the C4/C2 example must have Peiffer commutator {1, c^2}",
           failures)
    _check(any(r["crossed"] and r["peiffer_size"] == 1 for r in rows),
           "a crossed module with trivial Peiffer commutator must appear",
           failures)
    _check(len(rows) >= 10, "corpus must contain at least ten modules",
           failures)
    report = {"modules": rows, "count": len(rows)}
    return _finish(report, failures,
                   "engine commutators with the crossed-module basis match "
                   "Peiffer commutators on the whole corpus")


DEMOS = {
    "cex1": demo_cex1,
    "cex2": demo_cex2,
    "higgins": demo_higgins,
    "peiffer": demo_peiffer,
}


def run_demo(name: str, config: RunConfig | None = None) -> dict:
    if name not in DEMOS:
        from .errors import ParseError
        raise ParseError(f"unknown demo {name!r}; "
                         f"known: {', '.join(sorted(DEMOS))}")
    return DEMOS[name](config)
