"""Loading and dumping the JSON document formats.

Algebra documents::

    {"kind": "table", "name": str, "size": int,
     "ops": {name: {"arity": int, "table": nested int arrays}},
     "subsets": {name: [int, ...]}}

``mul`` (arity 2) and ``inv`` (arity 1) are mandatory; the unit is index 0.
Ring documents::

    {"kind": "zp_ring", "p": int, "generators": [str],
     "nil_squares": bool, "max_degree": int,
     "subsets": {name: {"ideal_of": [polynomial strings]}}}

Basis documents are ``{"name": str, "identities": [s-expressions]}``; the
preset names ``abelian``, ``exp2``, ``cube`` and ``xm`` are always
available.  Precrossed-module documents::

    {"C": group tables, "G": group tables, "boundary": [int],
     "action": [[int]], "submodules": {name: {"K": [int], "S": [int]}}}

Named subsets always denote the ideal their elements generate; the name
``all`` denotes the whole carrier and is always defined.
"""

from __future__ import annotations

import numpy as np

from .algebra import (GROUP_SIGNATURE, OmegaAlgebra, Signature, TableOps,
                      materialize, validate_algebra)
from .config import RunConfig, resolve
from .constructions import TruncatedRingSpec, build_ring, parse_element
from .errors import SchemaError
from .pxmod import PrecrossedModule, Submodule, validate_precrossed
from .sets import Ideal, generate_ideal, whole_algebra, whole_ideal
from .terms import MUL, INV
from .variety import IdentityBasis, PRESET_NAMES, basis_from_strings, \
    preset_basis


def _need(doc: dict, key: str, kind: str):
    if key not in doc:
        raise SchemaError(f"{kind} document missing key {key!r}")
    return doc[key]


class AlgebraDocument:
    """A loaded algebra plus its named subsets (as ideal generators)."""

    def __init__(self, algebra: OmegaAlgebra, subset_gens: dict,
                 source: dict):
        self.algebra = algebra
        self.subset_gens = subset_gens
        self.source = source
        self._cache: dict[str, Ideal] = {}

    def subset_names(self) -> list[str]:
        return ["all", *self.subset_gens.keys()]

    def resolve_ideal(self, name: str,
                      config: RunConfig | None = None) -> Ideal:
        if name in self._cache:
            return self._cache[name]
        cfg = resolve(config)
        if name == "all":
            ideal = whole_ideal(whole_algebra(self.algebra, cfg))
        elif name in self.subset_gens:
            gens = self.subset_gens[name]
            host = whole_algebra(self.algebra, cfg)
            ideal = generate_ideal(host, gens, cfg)
        else:
            raise SchemaError(
                f"unknown subset {name!r}; document defines "
                f"{self.subset_names()}")
        self._cache[name] = ideal
        return ideal


def load_algebra(doc: dict, config: RunConfig | None = None) -> AlgebraDocument:
    cfg = resolve(config)
    if not isinstance(doc, dict):
        raise SchemaError("algebra document must be a JSON object")
    kind = _need(doc, "kind", "algebra")
    if kind == "table":
        return _load_table(doc, cfg)
    if kind == "zp_ring":
        return _load_ring(doc, cfg)
    raise SchemaError(f"unknown algebra kind {kind!r}")


def _load_table(doc: dict, cfg: RunConfig) -> AlgebraDocument:
    size = _need(doc, "size", "table algebra")
    if not isinstance(size, int) or size < 1:
        raise SchemaError("size must be a positive integer")
    ops_doc = _need(doc, "ops", "table algebra")
    if MUL not in ops_doc or INV not in ops_doc:
        raise SchemaError("table documents need ops 'mul' and 'inv'")
    tables = {}
    arities = {}
    for name, spec in ops_doc.items():
        if not isinstance(spec, dict) or "arity" not in spec \
                or "table" not in spec:
            raise SchemaError(f"op {name!r} needs 'arity' and 'table'")
        arity = spec["arity"]
        try:
            table = np.asarray(spec["table"], dtype=np.int64)
        except (TypeError, ValueError) as exc:
            raise SchemaError(f"op {name!r} table is not rectangular: {exc}")
        if table.shape != (size,) * arity:
            raise SchemaError(
                f"op {name!r} table has shape {table.shape}, expected "
                f"{(size,) * arity}")
        tables[name] = table
        arities[name] = arity
    if arities[MUL] != 2 or arities[INV] != 1:
        raise SchemaError("'mul' must have arity 2 and 'inv' arity 1")
    extra = tuple((n, arities[n]) for n in ops_doc if n not in (MUL, INV))
    sig = Signature(extra_ops=extra)
    alg = OmegaAlgebra(
        name=doc.get("name", "algebra"), signature=sig,
        ops=TableOps(size, tables[MUL], tables[INV],
                     {n: tables[n] for n, _ in extra}))
    validate_algebra(alg, cfg)
    subset_gens = {}
    for name, codes in doc.get("subsets", {}).items():
        arr = np.asarray(codes, dtype=np.int64)
        if arr.size and (arr.min() < 0 or arr.max() >= size):
            raise SchemaError(f"subset {name!r} has out-of-range codes")
        subset_gens[name] = arr
    return AlgebraDocument(alg, subset_gens, doc)


def _load_ring(doc: dict, cfg: RunConfig) -> AlgebraDocument:
    try:
        spec = TruncatedRingSpec(
            p=int(_need(doc, "p", "ring")),
            generators=tuple(_need(doc, "generators", "ring")),
            nil_squares=bool(doc.get("nil_squares", False)),
            max_degree=int(_need(doc, "max_degree", "ring")))
    except (TypeError, ValueError) as exc:
        raise SchemaError(f"bad ring document: {exc}")
    alg = build_ring(spec, cfg)
    if "name" in doc:
        alg.name = doc["name"]
    subset_gens = {}
    for name, sub in doc.get("subsets", {}).items():
        if not isinstance(sub, dict) or "ideal_of" not in sub:
            raise SchemaError(
                f"ring subset {name!r} must be {{'ideal_of': [...]}}")
        vecs = [parse_element(alg, expr) for expr in sub["ideal_of"]]
        subset_gens[name] = np.asarray(vecs, dtype=np.int64) if vecs \
            else np.zeros((0, alg.ops.dim), dtype=np.int64)
    return AlgebraDocument(alg, subset_gens, doc)


def dump_table_algebra(alg: OmegaAlgebra, subsets: dict | None = None,
                       config: RunConfig | None = None) -> dict:
    rendered = materialize(alg, resolve(config))
    ops = rendered.ops
    doc = {
        "kind": "table",
        "name": alg.name,
        "size": rendered.size,
        "ops": {
            MUL: {"arity": 2, "table": ops.mul_table.tolist()},
            INV: {"arity": 1, "table": ops.inv_table.tolist()},
        },
    }
    for name, table in ops.extra.items():
        doc["ops"][name] = {"arity": table.ndim, "table": table.tolist()}
    if subsets:
        doc["subsets"] = {k: list(map(int, v)) for k, v in subsets.items()}
    return doc


def dump_ring_document(spec: TruncatedRingSpec, name: str | None = None,
                       subsets: dict | None = None) -> dict:
    doc = {
        "kind": "zp_ring",
        "p": spec.p,
        "generators": list(spec.generators),
        "nil_squares": spec.nil_squares,
        "max_degree": spec.max_degree,
    }
    if name:
        doc["name"] = name
    if subsets:
        doc["subsets"] = {k: {"ideal_of": list(v)} for k, v in subsets.items()}
    return doc


# ---------------------------------------------------------------------------
# bases


def load_basis(spec, signature: Signature,
               config: RunConfig | None = None) -> IdentityBasis:
    """A preset name or a {"name", "identities"} document."""
    if isinstance(spec, str):
        if spec in PRESET_NAMES:
            return preset_basis(spec, signature)
        raise SchemaError(f"unknown basis preset {spec!r}; "
                          f"known presets: {', '.join(PRESET_NAMES)}")
    if isinstance(spec, dict):
        idents = _need(spec, "identities", "basis")
        if not isinstance(idents, list):
            raise SchemaError("basis identities must be a list of strings")
        basis = basis_from_strings(idents, name=spec.get("name"))
        basis.resolve_in(signature)
        return basis
    raise SchemaError("basis must be a preset name or a document")


# ---------------------------------------------------------------------------
# precrossed modules


def _load_group_tables(doc: dict, what: str, cfg: RunConfig) -> OmegaAlgebra:
    size = _need(doc, "size", what)
    mul = np.asarray(_need(doc, "mul", what), dtype=np.int64)
    inv = np.asarray(_need(doc, "inv", what), dtype=np.int64)
    if mul.shape != (size, size) or inv.shape != (size,):
        raise SchemaError(f"{what} tables have wrong shapes")
    alg = OmegaAlgebra(name=doc.get("name", what),
                       signature=GROUP_SIGNATURE,
                       ops=TableOps(size, mul, inv, {}))
    return validate_algebra(alg, cfg)


class PxmDocument:
    def __init__(self, module: PrecrossedModule,
                 submodules: dict[str, Submodule], source: dict):
        self.module = module
        self.submodules = submodules
        self.source = source

    def submodule_names(self) -> list[str]:
        return ["all", *self.submodules.keys()]

    def resolve(self, name: str) -> Submodule:
        from .pxmod import whole_submodule
        if name == "all":
            return whole_submodule(self.module)
        if name in self.submodules:
            return self.submodules[name]
        raise SchemaError(f"unknown submodule {name!r}; document defines "
                          f"{self.submodule_names()}")


def load_pxm(doc: dict, config: RunConfig | None = None) -> PxmDocument:
    cfg = resolve(config)
    if not isinstance(doc, dict):
        raise SchemaError("precrossed-module document must be a JSON object")
    c_group = _load_group_tables(_need(doc, "C", "precrossed module"),
                                 "C group", cfg)
    g_group = _load_group_tables(_need(doc, "G", "precrossed module"),
                                 "G group", cfg)
    boundary = np.asarray(_need(doc, "boundary", "precrossed module"),
                          dtype=np.int64)
    action = np.asarray(_need(doc, "action", "precrossed module"),
                        dtype=np.int64)
    module = PrecrossedModule(c_group=c_group, g_group=g_group,
                              boundary=boundary, action=action,
                              name=doc.get("name", "precrossed module"))
    validate_precrossed(module, cfg)
    subs = {}
    for name, sub in doc.get("submodules", {}).items():
        if not isinstance(sub, dict) or "K" not in sub or "S" not in sub:
            raise SchemaError(
                f"submodule {name!r} must be {{'K': [...], 'S': [...]}}")
        subs[name] = Submodule(np.asarray(sub["K"], dtype=np.int64),
                               np.asarray(sub["S"], dtype=np.int64))
    return PxmDocument(module, subs, doc)


def dump_pxm(module: PrecrossedModule,
             submodules: dict[str, Submodule] | None = None) -> dict:
    def group_doc(g: OmegaAlgebra) -> dict:
        return {"size": g.size,
                "mul": g.ops.mul_table.tolist(),
                "inv": g.ops.inv_table.tolist(),
                "name": g.name}
    doc = {
        "name": module.name,
        "C": group_doc(module.c_group),
        "G": group_doc(module.g_group),
        "boundary": module.boundary.tolist(),
        "action": module.action.tolist(),
    }
    if submodules:
        doc["submodules"] = {
            name: {"K": sub.k.tolist(), "S": sub.s.tolist()}
            for name, sub in submodules.items()}
    return doc
