"""FastAPI application wrapping the engine.

Every endpoint is stateless: documents come in the request, reports go
out in a ``{"command", "inputs", "result", ..., "stats"}`` envelope.
Engine errors map onto status codes: validation failures 400, size
guards 409, internal invariant violations 500.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from ..algebra import OmegaAlgebra
from ..commutator import (c_values, higgins_commutator, image_condition,
                          is_central, is_central_direct, relative_commutator,
                          universal_oracle)
from ..config import RunConfig, default_config
from ..constructions import TruncatedRingSpec, build_group, build_ring
from ..demos import run_demo
from ..documents import (dump_pxm, dump_table_algebra, dump_ring_document,
                         load_algebra, load_basis, load_pxm)
from ..errors import RelcommError, SizeGuardExceeded, ValidationFailure
from ..pxmod import (is_crossed, peiffer_commutator, peiffer_crosscheck,
                     to_precrossed, to_pxm)
from ..reporting import algebra_summary, commutator_report, set_report
from ..variety import reflection, satisfies
from . import models


def _config_from(options: models.EngineOptions | None) -> RunConfig:
    if options is None:
        return default_config()
    return default_config().with_overrides(
        **options.model_dump(exclude_none=True))


def _status_for(exc: RelcommError) -> int:
    if isinstance(exc, SizeGuardExceeded):
        return 409
    if isinstance(exc, ValidationFailure):
        return 400
    return 500


def create_app() -> FastAPI:
    app = FastAPI(title="relcomm",
                  description="Exact relative commutators of finite "
                              "omega-groups", version="0.1.0")

    @app.exception_handler(RelcommError)
    async def _engine_error(_: Request, exc: RelcommError):
        return JSONResponse(status_code=_status_for(exc),
                            content={"error": {"type": exc.kind,
                                               "reason": exc.reason}})

    @app.get("/health")
    def health():
        return {"status": "ok"}

    @app.post("/validate")
    def validate(req: models.ValidateRequest):
        cfg = _config_from(req.options)
        doc = load_algebra(req.algebra.model_dump(), cfg)
        return models.Envelope(
            command="validate",
            inputs={"algebra": doc.algebra.name},
            result={"valid": True, "algebra": algebra_summary(doc.algebra),
                    "subsets": doc.subset_names()})

    @app.post("/satisfies")
    def satisfies_endpoint(req: models.SatisfiesRequest):
        cfg = _config_from(req.options)
        doc = load_algebra(req.algebra.model_dump(), cfg)
        basis = _basis(req.basis, doc.algebra, cfg)
        value = satisfies(doc.algebra, basis, cfg)
        return models.Envelope(
            command="satisfies",
            inputs={"algebra": doc.algebra.name, "basis": basis.describe()},
            result=value)

    @app.post("/reflect")
    def reflect(req: models.ReflectRequest):
        cfg = _config_from(req.options)
        doc = load_algebra(req.algebra.model_dump(), cfg)
        basis = _basis(req.basis, doc.algebra, cfg)
        target, proj = reflection(doc.algebra, basis, cfg)
        kernel = proj.kernel(cfg)
        result = {
            "algebra": algebra_summary(target),
            "kernel": set_report(kernel, cfg),
            "satisfies_basis": satisfies(target, basis, cfg),
        }
        if not target.is_linear and target.size <= cfg.carrier_cap:
            result["document"] = dump_table_algebra(target, config=cfg)
        return models.Envelope(
            command="reflect",
            inputs={"algebra": doc.algebra.name, "basis": basis.describe()},
            result=result)

    @app.post("/commutator")
    def commutator(req: models.CommutatorRequest):
        cfg = _config_from(req.options)
        doc = load_algebra(req.algebra.model_dump(), cfg)
        m = doc.resolve_ideal(req.left, cfg)
        n = doc.resolve_ideal(req.right, cfg)
        if req.higgins:
            if req.basis is not None:
                raise ValidationFailure(
                    "--higgins and an explicit basis are mutually exclusive")
            rep = higgins_commutator(m, n, cfg)
            basis_desc = "abelian (Higgins)"
        else:
            if req.basis is None:
                raise ValidationFailure(
                    "a basis (or higgins mode) is required")
            basis = _basis(req.basis, doc.algebra, cfg)
            rep = relative_commutator(m, n, basis, cfg)
            basis_desc = basis.describe()
        body = commutator_report(rep, cfg)
        return models.Envelope(
            command="commutator",
            inputs={"algebra": doc.algebra.name, "left": req.left,
                    "right": req.right, "basis": basis_desc},
            result=body["result"], witnesses=body["witnesses"],
            stats=body["stats"])

    @app.post("/cvalues")
    def cvalues(req: models.CValuesRequest):
        cfg = _config_from(req.options)
        doc = load_algebra(req.algebra.model_dump(), cfg)
        m = doc.resolve_ideal(req.left, cfg)
        n = doc.resolve_ideal(req.right, cfg)
        basis = _basis(req.basis, doc.algebra, cfg)
        rep = c_values(m, n, basis, cfg)
        body = commutator_report(rep, cfg)
        return models.Envelope(
            command="cvalues",
            inputs={"algebra": doc.algebra.name, "left": req.left,
                    "right": req.right, "basis": basis.describe()},
            result=body["result"], witnesses=body["witnesses"],
            stats=body["stats"])

    @app.post("/central")
    def central(req: models.CentralRequest):
        cfg = _config_from(req.options)
        doc = load_algebra(req.algebra.model_dump(), cfg)
        n = doc.resolve_ideal(req.ideal, cfg)
        basis = _basis(req.basis, doc.algebra, cfg)
        fn = is_central_direct if req.direct else is_central
        value = fn(n, doc.algebra, basis, cfg)
        return models.Envelope(
            command="central",
            inputs={"algebra": doc.algebra.name, "ideal": req.ideal,
                    "basis": basis.describe(),
                    "method": "direct" if req.direct else "commutator"},
            result=value)

    @app.post("/oracle")
    def oracle(req: models.OracleRequest):
        cfg = _config_from(req.options)
        doc = load_algebra(req.algebra.model_dump(), cfg)
        m = doc.resolve_ideal(req.left, cfg)
        n = doc.resolve_ideal(req.right, cfg)
        basis = _basis(req.basis, doc.algebra, cfg)
        minimum = universal_oracle(m, n, basis, cfg)
        return models.Envelope(
            command="oracle",
            inputs={"algebra": doc.algebra.name, "left": req.left,
                    "right": req.right, "basis": basis.describe()},
            result=set_report(minimum, cfg))

    @app.post("/image-condition")
    def image_cond(req: models.ImageConditionRequest):
        cfg = _config_from(req.options)
        doc = load_algebra(req.algebra.model_dump(), cfg)
        basis = _basis(req.basis, doc.algebra, cfg)
        value = image_condition(doc.algebra, basis, cfg)
        return models.Envelope(
            command="image-condition",
            inputs={"algebra": doc.algebra.name, "basis": basis.describe()},
            result=value)

    @app.post("/peiffer")
    def peiffer(req: models.PeifferRequest):
        cfg = _config_from(req.options)
        doc = load_pxm(req.module.model_dump(), cfg)
        k = doc.resolve(req.left)
        l = doc.resolve(req.right)
        commutator_sub = peiffer_commutator(doc.module, k, l, cfg)
        result = {
            "peiffer": {
                "K": [int(v) for v in commutator_sub.k],
                "K_elements": [doc.module.c_group.element_repr(int(v))
                               for v in commutator_sub.k],
                "S": [0],
            },
            "is_crossed": is_crossed(doc.module),
        }
        if req.crosscheck:
            result["crosscheck"] = peiffer_crosscheck(doc.module, k, l, cfg)
        return models.Envelope(
            command="peiffer",
            inputs={"module": doc.module.name, "left": req.left,
                    "right": req.right},
            result=result)

    @app.post("/pxm-convert")
    def pxm_convert(req: models.PxmConvertRequest):
        cfg = _config_from(req.options)
        if (req.module is None) == (req.algebra is None):
            raise ValidationFailure(
                "give exactly one of 'module' or 'algebra'")
        if req.module is not None:
            doc = load_pxm(req.module.model_dump(), cfg)
            carrier = to_pxm(doc.module, cfg)
            return models.Envelope(
                command="pxm-convert",
                inputs={"module": doc.module.name},
                result={"algebra": algebra_summary(carrier),
                        "document": dump_table_algebra(carrier, config=cfg)})
        adoc = load_algebra(req.algebra.model_dump(), cfg)
        module = to_precrossed(adoc.algebra, cfg)
        return models.Envelope(
            command="pxm-convert",
            inputs={"algebra": adoc.algebra.name},
            result={"module": dump_pxm(module)})

    @app.post("/make-ring")
    def make_ring(req: models.MakeRingRequest):
        cfg = _config_from(req.options)
        spec = TruncatedRingSpec(p=req.p, generators=tuple(req.generators),
                                 nil_squares=req.nil_squares,
                                 max_degree=req.max_degree)
        ring = build_ring(spec, cfg)
        if req.name:
            ring.name = req.name
        subsets = {k: v.ideal_of for k, v in req.subsets.items()}
        doc = dump_ring_document(spec, name=req.name, subsets=subsets)
        load_algebra(doc, cfg)  # subset expressions must parse
        return models.Envelope(
            command="make-ring",
            inputs={"p": req.p, "generators": req.generators,
                    "nil_squares": req.nil_squares,
                    "max_degree": req.max_degree},
            result={"algebra": algebra_summary(ring), "document": doc})

    @app.post("/make-group")
    def make_group(req: models.MakeGroupRequest):
        cfg = _config_from(req.options)
        group = build_group(req.kind, cfg)
        if req.name:
            group.name = req.name
        doc = dump_table_algebra(group, config=cfg)
        return models.Envelope(
            command="make-group",
            inputs={"kind": req.kind},
            result={"algebra": algebra_summary(group), "document": doc})

    @app.post("/demo/{name}")
    def demo(name: str, req: models.DemoRequest | None = None):
        cfg = _config_from(req.options if req else None)
        report = run_demo(name, cfg)
        return models.Envelope(
            command=f"demo {name}",
            inputs={"demo": name},
            result=report)

    return app


def _basis(spec, algebra: OmegaAlgebra, cfg: RunConfig):
    if hasattr(spec, "model_dump"):
        spec = spec.model_dump()
    return load_basis(spec, algebra.signature, cfg)


app = create_app()
