"""Uniform result rendering for the service, the CLI and the demos.

Sets are reported with their size, sorted element codes (when small
enough to list), human-readable element strings, and, on the linear
backend, the canonical subspace basis as polynomial strings.  All output
is deterministically ordered so reports are byte-stable.
"""

from __future__ import annotations

from .commutator import CommutatorReport
from .config import RunConfig, resolve
from .sets import Subalgebra

MAX_LISTED = 4096


def set_report(subset: Subalgebra, config: RunConfig | None = None) -> dict:
    cfg = resolve(config)
    alg = subset.parent
    out: dict = {"size": int(subset.size)}
    if subset.is_linear:
        out["basis"] = [alg.ops.poly_str(r) for r in subset.basis]
        if subset.size <= MAX_LISTED:
            codes = subset.codes(cfg)
            out["indices"] = [int(c) for c in codes]
            out["elements"] = [alg.element_repr(int(c)) for c in codes]
    else:
        codes = subset.elements
        out["indices"] = [int(c) for c in codes]
        out["elements"] = [alg.element_repr(int(c)) for c in codes]
    return out


def commutator_report(rep: CommutatorReport,
                      config: RunConfig | None = None) -> dict:
    # timings stay on the Python report object; serialised reports must be
    # byte-stable for a fixed configuration
    stats = {k: v for k, v in rep.stats.items() if not k.endswith("_ms")}
    return {
        "result": set_report(rep.result, config),
        "witnesses": rep.witnesses,
        "stats": stats,
    }


def algebra_summary(alg) -> dict:
    out = {
        "name": alg.name,
        "size": int(alg.size),
        "backend": "zp_ring" if alg.is_linear else "table",
        "extra_ops": [list(map(str, (n, a))) for n, a in
                      alg.signature.extra_ops],
    }
    if alg.is_linear:
        out["p"] = int(alg.ops.p)
        out["dimension"] = int(alg.ops.dim)
        out["monomials"] = list(alg.ops.labels)
    return out
