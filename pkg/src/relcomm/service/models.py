"""Pydantic request/response models for the compute service.

Requests carry full input documents (the service is stateless); the
document schemas mirror ``relcomm.documents``.  Responses share one
envelope: ``{"command", "inputs", "result", ...extras, "stats"}``.
"""

from __future__ import annotations

from typing import Annotated, Any, Literal, Union

from pydantic import BaseModel, ConfigDict, Field


class OpTableDoc(BaseModel):
    arity: int
    table: Any


class TableAlgebraDoc(BaseModel):
    kind: Literal["table"]
    name: str = "algebra"
    size: int
    ops: dict[str, OpTableDoc]
    subsets: dict[str, list[int]] = Field(default_factory=dict)


class RingSubsetDoc(BaseModel):
    ideal_of: list[str]


class ZpRingDoc(BaseModel):
    kind: Literal["zp_ring"]
    name: str | None = None
    p: int
    generators: list[str]
    nil_squares: bool = False
    max_degree: int
    subsets: dict[str, RingSubsetDoc] = Field(default_factory=dict)


AlgebraDoc = Annotated[Union[TableAlgebraDoc, ZpRingDoc],
                       Field(discriminator="kind")]


class BasisDoc(BaseModel):
    name: str | None = None
    identities: list[str]


BasisSpec = Union[str, BasisDoc]


class GroupTablesDoc(BaseModel):
    size: int
    mul: list[list[int]]
    inv: list[int]
    name: str = "group"


class SubmoduleDoc(BaseModel):
    K: list[int]
    S: list[int]


class PxmDoc(BaseModel):
    name: str = "precrossed module"
    C: GroupTablesDoc
    G: GroupTablesDoc
    boundary: list[int]
    action: list[list[int]]
    submodules: dict[str, SubmoduleDoc] = Field(default_factory=dict)


class EngineOptions(BaseModel):
    """Optional guard/threading overrides; unset fields keep defaults."""

    model_config = ConfigDict(extra="forbid")

    carrier_cap: int | None = None
    dimension_cap: int | None = None
    oracle_cap: int | None = None
    tuple_cap: int | None = None
    closure_cap: int | None = None
    power_cap: int | None = None
    threads: int | None = None
    seed: int | None = None


class _OptionedRequest(BaseModel):
    options: EngineOptions | None = None


class ValidateRequest(_OptionedRequest):
    algebra: AlgebraDoc


class SatisfiesRequest(_OptionedRequest):
    algebra: AlgebraDoc
    basis: BasisSpec


class ReflectRequest(_OptionedRequest):
    algebra: AlgebraDoc
    basis: BasisSpec


class CommutatorRequest(_OptionedRequest):
    algebra: AlgebraDoc
    left: str = "all"
    right: str = "all"
    basis: BasisSpec | None = None
    higgins: bool = False


class CValuesRequest(_OptionedRequest):
    algebra: AlgebraDoc
    left: str = "all"
    right: str = "all"
    basis: BasisSpec


class CentralRequest(_OptionedRequest):
    algebra: AlgebraDoc
    ideal: str
    basis: BasisSpec
    direct: bool = False


class OracleRequest(_OptionedRequest):
    algebra: AlgebraDoc
    left: str = "all"
    right: str = "all"
    basis: BasisSpec


class ImageConditionRequest(_OptionedRequest):
    algebra: AlgebraDoc
    basis: BasisSpec


class PeifferRequest(_OptionedRequest):
    module: PxmDoc
    left: str = "all"
    right: str = "all"
    crosscheck: bool = True


class PxmConvertRequest(_OptionedRequest):
    """Exactly one of ``module`` (to a table carrier) or ``algebra``
    (a table carrier with unary d and c, to a module) must be given."""

    module: PxmDoc | None = None
    algebra: TableAlgebraDoc | None = None


class MakeRingRequest(_OptionedRequest):
    p: int
    generators: list[str]
    nil_squares: bool = False
    max_degree: int
    name: str | None = None
    subsets: dict[str, RingSubsetDoc] = Field(default_factory=dict)


class MakeGroupRequest(_OptionedRequest):
    kind: str
    name: str | None = None


class DemoRequest(_OptionedRequest):
    pass


class SetReport(BaseModel):
    size: int
    indices: list[int] | None = None
    elements: list[str] | None = None
    basis: list[str] | None = None


class Envelope(BaseModel):
    model_config = ConfigDict(extra="allow")

    command: str
    inputs: dict
    result: Any
    stats: dict = Field(default_factory=dict)


class ErrorBody(BaseModel):
    type: str
    reason: str


class ErrorResponse(BaseModel):
    error: ErrorBody
