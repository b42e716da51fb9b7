"""Run configuration: size guards, threading, output options.

All closure and enumeration routines take an optional :class:`RunConfig`;
``None`` means :func:`default_config`.  Guards are hard caps: exceeding one
raises :class:`~relcomm.errors.SizeGuardExceeded` rather than degrading.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field, replace

from .errors import SizeGuardExceeded, ValidationError

#: Materialised operation-table algebras may not exceed this many elements.
DEFAULT_CARRIER_CAP = 4096
#: User-supplied linear rings may not exceed this basis dimension.
DEFAULT_DIMENSION_CAP = 24
#: Ideal enumeration / universal-property search carrier cap.
DEFAULT_ORACLE_CAP = 16
#: Total tuples a single identity-instance scan may enumerate.
DEFAULT_TUPLE_CAP = 1 << 28
#: Elements a single subalgebra/ideal closure may collect (virtual products).
DEFAULT_CLOSURE_CAP = 1 << 20
#: Maximum exponent for direct powers.
DEFAULT_POWER_CAP = 3


def _threads_from_env() -> int:
    raw = os.environ.get("OMEGA_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


@dataclass(frozen=True)
class RunConfig:
    carrier_cap: int = DEFAULT_CARRIER_CAP
    dimension_cap: int = DEFAULT_DIMENSION_CAP
    oracle_cap: int = DEFAULT_ORACLE_CAP
    tuple_cap: int = DEFAULT_TUPLE_CAP
    closure_cap: int = DEFAULT_CLOSURE_CAP
    power_cap: int = DEFAULT_POWER_CAP
    threads: int = field(default_factory=_threads_from_env)
    output: str = "text"  # "text" | "json"
    seed: int = 0

    def __post_init__(self) -> None:
        for name in ("carrier_cap", "dimension_cap", "oracle_cap",
                     "tuple_cap", "closure_cap", "power_cap", "threads"):
            if getattr(self, name) <= 0:
                raise ValidationError(f"RunConfig.{name} must be positive")
        if self.output not in ("text", "json"):
            raise ValidationError("RunConfig.output must be 'text' or 'json'")

    def with_overrides(self, **kwargs) -> "RunConfig":
        kwargs = {k: v for k, v in kwargs.items() if v is not None}
        return replace(self, **kwargs) if kwargs else self

    def guard(self, quantity: int, cap_name: str, what: str) -> None:
        cap = getattr(self, cap_name)
        if quantity > cap:
            raise SizeGuardExceeded(
                f"{what} needs {quantity} > {cap_name}={cap}")


_DEFAULT = RunConfig()


def default_config() -> RunConfig:
    return _DEFAULT


def resolve(config: RunConfig | None) -> RunConfig:
    return _DEFAULT if config is None else config
