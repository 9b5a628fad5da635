"""Dynamics of weighted composition operators on atomic measure and sequence spaces."""

__version__ = "0.1.0"

from .atomic_system import (  # noqa: E402
    AtomId,
    AtomicSystem,
    MapKind,
    Orbit,
    SampleFunction,
    TailSpec,
    apply_operator,
    cocycle,
    mu_n,
    validate,
)
from .errors import OpdynError  # noqa: E402

__all__ = [
    "AtomId",
    "AtomicSystem",
    "MapKind",
    "OpdynError",
    "Orbit",
    "SampleFunction",
    "TailSpec",
    "apply_operator",
    "cocycle",
    "mu_n",
    "validate",
]
