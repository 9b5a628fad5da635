"""Hopf decomposition of an atomic system into conservative and dissipative parts.

A cycle returns every atom to itself, so cycles make up the conservative
part.  A bilateral chain never returns; its atom at position 0 is a wandering
set whose iterates ``f^n(W)``, n in Z, tile the chain.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .atomic_system import AtomId, AtomicSystem, MapKind
from .errors import InfiniteWanderingMass, NonInvertibleMap


@dataclass(frozen=True)
class OrbitDecomposition:
    conservative_orbits: tuple[int, ...]
    dissipative_orbits: tuple[int, ...]
    wandering_set: tuple[AtomId, ...]
    wandering_mass: Fraction

    @property
    def dissipative(self) -> bool:
        return not self.conservative_orbits

    def wandering_index(self, x: AtomId) -> int | None:
        """The n with ``x`` in ``f^-n(W)``, or None on the conservative part."""
        if x.orbit in self.conservative_orbits:
            return None
        return -x.position


def _require_bijective(system: AtomicSystem) -> None:
    if not system.bijective:
        raise NonInvertibleMap("the decomposition is defined for bijective maps only")


def hopf_decompose(system: AtomicSystem) -> OrbitDecomposition:
    _require_bijective(system)
    conservative, dissipative = [], []
    for j, orbit in enumerate(system.orbits):
        (conservative if orbit.kind is MapKind.CYCLE else dissipative).append(j)
    W = tuple(AtomId(j, 0) for j in dissipative)
    mass = sum((system.mass(x) for x in W), Fraction(0))
    if dissipative and not mass > 0:
        # unreachable with finitely many chains of positive mass
        raise InfiniteWanderingMass("wandering set has no mass")
    return OrbitDecomposition(tuple(conservative), tuple(dissipative), W, mass)


def is_dissipative(system: AtomicSystem) -> bool:
    """True iff the conservative part is null, i.e. there is no cycle."""
    _require_bijective(system)
    return all(o.kind is not MapKind.CYCLE for o in system.orbits)
