"""Ready-made systems: pure weighted shifts and discretized translations."""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Sequence

from .atomic_system import AtomicSystem, MapKind, Orbit, TailSpec


def weighted_shift(left: Sequence, right: Sequence, window: Mapping[int, object] | None = None,
                   p=1, exact: bool = True, description: str = "") -> AtomicSystem:
    """Bilateral weighted backward shift on l^p(Z) (counting measure).

    ``left`` repeats periodically over positions -1, -2, ...; ``right`` over
    0, 1, ...; ``window`` overrides single positions.
    """
    one = Fraction(1)
    orbit = Orbit(
        MapKind.BILATERAL,
        forward=TailSpec(period=len(right), periodic_weights=tuple(right)),
        backward=TailSpec(period=len(left), periodic_weights=tuple(left)),
        overrides=tuple((k, w, one) for k, w in sorted((window or {}).items())),
    )
    return AtomicSystem((orbit,), p=Fraction(p) if not isinstance(p, float) else p,
                        exact=exact, description=description)


def discretized_translation(left_weight, right_weight, cells: int = 4, p=1,
                            exact: bool = True) -> AtomicSystem:
    """Translation ``phi -> w(x) phi(x + 1)`` on L^p(R) over cells of width 1/cells.

    The unit translation moves a cell ``cells`` steps, so the cells split into
    ``cells`` chains, one per residue, each atom of mass 1/cells.  The weight
    is ``left_weight`` for x < 0 and ``right_weight`` for x >= 0.
    """
    mass = Fraction(1, cells)
    orbit = Orbit(
        MapKind.BILATERAL,
        forward=TailSpec(periodic_weights=(right_weight,), periodic_masses=(mass,)),
        backward=TailSpec(periodic_weights=(left_weight,), periodic_masses=(mass,)),
    )
    return AtomicSystem((orbit,) * cells, p=Fraction(p) if not isinstance(p, float) else p,
                        exact=exact, description=f"translation on R discretized into {cells} cells per unit")
