"""Expansivity on spaces of continuous functions over a discrete orbit space.

With X discrete, the four function spaces are sequence spaces:

    lb         bounded functions, sup norm over all of X
    c0         functions vanishing at infinity, same seminorm
    compact    uniform convergence on compact (= finite) sets
    pointwise  pointwise convergence, also seminorms over finite sets

Singletons ``O = {a}`` form a base of the topology, so the criterion quantity
for a test pair (O, B) at power n is ``|w^(n)(f^-n(a))|`` when ``f^-n(a)`` lies
in B and 0 otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .atomic_system import AtomId, AtomicSystem, cocycle
from .errors import PreconditionFailed
from .growth import DEFAULT_THRESHOLD, Mode, Notion, Verdict, analyze

DEFAULT_HORIZON = 200


class SpaceKind(str, Enum):
    BOUNDED = "lb"
    VANISHING = "c0"
    COMPACT = "compact"
    POINTWISE = "pointwise"

    @property
    def finite_bornology(self) -> bool:
        return self in (SpaceKind.COMPACT, SpaceKind.POINTWISE)


@dataclass(frozen=True)
class TestPair:
    __test__ = False  # not a pytest class

    O: AtomId
    B: frozenset[AtomId] | None = None  # None stands for all of X


def criterion_value(system: AtomicSystem, pair: TestPair, n: int):
    """``||w^(n)||`` over ``B ∩ f^-n(O)``; the sup over the empty set is 0."""
    x = system.shift(pair.O, -n)
    if x is None or (pair.B is not None and x not in pair.B):
        return 0
    return abs(cocycle(system, x, n))


def analyze_cfs(system: AtomicSystem, space: SpaceKind | str, notion: Notion | str,
                horizon: int = DEFAULT_HORIZON, threshold: float = DEFAULT_THRESHOLD,
                test_atoms: list[AtomId] | None = None) -> Verdict:
    """Decide ``notion`` for the operator on the given sequence space.

    On lb and c0 the bornology base is ``{X}``, so the sup-norm rates decide.
    On compact and pointwise every B is finite: a finite B meets ``f^-n(a)``
    for finitely many n along a chain, so only cycles can carry expansivity.
    """
    space = SpaceKind(space)
    return analyze(system, notion, Mode.SUP, horizon, threshold,
                   finite_bornology=space.finite_bornology, test_atoms=test_atoms)


def wandering_window_reduction(system: AtomicSystem, W) -> list[AtomId]:
    """Reduced test family: the singletons inside W.

    Valid when w and 1/w are bounded and the f-iterates of W cover every atom.
    """
    W = sorted(set(W))
    if not system.bijective:
        raise PreconditionFailed("the reduction needs an invertible map")
    if system.has_zero_weight:
        raise PreconditionFailed("1/w is unbounded: some weight is 0")
    covered = {x.orbit for x in W}
    missing = [j for j in range(len(system.orbits)) if j not in covered]
    if missing:
        raise PreconditionFailed(f"iterates of W miss orbit {missing[0]}")
    for x in W:
        system.atom(x.orbit, x.position)
    return W
