"""Expansivity of weighted composition operators on L^p(mu) over atomic systems.

For a finite-measure set B the criterion quantity is
``mu_n(f^-n(B)) = ||(C_{w,f})^n chi_B||_p^p``.  The operator is

* expansive iff ``sup_n mu_n(f^-n(B)) = inf`` for every such B;
* average expansive iff the Cesaro means of ``mu_j(f^-j(B))^(1/p)``,
  ``j = -n..n``, are unbounded for every B;
* uniformly expansive iff the sets split into a forward class where
  ``mu_n(f^-n(B)) / mu(B) -> inf`` uniformly and a backward class with the
  mirrored limit.

The positive variants use forward powers only and need no inverse.
"""

from __future__ import annotations

from .atomic_system import AtomicSystem
from .growth import (
    DEFAULT_THRESHOLD,
    GrowthProfile,
    Mode,
    Notion,
    Status,
    Verdict,
    Witness,
    analyze,
    growth_profile,
)

__all__ = [
    "GrowthProfile",
    "Status",
    "Verdict",
    "Witness",
    "analyze_lp",
    "analyze_expansive_lp",
    "analyze_average_expansive_lp",
    "analyze_uniform_expansive_lp",
    "analyze_positive_variants_lp",
    "lp_growth_profile",
]

DEFAULT_HORIZON = 200


def lp_growth_profile(system: AtomicSystem) -> GrowthProfile:
    return growth_profile(system, Mode.LP)


def analyze_lp(system: AtomicSystem, notion: Notion | str, horizon: int = DEFAULT_HORIZON,
               threshold: float = DEFAULT_THRESHOLD) -> Verdict:
    return analyze(system, notion, Mode.LP, horizon, threshold)


def analyze_expansive_lp(system: AtomicSystem, horizon: int = DEFAULT_HORIZON,
                         threshold: float = DEFAULT_THRESHOLD) -> Verdict:
    return analyze_lp(system, Notion.EXPANSIVE, horizon, threshold)


def analyze_average_expansive_lp(system: AtomicSystem, horizon: int = DEFAULT_HORIZON,
                                 threshold: float = DEFAULT_THRESHOLD) -> Verdict:
    return analyze_lp(system, Notion.AVERAGE, horizon, threshold)


def analyze_uniform_expansive_lp(system: AtomicSystem, horizon: int = DEFAULT_HORIZON,
                                 threshold: float = DEFAULT_THRESHOLD) -> Verdict:
    return analyze_lp(system, Notion.UNIFORM, horizon, threshold)


def analyze_positive_variants_lp(system: AtomicSystem, horizon: int = DEFAULT_HORIZON,
                                 notion: Notion | str = Notion.POSITIVE,
                                 threshold: float = DEFAULT_THRESHOLD) -> Verdict:
    notion = Notion(notion)
    if notion.bilateral:
        raise ValueError(f"{notion.value} is not a positive variant")
    return analyze_lp(system, notion, horizon, threshold)
