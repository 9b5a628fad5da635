"""Exponential growth rates along orbit tails and the expansivity decision rules.

Both function-space families reduce to one telescoping identity.  For an atom
``a`` and ``n >= 1`` the criterion quantity equals

    q(a) * exp(h(a-n) + ... + h(a-1))            (forward powers)
    q(a) * exp(-(h(a) + ... + h(a+n-1)))         (backward powers)

with a per-step log gain ``h``:

* on L^p(mu), ``mu_n(f^-n{a})``:  h(i) = p log|w(i)| + log mu(i) - log mu(i+1)
* on sup-norm spaces, ``||w^(n)||`` over ``f^-n{a}``:  h(i) = log|w(i)|

Inside a periodic tail ``h`` sums over one period to a constant ``G``; its sign
(decided exactly for rational data) governs every notion.  The left tail
drives forward powers (``lambda_plus = G_left / period``), the right tail drives
backward powers (``lambda_minus = -G_right / period``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from ._numeric import NEG_INF, LogLinear, exact_abs2, logaddexp
from .atomic_system import AtomId, AtomicSystem, MapKind, _Tail, log_cocycle, log_mu_n
from .errors import NonInvertibleMap, ZeroWeight

DEFAULT_THRESHOLD = 1e6


class Status(str, Enum):
    PROVEN_TRUE = "ProvenTrue"
    PROVEN_FALSE = "ProvenFalse"
    INDICATED = "Indicated"
    UNKNOWN = "Unknown"


class Notion(str, Enum):
    EXPANSIVE = "expansive"
    AVERAGE = "average"
    UNIFORM = "uniform"
    POSITIVE = "positive"
    AVERAGE_POSITIVE = "average_positive"
    UNIFORM_POSITIVE = "uniform_positive"

    @property
    def bilateral(self) -> bool:
        return self in (Notion.EXPANSIVE, Notion.AVERAGE, Notion.UNIFORM)

    @property
    def averaged(self) -> bool:
        return self in (Notion.AVERAGE, Notion.AVERAGE_POSITIVE)

    @property
    def uniform(self) -> bool:
        return self in (Notion.UNIFORM, Notion.UNIFORM_POSITIVE)


class Partition(str, Enum):
    """Which atoms of an orbit go to the forward (+) or backward (-) class."""

    ALL_PLUS = "all_plus"
    ALL_MINUS = "all_minus"
    SPLIT = "split"  # left part forward, right part backward: (-N, N_0)


class Mode(str, Enum):
    LP = "lp"
    SUP = "sup"


@dataclass(frozen=True)
class TailRate:
    side: str
    period: int
    gain: LogLinear | None  # None: the block contains a zero weight
    sign: int | None
    exact: bool

    @property
    def per_step(self) -> float:
        if self.gain is None:
            return NEG_INF
        return self.gain.value() / self.period


@dataclass(frozen=True)
class OrbitRates:
    orbit: int
    kind: MapKind
    left: TailRate | None
    right: TailRate
    zero_weight: bool

    @property
    def lambda_plus(self) -> float | None:
        return None if self.left is None else self.left.per_step

    @property
    def lambda_minus(self) -> float:
        return -self.right.per_step

    def as_dict(self) -> dict:
        return {
            "orbit": self.orbit,
            "kind": self.kind.value,
            "lambda_plus": self.lambda_plus,
            "lambda_minus": self.lambda_minus,
            "exact": (self.left is None or self.left.exact) and self.right.exact,
        }


@dataclass(frozen=True)
class GrowthProfile:
    mode: Mode
    orbits: tuple[OrbitRates, ...]


@dataclass(frozen=True)
class Witness:
    atom: AtomId
    n: int
    log10_value: float


@dataclass(frozen=True)
class Verdict:
    notion: Notion
    status: Status
    horizon: int
    witness: Witness | None = None
    rate_data: tuple[OrbitRates, ...] = ()
    partition: tuple[tuple[int, Partition], ...] | None = None
    reason: str = ""

    @property
    def proven(self) -> bool:
        return self.status in (Status.PROVEN_TRUE, Status.PROVEN_FALSE)


# ---------------------------------------------------------------------------
# rates


def _log_abs_terms(weights, coeff: Fraction) -> LogLinear | None:
    total = LogLinear()
    for w in weights:
        if w == 0:
            return None
        if isinstance(w, complex):
            total = total + LogLinear.of(coeff / 2, exact_abs2(w))
        else:
            total = total + LogLinear.of(coeff, abs(Fraction(w)))
    return total


def _rate(system: AtomicSystem, weights, mass_term: LogLinear, side: str, mode: Mode) -> TailRate:
    coeff = system.p_fraction if mode is Mode.LP else Fraction(1)
    gain = _log_abs_terms(weights, coeff)
    if gain is None:
        return TailRate(side, len(weights), None, -1, True)
    if mode is Mode.LP:
        gain = gain + mass_term
    sign, exact = gain.sign()
    return TailRate(side, len(weights), gain, sign, exact)


def _tail_rate(system: AtomicSystem, tail: _Tail, side: str, mode: Mode) -> TailRate:
    # going outward the masses gain a factor ratio per period; on the left that
    # factor enters h with a plus sign, on the right with a minus sign
    mass = LogLinear.of(1 if side == "left" else -1, tail.ratio)
    return _rate(system, tail.weights, mass, side, mode)


def growth_profile(system: AtomicSystem, mode: Mode | str = Mode.LP) -> GrowthProfile:
    mode = Mode(mode)
    rows = []
    for j, orbit in enumerate(system.orbits):
        lay = system.layout(j)
        zero = any(w == 0 for w in lay.all_weights())
        if orbit.kind is MapKind.CYCLE:
            # masses telescope around a cycle
            r = _rate(system, lay.win_w, LogLinear(), "cycle", mode)
            rows.append(OrbitRates(j, orbit.kind, r, r, zero))
            continue
        left = None if lay.left is None else _tail_rate(system, lay.left, "left", mode)
        right = _tail_rate(system, lay.right, "right", mode)
        rows.append(OrbitRates(j, orbit.kind, left, right, zero))
    return GrowthProfile(mode, tuple(rows))


# ---------------------------------------------------------------------------
# decision rules per orbit


def decide_orbit(rates: OrbitRates, notion: Notion, finite_bornology: bool = False):
    """Return ``(decision, partition)`` with decision True, False or None (undecided).

    ``finite_bornology`` selects the compact/pointwise spaces, where the set B
    of the criterion is finite.
    """
    sL = None if rates.left is None else rates.left.sign
    sR = rates.right.sign
    if not notion.bilateral:
        if rates.kind is MapKind.UNILATERAL or rates.zero_weight:
            # the head of a unilateral chain (or the atom after a zero weight)
            # has no preimage far back, so its forward criterion stays finite
            return False, None
        if finite_bornology and rates.kind is not MapKind.CYCLE:
            return False, None
        if notion is Notion.UNIFORM_POSITIVE:
            if sL in (0, -1) or sR in (0, -1):
                return False, None
            if sL is None or sR is None:
                return None, None
            return True, Partition.ALL_PLUS
        if sL is None:
            return None, None
        return sL == 1, None

    if finite_bornology:
        if rates.kind is not MapKind.CYCLE:
            # a finite B meets f^-n(O) for finitely many n only
            return False, None
        if sL is None:
            return None, None
        if sL == 0:
            return False, None
        return True, (Partition.ALL_PLUS if sL > 0 else Partition.ALL_MINUS)

    if notion is Notion.UNIFORM:
        if sL == 0 or sR == 0:
            return False, None
        if sL == -1 and sR == 1:
            return False, None
        if sL is None or sR is None:
            return None, None
        if sL == 1 and sR == 1:
            return True, Partition.ALL_PLUS
        if sL == -1 and sR == -1:
            return True, Partition.ALL_MINUS
        return True, Partition.SPLIT
    if sL == 1 or sR == -1:
        return True, None
    if sL in (0, -1) and sR in (0, 1):
        return False, None
    return None, None


# ---------------------------------------------------------------------------
# criterion traces over a finite horizon


def log_criterion(system: AtomicSystem, mode: Mode, x: AtomId, n: int) -> float:
    """Natural log of the criterion quantity for the singleton ``{x}`` at power ``n``."""
    y = system.shift(x, -n)
    if y is None:
        return NEG_INF
    if mode is Mode.LP:
        return log_mu_n(system, [y], n)
    return log_cocycle(system, y, n)[0]


def criterion_trace(system: AtomicSystem, mode: Mode, x: AtomId, notion: Notion,
                    horizon: int) -> list[tuple[int, float]]:
    """``(n, log value)`` pairs of the notion's criterion up to the horizon.

    Plain notions trace the quantity itself; averaged notions trace the
    Cesaro means (of p-th roots on L^p).
    """
    scale = float(system.p) if mode is Mode.LP else 1.0
    if not notion.averaged:
        ns = range(-horizon, horizon + 1) if notion.bilateral else range(1, horizon + 1)
        return [(n, log_criterion(system, mode, x, n)) for n in ns]
    out = []
    if notion.bilateral:
        acc = log_criterion(system, mode, x, 0) / scale
        for n in range(1, horizon + 1):
            acc = logaddexp(acc, log_criterion(system, mode, x, n) / scale)
            acc = logaddexp(acc, log_criterion(system, mode, x, -n) / scale)
            out.append((n, acc - math.log(2 * n + 1)))
    else:
        acc = NEG_INF
        for n in range(1, horizon + 1):
            acc = logaddexp(acc, log_criterion(system, mode, x, n - 1) / scale)
            out.append((n, acc - math.log(n)))
    return out


def _to_log10(v: float) -> float:
    return v / math.log(10) if v != NEG_INF else NEG_INF


def _peak(trace) -> tuple[int, float]:
    n, v = max(trace, key=lambda t: (t[1], -abs(t[0])))
    return n, v


def _indicated(system, mode, x, notion, horizon, threshold) -> tuple[bool, Witness]:
    trace = criterion_trace(system, mode, x, notion, horizon)
    base = dict(trace)[1]
    n, v = _peak(trace)
    hit = v != NEG_INF and v > base + math.log(threshold)
    return hit, Witness(x, n, _to_log10(v))


def analyze(system: AtomicSystem, notion: Notion | str, mode: Mode | str, horizon: int,
            threshold: float = DEFAULT_THRESHOLD, finite_bornology: bool = False,
            test_atoms: list[AtomId] | None = None) -> Verdict:
    """Decide one expansivity notion for ``system``.

    Every B in the criterion family contains an atom and the criterion is
    monotone in B, so the plain and averaged notions reduce to singletons.
    For the uniform notions a finite set B is put in the class holding at
    least half of its mass; its ratio is then at least half the smallest
    singleton ratio of that class, which is how per-orbit rate classes
    generate the partition.

    ``test_atoms`` restricts the plain and averaged notions to the singletons
    ``O = {x}`` listed (a reduced test family); all atoms of an orbit share
    its rates, so only the orbits they lie on are examined.
    """
    notion, mode = Notion(notion), Mode(mode)
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    if notion.bilateral:
        if not system.bijective:
            raise NonInvertibleMap(f"{notion.value} needs an invertible operator")
        if system.has_zero_weight:
            raise ZeroWeight(f"{notion.value} needs nonzero weights")
    profile = growth_profile(system, mode)
    decisions = [decide_orbit(r, notion, finite_bornology) for r in profile.orbits]
    if test_atoms is not None and not notion.uniform:
        keep = {x.orbit for x in test_atoms}
        decisions = [d if j in keep else (True, None) for j, d in enumerate(decisions)]

    def witness_for(j: int) -> Witness | None:
        if finite_bornology and system.orbits[j].kind is not MapKind.CYCLE:
            return None
        if notion.uniform:
            return None
        x = system.atom(j, 0)
        n, v = _peak(criterion_trace(system, mode, x, notion, horizon))
        return Witness(x, n, _to_log10(v))

    common = dict(notion=notion, horizon=horizon, rate_data=profile.orbits)
    false_at = next((j for j, (d, _) in enumerate(decisions) if d is False), None)
    if false_at is not None:
        return Verdict(status=Status.PROVEN_FALSE, witness=witness_for(false_at),
                       reason=f"orbit {false_at} fails the criterion", **common)
    if all(d is True for d, _ in decisions):
        partition = None
        if notion.uniform:
            partition = tuple((j, part) for j, (_, part) in enumerate(decisions))
        return Verdict(status=Status.PROVEN_TRUE, witness=witness_for(0), partition=partition,
                       reason="every orbit satisfies the criterion", **common)
    if notion.uniform or finite_bornology:
        return Verdict(status=Status.UNKNOWN, reason="rate tie not decidable", **common)
    witness = None
    for j, (d, _) in enumerate(decisions):
        if d is not None:
            continue
        for x in system.scan_atoms(j):
            hit, wit = _indicated(system, mode, x, notion, horizon, threshold)
            if not hit:
                return Verdict(status=Status.UNKNOWN, witness=wit,
                               reason="no divergence within the horizon", **common)
            witness = witness or wit
    return Verdict(status=Status.INDICATED, witness=witness,
                   reason=f"criterion exceeds {threshold:g} times its value at n = 1", **common)
