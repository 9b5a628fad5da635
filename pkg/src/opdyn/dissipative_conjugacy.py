"""Conjugating a dissipative weighted composition operator to a pure composition.

With wandering set W (position 0 of every chain) each atom ``x`` at position
``k`` lies in ``f^-n(W)`` for exactly one ``n = -k``.  Put

    nu({x}) = |w^(n)(x)|^p mu({x})        transport(x) = 1 / w^(n)(x)

Multiplying by the transport is an isometry ``Pi: L^p(mu) -> L^p(nu)`` with
``Pi o C_{w,f} = C_f o Pi``.  Along a chain nu changes by the factor
``exp(-h)`` per step, h being the L^p log gain of :mod:`opdyn.growth`, so in
each periodic tail nu is geometric and its total is a closed-form series.

If all chains grow at the same rates (bounded distortion), the averages over
``f^k(W)`` give a factor map ``Gamma`` onto l^p(Z) intertwining ``C_f`` with a
weighted backward shift.  Here the shift acts as
``(B_u y)(k) = u_{k+1} y(k+1)``, the indexing under which
``Gamma o C_f = B_u o Gamma`` holds for ``u_k = (nu(f^(k-1) W) / nu(f^k W))^(1/p)``.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from ._numeric import LogLinear, log_fraction, logsumexp, safe_exp
from .atomic_system import (
    AtomId,
    AtomicSystem,
    MapKind,
    Orbit,
    SampleFunction,
    TailSpec,
    apply_operator,
    cocycle,
    log_cocycle,
    mu_n,
    norm_pp,
)
from .errors import DistortionUnbounded, NotDissipative, VerificationFailed, ZeroWeight
from .growth import Mode, Status, growth_profile
from .orbit_hopf import OrbitDecomposition, hopf_decompose

INF = float("inf")
WITNESS_STEPS = (8, 16, 32, 64)


# ---------------------------------------------------------------------------
# the measure nu in closed form


def _exact(system: AtomicSystem) -> bool:
    return system.exact_arithmetic


def nu_of(system: AtomicSystem, x: AtomId):
    """``nu({x})``; exact for rational systems with integer p."""
    n = -x.position
    if _exact(system):
        return abs(cocycle(system, x, n)) ** int(system.p) * system.mass(x)
    return safe_exp(log_nu(system, x))


def log_nu(system: AtomicSystem, x: AtomId) -> float:
    la, _ = log_cocycle(system, x, -x.position)
    return float(system.p) * la + system.log_mass(x)


def transport_of(system: AtomicSystem, x: AtomId):
    return 1 / cocycle(system, x, -x.position)


def _tail_ratio(system: AtomicSystem, j: int, side: str):
    """Factor by which nu changes per period moving outward along a tail."""
    lay = system.layout(j)
    tail = lay.left if side == "left" else lay.right
    if _exact(system):
        prod = Fraction(1)
        for w in tail.weights:
            prod *= abs(w)
        prod **= int(system.p)
        return prod * tail.ratio if side == "left" else tail.ratio / prod
    s = sum(math.log(abs(w)) for w in tail.weights) * float(system.p)
    lr = log_fraction(tail.ratio)
    return safe_exp(s + lr if side == "left" else lr - s)


def _chain_total(system: AtomicSystem, j: int, finite: bool):
    """``nu`` of the whole chain ``j`` (window plus two geometric tails)."""
    if not finite:
        return INF
    lay = system.layout(j)
    PL, PR = lay.left.period, lay.right.period
    nu = lambda k: nu_of(system, AtomId(j, k))
    zero = Fraction(0) if _exact(system) else 0.0
    window = sum((nu(k) for k in range(lay.lo, lay.hi)), zero)
    right = sum((nu(k) for k in range(lay.hi, lay.hi + PR)), zero)
    left = sum((nu(k) for k in range(lay.lo - PL, lay.lo)), zero)
    return (window + right / (1 - _tail_ratio(system, j, "right"))
            + left / (1 - _tail_ratio(system, j, "left")))


def _chain_finiteness(system: AtomicSystem) -> dict[int, bool | None]:
    """Per chain: is its nu-total finite?  None when the rate sign is undecided."""
    out = {}
    for row in growth_profile(system, Mode.LP).orbits:
        sL, sR = row.left.sign, row.right.sign
        if sL == -1 and sR == 1:
            out[row.orbit] = True
        elif sL in (0, 1) or sR in (0, -1):
            out[row.orbit] = False
        else:
            out[row.orbit] = None
    return out


def _check_dissipative(system: AtomicSystem, decomposition: OrbitDecomposition | None):
    decomposition = decomposition or hopf_decompose(system)
    if not decomposition.dissipative:
        raise NotDissipative(
            f"orbit {decomposition.conservative_orbits[0]} is a cycle (conservative part)")
    if system.has_zero_weight:
        raise ZeroWeight("the conjugacy needs an invertible operator")
    return decomposition


# ---------------------------------------------------------------------------
# bounded distortion


@dataclass(frozen=True)
class DistortionReport:
    K: Fraction | float | None  # None: unbounded
    witnesses: tuple[tuple[int, float], ...]
    exact: bool

    @property
    def bounded(self) -> bool:
        return self.K is not None


def _log_level(system: AtomicSystem, chains, k: int) -> float:
    return logsumexp(log_nu(system, AtomId(j, k)) for j in chains)


def _level(system: AtomicSystem, chains, k: int):
    """``nu(f^k(W))``."""
    if _exact(system):
        return sum((nu_of(system, AtomId(j, k)) for j in chains), Fraction(0))
    return safe_exp(_log_level(system, chains, k))


def _spread(system: AtomicSystem, chains, k: int):
    """max over x in W of max(r, 1/r), r = [nu(f^k x)/nu(x)] * [nu(W)/nu(f^k W)]."""
    if _exact(system):
        base, level = _level(system, chains, 0), _level(system, chains, k)
        worst = Fraction(1)
        for j in chains:
            r = nu_of(system, AtomId(j, k)) / nu_of(system, AtomId(j, 0)) * base / level
            worst = max(worst, r, 1 / r)
        return worst
    lb, lk = _log_level(system, chains, 0), _log_level(system, chains, k)
    worst = 0.0
    for j in chains:
        lr = log_nu(system, AtomId(j, k)) - log_nu(system, AtomId(j, 0)) + lb - lk
        worst = max(worst, abs(lr))
    return safe_exp(worst)


def _nu_rate(system: AtomicSystem, j: int, side: str) -> LogLinear:
    row = growth_profile(system, Mode.LP).orbits[j]
    tail = row.left if side == "left" else row.right
    return tail.gain.scale(Fraction(1, tail.period))


def _k_range(system: AtomicSystem, chains) -> range:
    lays = [system.layout(j) for j in chains]
    L = 1
    for lay in lays:
        for tail in (lay.left, lay.right):
            L = L * tail.period // math.gcd(L, tail.period)
    lo = min(lay.lo for lay in lays) - L - 1
    hi = max(lay.hi for lay in lays) + L + 1
    return range(lo, hi + 1)


def check_bounded_distortion(system: AtomicSystem,
                             decomposition: OrbitDecomposition | None = None) -> DistortionReport:
    """Distortion constant K of the wandering set, or unbounded.

    For B inside W the ratio ``nu(f^k B)/nu(B)`` is a nu-weighted average of
    singleton ratios, so singletons give the extremes.  Chains whose tails
    shrink or grow at different exponential rates make the spread diverge;
    with equal rates the spread is periodic outside the windows and its sup
    is attained over one common period past them.
    """
    decomposition = _check_dissipative(system, decomposition)
    chains = decomposition.dissipative_orbits
    exact = True
    differs = {"left": False, "right": False}
    for side in differs:
        rates = [_nu_rate(system, j, side) for j in chains]
        for r in rates[1:]:
            sign, ok = (r - rates[0]).sign()
            exact = exact and ok
            if sign:
                differs[side] = True
    if differs["left"] or differs["right"]:
        direction = 1 if differs["right"] else -1
        witnesses = tuple((direction * s, float(_spread(system, chains, direction * s)))
                          for s in WITNESS_STEPS)
        return DistortionReport(None, witnesses, exact)
    K = max(_spread(system, chains, k) for k in _k_range(system, chains))
    return DistortionReport(K, (), exact)


def nu_system(system: AtomicSystem, decomposition: OrbitDecomposition | None = None) -> AtomicSystem:
    """The unweighted system ``(X, nu, f, 1)`` with nu written as tail data."""
    decomposition = _check_dissipative(system, decomposition)
    as_mass = (lambda v: v) if _exact(system) else (lambda v: Fraction(v))
    orbits = []
    for j in decomposition.dissipative_orbits:
        lay = system.layout(j)
        nu = lambda k: as_mass(nu_of(system, AtomId(j, k)))
        fwd = TailSpec(
            transient=tuple((1, nu(k)) for k in range(0, lay.hi)),
            period=lay.right.period,
            periodic_weights=(1,) * lay.right.period,
            mass_ratio=as_mass(_tail_ratio(system, j, "right")),
            periodic_masses=tuple(nu(lay.hi + t) for t in range(lay.right.period)),
        )
        bwd = TailSpec(
            transient=tuple((1, nu(-1 - k)) for k in range(0, -lay.lo)),
            period=lay.left.period,
            periodic_weights=(1,) * lay.left.period,
            mass_ratio=as_mass(_tail_ratio(system, j, "left")),
            periodic_masses=tuple(nu(lay.lo - 1 - t) for t in range(lay.left.period)),
        )
        orbits.append(Orbit(MapKind.BILATERAL, fwd, bwd))
    return AtomicSystem(tuple(orbits), p=system.p, scalar_field="real", exact=system.exact,
                        description="nu-measure system derived from " + (system.description or "input"))


# ---------------------------------------------------------------------------
# chaos


@dataclass(frozen=True)
class ChaosClassification:
    nu_finite: bool
    devaney: Status
    mixing: Status
    frequently_hypercyclic: Status
    frequently_recurrent: Status
    hypercyclic: Status
    recurrent: Status
    devaney_criterion: Status
    equivalences_note: str


_NOTE_BOUNDED = ("bounded distortion: frequent hypercyclicity, frequent recurrence and Devaney "
                 "chaos coincide; hypercyclicity is equivalent to recurrence")
_NOTE_UNBOUNDED = ("distortion unbounded: frequent recurrence is left undecided; "
                   "hypercyclicity is equivalent to recurrence")


def _devaney_criterion(finiteness: dict[int, bool | None]) -> Status:
    """Atomic form of the Devaney criterion.

    For an atom x the orbit sum ``sum_n nu(f^n {x})`` is the nu-total of its
    chain.  A finite-measure set B can drop finitely many atoms at nu-cost
    below epsilon, so the criterion holds iff every chain has finite total:
    a single atom on a chain of infinite total cannot be excised.
    """
    values = list(finiteness.values())
    if all(v is True for v in values):
        return Status.PROVEN_TRUE
    if any(v is False for v in values):
        return Status.PROVEN_FALSE
    return Status.UNKNOWN


def _classify(finiteness, distortion: DistortionReport) -> ChaosClassification:
    nu_finite = all(v is True for v in finiteness.values())
    criterion = _devaney_criterion(finiteness)
    if nu_finite:
        devaney = mixing = fhc = Status.PROVEN_TRUE
    else:
        devaney, mixing = criterion, Status.UNKNOWN
        fhc = Status.UNKNOWN
    fr = Status.UNKNOWN
    if distortion.bounded:
        fhc = fr = devaney
    hyper = Status.PROVEN_TRUE if Status.PROVEN_TRUE in (devaney, mixing) else Status.UNKNOWN
    note = _NOTE_BOUNDED if distortion.bounded else _NOTE_UNBOUNDED
    return ChaosClassification(nu_finite, devaney, mixing, fhc, fr, hyper, hyper, criterion, note)


# ---------------------------------------------------------------------------
# the package


@dataclass(frozen=True)
class ConjugacyPackage:
    decomposition: OrbitDecomposition
    nu: dict[AtomId, Fraction | float]
    transport: dict[AtomId, Fraction | float | complex]
    u: dict[int, Fraction | float]
    distortion: DistortionReport
    nu_total: Fraction | float
    chaos: ChaosClassification
    chain_totals: dict[int, Fraction | float] = field(default_factory=dict)

    @property
    def distortion_K(self):
        return self.distortion.K

    @property
    def nu_finite(self) -> bool:
        return self.nu_total != INF

    def nu_at(self, system: AtomicSystem, x: AtomId):
        v = self.nu.get(x)
        return nu_of(system, x) if v is None else v

    def transport_at(self, system: AtomicSystem, x: AtomId):
        v = self.transport.get(x)
        return transport_of(system, x) if v is None else v


def u_from_nu(system: AtomicSystem, chains, k: int):
    """``u_k = (nu(f^(k-1) W) / nu(f^k W))^(1/p)``."""
    if _exact(system):
        ratio = _level(system, chains, k - 1) / _level(system, chains, k)
        return ratio if system.p == 1 else float(ratio) ** (1 / float(system.p))
    lr = _log_level(system, chains, k - 1) - _log_level(system, chains, k)
    return math.exp(lr / float(system.p))


def u_from_mu(system: AtomicSystem, chains, k: int):
    """``u_k`` from ``mu_{-k+1}(f^(k-1) W) / mu_{-k}(f^k W)`` evaluated through mu_n."""
    top = mu_n(system, [AtomId(j, k - 1) for j in chains], -(k - 1))
    bottom = mu_n(system, [AtomId(j, k) for j in chains], -k)
    ratio = top / bottom
    if isinstance(ratio, Fraction) and system.p == 1:
        return ratio
    return float(ratio) ** (1 / float(system.p))


def build_conjugacy(system: AtomicSystem, decomposition: OrbitDecomposition | None = None,
                    horizon: int = 200) -> ConjugacyPackage:
    decomposition = _check_dissipative(system, decomposition)
    chains = decomposition.dissipative_orbits
    finiteness = _chain_finiteness(system)
    totals = {j: _chain_total(system, j, finiteness[j] is True) for j in chains}
    zero = Fraction(0) if _exact(system) else 0.0
    nu_total = INF if any(v == INF for v in totals.values()) else sum(totals.values(), zero)
    nu, transport = {}, {}
    for j in chains:
        lay = system.layout(j)
        for k in range(lay.lo - lay.left.period, lay.hi + lay.right.period):
            x = AtomId(j, k)
            nu[x] = nu_of(system, x)
            transport[x] = transport_of(system, x)
    ks = _k_range(system, chains)
    u = {k: u_from_nu(system, chains, k) for k in ks}
    distortion = check_bounded_distortion(system, decomposition)
    chaos = _classify(finiteness, distortion)
    return ConjugacyPackage(decomposition, nu, transport, u, distortion, nu_total, chaos, totals)


def classify_chaos(package: ConjugacyPackage, system: AtomicSystem,
                   horizon: int = 200) -> ChaosClassification:
    _check_dissipative(system, package.decomposition)
    return _classify(_chain_finiteness(system), package.distortion)


def apply_pi(package: ConjugacyPackage, system: AtomicSystem, phi: SampleFunction,
             direction: str = "forward") -> SampleFunction:
    if direction not in ("forward", "inverse"):
        raise ValueError("direction must be 'forward' or 'inverse'")
    out = {}
    for x, v in phi.values.items():
        t = package.transport_at(system, x)
        out[x] = v * t if direction == "forward" else v / t
    return SampleFunction(out)


def compose_f(system: AtomicSystem, psi: SampleFunction) -> SampleFunction:
    """Pure composition ``psi o f``."""
    out = {}
    for y, v in psi.values.items():
        x = system.shift(y, -1)
        if x is not None:
            out[x] = v
    return SampleFunction(out)


# ---------------------------------------------------------------------------
# verification


@dataclass(frozen=True)
class VerificationReport:
    samples: int
    seed: int
    max_isometry_deviation: float
    max_intertwining_deviation: float
    max_inverse_deviation: float
    exact: bool

    @property
    def max_deviation(self) -> float:
        return max(self.max_isometry_deviation, self.max_intertwining_deviation,
                   self.max_inverse_deviation)


def _rel(a, b) -> float:
    if a == b:
        return 0.0
    scale = max(abs(a), abs(b))
    return float(abs(a - b) / scale)


def random_sample(system: AtomicSystem, chains, rng: random.Random) -> SampleFunction:
    j = rng.choice(list(chains))
    lay = system.layout(j)
    radius = min(max(lay.hi - lay.lo, 4), 10)
    lo, hi = lay.lo - radius, lay.hi + radius
    size = rng.randint(1, 8)
    values = {}
    for pos in rng.sample(range(lo, hi + 1), min(size, hi - lo + 1)):
        if system.exact:
            v = Fraction(rng.choice([-1, 1]) * rng.randint(1, 9), rng.randint(1, 9))
        elif system.scalar_field == "complex":
            v = complex(rng.uniform(-1, 1), rng.uniform(-1, 1)) or 1.0
        else:
            v = rng.uniform(-1, 1) or 1.0
        values[AtomId(j, pos)] = v
    return SampleFunction(values)


def _compare_functions(a: SampleFunction, b: SampleFunction):
    worst, where = 0.0, None
    for x in sorted(set(a.values) | set(b.values)):
        d = _rel(a[x], b[x])
        if d > worst:
            worst, where = d, x
    return worst, where


def verify_conjugacy(package: ConjugacyPackage, system: AtomicSystem, samples: int = 100,
                     seed: int = 0, tolerance: float = 1e-10,
                     intertwining_tolerance: float = 1e-12) -> VerificationReport:
    """Check isometry, intertwining and invertibility of Pi on seeded samples."""
    if samples < 1:
        raise ValueError("samples must be >= 1")
    exact = _exact(system)
    if exact:
        tolerance = intertwining_tolerance = 0.0
    rng = random.Random(seed)
    chains = package.decomposition.dissipative_orbits
    worst = {"isometry": 0.0, "intertwining": 0.0, "inverse": 0.0}
    for _ in range(samples):
        phi = random_sample(system, chains, rng)
        pphi = apply_pi(package, system, phi)

        d = _rel(norm_pp(system, pphi, masses=lambda x: package.nu_at(system, x)),
                 norm_pp(system, phi))
        if d > tolerance:
            raise VerificationFailed("Pi is not an isometry", atom=phi.support[0],
                                     check="isometry", deviation=d)
        worst["isometry"] = max(worst["isometry"], d)

        lhs = apply_pi(package, system, apply_operator(system, phi, 1))
        d, x = _compare_functions(lhs, compose_f(system, pphi))
        if d > intertwining_tolerance:
            raise VerificationFailed("Pi C_{w,f} differs from C_f Pi", atom=x,
                                     check="intertwining", deviation=d)
        worst["intertwining"] = max(worst["intertwining"], d)

        d, x = _compare_functions(apply_pi(package, system, pphi, "inverse"), phi)
        if d > intertwining_tolerance:
            raise VerificationFailed("Pi^-1 Pi is not the identity", atom=x,
                                     check="inverse", deviation=d)
        worst["inverse"] = max(worst["inverse"], d)
    return VerificationReport(samples, seed, worst["isometry"], worst["intertwining"],
                              worst["inverse"], exact)


# ---------------------------------------------------------------------------
# the weighted shift factor


@dataclass(frozen=True)
class ShiftFactor:
    u: dict[int, Fraction | float]
    u_at: Callable[[int], Fraction | float]
    gamma: Callable[[SampleFunction], dict[int, Fraction | float | complex]]
    description: str

    def shift(self, y: dict[int, object]) -> dict[int, object]:
        """``(B_u y)(k) = u_{k+1} y(k+1)``."""
        return {k - 1: self.u_at(k) * v for k, v in y.items()}


def shift_factor(package: ConjugacyPackage, system: AtomicSystem,
                 k_window: range | None = None) -> ShiftFactor:
    if not package.distortion.bounded:
        raise DistortionUnbounded("no shift factor without bounded distortion")
    chains = package.decomposition.dissipative_orbits
    W = package.decomposition.wandering_set
    mass_W = package.decomposition.wandering_mass
    ks = k_window if k_window is not None else _k_range(system, chains)
    u = {k: u_from_nu(system, chains, k) for k in ks}

    def u_at(k: int):
        return u[k] if k in u else u_from_nu(system, chains, k)

    def gamma(psi: SampleFunction) -> dict[int, object]:
        """``Gamma(psi)(k) = nu(f^k W)^(1/p) / mu(W) * sum over x in W of psi(f^k x) mu({x})``."""
        sums: dict[int, object] = {}
        for y, v in psi.values.items():
            if y.orbit in chains:
                x = AtomId(y.orbit, 0)
                sums[y.position] = sums.get(y.position, 0) + v * system.mass(x)
        out = {}
        for k, s in sums.items():
            level = _level(system, chains, k)
            if isinstance(level, Fraction) and system.p == 1:
                scale = level / mass_W
            else:
                scale = float(level) ** (1 / float(system.p)) / float(mass_W)
            out[k] = scale * s
        return out

    desc = (f"Gamma(psi)(k) = nu(f^k W)^(1/p) / mu(W) * sum_(x in W) psi(f^k x) mu(x); "
            f"W = {[str(x) for x in W]}; (B_u y)(k) = u_(k+1) y(k+1)")
    return ShiftFactor(u, u_at, gamma, desc)


@dataclass(frozen=True)
class FactorReport:
    samples: int
    max_deviation: float


def verify_shift_factor(package: ConjugacyPackage, system: AtomicSystem, samples: int = 50,
                        seed: int = 0, tolerance: float = 1e-10) -> FactorReport:
    """Check ``Gamma C_f = B_u Gamma`` and ``(Gamma Pi) C_{w,f} = B_u (Gamma Pi)``."""
    factor = shift_factor(package, system)
    rng = random.Random(seed)
    chains = package.decomposition.dissipative_orbits
    worst = 0.0
    for _ in range(samples):
        phi = random_sample(system, chains, rng)
        pairs = [
            (factor.gamma(compose_f(system, phi)), factor.shift(factor.gamma(phi))),
            (factor.gamma(apply_pi(package, system, apply_operator(system, phi, 1))),
             factor.shift(factor.gamma(apply_pi(package, system, phi)))),
        ]
        for lhs, rhs in pairs:
            for k in sorted(set(lhs) | set(rhs)):
                d = _rel(lhs.get(k, 0), rhs.get(k, 0))
                if d > tolerance:
                    raise VerificationFailed("Gamma does not intertwine with B_u",
                                             atom=AtomId(chains[0], k), check="factor", deviation=d)
                worst = max(worst, d)
    return FactorReport(samples, worst)
