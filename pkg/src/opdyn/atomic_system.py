"""Weighted composition systems on countable atomic measure spaces.

Atoms live on finitely many orbits of the map ``f``.  An orbit is one of

* a bilateral chain: positions in Z, ``f`` moves position ``k`` to ``k + 1``;
* a cycle of length L: positions taken modulo L;
* a unilateral chain: positions in N_0, ``f(k) = k + 1`` (injective, not onto).

Weights and masses along an orbit are presented as a finite window plus an
eventually periodic tail on each open end.  Inside a tail the masses are
multiplied by ``mass_ratio`` once per period, so every quantity the analyses
need has a closed form.

The operator is ``C(phi) = w * (phi o f)`` and its n-th power acts by
``(C^n phi)(x) = w^(n)(x) * phi(f^n(x))``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Union

from ._numeric import NEG_INF, log_fraction, logsumexp, safe_exp
from .errors import NonInvertibleMap, UnboundedWeight, ZeroWeight

Scalar = Union[Fraction, float, complex]


class MapKind(str, Enum):
    BILATERAL = "bilateral"
    CYCLE = "cycle"
    UNILATERAL = "unilateral"


@dataclass(frozen=True, order=True)
class AtomId:
    orbit: int
    position: int

    def __str__(self) -> str:
        return f"({self.orbit},{self.position})"


@dataclass(frozen=True)
class TailSpec:
    """One open end of an orbit: transient entries, then a periodic block.

    Entry ``k`` of the tail (k = 0, 1, ...) is ``transient[k]`` while
    ``k < len(transient)``; afterwards, with ``k - len(transient) = q*period + r``,
    the weight is ``periodic_weights[r]`` and the mass is
    ``periodic_masses[r] * mass_ratio**q``.
    """

    transient: tuple[tuple[Scalar, Fraction], ...] = ()
    period: int = 1
    periodic_weights: tuple[Scalar, ...] = (1,)
    mass_ratio: Fraction = Fraction(1)
    periodic_masses: tuple[Fraction, ...] | None = None

    def __post_init__(self) -> None:
        if self.period < 1:
            raise ValueError("period must be a positive integer")
        if len(self.periodic_weights) != self.period:
            raise ValueError("periodic_weights must have length equal to period")
        if self.periodic_masses is not None and len(self.periodic_masses) != self.period:
            raise ValueError("periodic_masses must have length equal to period")
        if not Fraction(self.mass_ratio) > 0:
            raise ValueError("mass_ratio must be positive")
        for _, m in self.transient:
            if not Fraction(m) > 0:
                raise ValueError("atom masses must be positive")
        for m in self.block_masses:
            if not m > 0:
                raise ValueError("atom masses must be positive")

    @property
    def block_masses(self) -> tuple[Fraction, ...]:
        if self.periodic_masses is None:
            return (Fraction(1),) * self.period
        return tuple(Fraction(m) for m in self.periodic_masses)

    def entry(self, k: int) -> tuple[Scalar, Fraction]:
        if k < len(self.transient):
            w, m = self.transient[k]
            return w, Fraction(m)
        q, r = divmod(k - len(self.transient), self.period)
        return self.periodic_weights[r], self.block_masses[r] * Fraction(self.mass_ratio) ** q


@dataclass(frozen=True)
class Orbit:
    kind: MapKind
    forward: TailSpec
    backward: TailSpec | None = None
    length: int | None = None
    # (position, weight, mass) triples replacing the tail data
    overrides: tuple[tuple[int, Scalar, Fraction], ...] = ()

    def __post_init__(self) -> None:
        if self.kind is MapKind.BILATERAL and self.backward is None:
            raise ValueError("a bilateral chain needs a backward tail")
        if self.kind is not MapKind.BILATERAL and self.backward is not None:
            raise ValueError(f"a {self.kind.value} orbit has no backward tail")
        if self.kind is MapKind.CYCLE:
            if self.length is None or self.length < 1:
                raise ValueError("a cycle needs a positive length")
        elif self.length is not None:
            raise ValueError("length applies to cycles only")
        for pos, _, m in self.overrides:
            if not Fraction(m) > 0:
                raise ValueError("atom masses must be positive")
            if self.kind is MapKind.UNILATERAL and pos < 0:
                raise ValueError("unilateral chains have no negative positions")
            if self.kind is MapKind.CYCLE and not 0 <= pos < self.length:
                raise ValueError("cycle override outside 0..length-1")


@dataclass(frozen=True)
class _Tail:
    weights: tuple
    masses: tuple[Fraction, ...]
    ratio: Fraction

    @property
    def period(self) -> int:
        return len(self.weights)

    def weight(self, t: int):
        return self.weights[t % self.period]

    def mass(self, t: int) -> Fraction:
        q, r = divmod(t, self.period)
        return self.masses[r] * self.ratio ** q

    def log_mass(self, t: int) -> float:
        q, r = divmod(t, self.period)
        return log_fraction(self.masses[r]) + q * log_fraction(self.ratio)

    def advanced(self, d: int) -> "_Tail":
        P = self.period
        w = tuple(self.weights[(d + r) % P] for r in range(P))
        m = tuple(self.masses[(d + r) % P] * self.ratio ** ((d + r) // P) for r in range(P))
        return _Tail(w, m, self.ratio)


def _prefix(values, zero):
    out = [zero]
    for v in values:
        out.append(out[-1] + v)
    return out


def _prefix_prod(values):
    out = [Fraction(1)]
    for v in values:
        out.append(out[-1] * v)
    return out


class _Layout:
    """Canonical form of one orbit: explicit window ``[lo, hi)`` plus tails.

    The left tail is indexed by ``t = lo - 1 - pos`` and the right tail by
    ``t = pos - hi``.  Cycles keep all ``L`` entries in the window.
    """

    def __init__(self, orbit: Orbit, convert, complex_field: bool, exact: bool):
        self.kind = orbit.kind
        self.complex_field = complex_field
        self.exact = exact
        if orbit.kind is MapKind.CYCLE:
            L = orbit.length
            entries = {k: orbit.forward.entry(k) for k in range(L)}
            lo, hi = 0, L
            left = right = None
        else:
            fw = orbit.forward
            entries = {k: (w, Fraction(m)) for k, (w, m) in enumerate(fw.transient)}
            hi = len(fw.transient)
            right = _Tail(tuple(fw.periodic_weights), fw.block_masses, Fraction(fw.mass_ratio))
            if orbit.kind is MapKind.BILATERAL:
                bw = orbit.backward
                for k, (w, m) in enumerate(bw.transient):
                    entries[-1 - k] = (w, Fraction(m))
                lo = -len(bw.transient)
                left = _Tail(tuple(bw.periodic_weights), bw.block_masses, Fraction(bw.mass_ratio))
            else:
                lo, left = 0, None
            positions = [pos for pos, _, _ in orbit.overrides]
            new_hi = max([hi] + [pos + 1 for pos in positions])
            for pos in range(hi, new_hi):
                entries[pos] = (right.weight(pos - hi), right.mass(pos - hi))
            right = right.advanced(new_hi - hi)
            hi = new_hi
            if left is not None:
                new_lo = min([lo] + positions)
                for pos in range(new_lo, lo):
                    entries[pos] = (left.weight(lo - 1 - pos), left.mass(lo - 1 - pos))
                left = left.advanced(lo - new_lo)
                lo = new_lo
        for pos, w, m in orbit.overrides:
            entries[pos] = (w, Fraction(m))

        self.lo, self.hi = lo, hi
        self.win_w = [convert(entries[pos][0]) for pos in range(lo, hi)]
        self.win_m = [entries[pos][1] for pos in range(lo, hi)]
        self.left = None if left is None else _Tail(tuple(convert(w) for w in left.weights),
                                                    left.masses, left.ratio)
        self.right = None if right is None else _Tail(tuple(convert(w) for w in right.weights),
                                                      right.masses, right.ratio)
        for w in self.all_weights():
            if not math.isfinite(abs(w)):
                raise UnboundedWeight(f"non-finite weight {w!r}")
        self._series = {key: self._build(fn) for key, fn in self._quantities().items()}
        if exact:
            nz = lambda ws: [w if w != 0 else Fraction(1) for w in ws]
            self._prod = self._build_prod(nz)

    # -- per-weight quantities summed along ranges -------------------------
    def _quantities(self):
        def logabs(ws):
            return [math.log(abs(w)) if w != 0 else 0.0 for w in ws]

        def zeros(ws):
            return [1 if w == 0 else 0 for w in ws]

        if self.complex_field:
            def phase(ws):
                return [cmath.phase(w) if w != 0 else 0.0 for w in ws]
        else:
            def phase(ws):
                return [1 if w < 0 else 0 for w in ws]
        return {"logabs": logabs, "zeros": zeros, "phase": phase}

    def _build(self, fn):
        parts = {"win": _prefix(fn(self.win_w), 0)}
        for name, tail in (("left", self.left), ("right", self.right)):
            if tail is not None:
                pre = _prefix(fn(tail.weights), 0)
                parts[name] = (pre, pre[-1])
        if self.kind is MapKind.CYCLE:
            pre = parts["win"]
            parts["cyc"] = (pre, pre[-1])
        return parts

    def _build_prod(self, nz):
        parts = {"win": _prefix_prod(nz(self.win_w))}
        for name, tail in (("left", self.left), ("right", self.right)):
            if tail is not None:
                pre = _prefix_prod(nz(tail.weights))
                parts[name] = (pre, pre[-1])
        if self.kind is MapKind.CYCLE:
            parts["cyc"] = (parts["win"], parts["win"][-1])
        return parts

    @staticmethod
    def _periodic(pre, total, s, e, mul=False):
        P = len(pre) - 1

        def S(t):
            q, r = divmod(t, P)
            return total ** q * pre[r] if mul else q * total + pre[r]

        return S(e) / S(s) if mul else S(e) - S(s)

    def _range(self, parts, a: int, b: int, mul: bool):
        if a >= b:
            return Fraction(1) if mul else 0
        if self.kind is MapKind.CYCLE:
            pre, tot = parts["cyc"]
            return self._periodic(pre, tot, a, b, mul)
        acc = Fraction(1) if mul else 0
        if a < self.lo:
            if self.left is None:
                raise NonInvertibleMap("range extends before the head of a unilateral chain")
            pre, tot = parts["left"]
            v = self._periodic(pre, tot, self.lo - min(b, self.lo), self.lo - a, mul)
            acc = acc * v if mul else acc + v
        s, e = max(a, self.lo), min(b, self.hi)
        if s < e:
            pre = parts["win"]
            v = pre[e - self.lo] / pre[s - self.lo] if mul else pre[e - self.lo] - pre[s - self.lo]
            acc = acc * v if mul else acc + v
        if b > self.hi:
            pre, tot = parts["right"]
            v = self._periodic(pre, tot, max(a, self.hi) - self.hi, b - self.hi, mul)
            acc = acc * v if mul else acc + v
        return acc

    def range_sum(self, key: str, a: int, b: int):
        """Sum of quantity ``key`` over positions ``a <= pos < b``."""
        return self._range(self._series[key], a, b, mul=False)

    def range_product(self, a: int, b: int) -> Fraction:
        """Exact product of the nonzero weights over positions ``a <= pos < b``."""
        return self._range(self._prod, a, b, mul=True)

    # -- pointwise data ---------------------------------------------------
    def _locate(self, pos: int):
        if self.kind is MapKind.CYCLE:
            return "win", pos % (self.hi - self.lo)
        if pos < self.lo:
            if self.left is None:
                raise IndexError(pos)
            return "left", self.lo - 1 - pos
        if pos >= self.hi:
            return "right", pos - self.hi
        return "win", pos - self.lo

    def weight(self, pos: int):
        where, t = self._locate(pos)
        if where == "win":
            return self.win_w[t]
        return (self.left if where == "left" else self.right).weight(t)

    def mass(self, pos: int) -> Fraction:
        where, t = self._locate(pos)
        if where == "win":
            return self.win_m[t]
        return (self.left if where == "left" else self.right).mass(t)

    def log_mass(self, pos: int) -> float:
        where, t = self._locate(pos)
        if where == "win":
            return log_fraction(self.win_m[t])
        return (self.left if where == "left" else self.right).log_mass(t)

    def all_weights(self):
        yield from self.win_w
        for tail in (self.left, self.right):
            if tail is not None:
                yield from tail.weights

    def scan_positions(self) -> range:
        """Positions covering the window and one full period of each tail."""
        if self.kind is MapKind.CYCLE:
            return range(self.lo, self.hi)
        start = self.lo if self.left is None else self.lo - self.left.period - 1
        return range(start, self.hi + self.right.period + 1)


@dataclass(frozen=True)
class AtomicSystem:
    """The 5-tuple (X, power set, mu, f, w) plus the exponent p.

    ``exact`` switches weights to rationals; combined with an integer ``p``
    every mass, cocycle and norm is then computed without rounding.
    """

    orbits: tuple[Orbit, ...]
    p: Fraction | float = Fraction(1)
    scalar_field: str = "real"
    exact: bool = False
    claims_invertible: bool | None = None
    description: str = ""

    def __post_init__(self) -> None:
        if not self.orbits:
            raise ValueError("at least one orbit is required")
        if not float(self.p) >= 1:
            raise ValueError("p must be >= 1")
        if self.scalar_field not in ("real", "complex"):
            raise ValueError("scalar_field must be 'real' or 'complex'")
        if self.exact and self.scalar_field != "real":
            raise ValueError("exact mode needs real rational weights")

    def _convert(self, w):
        if isinstance(w, complex) and self.scalar_field == "real":
            if w.imag != 0:
                raise ValueError("complex weight in a real system")
            w = w.real
        if self.exact:
            return Fraction(w)
        if self.scalar_field == "complex":
            return complex(w)
        return float(w)

    @cached_property
    def _layouts(self) -> tuple[_Layout, ...]:
        return tuple(_Layout(o, self._convert, self.scalar_field == "complex", self.exact)
                     for o in self.orbits)

    def layout(self, orbit: int) -> _Layout:
        return self._layouts[orbit]

    @property
    def p_fraction(self) -> Fraction:
        return Fraction(self.p)

    @property
    def integer_p(self) -> bool:
        return self.p_fraction.denominator == 1

    @property
    def exact_arithmetic(self) -> bool:
        return self.exact and self.integer_p

    @property
    def bijective(self) -> bool:
        return all(o.kind is not MapKind.UNILATERAL for o in self.orbits)

    @cached_property
    def has_zero_weight(self) -> bool:
        return any(w == 0 for lay in self._layouts for w in lay.all_weights())

    @property
    def invertible(self) -> bool:
        if self.claims_invertible is not None:
            return self.claims_invertible
        return self.bijective and not self.has_zero_weight

    def unit(self) -> Scalar:
        if self.exact:
            return Fraction(1)
        return complex(1) if self.scalar_field == "complex" else 1.0

    # -- atoms and the map f ----------------------------------------------
    def atom(self, orbit: int, position: int) -> AtomId:
        o = self.orbits[orbit]
        if o.kind is MapKind.CYCLE:
            position %= o.length
        elif o.kind is MapKind.UNILATERAL and position < 0:
            raise IndexError(f"unilateral chain {orbit} has no position {position}")
        return AtomId(orbit, position)

    def shift(self, x: AtomId, n: int) -> AtomId | None:
        """``f^n(x)``; for ``n < 0`` the unique preimage, or ``None`` if there is none."""
        o = self.orbits[x.orbit]
        pos = x.position + n
        if o.kind is MapKind.CYCLE:
            return AtomId(x.orbit, pos % o.length)
        if o.kind is MapKind.UNILATERAL and pos < 0:
            return None
        return AtomId(x.orbit, pos)

    def weight(self, x: AtomId) -> Scalar:
        return self._layouts[x.orbit].weight(x.position)

    def mass(self, x: AtomId) -> Fraction:
        return self._layouts[x.orbit].mass(x.position)

    def log_mass(self, x: AtomId) -> float:
        return self._layouts[x.orbit].log_mass(x.position)

    def scan_atoms(self, orbit: int) -> list[AtomId]:
        return [self.atom(orbit, k) for k in self._layouts[orbit].scan_positions()]


@dataclass(frozen=True)
class SampleFunction:
    """A finitely supported scalar function on atoms."""

    values: Mapping[AtomId, Scalar] = field(default_factory=dict)

    @classmethod
    def indicator(cls, atoms: Iterable[AtomId], value: Scalar = 1) -> "SampleFunction":
        return cls({a: value for a in atoms})

    def __getitem__(self, atom: AtomId) -> Scalar:
        return self.values.get(atom, 0)

    @property
    def support(self) -> list[AtomId]:
        return sorted(self.values)


@dataclass(frozen=True)
class BoundednessCertificate:
    c: float
    c_tilde: float | None
    c_witness: AtomId
    c_tilde_witness: AtomId | None = None


# ---------------------------------------------------------------------------
# cocycle, measures, operator powers


def _cocycle_parts(system: AtomicSystem, x: AtomId, n: int):
    lay = system.layout(x.orbit)
    k = x.position
    if n >= 0:
        a, b, inverted = k, k + n, False
    else:
        if system.orbits[x.orbit].kind is MapKind.UNILATERAL:
            raise NonInvertibleMap("negative powers need a bijective map")
        a, b, inverted = k + n, k, True
    zeros = lay.range_sum("zeros", a, b)
    if inverted and zeros:
        raise ZeroWeight(f"w^({n}) at {x} divides by a zero weight")
    return lay, a, b, inverted, zeros


def log_cocycle(system: AtomicSystem, x: AtomId, n: int) -> tuple[float, float]:
    """``(log|w^(n)(x)|, arg w^(n)(x))``; the modulus is ``-inf`` for a zero product."""
    if n == 0:
        return 0.0, 0.0
    lay, a, b, inverted, zeros = _cocycle_parts(system, x, n)
    if zeros:
        return NEG_INF, 0.0
    la = lay.range_sum("logabs", a, b)
    ph = lay.range_sum("phase", a, b)
    if not system.scalar_field == "complex":
        ph = math.pi * (ph % 2)
    return (-la, -ph) if inverted else (la, ph)


def cocycle(system: AtomicSystem, x: AtomId, n: int) -> Scalar:
    """The cocycle ``w^(n)(x)``; ``w^(0) = 1`` and negative ``n`` uses ``1/(w o f^-1)``."""
    if n == 0:
        return system.unit()
    lay, a, b, inverted, zeros = _cocycle_parts(system, x, n)
    if zeros:
        return 0 * system.unit()
    if system.exact:
        prod = lay.range_product(a, b)
        return 1 / prod if inverted else prod
    la = lay.range_sum("logabs", a, b)
    ph = lay.range_sum("phase", a, b)
    if inverted:
        la, ph = -la, -ph
    if system.scalar_field == "complex":
        return cmath.exp(complex(la, ph))
    return math.copysign(safe_exp(la), -1.0 if ph % 2 else 1.0)


def log_mu_n(system: AtomicSystem, atoms: Iterable[AtomId], n: int) -> float:
    p = float(system.p)
    terms = []
    for x in atoms:
        la, _ = log_cocycle(system, x, n)
        terms.append(p * la + system.log_mass(x) if la != NEG_INF else NEG_INF)
    return logsumexp(terms)


def mu_n(system: AtomicSystem, atoms: Iterable[AtomId], n: int):
    """``mu_n(B) = sum over x in B of |w^(n)(x)|^p mu({x})``.

    Exact (a Fraction) in exact mode with integer p, otherwise a float built
    through log-sum-exp.
    """
    atoms = list(atoms)
    if system.exact_arithmetic:
        p = int(system.p)
        return sum((abs(cocycle(system, x, n)) ** p * system.mass(x) for x in atoms), Fraction(0))
    return safe_exp(log_mu_n(system, atoms, n))


def apply_operator(system: AtomicSystem, phi: SampleFunction, n: int) -> SampleFunction:
    """``(C_{w,f})^n phi``, with value ``w^(n)(x) * phi(f^n(x))`` at ``x``."""
    if n < 0 and not system.bijective:
        raise NonInvertibleMap("negative powers need a bijective map")
    out: dict[AtomId, Scalar] = {}
    for y, v in phi.values.items():
        x = system.shift(y, -n)
        if x is None:
            continue
        val = cocycle(system, x, n) * v
        if val != 0:
            out[x] = val
    return SampleFunction(out)


def norm_pp(system: AtomicSystem, phi: SampleFunction, masses=None):
    """``||phi||_p^p``; ``masses`` optionally replaces mu (a callable on atoms)."""
    mass = masses or system.mass
    if system.exact_arithmetic and all(isinstance(v, (int, Fraction)) for v in phi.values.values()):
        p = int(system.p)
        return sum((abs(Fraction(v)) ** p * Fraction(mass(x)) for x, v in phi.values.items()),
                   Fraction(0))
    p = float(system.p)
    terms = []
    for x, v in phi.values.items():
        if v == 0:
            continue
        m = mass(x)
        lm = log_fraction(m) if isinstance(m, Fraction) else math.log(m)
        terms.append(p * math.log(abs(v)) + lm)
    return safe_exp(logsumexp(terms))


# ---------------------------------------------------------------------------
# boundedness


def _log_step_ratio(system: AtomicSystem, x: AtomId) -> float:
    """log of |w(x)|^p mu({x}) / mu({f(x)})."""
    w = system.weight(x)
    if w == 0:
        return NEG_INF
    fx = system.shift(x, 1)
    return float(system.p) * math.log(abs(w)) + system.log_mass(x) - system.log_mass(fx)


def validate(system: AtomicSystem) -> BoundednessCertificate:
    """Least constants c (and c-tilde when invertible) of the boundedness inequalities.

    Both constants are suprema of per-atom ratios; in every tail the ratio is
    periodic, so scanning the window plus one period of each tail is exact.
    """
    for lay in system._layouts:
        for m in lay.win_m:
            if not m > 0:
                raise UnboundedWeight("non-positive mass in the window")
    if system.claims_invertible:
        if not system.bijective:
            raise NonInvertibleMap("invertibility claimed for a unilateral chain")
        if system.has_zero_weight:
            raise ZeroWeight("invertibility claimed but some weight is 0")
    best, best_x = NEG_INF, None
    low, low_x = float("inf"), None
    for j in range(len(system.orbits)):
        for x in system.scan_atoms(j):
            g = _log_step_ratio(system, x)
            if best_x is None or g > best:
                best, best_x = g, x
            if low_x is None or g < low:
                low, low_x = g, x
    c_tilde = witness_tilde = None
    if system.invertible:
        c_tilde = safe_exp(-low)
        witness_tilde = system.shift(low_x, 1)
    return BoundednessCertificate(safe_exp(best), c_tilde, best_x, witness_tilde)
