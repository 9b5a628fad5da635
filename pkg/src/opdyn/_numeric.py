"""Log-domain helpers and exact-sign evaluation of sums of logarithms."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

NEG_INF = float("-inf")

# beyond this many bits an exact power comparison is abandoned for floats
_EXACT_BIT_BUDGET = 200_000


def log_fraction(q: Fraction) -> float:
    if q <= 0:
        raise ValueError("log of a non-positive rational")
    return math.log(q.numerator) - math.log(q.denominator)


def logaddexp(a: float, b: float) -> float:
    if a == NEG_INF:
        return b
    if b == NEG_INF:
        return a
    hi, lo = (a, b) if a >= b else (b, a)
    return hi + math.log1p(math.exp(lo - hi))


def logsumexp(values: Iterable[float]) -> float:
    vals = [v for v in values if v != NEG_INF]
    if not vals:
        return NEG_INF
    top = max(vals)
    if top == float("inf"):
        return top
    return top + math.log(math.fsum(math.exp(v - top) for v in vals))


def safe_exp(x: float) -> float:
    if x == NEG_INF:
        return 0.0
    try:
        return math.exp(x)
    except OverflowError:
        return float("inf")


def exact_abs2(w) -> Fraction:
    """|w|^2 as an exact rational (floats are dyadic rationals)."""
    if isinstance(w, complex):
        return Fraction(w.real) ** 2 + Fraction(w.imag) ** 2
    return Fraction(w) ** 2


@dataclass(frozen=True)
class LogLinear:
    """A formal sum ``sum(c * log(q))`` with rational ``c`` and positive rational ``q``.

    ``sign`` decides the sign of the sum exactly by comparing an integer power
    product with 1 whenever the numbers involved stay small enough; otherwise
    it falls back to floating point and reports ``None`` for near-ties.
    """

    terms: tuple[tuple[Fraction, Fraction], ...] = ()

    @classmethod
    def of(cls, coeff, base) -> "LogLinear":
        return cls(((Fraction(coeff), Fraction(base)),))

    def __add__(self, other: "LogLinear") -> "LogLinear":
        return LogLinear(self.terms + other.terms)

    def __neg__(self) -> "LogLinear":
        return LogLinear(tuple((-c, q) for c, q in self.terms))

    def __sub__(self, other: "LogLinear") -> "LogLinear":
        return self + (-other)

    def scale(self, factor) -> "LogLinear":
        f = Fraction(factor)
        return LogLinear(tuple((c * f, q) for c, q in self.terms))

    def _collected(self) -> dict[Fraction, Fraction]:
        out: dict[Fraction, Fraction] = {}
        for c, q in self.terms:
            if q == 1 or c == 0:
                continue
            out[q] = out.get(q, Fraction(0)) + c
        # bases sharing a coefficient multiply together, so c log a + c log b
        # with a b = 1 cancels exactly even when c has a huge denominator
        by_coeff: dict[Fraction, Fraction] = {}
        for q, c in out.items():
            if c < 0:
                c, q = -c, 1 / q
            if c:
                by_coeff[c] = by_coeff.get(c, Fraction(1)) * q
        merged: dict[Fraction, Fraction] = {}
        for c, q in by_coeff.items():
            if q != 1:
                merged[q] = merged.get(q, Fraction(0)) + c
        return merged

    def value(self) -> float:
        return math.fsum(float(c) * log_fraction(q) for q, c in self._collected().items())

    def sign(self) -> tuple[int | None, bool]:
        """Return ``(sign, exact)``; ``sign`` is ``None`` when undecidable."""
        terms = self._collected()
        if not terms:
            return 0, True
        denom = 1
        for c in terms.values():
            denom = denom * c.denominator // math.gcd(denom, c.denominator)
        cost = sum(abs(c * denom) * (q.numerator.bit_length() + q.denominator.bit_length())
                   for q, c in terms.items())
        if cost <= _EXACT_BIT_BUDGET:
            num, den = 1, 1
            for q, c in terms.items():
                e = int(c * denom)
                if e > 0:
                    num *= q.numerator ** e
                    den *= q.denominator ** e
                else:
                    num *= q.denominator ** (-e)
                    den *= q.numerator ** (-e)
            return (num > den) - (num < den), True
        v = self.value()
        scale = math.fsum(abs(float(c) * log_fraction(q)) for q, c in terms.items())
        if abs(v) <= 1e-12 * max(scale, 1.0):
            return None, False
        return (1 if v > 0 else -1), False
