from __future__ import annotations

import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from opdyn.atomic_system import (
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
    validate,
)
from opdyn.errors import NonInvertibleMap, UnboundedWeight, ZeroWeight

from conftest import load
from oracles import brute_apply, brute_cocycle, brute_mu_n, brute_norm_pp, raw_mass, raw_weight, rel_err

A0 = AtomId(0, 0)


# -- cocycle -----------------------------------------------------------------

def test_cocycle_constant_weight(sys_a):
    assert cocycle(sys_a, A0, 5) == 32
    assert cocycle(sys_a, AtomId(0, -17), 5) == 32


@pytest.mark.parametrize("name", ["sys_a", "sys_b", "sys_c", "sys_d", "sys_f", "unilateral_w2"])
def test_cocycle_zero_power_is_one(name):
    system = load(name)
    for k in range(-3, 4):
        if system.orbits[0].kind is MapKind.UNILATERAL and k < 0:
            continue
        value = cocycle(system, system.atom(0, k), 0)
        assert value == 1 and isinstance(value, Fraction)


def test_cocycle_negative_power(sys_a):
    assert cocycle(sys_a, A0, -3) == Fraction(1, 8)
    # w^(-n) o f^n = 1 / w^(n), by direct product
    x = AtomId(0, 4)
    assert cocycle(sys_a, sys_a.shift(x, 3), -3) == 1 / brute_cocycle(sys_a, x, 3)


def test_cocycle_on_unilateral_chain_rejects_negative_powers():
    system = load("unilateral_w2")
    assert cocycle(system, AtomId(0, 0), 4) == 16
    with pytest.raises(NonInvertibleMap):
        cocycle(system, AtomId(0, 5), -1)


def test_cocycle_with_zero_weight():
    system = load("zero_weight_invertible")
    assert cocycle(system, AtomId(0, -2), 5) == 0
    assert log_cocycle(system, AtomId(0, -2), 5)[0] == -math.inf
    with pytest.raises(ZeroWeight):
        cocycle(system, AtomId(0, 2), -3)


def test_cycle_cocycle_wraps():
    system = load("sys_f")  # weights 2, 1, 1 around a 3-cycle
    assert cocycle(system, AtomId(0, 0), 3) == 2
    assert cocycle(system, AtomId(0, 1), 7) == 2 ** 2 * 1
    assert cocycle(system, AtomId(0, 2), -6) == Fraction(1, 4)


def test_log_domain_survives_long_products(sys_a):
    la, phase = log_cocycle(sys_a, A0, 5000)
    assert la == pytest.approx(5000 * math.log(2), rel=1e-12)
    assert phase == 0.0
    real = AtomicSystem(sys_a.orbits, p=1, exact=False)
    assert cocycle(real, A0, 5000) == math.inf
    assert cocycle(real, A0, -5000) == 0.0


def test_complex_cocycle_phase():
    system = load("complex_rotation")  # w = 2i
    assert cocycle(system, A0, 2) == pytest.approx(-4)
    assert cocycle(system, A0, 3) == pytest.approx(-8j)
    assert cocycle(system, A0, -1) == pytest.approx(-0.5j)


def test_real_float_sign_tracking():
    orbit = Orbit(MapKind.BILATERAL, TailSpec(period=2, periodic_weights=(-2.0, 0.5)),
                  TailSpec(periodic_weights=(-1.0,)))
    system = AtomicSystem((orbit,), p=1)
    for n in range(-6, 7):
        assert cocycle(system, A0, n) == pytest.approx(brute_cocycle(system, A0, n), rel=1e-14)


# -- mu_n --------------------------------------------------------------------

def test_mu_n_examples(sys_a, sys_b, sys_d):
    assert mu_n(sys_b, [A0], 7) == 1
    assert mu_n(sys_a, [A0], 2) == 4
    assert mu_n(sys_d, [AtomId(0, -3)], 0) == Fraction(1, 8)


def test_mu_n_float_mode_uses_log_domain():
    real = AtomicSystem(load("sys_a").orbits, p=Fraction(1), exact=False)
    assert mu_n(real, [AtomId(0, k) for k in range(3)], 2000) == math.inf
    assert mu_n(real, [A0], -2000) == 0.0
    assert mu_n(real, [A0, AtomId(0, 1)], 10) == pytest.approx(2 * 1024.0, rel=1e-12)


# -- apply_operator ----------------------------------------------------------

def test_apply_operator_examples(sys_a, sys_b):
    out = apply_operator(sys_b, SampleFunction.indicator([A0]), 1)
    assert out.values == {AtomId(0, -1): 1}
    out = apply_operator(sys_a, SampleFunction.indicator([A0]), 2)
    assert out.values == {AtomId(0, -2): 4}
    assert norm_pp(sys_a, out) == 4


def test_apply_operator_inverse_roundtrip(sys_d):
    phi = SampleFunction({AtomId(0, -2): Fraction(3, 7), AtomId(0, 5): Fraction(-1, 2)})
    for n in (-4, 1, 9):
        assert apply_operator(sys_d, apply_operator(sys_d, phi, n), -n).values == phi.values


def test_apply_operator_drops_atoms_without_preimage():
    system = load("unilateral_w2")
    out = apply_operator(system, SampleFunction.indicator([AtomId(0, 1)]), 3)
    assert out.values == {}
    with pytest.raises(NonInvertibleMap):
        apply_operator(system, SampleFunction.indicator([AtomId(0, 1)]), -1)


# -- validate ----------------------------------------------------------------

def test_validate_examples(sys_a, sys_b, sys_d):
    cert = validate(sys_a)
    assert cert.c == 2 and cert.c_tilde == 0.5
    cert = validate(sys_b)
    assert cert.c == 1 and cert.c_tilde == 1
    cert = validate(sys_d)
    assert cert.c == 2
    w = cert.c_witness
    assert float(sys_d.mass(w) / sys_d.mass(sys_d.shift(w, 1))) == 2
    assert cert.c_tilde == 2


def test_validate_rejects_false_invertibility_claims():
    with pytest.raises(ZeroWeight):
        validate(load("zero_weight_invertible"))
    base = load("unilateral_w2")
    claimed = AtomicSystem(base.orbits, p=base.p, exact=True, claims_invertible=True)
    with pytest.raises(NonInvertibleMap):
        validate(claimed)
    assert validate(base).c_tilde is None


def test_validate_rejects_non_finite_weights():
    orbit = Orbit(MapKind.BILATERAL, TailSpec(periodic_weights=(math.inf,)), TailSpec())
    with pytest.raises(UnboundedWeight):
        validate(AtomicSystem((orbit,)))


@pytest.mark.parametrize("name", ["sys_a", "sys_c", "sys_d", "sys_e", "sys_f", "mixed", "unilateral_decay"])
def test_validate_constant_bounds_random_functions(name):
    system = load(name)
    c = validate(system).c
    rng = random.Random(11)
    for _ in range(1000):
        j = rng.randrange(len(system.orbits))
        lo = 0 if system.orbits[j].kind is not MapKind.BILATERAL else -12
        phi = SampleFunction({system.atom(j, rng.randint(lo, 12)): Fraction(rng.randint(-9, 9), rng.randint(1, 5))
                              for _ in range(rng.randint(1, 6))})
        assert norm_pp(system, apply_operator(system, phi, 1)) <= c * norm_pp(system, phi) * (1 + 1e-12)


# -- canonical layout against raw tail data ----------------------------------

fractions = st.sampled_from([Fraction(1, 3), Fraction(1, 2), Fraction(1), Fraction(2), Fraction(3), Fraction(-2)])
masses = st.sampled_from([Fraction(1), Fraction(1, 2), Fraction(3), Fraction(2, 5)])


@st.composite
def tails(draw):
    period = draw(st.integers(1, 3))
    return TailSpec(
        transient=tuple(draw(st.lists(st.tuples(fractions, masses), max_size=3))),
        period=period,
        periodic_weights=tuple(draw(st.lists(fractions, min_size=period, max_size=period))),
        mass_ratio=draw(st.sampled_from([Fraction(1), Fraction(1, 2), Fraction(3)])),
        periodic_masses=tuple(draw(st.lists(masses, min_size=period, max_size=period))),
    )


@st.composite
def chains(draw):
    overrides = draw(st.dictionaries(st.integers(-9, 9), st.tuples(fractions, masses), max_size=3))
    orbit = Orbit(MapKind.BILATERAL, draw(tails()), draw(tails()),
                  overrides=tuple((k, w, m) for k, (w, m) in sorted(overrides.items())))
    return AtomicSystem((orbit,), p=draw(st.sampled_from([1, 2, 3])), exact=True)


@settings(max_examples=60, deadline=None)
@given(chains(), st.integers(-25, 25), st.integers(-30, 30))
def test_layout_matches_raw_data(system, k, n):
    x = AtomId(0, k)
    assert system.weight(x) == raw_weight(system, 0, k)
    assert system.mass(x) == raw_mass(system, 0, k)
    assert cocycle(system, x, n) == brute_cocycle(system, x, n)
    assert mu_n(system, [x, AtomId(0, k + 3)], n) == brute_mu_n(system, [x, AtomId(0, k + 3)], n)


@settings(max_examples=40, deadline=None)
@given(chains(), st.integers(-12, 12),
       st.dictionaries(st.integers(-15, 15), st.integers(-5, 5).filter(bool), min_size=1, max_size=5))
def test_operator_powers_match_step_by_step_iteration(system, n, values):
    phi = {AtomId(0, k): Fraction(v) for k, v in values.items()}
    got = apply_operator(system, SampleFunction(phi), n).values
    assert got == brute_apply(system, phi, n)
    assert norm_pp(system, SampleFunction(got)) == brute_norm_pp(system, got)


def test_overrides_outside_the_transient_keep_tail_phase():
    fw = TailSpec(transient=((5, 1),), period=2, periodic_weights=(2, 3), mass_ratio=Fraction(1, 2),
                  periodic_masses=(1, 4))
    bw = TailSpec(period=3, periodic_weights=(1, 2, 3), mass_ratio=2)
    orbit = Orbit(MapKind.BILATERAL, fw, bw, overrides=((7, 11, 9), (-6, 13, 2)))
    system = AtomicSystem((orbit,), p=2, exact=True)
    for k in range(-30, 31):
        assert system.weight(AtomId(0, k)) == raw_weight(system, 0, k)
        assert system.mass(AtomId(0, k)) == raw_mass(system, 0, k)
