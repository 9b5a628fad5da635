from __future__ import annotations

import random
from fractions import Fraction

import pytest

from opdyn.atomic_system import AtomId, AtomicSystem, MapKind, Orbit, SampleFunction, TailSpec, apply_operator
from opdyn.cfs_expansivity import SpaceKind, TestPair, analyze_cfs, criterion_value, wandering_window_reduction
from opdyn.errors import NonInvertible, PreconditionFailed
from opdyn.growth import Notion, Status

from conftest import load
from oracles import random_shift, shift_average, shift_expansive, shift_uniform

T, F = Status.PROVEN_TRUE, Status.PROVEN_FALSE
A0 = AtomId(0, 0)


# -- criterion_value -------------------------------------------------------------

def test_criterion_value_examples(sys_a, sys_b):
    assert criterion_value(sys_a, TestPair(A0), 3) == 8
    assert criterion_value(sys_a, TestPair(A0, frozenset({AtomId(0, 5)})), 3) == 0
    assert criterion_value(sys_a, TestPair(A0, frozenset({AtomId(0, -3)})), 3) == 8
    for n in range(-6, 7):
        for B in (None, frozenset({AtomId(0, 2)})):
            assert criterion_value(sys_b, TestPair(A0, B), n) in (0, 1)


def test_criterion_value_without_preimage():
    system = load("unilateral_w2")
    assert criterion_value(system, TestPair(AtomId(0, 2)), 5) == 0
    assert criterion_value(system, TestPair(AtomId(0, 5)), 5) == 32
    with pytest.raises(NonInvertible):
        criterion_value(system, TestPair(AtomId(0, 2)), -1)


# -- spaces ----------------------------------------------------------------------

@pytest.mark.parametrize("space", ["lb", "c0"])
def test_doubling_shift_on_bounded_spaces(space, sys_a):
    assert analyze_cfs(sys_a, space, Notion.EXPANSIVE).status is T
    assert analyze_cfs(sys_a, space, Notion.UNIFORM).status is T


@pytest.mark.parametrize("space", ["compact", "pointwise"])
@pytest.mark.parametrize("name", ["sys_a", "shift_compact", "sys_c", "sys_h"])
def test_shifts_never_expansive_on_finite_bornologies(space, name):
    system = load(name)
    for notion in (Notion.EXPANSIVE, Notion.AVERAGE, Notion.UNIFORM):
        assert analyze_cfs(system, space, notion).status is F


def test_pointwise_index_set_is_finite(sys_a):
    # a finite B meets f^-n(O) for one n per atom of B
    B = frozenset(AtomId(0, k) for k in range(-5, 6))
    hits = [n for n in range(-200, 201) if criterion_value(sys_a, TestPair(A0, B), n) != 0]
    assert hits == list(range(-5, 6))


def test_cycle_expands_on_finite_bornologies():
    system = load("sys_f")  # weight product 2 around the cycle
    B = frozenset(system.atom(0, k) for k in range(3))
    assert criterion_value(system, TestPair(A0, B), 30) == 2 ** 10
    for space in ("compact", "pointwise", "c0"):
        assert analyze_cfs(system, space, Notion.EXPANSIVE).status is T


def test_isometry_is_not_uniformly_expansive(sys_b):
    assert analyze_cfs(sys_b, SpaceKind.VANISHING, Notion.UNIFORM).status is F


def test_positive_variants_on_c0(sys_a):
    assert analyze_cfs(sys_a, "c0", Notion.POSITIVE).status is T
    assert analyze_cfs(load("unilateral_w2"), "c0", Notion.POSITIVE).status is F
    with pytest.raises(NonInvertible):
        analyze_cfs(load("unilateral_w2"), "c0", Notion.EXPANSIVE)


def test_sup_norm_ignores_masses():
    # unit weights with masses doubling both ways: expansive on L^1 but not on c0
    from opdyn.lp_expansivity import analyze_expansive_lp
    grow = TailSpec(periodic_weights=(1,), mass_ratio=2)
    system = AtomicSystem((Orbit(MapKind.BILATERAL, grow, grow),), exact=True)
    assert analyze_cfs(system, "c0", Notion.EXPANSIVE).status is F
    assert analyze_expansive_lp(system).status is T


# -- closed-form shift criteria on random shifts --------------------------------

def test_random_shifts_match_closed_form_criteria():
    rng = random.Random(77)
    for _ in range(40):
        s = random_shift(rng)
        system = s.system()
        assert (analyze_cfs(system, "c0", Notion.EXPANSIVE).status is T) == shift_expansive(s)
        assert (analyze_cfs(system, "c0", Notion.AVERAGE).status is T) == shift_average(s)
        grows, label = shift_uniform(s)
        v = analyze_cfs(system, "c0", Notion.UNIFORM)
        assert (v.status is T) == grows
        if grows:
            assert v.partition[0][1].value == label


def test_operator_iteration_on_bumps():
    rng = random.Random(3)
    for _ in range(15):
        s = random_shift(rng)
        system = s.system()
        chi = SampleFunction.indicator([A0])
        status = analyze_cfs(system, "c0", Notion.EXPANSIVE).status
        # (C^n chi_a) has one nonzero value, |w^(n)(f^-n a)|
        sups = [max(abs(v) for v in apply_operator(system, chi, n).values.values())
                for n in range(-200, 201)]
        assert sups == [criterion_value(system, TestPair(A0), n) for n in range(-200, 201)]
        if status is T:
            assert max(sups) > 1e6
        else:
            assert max(sups) < 1e6


# -- wandering-window reduction ---------------------------------------------------

def test_reduction_examples(sys_a):
    assert wandering_window_reduction(sys_a, [A0]) == [A0]
    system = load("sys_e")
    assert wandering_window_reduction(system, {AtomId(1, 0), AtomId(0, 0)}) == [AtomId(0, 0), AtomId(1, 0)]


def test_reduction_preconditions():
    with pytest.raises(PreconditionFailed):
        wandering_window_reduction(load("zero_weight_invertible"), [A0])
    with pytest.raises(PreconditionFailed):
        wandering_window_reduction(load("unilateral_w2"), [A0])
    with pytest.raises(PreconditionFailed):
        wandering_window_reduction(load("sys_e"), [A0])


def _random_chain_system(rng):
    weights = [Fraction(1, 2), Fraction(1), Fraction(2), Fraction(3), Fraction(-1, 3)]

    def tail():
        period = rng.randint(1, 2)
        return TailSpec(tuple((rng.choice(weights), 1) for _ in range(rng.randint(0, 3))), period,
                        tuple(rng.choice(weights) for _ in range(period)))

    return AtomicSystem(tuple(Orbit(MapKind.BILATERAL, tail(), tail()) for _ in range(rng.randint(1, 3))),
                        exact=True)


def test_reduction_soundness():
    rng = random.Random(8)
    for _ in range(25):
        system = _random_chain_system(rng)
        W = [system.atom(j, 0) for j in range(len(system.orbits))]
        reduced = wandering_window_reduction(system, W)
        for space in ("lb", "c0"):
            for notion in (Notion.EXPANSIVE, Notion.AVERAGE):
                full = analyze_cfs(system, space, notion).status
                assert analyze_cfs(system, space, notion, test_atoms=reduced).status is full
        # directly: divergence at O = {x} for x in W decides it for every O on the orbit
        for j in range(len(system.orbits)):
            def diverges(k):
                vals = [criterion_value(system, TestPair(system.atom(j, k)), n) for n in range(-150, 151)]
                return max(vals) > 1e8 * max(criterion_value(system, TestPair(system.atom(j, k)), n)
                                             for n in range(-20, 21))
            base = diverges(0)
            assert all(diverges(k) == base for k in (-4, -1, 3, 7))
