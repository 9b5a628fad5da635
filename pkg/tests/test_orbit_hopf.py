from __future__ import annotations

from fractions import Fraction

import pytest

from opdyn.atomic_system import AtomId, MapKind
from opdyn.errors import NonInvertibleMap
from opdyn.orbit_hopf import hopf_decompose, is_dissipative

from conftest import load


def test_cycle_is_conservative():
    d = hopf_decompose(load("sys_f"))
    assert d.conservative_orbits == (0,)
    assert d.dissipative_orbits == ()
    assert d.wandering_set == ()
    assert not d.dissipative


def test_full_shift_is_dissipative(sys_a):
    d = hopf_decompose(sys_a)
    assert d.dissipative_orbits == (0,)
    assert d.wandering_set == (AtomId(0, 0),)
    assert d.wandering_mass == 1


def test_two_chains_have_disjoint_iterates():
    system = load("sys_e")
    d = hopf_decompose(system)
    assert d.wandering_set == (AtomId(0, 0), AtomId(1, 0))
    assert d.wandering_mass == 2
    # f^n(W), |n| <= 50, pairwise disjoint and tiling every window atom
    seen = {}
    for n in range(-50, 51):
        for x in d.wandering_set:
            y = system.shift(x, n)
            assert y not in seen
            seen[y] = n
    for j in (0, 1):
        for k in range(-50, 51):
            x = AtomId(j, k)
            assert x in seen
            assert d.wandering_index(x) == -seen[x]


def test_is_dissipative_examples(sys_a):
    assert is_dissipative(sys_a)
    assert not is_dissipative(load("sys_f"))
    assert not is_dissipative(load("mixed"))


def test_mixed_system_split():
    system = load("mixed")
    d = hopf_decompose(system)
    kinds = [o.kind for o in system.orbits]
    assert set(d.conservative_orbits) == {j for j, k in enumerate(kinds) if k is MapKind.CYCLE}
    assert set(d.dissipative_orbits) | set(d.conservative_orbits) == set(range(len(kinds)))
    assert not set(d.dissipative_orbits) & set(d.conservative_orbits)
    assert d.wandering_index(system.atom(d.conservative_orbits[0], 1)) is None


def test_parts_are_invariant():
    system = load("mixed")
    d = hopf_decompose(system)
    for j in range(len(system.orbits)):
        for k in range(-10, 11):
            x = system.atom(j, k)
            for y in (system.shift(x, 1), system.shift(x, -1)):
                assert (y.orbit in d.dissipative_orbits) == (j in d.dissipative_orbits)


def test_cycle_atoms_return():
    system = load("sys_f")
    L = system.orbits[0].length
    for k in range(L):
        x = system.atom(0, k)
        assert any(system.shift(x, n) == x for n in range(1, L + 1))


def test_unilateral_rejected():
    with pytest.raises(NonInvertibleMap):
        hopf_decompose(load("unilateral_w2"))
    with pytest.raises(NonInvertibleMap):
        is_dissipative(load("unilateral_decay"))


def test_wandering_mass_uses_atom_masses(sys_d):
    assert hopf_decompose(sys_d).wandering_mass == Fraction(1)
