from itertools import combinations

import numpy as np
import pytest

from oracles import brute_force_connected, brute_force_flats
from tropdisc import catalog
from tropdisc.config import check_configuration
from tropdisc.exceptions import LatticeTooLarge, PyramidInput
from tropdisc.fan import bergman_fan, co_bergman_fan, hypersurface_cones, membership
from tropdisc.initial import sample_weight
from tropdisc.matroid import FlatLattice

GALES = {
    "veronese": check_configuration(catalog.VERONESE).gale,
    "cubic_linear": check_configuration(catalog.CUBIC_LINEAR).gale,
    "mixed": check_configuration(catalog.MIXED_DISCRIMINANT).gale,
    "uv": catalog.UV_U,
}


@pytest.mark.parametrize("name", sorted(GALES))
def test_flats_match_subset_enumeration(name):
    U = GALES[name]
    lat = FlatLattice(U)
    assert set(lat.flats) == set(brute_force_flats(U))


@pytest.mark.parametrize("name", sorted(GALES))
def test_chains_match_brute_force(name):
    U = GALES[name]
    lat = FlatLattice(U)
    proper = [F for F in brute_force_flats(U) if F and len(F) < len(U)]
    length = lat.rank - 1
    brute = set()
    for combo in combinations(proper, length):
        ordered = sorted(combo, key=len)
        if all(a < b for a, b in zip(ordered, ordered[1:])):
            brute.add(tuple(ordered))
    assert set(lat.maximal_chains()) == brute
    for k in range(length + 1):
        sub = {tuple(c) for ch in brute for c in combinations(ch, k)}
        assert set(lat.chains_of_length(k)) == sub


def test_veronese_chain_count_and_rank():
    lat = FlatLattice(GALES["veronese"])
    assert lat.rank == 3
    assert all(len(ch) == 2 for ch in lat.maximal_chains())


@pytest.mark.parametrize("name", ["veronese", "uv", "cubic_linear"])
def test_irreducible_flats_match_brute_force(name):
    U = GALES[name]
    lat = FlatLattice(U)
    brute = {F for F in brute_force_flats(U) if F and brute_force_connected(U, F)}
    brute.add(lat.top)
    assert set(lat.irreducible_flats) == brute


def test_boolean_lattice_nested_sets():
    n = 4
    lat = FlatLattice([[int(i == j) for j in range(n)] for i in range(n)])
    assert len(lat) == 2**n
    assert len(lat.components()) == n
    nested = lat.maximal_nested_sets()
    assert len(nested) == n
    assert all(len(S) == n - 1 for S in nested)


def test_nested_sets_of_uv_cover_the_flag_cones():
    lat = FlatLattice(catalog.UV_U)
    nested = set(lat.maximal_nested_sets())
    for chain in lat.maximal_chains():
        S = lat.nested_set_of_chain(chain)
        assert lat.is_nested(S)
        assert any(set(S) <= set(N) for N in nested)


def test_loops_are_rejected():
    with pytest.raises(PyramidInput):
        FlatLattice([[1, 0], [0, 0], [0, 1]])
    lat = FlatLattice([[1, 0], [0, 0], [0, 1]], allow_loops=True)
    assert lat.bottom == frozenset({1})


def test_lattice_size_cap():
    with pytest.raises(LatticeTooLarge):
        FlatLattice([[int(i == j) for j in range(6)] for i in range(6)], max_flats=10)


@pytest.mark.parametrize("name", sorted(GALES))
def test_bergman_membership_agrees_with_fan(name):
    U = GALES[name]
    lat = FlatLattice(U)
    fan = bergman_fan(U)
    rng = np.random.default_rng(7)
    for _ in range(20):
        w = [int(x) for x in rng.integers(-5, 6, len(U))]
        assert lat.bergman_membership(w) == membership(fan, w)
    for cone in fan.cones[:20]:
        w = [0] * len(U)
        for r in cone.rays:
            c = int(rng.integers(1, 5))
            w = [a + c * b for a, b in zip(w, r)]
        assert lat.bergman_membership(w)


def test_coarse_co_bergman_fan_of_mixed_discriminant():
    fan = co_bergman_fan(catalog.MIXED_DISCRIMINANT)
    assert len(fan.cones) == 57
    assert len(hypersurface_cones(catalog.MIXED_DISCRIMINANT, fan)) == 48


def test_fan_structures_share_support():
    U = catalog.UV_U
    flag, nested, coarse = (bergman_fan(U, s) for s in ("flag", "nested", "bergman"))
    rng = np.random.default_rng(11)
    for _ in range(30):
        w = sample_weight(rng, len(U))
        w = [x % 7 for x in w]
        assert membership(flag, w) == membership(nested, w) == membership(coarse, w)
