import itertools

import pytest

from affwalk.modules import (
    ModuleError,
    RingMismatchError,
    annihilator_of,
    associates_orbit,
    build_cyclic_module,
    build_free_module,
    check_cyclic_equals_unit_orbit,
    cyclic_submodules,
    direct_sum,
    generators_of,
    is_regular,
    minimal_fixing_idempotent,
    regular_module,
    submodule_generated,
)
from affwalk.rings import build_gf, build_zn, make_ideal, principal_ideal, zero_ideal


def test_free_module_ordering_matches_z2_squared():
    V = build_free_module(build_zn(2), 2)
    assert V.size == 4
    assert V.labels == ("(0,0)", "(0,1)", "(1,0)", "(1,1)")
    V.check_axioms()


def test_free_module_rank_one_is_the_ring():
    R = build_zn(4)
    V = build_free_module(R, 1)
    assert is_regular(V)
    assert V.add_table == R.add_table and V.action == R.mul_table


def test_free_module_z3_squared_componentwise():
    V = build_free_module(build_zn(3), 2)
    assert V.size == 9
    for r, v in itertools.product(range(3), range(9)):
        a, b = divmod(v, 3)
        assert V.action[r][v] == 3 * (r * a % 3) + (r * b % 3)
    for v, w in itertools.product(range(9), repeat=2):
        (a, b), (c, d) = divmod(v, 3), divmod(w, 3)
        assert V.add_table[v][w] == 3 * ((a + c) % 3) + (b + d) % 3


def test_cyclic_modules():
    R = build_zn(4)
    assert build_cyclic_module(R, principal_ideal(R, 2)).size == 2
    Z6 = build_zn(6)
    M = build_cyclic_module(Z6, make_ideal(Z6, [0, 3]))
    assert M.size == 3
    # additive group is Z/3: the element 1 has order 3
    assert M.add_table[M.add_table[1][1]][1] == M.zero
    assert is_regular(build_cyclic_module(Z6, zero_ideal(Z6)))


def test_direct_sums():
    Z2 = build_zn(2)
    S = direct_sum([regular_module(Z2), regular_module(Z2)])
    F = build_free_module(Z2, 2)
    assert S.add_table == F.add_table and S.action == F.action
    Z4 = build_zn(4)
    M = direct_sum([build_cyclic_module(Z4, principal_ideal(Z4, 2)), regular_module(Z4)])
    assert M.size == 8
    M.check_axioms()
    single = regular_module(Z4)
    assert direct_sum([single]).add_table == single.add_table


def test_direct_sum_rejects_ring_mismatch():
    with pytest.raises(RingMismatchError):
        direct_sum([regular_module(build_zn(2)), regular_module(build_zn(3))])
    assert issubclass(RingMismatchError, ModuleError)


def test_annihilators():
    assert annihilator_of(regular_module(build_zn(4)), 2).members == (0, 2)
    assert annihilator_of(regular_module(build_zn(12)), 4).members == (0, 3, 6, 9)
    V = build_free_module(build_zn(6), 2)
    assert annihilator_of(V, V.zero).members == tuple(range(6))


def test_cyclic_submodule_counts():
    subs = cyclic_submodules(regular_module(build_zn(4)))
    assert [W.members for W in subs] == [(0,), (0, 2), (0, 1, 2, 3)]
    subs = cyclic_submodules(build_free_module(build_zn(2), 2))
    assert [W.members for W in subs] == [(0,), (0, 1), (0, 2), (0, 3)]
    assert len(cyclic_submodules(regular_module(build_zn(6)))) == 4


def test_canonical_generator_is_least():
    for W in cyclic_submodules(regular_module(build_zn(12))):
        assert W.generator == min(generators_of(W))


def test_size_times_annihilator():
    for V in (regular_module(build_zn(12)), build_free_module(build_zn(4), 2)):
        R = V.ring
        for v in V.elements():
            assert len(submodule_generated(V, v)) * len(annihilator_of(V, v)) == R.size


def test_associates():
    assert associates_orbit(regular_module(build_zn(4)), 1) == (1, 3)
    assert associates_orbit(regular_module(build_zn(4)), 0) == (0,)
    assert associates_orbit(regular_module(build_zn(12)), 2) == (2, 10)


def test_cyclic_equals_unit_orbit_examples():
    Z4 = build_zn(4)
    assert check_cyclic_equals_unit_orbit(build_free_module(build_zn(2), 2))
    assert check_cyclic_equals_unit_orbit(regular_module(build_zn(12)))
    assert check_cyclic_equals_unit_orbit(direct_sum([regular_module(Z4), build_cyclic_module(Z4, principal_ideal(Z4, 2))]))


def test_minimal_fixing_idempotent():
    Z6 = regular_module(build_zn(6))
    assert minimal_fixing_idempotent(Z6, 2) == 4
    assert minimal_fixing_idempotent(Z6, 0) == 0
    F9 = regular_module(build_gf(3, 2))
    assert all(minimal_fixing_idempotent(F9, v) == 1 for v in range(1, 9))
