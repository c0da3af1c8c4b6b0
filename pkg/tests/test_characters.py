import cmath
import itertools

import pytest

from affwalk.characters import (
    GroupTableError,
    character_group,
    dual_module,
    evaluate,
    invariant_factors,
    root_of_unity,
    stabilizer_in_units,
)
from affwalk.modules import build_free_module, cyclic_submodules, regular_module
from affwalk.rings import build_product, build_zn, units


def test_invariant_factors_examples():
    assert invariant_factors(build_zn(4).add_table).orders == (4,)
    assert invariant_factors(build_free_module(build_zn(2), 2).add_table).orders == (2, 2)
    assert invariant_factors(build_product([build_zn(2), build_zn(4)]).add_table).orders == (2, 4)
    assert invariant_factors(build_zn(12).add_table).orders == (12,)
    assert invariant_factors(build_free_module(build_zn(6), 2).add_table).orders == (6, 6)
    assert invariant_factors(build_zn(1).add_table).orders == ()


def test_coordinates_are_additive():
    table = build_product([build_zn(2), build_zn(4)]).add_table
    pres = invariant_factors(table)
    for x, y in itertools.product(range(8), repeat=2):
        s = table[x][y]
        assert pres.coord[s] == tuple((a + b) % d for a, b, d in zip(pres.coord[x], pres.coord[y], pres.orders))


def test_invariant_factors_rejects_non_groups():
    with pytest.raises(GroupTableError):
        invariant_factors(((0, 1), (1, 1)))
    # S3 multiplication table is not abelian
    perms = list(itertools.permutations(range(3)))
    idx = {p: i for i, p in enumerate(perms)}
    table = tuple(tuple(idx[tuple(p[q[k]] for k in range(3))] for q in perms) for p in perms)
    with pytest.raises(GroupTableError):
        invariant_factors(table, identity=idx[(0, 1, 2)])


def test_character_groups():
    chars = character_group(invariant_factors(build_zn(2).add_table))
    assert [c(1) for c in chars] == [1, -1]
    chars = character_group(invariant_factors(build_zn(4).add_table))
    assert len(chars) == 4 and chars[0].is_trivial()
    assert [chars[1](m) for m in range(4)] == [1, 1j, -1, -1j]
    chars = character_group(invariant_factors(build_free_module(build_zn(2), 2).add_table))
    patterns = {tuple(int(c(v).real) for v in range(4)) for c in chars}
    brute = {(1, s, t, s * t) for s in (1, -1) for t in (1, -1)}
    assert patterns == brute


def test_evaluate():
    chars = character_group(invariant_factors(build_zn(4).add_table))
    assert evaluate(chars[0], 3)[0].angle == 0
    root, value = evaluate(chars[1], 2)
    assert (root.numerator, root.denominator) == (1, 2) and value == -1
    chars6 = character_group(invariant_factors(build_zn(6).add_table))
    assert abs(evaluate(chars6[1], 3)[1] + 1) < 1e-15
    assert root_of_unity(1, 3) == pytest.approx(cmath.exp(2j * cmath.pi / 3))


def test_dual_module_examples():
    Z4 = regular_module(build_zn(4))
    D = dual_module(Z4)
    assert D.module.size == 4
    assert len(cyclic_submodules(D.module)) == len(cyclic_submodules(Z4)) == 3
    D.module.check_axioms()
    V = build_free_module(build_zn(2), 2)
    DV = dual_module(V)
    assert set(DV.action[0]) == {0}
    Z6 = regular_module(build_zn(6))
    D6 = dual_module(Z6)
    # r -> r chi_1 is a bijection, so the dual is isomorphic to Z/6
    assert len({D6.action[r][1] for r in range(6)}) == 6


def test_dual_action_definition():
    V = build_free_module(build_product([build_zn(2), build_zn(2)]), 1)
    D = dual_module(V)
    for r, chi, v in itertools.product(range(4), range(4), range(4)):
        assert D.characters[D.action[r][chi]].turns(v) == D.characters[chi].turns(V.action[r][v])


def test_stabilizers():
    R = build_zn(4)
    D = dual_module(regular_module(R))
    U = units(R).members
    assert stabilizer_in_units(D, 0, U) == U
    assert stabilizer_in_units(D, 1, U) == (1,)
    R12 = build_zn(12)
    D12 = dual_module(regular_module(R12))
    half = next(i for i, c in enumerate(D12.characters) if c(1) == -1)
    assert stabilizer_in_units(D12, half, units(R12).members) == units(R12).members
