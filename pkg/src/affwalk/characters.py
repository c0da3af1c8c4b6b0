"""Characters of finite abelian groups and the dual module.

Character values are roots of unity kept exactly as ``k / N`` turns, where
``N`` is the exponent of the group; complex numbers are produced on demand.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, NamedTuple, Sequence

from .modules import FiniteModule
from .rings import Table


class GroupTableError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class AbelianPresentation:
    """An invariant-factor decomposition ``A = <g_1> + ... + <g_t>``, ``d_1 | ... | d_t``.

    ``coord[x]`` holds the exponents ``(a_1, ..., a_t)`` with
    ``x = a_1 g_1 + ... + a_t g_t``.
    """

    group_size: int
    table: Table
    identity: int
    basis: tuple[int, ...]
    orders: tuple[int, ...]
    coord: tuple[tuple[int, ...], ...]

    @property
    def exponent(self) -> int:
        return self.orders[-1] if self.orders else 1

    def element(self, exps: Sequence[int]) -> int:
        return self._element_of[tuple(e % d for e, d in zip(exps, self.orders))]

    @property
    def _element_of(self) -> dict[tuple[int, ...], int]:
        return _inverse_coords(self)


@lru_cache(maxsize=None)
def _inverse_coords(pres: AbelianPresentation) -> dict[tuple[int, ...], int]:
    return {c: x for x, c in enumerate(pres.coord)}


class RootOfUnity(NamedTuple):
    """``exp(2 pi i * numerator / denominator)`` with the fraction reduced."""

    numerator: int
    denominator: int

    @property
    def angle(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)

    @property
    def value(self) -> complex:
        return root_of_unity(self.numerator, self.denominator)


@lru_cache(maxsize=None)
def root_of_unity(k: int, n: int) -> complex:
    k %= n
    if 8 * k % n == 0:
        # exact values at multiples of 1/8 turn
        return {0: 1 + 0j, 1: complex(math.sqrt(0.5), math.sqrt(0.5)), 2: 1j,
                3: complex(-math.sqrt(0.5), math.sqrt(0.5)), 4: -1 + 0j,
                5: complex(-math.sqrt(0.5), -math.sqrt(0.5)), 6: -1j,
                7: complex(math.sqrt(0.5), -math.sqrt(0.5))}[8 * k // n]
    return cmath.exp(2j * math.pi * k / n)


@dataclass(frozen=True)
class Character:
    presentation: AbelianPresentation
    exponents: tuple[int, ...]

    def turns(self, x: int) -> int:
        """``k`` such that the value at ``x`` is ``exp(2 pi i k / N)``, ``N`` the exponent."""
        pres = self.presentation
        N = pres.exponent
        return sum(c * a * (N // d) for c, a, d in zip(self.exponents, pres.coord[x], pres.orders)) % N

    def is_trivial(self) -> bool:
        return not any(self.exponents)

    def __call__(self, x: int) -> complex:
        return root_of_unity(self.turns(x), self.presentation.exponent)


def _check_group(table: Table, identity: int) -> None:
    n = len(table)
    if any(len(row) != n or any(not 0 <= x < n for x in row) for row in table):
        raise GroupTableError("operation table is not a total function")
    for a in range(n):
        if table[a][identity] != a or table[identity][a] != a:
            raise GroupTableError(f"{identity} is not an identity")
        if identity not in table[a]:
            raise GroupTableError(f"{a} has no inverse")
        for b in range(a + 1, n):
            if table[a][b] != table[b][a]:
                raise GroupTableError(f"table is not abelian at ({a}, {b})")
    if n <= 64:
        for a, b, c in itertools.product(range(n), repeat=3):
            if table[table[a][b]][c] != table[a][table[b][c]]:
                raise GroupTableError(f"table is not associative at {(a, b, c)}")


def _cyclic(table: Table, identity: int, g: int) -> list[int]:
    out, x = [identity], g
    while x != identity:
        out.append(x)
        x = table[x][g]
    return out


def _generated(table: Table, identity: int, gens: Iterable[int]) -> frozenset[int]:
    group = {identity}
    frontier = [identity]
    gens = list(gens)
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = table[x][g]
                if y not in group:
                    group.add(y)
                    nxt.append(y)
        frontier = nxt
    return frozenset(group)


def invariant_factors(table: Table, identity: int = 0, validate: bool = True) -> AbelianPresentation:
    """Invariant-factor decomposition of a finite abelian group given by its table.

    Repeatedly takes the least element of maximal order and a subgroup maximal
    among those meeting its cyclic span trivially, which is then a complement.
    """
    if validate:
        _check_group(table, identity)
    n = len(table)
    pieces: list[tuple[int, int]] = []
    current = frozenset(range(n))
    while len(current) > 1:
        orders = {x: len(_cyclic(table, identity, x)) for x in sorted(current)}
        m = max(orders.values())
        g = min(x for x, o in orders.items() if o == m)
        span = frozenset(_cyclic(table, identity, g))
        complement = frozenset({identity})
        gens: list[int] = []
        for x in sorted(current):
            if x in complement:
                continue
            trial = _generated(table, identity, gens + [x])
            if trial & span == {identity}:
                gens.append(x)
                complement = trial
        if len(span) * len(complement) != len(current):
            raise GroupTableError("failed to split off a cyclic summand")  # pragma: no cover
        pieces.append((g, m))
        current = complement
    pieces.reverse()
    basis = tuple(g for g, _ in pieces)
    orders = tuple(m for _, m in pieces)
    coord: list[tuple[int, ...] | None] = [None] * n
    for exps in itertools.product(*(range(d) for d in orders)):
        x = identity
        for g, a in zip(basis, exps):
            for _ in range(a):
                x = table[x][g]
        if coord[x] is not None:
            raise GroupTableError("basis does not give a direct decomposition")  # pragma: no cover
        coord[x] = exps
    if math.prod(orders) != n or any(c is None for c in coord):
        raise GroupTableError("basis does not span the group")  # pragma: no cover
    return AbelianPresentation(n, table, identity, basis, orders, tuple(coord))  # type: ignore[arg-type]


def character_group(pres: AbelianPresentation) -> list[Character]:
    """All characters: trivial first, then lexicographic in the exponents."""
    return [Character(pres, exps) for exps in itertools.product(*(range(d) for d in pres.orders))]


def evaluate(chi: Character, x: int) -> tuple[RootOfUnity, complex]:
    k = chi.turns(x)
    N = chi.presentation.exponent
    g = math.gcd(k, N)
    root = RootOfUnity(k // g, N // g)
    return root, root.value


@dataclass(frozen=True, eq=False)
class DualModule:
    """The character group of ``(V,+)`` as an R-module via ``(r chi)(v) = chi(r v)``.

    ``module`` carries the tables (character ``i`` is ``characters[i]``;
    addition is pointwise multiplication of characters) so every module
    operation applies to the dual as well.
    """

    base: FiniteModule
    presentation: AbelianPresentation
    characters: tuple[Character, ...]
    module: FiniteModule

    @property
    def action(self) -> Table:
        return self.module.action

    def index(self, exponents: Sequence[int]) -> int:
        idx = 0
        for e, d in zip(exponents, self.presentation.orders):
            idx = idx * d + e % d
        return idx

    def pairing(self, chi: int, v: int) -> int:
        """``k`` with ``chi(v) = exp(2 pi i k / N)``."""
        return self.characters[chi].turns(v)


@lru_cache(maxsize=None)
def dual_module(V: FiniteModule) -> DualModule:
    pres = invariant_factors(V.add_table, V.zero, validate=False)
    chars = tuple(character_group(pres))
    orders = pres.orders
    N = pres.exponent
    n = len(chars)

    def index(exps: Sequence[int]) -> int:
        idx = 0
        for e, d in zip(exps, orders):
            idx = idx * d + e % d
        return idx

    add = tuple(
        tuple(index([a + b for a, b in zip(x.exponents, y.exponents)]) for y in chars) for x in chars
    )
    neg = tuple(index([-a for a in x.exponents]) for x in chars)
    action = []
    for r in V.ring.elements():
        images = [V.action[r][g] for g in pres.basis]
        row = []
        for chi in chars:
            # (r chi)(g_i) = chi(r g_i) = exp(2 pi i k / N) = exp(2 pi i c_i / d_i)
            row.append(index([chi.turns(y) * d // N for y, d in zip(images, orders)]))
        action.append(tuple(row))
    labels = tuple("chi" + str(list(c.exponents)) for c in chars)
    module = FiniteModule(V.ring, n, add, 0, neg, tuple(action), ("dual", V), labels)
    return DualModule(V, pres, chars, module)


def stabilizer_in_units(D: DualModule, chi: int, subgroup: Iterable[int]) -> tuple[int, ...]:
    """Elements ``u`` of ``subgroup`` (ring elements) with ``u * chi = chi``."""
    return tuple(sorted(u for u in subgroup if D.action[u][chi] == chi))
