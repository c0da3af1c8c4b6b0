"""Finite commutative unital rings stored as explicit operation tables.

Every ring is element-indexed: elements are the integers ``0..size-1`` and
addition, multiplication and negation are lookup tables.  Builders for
``Z/nZ``, ``GF(p^k)``, direct products and quotients fill those tables; all
downstream code only ever sees the tables.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

Table = tuple[tuple[int, ...], ...]


class RingError(ValueError):
    """Base class for invalid ring constructions."""


class NotPrimeError(RingError):
    pass


class ReduciblePolynomialError(RingError):
    pass


class NotAnIdealError(RingError):
    pass


@dataclass(frozen=True, eq=False)
class FiniteRing:
    """A finite commutative ring with identity, as lookup tables.

    ``provenance`` records how the ring was built, e.g. ``("zn", 4)`` or
    ``("product", (r1, r2))``; it is informational only.
    """

    size: int
    add_table: Table
    mul_table: Table
    zero: int
    one: int
    neg_table: tuple[int, ...]
    provenance: tuple = ("table",)
    labels: tuple[str, ...] = field(default=(), repr=False)

    def add(self, a: int, b: int) -> int:
        return self.add_table[a][b]

    def mul(self, a: int, b: int) -> int:
        return self.mul_table[a][b]

    def neg(self, a: int) -> int:
        return self.neg_table[a]

    def sub(self, a: int, b: int) -> int:
        return self.add_table[a][self.neg_table[b]]

    def elements(self) -> range:
        return range(self.size)

    def label(self, a: int) -> str:
        return self.labels[a] if self.labels else str(a)

    def same_tables(self, other: FiniteRing) -> bool:
        return (
            self.size == other.size
            and self.add_table == other.add_table
            and self.mul_table == other.mul_table
            and self.zero == other.zero
            and self.one == other.one
        )

    def check_axioms(self, exhaustive_limit: int = 256, samples: int = 20000, seed: int = 0) -> None:
        """Raise ``RingError`` if the tables are not a commutative unital ring.

        Triples are checked exhaustively when ``size <= exhaustive_limit``
        and on ``samples`` random triples otherwise.
        """
        n = self.size
        A, M, N = self.add_table, self.mul_table, self.neg_table
        if len(A) != n or len(M) != n or len(N) != n:
            raise RingError("table dimensions do not match ring size")
        for row in itertools.chain(A, M):
            if len(row) != n or any(not 0 <= x < n for x in row):
                raise RingError("operation table is not a total function on elements")
        for a in range(n):
            if A[a][self.zero] != a:
                raise RingError(f"zero is not an additive identity for {a}")
            if A[a][N[a]] != self.zero:
                raise RingError(f"neg_table[{a}] is not an additive inverse")
            if M[a][self.one] != a or M[self.one][a] != a:
                raise RingError(f"one is not a multiplicative identity for {a}")
            for b in range(n):
                if A[a][b] != A[b][a] or M[a][b] != M[b][a]:
                    raise RingError(f"operations not commutative at ({a}, {b})")
        if n <= exhaustive_limit:
            triples: Iterable[tuple[int, int, int]] = itertools.product(range(n), repeat=3)
        else:
            rng = random.Random(seed)
            triples = ((rng.randrange(n), rng.randrange(n), rng.randrange(n)) for _ in range(samples))
        for a, b, c in triples:
            if A[A[a][b]][c] != A[a][A[b][c]]:
                raise RingError(f"addition not associative at {(a, b, c)}")
            if M[M[a][b]][c] != M[a][M[b][c]]:
                raise RingError(f"multiplication not associative at {(a, b, c)}")
            if M[a][A[b][c]] != A[M[a][b]][M[a][c]]:
                raise RingError(f"distributivity fails at {(a, b, c)}")


@dataclass(frozen=True, eq=False)
class Ideal:
    ring: FiniteRing
    members: tuple[int, ...]

    def __contains__(self, a: int) -> bool:
        return a in self._member_set

    def __len__(self) -> int:
        return len(self.members)

    @property
    def _member_set(self) -> frozenset[int]:
        return _frozen(self.members)


@dataclass(frozen=True, eq=False)
class UnitGroup:
    ring: FiniteRing
    members: tuple[int, ...]
    inverse_table: dict[int, int]

    def __contains__(self, a: int) -> bool:
        return a in self.inverse_table

    def __len__(self) -> int:
        return len(self.members)

    def index(self, u: int) -> int:
        return self.members.index(u)

    def group_table(self) -> Table:
        """Multiplication restricted to the units, indexed by position in ``members``."""
        pos = {u: i for i, u in enumerate(self.members)}
        M = self.ring.mul_table
        return tuple(tuple(pos[M[u][v]] for v in self.members) for u in self.members)

    @property
    def identity_position(self) -> int:
        return self.members.index(self.ring.one)


@lru_cache(maxsize=None)
def _frozen(members: tuple[int, ...]) -> frozenset[int]:
    return frozenset(members)


def _ring_from_functions(size, add, mul, zero, one, provenance, labels=()) -> FiniteRing:
    add_table = tuple(tuple(add(a, b) for b in range(size)) for a in range(size))
    mul_table = tuple(tuple(mul(a, b) for b in range(size)) for a in range(size))
    neg_table = tuple(row.index(zero) for row in add_table)
    return FiniteRing(size, add_table, mul_table, zero, one, neg_table, provenance, tuple(labels))


def build_zn(n: int) -> FiniteRing:
    """The ring of integers modulo ``n``; element ``i`` is the residue ``i``.

    ``n = 1`` gives the zero ring, in which ``one == zero``.
    """
    if n < 1:
        raise RingError(f"modulus must be positive, got {n}")
    return _ring_from_functions(
        n,
        lambda a, b: (a + b) % n,
        lambda a, b: (a * b) % n,
        0,
        1 % n,
        ("zn", n),
    )


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % d for d in range(2, int(p ** 0.5) + 1))


def _poly_mod(num: list[int], den: Sequence[int], p: int) -> list[int]:
    """Remainder of ``num`` by the monic ``den``; coefficient lists are low-to-high."""
    num = [c % p for c in num]
    k = len(den) - 1
    for top in range(len(num) - 1, k - 1, -1):
        c = num[top]
        if c:
            shift = top - k
            for i, d in enumerate(den):
                num[shift + i] = (num[shift + i] - c * d) % p
    return num[:k] if k else []


def is_irreducible(poly: Sequence[int], p: int) -> bool:
    """Exhaustive search for a monic factor of degree ``1..deg/2`` over ``Z/pZ``."""
    k = len(poly) - 1
    if k < 1:
        return False
    for deg in range(1, k // 2 + 1):
        for low in itertools.product(range(p), repeat=deg):
            factor = list(low) + [1]
            if not any(_poly_mod(list(poly), factor, p)):
                return False
    return True


def _default_irreducible(p: int, k: int) -> list[int]:
    for low in itertools.product(range(p), repeat=k):
        poly = list(low) + [1]
        if is_irreducible(poly, p):
            return poly
    raise RingError(f"no irreducible polynomial of degree {k} over GF({p})")  # pragma: no cover


def build_gf(p: int, k: int = 1, poly: Sequence[int] | None = None) -> FiniteRing:
    """The field with ``p**k`` elements as residues modulo ``poly``.

    ``poly`` lists coefficients from the constant term up and must be monic of
    degree ``k``.  Element ``i`` has base-``p`` digits ``i = a_0 + a_1 p + ...``
    standing for ``a_0 + a_1 x + ...``.  Without ``poly`` the first irreducible
    in lexicographic order is used.
    """
    if not is_prime(p):
        raise NotPrimeError(f"{p} is not prime")
    if k < 1:
        raise RingError(f"degree must be positive, got {k}")
    if poly is None:
        poly = _default_irreducible(p, k)
    poly = [int(c) % p for c in poly]
    if len(poly) != k + 1 or poly[-1] != 1:
        raise RingError(f"modulus must be monic of degree {k}: {poly}")
    if not is_irreducible(poly, p):
        raise ReduciblePolynomialError(f"{poly} is reducible over GF({p})")

    q = p ** k

    def digits(a: int) -> list[int]:
        return [(a // p ** i) % p for i in range(k)]

    def number(ds: Sequence[int]) -> int:
        return sum(d * p ** i for i, d in enumerate(ds))

    def mul(a: int, b: int) -> int:
        da, db = digits(a), digits(b)
        prod = [0] * (2 * k - 1)
        for i, x in enumerate(da):
            for j, y in enumerate(db):
                prod[i + j] += x * y
        return number(_poly_mod(prod, poly, p))

    return _ring_from_functions(
        q,
        lambda a, b: number([(x + y) % p for x, y in zip(digits(a), digits(b))]),
        mul,
        0,
        1,
        ("gf", p, k, tuple(poly)),
    )


def build_product(factors: Sequence[FiniteRing]) -> FiniteRing:
    """Direct product with componentwise operations.

    Elements are tuples encoded in mixed radix with the last factor varying
    fastest.
    """
    factors = list(factors)
    if not factors:
        raise RingError("product of an empty list of rings")
    sizes = [f.size for f in factors]
    tuples = list(itertools.product(*(range(s) for s in sizes)))
    index = {t: i for i, t in enumerate(tuples)}

    def op(name):
        tables = [getattr(f, name) for f in factors]
        return lambda a, b: index[tuple(t[x][y] for t, x, y in zip(tables, tuples[a], tuples[b]))]

    zero = index[tuple(f.zero for f in factors)]
    one = index[tuple(f.one for f in factors)]
    labels = [",".join(f.label(x) for f, x in zip(factors, t)) for t in tuples]
    if len(factors) > 1:
        labels = [f"({s})" for s in labels]
    return _ring_from_functions(
        len(tuples), op("add_table"), op("mul_table"), zero, one, ("product", tuple(factors)), labels
    )


def is_ideal(R: FiniteRing, members: Iterable[int]) -> bool:
    s = set(members)
    if R.zero not in s:
        return False
    for a in s:
        if R.neg_table[a] not in s:
            return False
        if any(R.add_table[a][b] not in s for b in s):
            return False
        if any(R.mul_table[r][a] not in s for r in R.elements()):
            return False
    return True


def make_ideal(R: FiniteRing, members: Iterable[int]) -> Ideal:
    ms = tuple(sorted(set(members)))
    if not is_ideal(R, ms):
        raise NotAnIdealError(f"{list(ms)} is not an ideal")
    return Ideal(R, ms)


def principal_ideal(R: FiniteRing, a: int) -> Ideal:
    return Ideal(R, tuple(sorted({R.mul_table[r][a] for r in R.elements()})))


def zero_ideal(R: FiniteRing) -> Ideal:
    return Ideal(R, (R.zero,))


def whole_ring(R: FiniteRing) -> Ideal:
    return Ideal(R, tuple(R.elements()))


def quotient_ring(R: FiniteRing, I: Ideal) -> tuple[FiniteRing, tuple[int, ...]]:
    """``R/I`` and the projection ``R -> R/I`` as a tuple indexed by elements of ``R``.

    Cosets are ordered by their least element; ``representatives`` of the
    quotient (its labels) are those least elements.
    """
    if I.ring is not R and not I.ring.same_tables(R):
        raise NotAnIdealError("ideal belongs to a different ring")
    if not is_ideal(R, I.members):
        raise NotAnIdealError(f"{list(I.members)} is not an ideal")
    rep = [min(R.add_table[a][i] for i in I.members) for a in R.elements()]
    reps = sorted(set(rep))
    pos = {r: k for k, r in enumerate(reps)}
    projection = tuple(pos[rep[a]] for a in R.elements())
    Q = _ring_from_functions(
        len(reps),
        lambda x, y: projection[R.add_table[reps[x]][reps[y]]],
        lambda x, y: projection[R.mul_table[reps[x]][reps[y]]],
        projection[R.zero],
        projection[R.one],
        ("quotient", R, I.members),
        [R.label(r) for r in reps],
    )
    return Q, projection


def coset_representatives(Q: FiniteRing) -> tuple[int, ...]:
    """Least element of each coset, for a ring built by :func:`quotient_ring`."""
    if Q.provenance[0] != "quotient":
        raise RingError("not a quotient ring")
    R, members = Q.provenance[1], Q.provenance[2]
    return tuple(sorted({min(R.add_table[a][i] for i in members) for a in R.elements()}))


@lru_cache(maxsize=None)
def units(R: FiniteRing) -> UnitGroup:
    """The group of units; for the zero ring this is ``{0}``."""
    inverse = {}
    for u in R.elements():
        row = R.mul_table[u]
        for v in R.elements():
            if row[v] == R.one:
                inverse[u] = v
                break
    return UnitGroup(R, tuple(sorted(inverse)), inverse)


@lru_cache(maxsize=None)
def idempotents(R: FiniteRing) -> tuple[int, ...]:
    return tuple(e for e in R.elements() if R.mul_table[e][e] == e)


def corner_ring(R: FiniteRing, e: int) -> tuple[FiniteRing, tuple[int, ...]]:
    """The ring ``Re`` (identity ``e``) and its embedding as a tuple of elements of ``R``."""
    if R.mul_table[e][e] != e:
        raise RingError(f"{e} is not idempotent")
    members = tuple(sorted({R.mul_table[r][e] for r in R.elements()}))
    pos = {m: i for i, m in enumerate(members)}
    sub = _ring_from_functions(
        len(members),
        lambda x, y: pos[R.add_table[members[x]][members[y]]],
        lambda x, y: pos[R.mul_table[members[x]][members[y]]],
        pos[R.zero],
        pos[e],
        ("corner", R, e),
        [R.label(m) for m in members],
    )
    return sub, members
