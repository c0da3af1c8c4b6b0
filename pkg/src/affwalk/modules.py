"""Finite modules over finite commutative rings."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

from .rings import FiniteRing, Ideal, Table, idempotents, quotient_ring, units


class ModuleError(ValueError):
    pass


class RingMismatchError(ModuleError):
    pass


@dataclass(frozen=True, eq=False)
class FiniteModule:
    """A finite R-module: the additive group as tables plus ``action[r][v] = r*v``."""

    ring: FiniteRing
    size: int
    add_table: Table
    zero: int
    neg_table: tuple[int, ...]
    action: Table
    provenance: tuple = ("table",)
    labels: tuple[str, ...] = field(default=(), repr=False)

    def add(self, v: int, w: int) -> int:
        return self.add_table[v][w]

    def smul(self, r: int, v: int) -> int:
        return self.action[r][v]

    def elements(self) -> range:
        return range(self.size)

    def label(self, v: int) -> str:
        return self.labels[v] if self.labels else str(v)

    def check_axioms(self, exhaustive_limit: int = 4096, samples: int = 20000, seed: int = 0) -> None:
        """Raise ``ModuleError`` unless the tables satisfy the module axioms.

        Scalar identities are checked exhaustively when ``|R|*|V|`` is at most
        ``exhaustive_limit``; otherwise on random samples.
        """
        R, n = self.ring, self.size
        A, N, act = self.add_table, self.neg_table, self.action
        if len(act) != R.size or any(len(row) != n for row in act):
            raise ModuleError("action table has the wrong shape")
        for v in range(n):
            if A[v][self.zero] != v or A[v][N[v]] != self.zero:
                raise ModuleError(f"additive identity or inverse fails at {v}")
            if act[R.one][v] != v:
                raise ModuleError(f"1*v != v for v={v}")
            for w in range(n):
                if A[v][w] != A[w][v]:
                    raise ModuleError("addition not commutative")
        for u, v, w in itertools.product(range(n), repeat=3) if n <= 32 else ():
            if A[A[u][v]][w] != A[u][A[v][w]]:
                raise ModuleError("addition not associative")
        if R.size * n <= exhaustive_limit:
            cases = itertools.product(R.elements(), R.elements(), range(n))
        else:
            rng = random.Random(seed)
            cases = ((rng.randrange(R.size), rng.randrange(R.size), rng.randrange(n)) for _ in range(samples))
        for r, s, v in cases:
            if act[R.add_table[r][s]][v] != A[act[r][v]][act[s][v]]:
                raise ModuleError(f"(r+s)v != rv+sv at {(r, s, v)}")
            if act[R.mul_table[r][s]][v] != act[r][act[s][v]]:
                raise ModuleError(f"(rs)v != r(sv) at {(r, s, v)}")
            w = (v * 7 + r + s) % n
            if act[r][A[v][w]] != A[act[r][v]][act[r][w]]:
                raise ModuleError(f"r(v+w) != rv+rw at {(r, v, w)}")


@dataclass(frozen=True, eq=False)
class CyclicSubmodule:
    module: FiniteModule
    generator: int
    members: tuple[int, ...]
    annihilator: Ideal

    def __len__(self) -> int:
        return len(self.members)


def build_free_module(R: FiniteRing, d: int) -> FiniteModule:
    """``R^d``; tuples are encoded in mixed radix with the last coordinate fastest.

    Over ``Z/2`` with ``d = 2`` the elements come out as
    ``(0,0), (0,1), (1,0), (1,1)``.
    """
    if d < 1:
        raise ModuleError(f"rank must be positive, got {d}")
    if d == 1:
        return FiniteModule(
            R, R.size, R.add_table, R.zero, R.neg_table, R.mul_table, ("free", R, 1), R.labels
        )
    tuples = list(itertools.product(range(R.size), repeat=d))
    index = {t: i for i, t in enumerate(tuples)}
    A, M = R.add_table, R.mul_table
    add = tuple(tuple(index[tuple(A[x][y] for x, y in zip(s, t))] for t in tuples) for s in tuples)
    action = tuple(tuple(index[tuple(M[r][x] for x in t)] for t in tuples) for r in R.elements())
    neg = tuple(index[tuple(R.neg_table[x] for x in t)] for t in tuples)
    labels = tuple("(" + ",".join(R.label(x) for x in t) + ")" for t in tuples)
    return FiniteModule(R, len(tuples), add, index[(R.zero,) * d], neg, action, ("free", R, d), labels)


def build_cyclic_module(R: FiniteRing, I: Ideal) -> FiniteModule:
    """The cyclic module ``R/I`` with the induced action."""
    Q, proj = quotient_ring(R, I)
    reps = Q.labels
    rep_elements = sorted(set(min(R.add_table[a][i] for i in I.members) for a in R.elements()))
    action = tuple(tuple(proj[R.mul_table[r][rep_elements[x]]] for x in Q.elements()) for r in R.elements())
    return FiniteModule(
        R, Q.size, Q.add_table, Q.zero, Q.neg_table, action, ("cyclic", R, I.members), reps
    )


def regular_module(R: FiniteRing) -> FiniteModule:
    return build_free_module(R, 1)


def direct_sum(modules: Sequence[FiniteModule]) -> FiniteModule:
    """Componentwise direct sum; elements encoded in mixed radix, last summand fastest."""
    modules = list(modules)
    if not modules:
        raise ModuleError("direct sum of an empty list")
    R = modules[0].ring
    for m in modules[1:]:
        if m.ring is not R and not m.ring.same_tables(R):
            raise RingMismatchError("summands are modules over different rings")
    if len(modules) == 1:
        return modules[0]
    tuples = list(itertools.product(*(range(m.size) for m in modules)))
    index = {t: i for i, t in enumerate(tuples)}
    add = tuple(
        tuple(index[tuple(m.add_table[x][y] for m, x, y in zip(modules, s, t))] for t in tuples) for s in tuples
    )
    action = tuple(
        tuple(index[tuple(m.action[r][x] for m, x in zip(modules, t))] for t in tuples) for r in R.elements()
    )
    neg = tuple(index[tuple(m.neg_table[x] for m, x in zip(modules, t))] for t in tuples)
    labels = tuple("(" + ",".join(m.label(x) for m, x in zip(modules, t)) + ")" for t in tuples)
    zero = index[tuple(m.zero for m in modules)]
    return FiniteModule(R, len(tuples), add, zero, neg, action, ("sum", tuple(modules)), labels)


def is_regular(V: FiniteModule) -> bool:
    """True when ``V`` is the ring acting on itself."""
    R = V.ring
    return V.size == R.size and V.add_table == R.add_table and V.action == R.mul_table


def submodule_generated(V: FiniteModule, v: int) -> tuple[int, ...]:
    return tuple(sorted({V.action[r][v] for r in V.ring.elements()}))


def annihilator_of(V: FiniteModule, v: int) -> Ideal:
    R = V.ring
    return Ideal(R, tuple(r for r in R.elements() if V.action[r][v] == V.zero))


@lru_cache(maxsize=None)
def cyclic_submodules(V: FiniteModule) -> tuple[CyclicSubmodule, ...]:
    """All distinct ``R*v``, each with its least generator, sorted by (size, generator)."""
    seen: dict[tuple[int, ...], int] = {}
    for v in V.elements():
        seen.setdefault(submodule_generated(V, v), v)
    subs = [CyclicSubmodule(V, g, members, annihilator_of(V, g)) for members, g in seen.items()]
    subs.sort(key=lambda W: (len(W.members), W.generator))
    return tuple(subs)


def generators_of(W: CyclicSubmodule) -> tuple[int, ...]:
    V = W.module
    return tuple(v for v in W.members if submodule_generated(V, v) == W.members)


def associates_orbit(V: FiniteModule, v: int) -> tuple[int, ...]:
    return tuple(sorted({V.action[u][v] for u in units(V.ring).members}))


def check_cyclic_equals_unit_orbit(V: FiniteModule) -> bool:
    """Exhaustively check ``R v = R w  <=>  U(R) v = U(R) w`` over all pairs."""
    cyc = [submodule_generated(V, v) for v in V.elements()]
    orb = [associates_orbit(V, v) for v in V.elements()]
    return all((cyc[v] == cyc[w]) == (orb[v] == orb[w]) for v in V.elements() for w in V.elements())


def minimal_fixing_idempotent(V: FiniteModule, v: int) -> int:
    """The least idempotent (under ``e <= f`` iff ``ef = e``) with ``e*v = v``.

    Idempotents fixing ``v`` are closed under products, so their product is
    the minimum.
    """
    R = V.ring
    e = R.one
    for f in idempotents(R):
        if V.action[f][v] == v:
            e = R.mul_table[e][f]
    return e
