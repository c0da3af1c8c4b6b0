"""Predicted spectra of the walks from the closed-form eigenvalue formulas.

Four independent enumerations are provided:

* ``predicted_spectrum``: pairs ``(W, rho)`` with ``W`` a cyclic submodule
  of the dual module and ``rho`` a character of ``U(R/ann W)``;
* ``predicted_spectrum_triple``: triples ``(e, orbit, rho)`` with ``e`` the
  minimal idempotent fixing a character, ``rho`` a character of ``U(Re)``
  trivial on the stabilizer;
* ``predicted_spectrum_frobenius``: ``V = R`` with a generating character,
  indexed by principal ideals;
* ``predicted_spectrum_uniform``: uniform ``P``, indexed by annihilator
  classes of cyclic submodules with multiplicities.
"""

from __future__ import annotations

import json
import math
from collections import defaultdict
from dataclasses import asdict, dataclass, field, replace
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .characters import (
    Character,
    DualModule,
    character_group,
    dual_module,
    invariant_factors,
    root_of_unity,
    stabilizer_in_units,
)
from .modules import (
    CyclicSubmodule,
    FiniteModule,
    annihilator_of,
    cyclic_submodules,
    generators_of,
    is_regular,
    minimal_fixing_idempotent,
)
from .rings import FiniteRing, Ideal, corner_ring, principal_ideal, quotient_ring, units
from .walks import (
    CoinToss,
    Distribution,
    HypothesisViolation,
    WalkKind,
    WalkSpec,
    prepare_P,
)

GENERATOR_TOL = 1e-12


class NoGeneratingCharacter(ValueError):
    pass


@dataclass(frozen=True)
class SpectrumItem:
    """One predicted eigenvalue and the data indexing it.

    ``submodule`` is the canonical generator of the indexing cyclic submodule
    (in the dual module for the general and triple paths, in ``V`` or ``R``
    for the uniform and Frobenius paths).  ``rho`` holds the character's
    exponents against the invariant-factor basis of the relevant unit group.
    """

    value: complex
    multiplicity: int
    path: str
    submodule: int
    submodule_size: int
    annihilator: tuple[int, ...]
    rho: tuple[int, ...]
    chi: tuple[int, ...] | None = None
    idempotent: int | None = None
    designated: bool = False

    def to_json(self) -> dict:
        d = asdict(self)
        d["value"] = {"re": self.value.real, "im": self.value.imag}
        d["annihilator"] = list(self.annihilator)
        d["rho"] = list(self.rho)
        d["chi"] = None if self.chi is None else list(self.chi)
        return d

    @classmethod
    def from_json(cls, d: dict) -> SpectrumItem:
        return cls(
            value=complex(d["value"]["re"], d["value"]["im"]),
            multiplicity=int(d["multiplicity"]),
            path=d["path"],
            submodule=int(d["submodule"]),
            submodule_size=int(d["submodule_size"]),
            annihilator=tuple(d["annihilator"]),
            rho=tuple(d["rho"]),
            chi=None if d.get("chi") is None else tuple(d["chi"]),
            idempotent=d.get("idempotent"),
            designated=bool(d.get("designated", False)),
        )


@dataclass(frozen=True)
class SpectrumReport:
    items: tuple[SpectrumItem, ...]
    path: str
    dimension: int = field(default=0)

    @property
    def total_multiplicity(self) -> int:
        return sum(it.multiplicity for it in self.items)

    def values(self) -> list[complex]:
        """Eigenvalues with multiplicity, in item order."""
        return [it.value for it in self.items for _ in range(it.multiplicity)]

    def grouped(self, tol: float = 1e-9) -> list[tuple[complex, int]]:
        groups: list[list] = []
        for it in self.items:
            for g in groups:
                if abs(g[0] - it.value) < tol:
                    g[1] += it.multiplicity
                    break
            else:
                groups.append([it.value, it.multiplicity])
        groups.sort(key=lambda g: (-round(g[0].real, 12), -round(g[0].imag, 12)))
        return [(v, m) for v, m in groups]

    def designated_item(self) -> SpectrumItem | None:
        return next((it for it in self.items if it.designated), None)

    def spectral_gap(self) -> float | None:
        """``1 - max |lambda|`` over all eigenvalues except one copy of the designated item."""
        rest = []
        skipped = False
        for it in self.items:
            m = it.multiplicity
            if it.designated and not skipped:
                skipped = True
                m -= 1
            rest.extend([abs(it.value)] * m)
        if not skipped:
            return None
        return 1.0 - max(rest, default=0.0)

    def perturbed(self, delta: complex = 0.01, index: int = 0) -> SpectrumReport:
        """Copy with one eigenvalue shifted by ``delta`` (split off from its item if needed)."""
        items = list(self.items)
        it = items[index]
        moved = replace(it, value=it.value + delta, multiplicity=1, designated=False)
        if it.multiplicity == 1:
            items[index] = moved
        else:
            items[index] = replace(it, multiplicity=it.multiplicity - 1)
            items.insert(index + 1, moved)
        return SpectrumReport(tuple(items), self.path + "+perturbed", self.dimension)

    def to_json(self) -> dict:
        return {
            "path": self.path,
            "dimension": self.dimension,
            "items": [it.to_json() for it in self.items],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)

    @classmethod
    def from_json(cls, d: dict) -> SpectrumReport:
        return cls(tuple(SpectrumItem.from_json(x) for x in d["items"]), d["path"], int(d["dimension"]))

    def to_csv(self, tol: float = 1e-9) -> str:
        lines = ["re,im,multiplicity"]
        for v, m in self.grouped(tol):
            lines.append(f"{_clean(v.real)!r},{_clean(v.imag)!r},{m}")
        return "\n".join(lines) + "\n"


def _clean(x: float) -> float:
    return 0.0 if abs(x) < 1e-15 else x


def multisets_agree(a: Sequence[complex], b: Sequence[complex], tol: float = 1e-9) -> bool:
    """Greedy matching of two finite multisets of complex numbers within ``tol``."""
    if len(a) != len(b):
        return False
    remaining = list(b)
    for x in sorted(a, key=lambda z: (z.real, z.imag)):
        best = min(range(len(remaining)), key=lambda i: abs(remaining[i] - x), default=None)
        if best is None or abs(remaining[best] - x) > tol:
            return False
        remaining.pop(best)
    return True


def cyclotomic_sum(buckets: dict[int, Fraction], N: int) -> complex:
    """``sum_k w_k exp(2 pi i k / N)`` for exact rational weights ``w_k``."""
    terms = [(float(w), root_of_unity(k, N)) for k, w in buckets.items() if w]
    return complex(math.fsum(w * z.real for w, z in terms), math.fsum(w * z.imag for w, z in terms))


# Unit groups of quotient rings and their characters ------------------------

@dataclass(frozen=True, eq=False)
class UnitCharacters:
    """Characters of ``U(S)`` for a ring ``S``; ``rho`` evaluates at unit elements of ``S``."""

    ring: FiniteRing
    unit_members: tuple[int, ...]
    characters: tuple[Character, ...]

    def turns(self, rho: Character, u: int) -> int:
        return rho.turns(self.unit_members.index(u))

    @property
    def exponent(self) -> int:
        return self.characters[0].presentation.exponent


@lru_cache(maxsize=None)
def unit_characters(S: FiniteRing) -> UnitCharacters:
    U = units(S)
    pres = invariant_factors(U.group_table(), U.identity_position)
    return UnitCharacters(S, U.members, tuple(character_group(pres)))


_quotients: dict[tuple[int, tuple[int, ...]], tuple[FiniteRing, tuple[int, ...]]] = {}


def quotient_by(R: FiniteRing, members: tuple[int, ...]) -> tuple[FiniteRing, tuple[int, ...]]:
    key = (id(R), members)
    hit = _quotients.get(key)
    if hit is None or hit[0].provenance[1] is not R:
        hit = quotient_ring(R, Ideal(R, members))
        _quotients[key] = hit
    return hit


# Fourier coefficients -------------------------------------------------------

def fourier_P(P: Distribution, chi: Character) -> complex:
    """``sum_b P(b) chi(b)``."""
    buckets: dict[int, Fraction] = defaultdict(Fraction)
    for b, w in enumerate(P.weights):
        if w:
            buckets[chi.turns(b)] += w
    return cyclotomic_sum(buckets, chi.presentation.exponent)


def fourier_Q(Q: Distribution, W: CyclicSubmodule | Ideal, rho: Character) -> complex:
    """``sum Q(a) rho(a + ann W)`` over ``a`` whose coset is a unit of ``R/ann W``.

    ``rho`` is a character of ``U(R/ann W)`` as returned by
    :func:`unit_characters` on the quotient.
    """
    ann = W.annihilator if isinstance(W, CyclicSubmodule) else W
    R = Q.carrier
    S, proj = quotient_by(R, ann.members)
    uc = unit_characters(S)
    buckets: dict[int, Fraction] = defaultdict(Fraction)
    unit_set = set(uc.unit_members)
    for a, w in enumerate(Q.weights):
        if w and proj[a] in unit_set:
            buckets[uc.turns(rho, proj[a])] += w
    return cyclotomic_sum(buckets, uc.exponent)


def _evaluate(kind: WalkKind, x: complex, y: complex) -> complex:
    return kind.evaluate(x, y)


def _kind_of(spec_or_kind) -> WalkKind:
    return spec_or_kind.kind if isinstance(spec_or_kind, WalkSpec) else spec_or_kind


# General path ---------------------------------------------------------------

def dual_fourier_table(P: Distribution, D: DualModule) -> list[complex]:
    return [fourier_P(P, chi) for chi in D.characters]


def check_generator_independence(D: DualModule, phat: Sequence[complex], tol: float = GENERATOR_TOL) -> None:
    """Raise unless ``P^`` takes one value on all generators of each cyclic submodule."""
    for W in cyclic_submodules(D.module):
        ref = phat[W.generator]
        for g in generators_of(W):
            if abs(phat[g] - ref) > tol:
                raise HypothesisViolation(W.generator, g)


def predicted_spectrum(spec: WalkSpec, V: FiniteModule | None = None, symmetrize: bool = False) -> SpectrumReport:
    """Eigenvalues indexed by ``(W, rho)``: ``W = R chi`` cyclic in the dual, ``rho`` in ``U(R/ann W)^``."""
    V = V or spec.module
    P = prepare_P(spec.P, symmetrize)
    Q = spec.Q
    kind = spec.kind
    D = dual_module(V)
    phat = dual_fourier_table(P, D)
    check_generator_independence(D, phat)
    R = V.ring
    items = []
    for W in cyclic_submodules(D.module):
        S, _ = quotient_by(R, W.annihilator.members)
        uc = unit_characters(S)
        zero_W = W.members == (D.module.zero,)
        for rho in uc.characters:
            qhat = fourier_Q(Q, W, rho)
            items.append(
                SpectrumItem(
                    value=_evaluate(kind, phat[W.generator], qhat),
                    multiplicity=1,
                    path="general",
                    submodule=W.generator,
                    submodule_size=len(W),
                    annihilator=W.annihilator.members,
                    rho=rho.exponents,
                    chi=D.characters[W.generator].exponents,
                    designated=zero_W and rho.is_trivial(),
                )
            )
    return SpectrumReport(tuple(items), "general", V.size)


def count_identity(V: FiniteModule) -> int:
    """``sum over cyclic W in the dual of |U(R/ann W)|``; equals ``|V|``."""
    D = dual_module(V)
    total = 0
    for W in cyclic_submodules(D.module):
        S, _ = quotient_by(V.ring, W.annihilator.members)
        total += len(units(S))
    return total


# Triple path ----------------------------------------------------------------

def predicted_spectrum_triple(spec: WalkSpec, V: FiniteModule | None = None, symmetrize: bool = False) -> SpectrumReport:
    """Eigenvalues indexed by ``(e, U(R) chi, rho)``.

    ``e`` is the minimal idempotent fixing ``chi`` and ``rho`` a character of
    ``U(Re)`` whose kernel contains the stabilizer of ``chi``; the value uses
    ``Q^(rho) = sum over a with Ra >= Re of Q(a) rho(a e)``.
    """
    V = V or spec.module
    P = prepare_P(spec.P, symmetrize)
    Q, kind, R = spec.Q, spec.kind, V.ring
    D = dual_module(V)
    Dm = D.module
    U = units(R).members
    seen: set[int] = set()
    canonical = {}
    for W in cyclic_submodules(Dm):
        for g in generators_of(W):
            canonical[g] = W
    items = []
    for chi in Dm.elements():
        if chi in seen:
            continue
        orbit = sorted({Dm.action[u][chi] for u in U})
        seen.update(orbit)
        e = minimal_fixing_idempotent(Dm, chi)
        if any(minimal_fixing_idempotent(Dm, c) != e for c in orbit):
            raise AssertionError("minimal fixing idempotent is not constant on an orbit")
        corner, embed = corner_ring(R, e)
        uc = unit_characters(corner)
        unit_elements = [embed[i] for i in uc.unit_members]
        stab = stabilizer_in_units(D, chi, unit_elements)
        phat = fourier_P(P, D.characters[chi])
        above = [a for a in R.elements() if e in principal_ideal(R, a)]
        W = canonical[chi]
        for rho in uc.characters:
            if any(uc.turns(rho, embed.index(s)) for s in stab):
                continue
            buckets: dict[int, Fraction] = defaultdict(Fraction)
            for a in above:
                if Q[a]:
                    ae = embed.index(R.mul_table[a][e])
                    if ae not in uc.unit_members:
                        raise AssertionError(f"a*e is not a unit of Re for a={a}, e={e}")
                    buckets[uc.turns(rho, ae)] += Q[a]
            qhat = cyclotomic_sum(buckets, uc.exponent)
            items.append(
                SpectrumItem(
                    value=_evaluate(kind, phat, qhat),
                    multiplicity=1,
                    path="triple",
                    submodule=W.generator,
                    submodule_size=len(W),
                    annihilator=W.annihilator.members,
                    rho=rho.exponents,
                    chi=D.characters[chi].exponents,
                    idempotent=e,
                    designated=len(W) == 1 and rho.is_trivial(),
                )
            )
    return SpectrumReport(tuple(items), "triple", V.size)


# Frobenius path -------------------------------------------------------------

def generating_character(R: FiniteRing) -> Character:
    """First character ``chi`` of ``(R,+)`` (in canonical order) with ``r -> r chi`` injective.

    For ``Z/n`` this is ``m -> exp(2 pi i m / n)``.
    """
    from .modules import regular_module

    D = dual_module(regular_module(R))
    order = sorted(D.module.elements(), key=lambda i: (D.characters[i].is_trivial() and R.size > 1, i))
    for chi in order:
        if len({D.action[r][chi] for r in R.elements()}) == R.size:
            return D.characters[chi]
    raise NoGeneratingCharacter("ring has no generating character (not Frobenius)")


def predicted_spectrum_frobenius(spec: WalkSpec, R: FiniteRing | None = None, symmetrize: bool = False) -> SpectrumReport:
    """``V = R`` with a generating character ``chi``: items ``(Rb, rho)``,
    ``P^ = sum_r P(r) chi(b r)``, ``Q^ = sum over r in U(R)+ann(b) of Q(r) rho(r + ann b)``.
    """
    V = spec.module
    R = R or V.ring
    if not is_regular(V):
        raise ValueError("the Frobenius path needs V = R")
    P = prepare_P(spec.P, symmetrize)
    Q, kind = spec.Q, spec.kind
    chi = generating_character(R)
    N = chi.presentation.exponent
    U = units(R).members
    items = []
    for W in cyclic_submodules(V):
        b = W.generator
        ann = annihilator_of(V, b)
        pb: dict[int, Fraction] = defaultdict(Fraction)
        for r, w in enumerate(P.weights):
            if w:
                pb[chi.turns(R.mul_table[b][r])] += w
        phat = cyclotomic_sum(pb, N)
        shifted_units = sorted({R.add_table[u][i] for u in U for i in ann.members})
        S, proj = quotient_by(R, ann.members)
        uc = unit_characters(S)
        for rho in uc.characters:
            qb: dict[int, Fraction] = defaultdict(Fraction)
            for r in shifted_units:
                if Q[r]:
                    qb[uc.turns(rho, proj[r])] += Q[r]
            items.append(
                SpectrumItem(
                    value=_evaluate(kind, phat, cyclotomic_sum(qb, uc.exponent)),
                    multiplicity=1,
                    path="frobenius",
                    submodule=b,
                    submodule_size=len(W),
                    annihilator=ann.members,
                    rho=rho.exponents,
                    designated=len(W) == 1 and rho.is_trivial(),
                )
            )
    return SpectrumReport(tuple(items), "frobenius", V.size)


# Uniform path ---------------------------------------------------------------

def predicted_spectrum_uniform(
    Q: Distribution, alpha, V: FiniteModule, side: str = "module", path: str = "uniform"
) -> SpectrumReport:
    """Coin-toss spectrum for uniform ``P``, indexed by ``([W], rho)``.

    ``[W]`` runs over annihilator classes of cyclic submodules of ``V``
    (``side="module"``) or of its dual (``side="dual"``); ``rho`` over
    characters of ``U(R)`` trivial on ``(1 + ann W) & U(R)``.  The multiplicity
    is the number of cyclic submodules in the class.
    """
    alpha = Fraction(alpha)
    R = V.ring
    M = V if side == "module" else dual_module(V).module
    classes: dict[tuple[int, ...], list[CyclicSubmodule]] = {}
    for W in cyclic_submodules(M):
        classes.setdefault(W.annihilator.members, []).append(W)
    uc = unit_characters(R)
    U = uc.unit_members
    items = []
    for ann, Ws in classes.items():
        W = Ws[0]
        if len(W) == 1:
            items.append(
                SpectrumItem(1 + 0j, len(Ws), path, W.generator, 1, ann, (0,) * len(uc.characters[0].exponents),
                             designated=True)
            )
            continue
        ann_set = set(ann)
        kernel = [u for u in U if R.sub(u, R.one) in ann_set]
        lift = {}
        for a in R.elements():
            candidates = [u for u in U if R.sub(u, a) in ann_set]
            if candidates:
                lift[a] = min(candidates)
        for rho in uc.characters:
            if any(uc.turns(rho, u) for u in kernel):
                continue
            buckets: dict[int, Fraction] = defaultdict(Fraction)
            for a, u in lift.items():
                if Q[a]:
                    buckets[uc.turns(rho, u)] += Q[a]
            value = float(1 - alpha) * cyclotomic_sum(buckets, uc.exponent)
            items.append(SpectrumItem(value, len(Ws), path, W.generator, len(W), ann, rho.exponents))
    return SpectrumReport(tuple(items), path, V.size)


def multiplication_walk_spectrum(Q: Distribution, V: FiniteModule, side: str = "module") -> SpectrumReport:
    """Spectrum of the walk ``x -> a x``, ``a ~ Q``: the uniform path at ``alpha = 0``."""
    return predicted_spectrum_uniform(Q, 0, V, side=side, path=f"multiplication-{side}")


def spectrum_for(spec: WalkSpec, path: str = "general", symmetrize: bool = False) -> SpectrumReport:
    """Dispatch on the path name: general, triple, frobenius or uniform."""
    if path == "general":
        return predicted_spectrum(spec, symmetrize=symmetrize)
    if path == "triple":
        return predicted_spectrum_triple(spec, symmetrize=symmetrize)
    if path == "frobenius":
        return predicted_spectrum_frobenius(spec, symmetrize=symmetrize)
    if path == "uniform":
        if not isinstance(spec.kind, CoinToss) or not spec.P.is_uniform():
            raise ValueError("the uniform path needs a coin-toss walk with uniform P")
        return predicted_spectrum_uniform(spec.Q, spec.kind.alpha, spec.module)
    raise ValueError(f"unknown path {path!r}")


def applicable_paths(spec: WalkSpec) -> list[str]:
    paths = ["general", "triple"]
    if is_regular(spec.module):
        try:
            generating_character(spec.module.ring)
            paths.append("frobenius")
        except NoGeneratingCharacter:
            pass
    if isinstance(spec.kind, CoinToss) and spec.P.is_uniform():
        paths.append("uniform")
    return paths

