"""Distributions and transition matrices for coin-toss, affine and polynomial walks.

Matrices are row-stochastic in the usual Markov-chain convention: entry
``(x, y)`` is the probability of stepping from state ``x`` to ``y``, with
states in module element order.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence, Union

import networkx as nx

from .modules import FiniteModule
from .rings import FiniteRing, units

Carrier = Union[FiniteRing, FiniteModule]
ComplexRational = tuple[Fraction, Fraction]


class WalkError(ValueError):
    pass


class HypothesisViolation(WalkError):
    """P is not constant on associates."""

    def __init__(self, v: int, w: int):
        super().__init__(f"P is not constant on associates: P({v}) != P({w})")
        self.witness = (v, w)


@dataclass(frozen=True, eq=False)
class Distribution:
    carrier: Carrier
    weights: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.weights) != self.carrier.size:
            raise WalkError(f"expected {self.carrier.size} weights, got {len(self.weights)}")
        if any(w < 0 for w in self.weights):
            raise WalkError("weights must be nonnegative")
        if sum(self.weights) != 1:
            raise WalkError("weights must sum to 1")

    @classmethod
    def from_weights(cls, carrier: Carrier, weights: Sequence) -> Distribution:
        return cls(carrier, tuple(Fraction(w) for w in weights))

    @classmethod
    def uniform(cls, carrier: Carrier) -> Distribution:
        return cls(carrier, (Fraction(1, carrier.size),) * carrier.size)

    @classmethod
    def point_mass(cls, carrier: Carrier, x: int) -> Distribution:
        return cls(carrier, tuple(Fraction(int(i == x)) for i in range(carrier.size)))

    def __getitem__(self, x: int) -> Fraction:
        return self.weights[x]

    def support(self) -> tuple[int, ...]:
        return tuple(x for x, w in enumerate(self.weights) if w)

    def is_uniform(self) -> bool:
        return len(set(self.weights)) == 1


# Walk kinds.  Each exposes the polynomial p(x, y) it corresponds to.

@dataclass(frozen=True)
class CoinToss:
    alpha: Fraction

    def __post_init__(self):
        if not 0 <= self.alpha <= 1:
            raise WalkError(f"alpha must lie in [0, 1], got {self.alpha}")

    def coefficients(self) -> dict[tuple[int, int], ComplexRational]:
        out = {}
        if self.alpha:
            out[(1, 0)] = (Fraction(self.alpha), Fraction(0))
        if self.alpha != 1:
            out[(0, 1)] = (1 - Fraction(self.alpha), Fraction(0))
        return out

    def evaluate(self, x: complex, y: complex) -> complex:
        a = float(self.alpha)
        return a * x + (1 - a) * y


@dataclass(frozen=True)
class Affine:
    def coefficients(self) -> dict[tuple[int, int], ComplexRational]:
        return {(1, 1): (Fraction(1), Fraction(0))}

    def evaluate(self, x: complex, y: complex) -> complex:
        return x * y


@dataclass(frozen=True)
class Polynomial:
    """``p(x, y) = sum c_ij x^i y^j``, ``x`` standing for P and ``y`` for Q.

    Monomials are read with P to the left, i.e. ``x^i y^j -> P^i Q^j``:
    apply ``j`` dilations first, then ``i`` translations.
    """

    coeffs: tuple[tuple[tuple[int, int], ComplexRational], ...]

    @classmethod
    def from_mapping(cls, coeffs: Mapping[tuple[int, int], object]) -> Polynomial:
        items = []
        for (i, j), c in sorted(coeffs.items()):
            if i < 0 or j < 0:
                raise WalkError(f"negative exponent in monomial {(i, j)}")
            re, im = c if isinstance(c, tuple) else (c, 0)
            re, im = Fraction(re), Fraction(im)
            if re or im:
                items.append(((int(i), int(j)), (re, im)))
        return cls(tuple(items))

    def coefficients(self) -> dict[tuple[int, int], ComplexRational]:
        return dict(self.coeffs)

    def evaluate(self, x: complex, y: complex) -> complex:
        return sum(complex(float(re), float(im)) * x ** i * y ** j for (i, j), (re, im) in self.coeffs)

    @property
    def is_real(self) -> bool:
        return all(im == 0 for _, (_, im) in self.coeffs)

    @property
    def is_stochastic(self) -> bool:
        """Nonnegative real coefficients summing to 1 give a probability on the monoid."""
        return self.is_real and all(re >= 0 for _, (re, _) in self.coeffs) and sum(
            re for _, (re, _) in self.coeffs
        ) == 1


WalkKind = Union[CoinToss, Affine, Polynomial]


@dataclass(frozen=True, eq=False)
class WalkSpec:
    kind: WalkKind
    P: Distribution
    Q: Distribution

    @property
    def module(self) -> FiniteModule:
        return self.P.carrier  # type: ignore[return-value]


@dataclass(frozen=True, eq=False)
class TransitionMatrix:
    """Exact matrix; ``imag`` is ``None`` unless complex coefficients were used."""

    real: tuple[tuple[Fraction, ...], ...]
    imag: tuple[tuple[Fraction, ...], ...] | None = None
    stochastic: bool = True
    labels: tuple[str, ...] = field(default=(), repr=False)

    @property
    def size(self) -> int:
        return len(self.real)

    def entry(self, x: int, y: int) -> Fraction | complex:
        if self.imag is None:
            return self.real[x][y]
        return complex(float(self.real[x][y]), float(self.imag[x][y]))

    def row_sums(self) -> list[Fraction]:
        return [sum(row, Fraction(0)) for row in self.real]

    def is_row_stochastic(self) -> bool:
        return self.imag is None and all(
            sum(row, Fraction(0)) == 1 and all(x >= 0 for x in row) for row in self.real
        )

    def to_csv(self) -> str:
        labels = self.labels or tuple(str(i) for i in range(self.size))
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["state", *labels])
        for i, row in enumerate(self.real):
            if self.imag is None:
                cells = [str(x) for x in row]
            else:
                cells = [f"{x}{'+' if y >= 0 else '-'}{abs(y)}i" for x, y in zip(row, self.imag[i])]
            writer.writerow([labels[i], *cells])
        return buf.getvalue()

    def to_dot(self) -> str:
        labels = self.labels or tuple(str(i) for i in range(self.size))
        lines = ["digraph walk {"]
        for i, row in enumerate(self.real):
            for j, x in enumerate(row):
                if x or (self.imag is not None and self.imag[i][j]):
                    lines.append(f'  "{labels[i]}" -> "{labels[j]}" [label="{x}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def validate_constant_on_associates(P: Distribution) -> tuple[int, int] | None:
    """``None`` if ``P(u v) = P(v)`` for all units ``u``; else a witness pair ``(v, u v)``."""
    V = P.carrier
    for v in V.elements():
        for u in units(V.ring).members:
            w = V.action[u][v]
            if P[w] != P[v]:
                return (v, w)
    return None


def symmetrize(P: Distribution) -> Distribution:
    """Average ``P`` over each orbit of the unit group."""
    V = P.carrier
    U = units(V.ring).members
    weights = []
    for v in V.elements():
        orbit = {V.action[u][v] for u in U}
        weights.append(sum((P[w] for w in orbit), Fraction(0)) / len(orbit))
    return Distribution(V, tuple(weights))


def prepare_P(P: Distribution, symmetrize_violations: bool = False) -> Distribution:
    bad = validate_constant_on_associates(P)
    if bad is None:
        return P
    if symmetrize_violations:
        return symmetrize(P)
    raise HypothesisViolation(*bad)


def _check_pair(P: Distribution, Q: Distribution) -> FiniteModule:
    V = P.carrier
    if not isinstance(V, FiniteModule):
        raise WalkError("P must be a distribution on a module")
    if Q.carrier is not V.ring and not (isinstance(Q.carrier, FiniteRing) and Q.carrier.same_tables(V.ring)):
        raise WalkError("Q must be a distribution on the ring acting on V")
    return V


def _scaled(weights: Sequence[Fraction]) -> tuple[int, list[tuple[int, int]]]:
    """Common denominator and the nonzero weights as ``(index, numerator)`` pairs."""
    den = math.lcm(*(Fraction(w).denominator for w in weights)) if weights else 1
    return den, [(i, int(w * den)) for i, w in enumerate(weights) if w]


def _affine_entries(V: FiniteModule, Q: Sequence[Fraction], P: Sequence[Fraction]) -> list[list[Fraction]]:
    """``M[x][y] = sum over a, b with a x + b = y of Q(a) P(b)``."""
    n = V.size
    dq, q_support = _scaled(Q)
    dp, p_support = _scaled(P)
    den = dq * dp
    rows = []
    for x in range(n):
        row = [0] * n
        for a, qa in q_support:
            add_row = V.add_table[V.action[a][x]]
            for b, pb in p_support:
                row[add_row[b]] += qa * pb
        rows.append([Fraction(v, den) for v in row])
    return rows


def _freeze(rows) -> tuple[tuple[Fraction, ...], ...]:
    return tuple(tuple(r) for r in rows)


def coin_toss_matrix(
    P: Distribution, Q: Distribution, alpha, symmetrize_violations: bool = False
) -> TransitionMatrix:
    """Heads (prob. ``alpha``): ``x -> x + b``, ``b ~ P``; tails: ``x -> a x``, ``a ~ Q``."""
    V = _check_pair(P, Q)
    P = prepare_P(P, symmetrize_violations)
    alpha = Fraction(alpha)
    CoinToss(alpha)
    n = V.size
    rows = []
    for x in range(n):
        row = [Fraction(0)] * n
        for b, pb in enumerate(P.weights):
            if pb:
                row[V.add_table[x][b]] += alpha * pb
        for a, qa in enumerate(Q.weights):
            if qa:
                row[V.action[a][x]] += (1 - alpha) * qa
        rows.append(row)
    return TransitionMatrix(_freeze(rows), labels=V.labels)


def affine_matrix(P: Distribution, Q: Distribution, symmetrize_violations: bool = False) -> TransitionMatrix:
    """``x -> a x + b`` with ``a ~ Q`` and ``b ~ P`` independent."""
    V = _check_pair(P, Q)
    P = prepare_P(P, symmetrize_violations)
    return TransitionMatrix(_freeze(_affine_entries(V, Q.weights, P.weights)), labels=V.labels)


def translation_matrix(P: Distribution) -> TransitionMatrix:
    V = P.carrier
    return TransitionMatrix(
        _freeze(_affine_entries(V, _point(V.ring.size, V.ring.one), P.weights)), labels=V.labels
    )


def dilation_matrix(Q: Distribution, V: FiniteModule) -> TransitionMatrix:
    """The walk of the multiplicative monoid on ``V`` driven by ``Q``."""
    return TransitionMatrix(_freeze(_affine_entries(V, Q.weights, _point(V.size, V.zero))), labels=V.labels)


def _point(n: int, x: int) -> list[Fraction]:
    out = [Fraction(0)] * n
    out[x] = Fraction(1)
    return out


def _additive_convolve(V: FiniteModule, f: Sequence[Fraction], g: Sequence[Fraction]) -> list[Fraction]:
    out = [Fraction(0)] * V.size
    for x, fx in enumerate(f):
        if fx:
            for y, gy in enumerate(g):
                if gy:
                    out[V.add_table[x][y]] += fx * gy
    return out


def _multiplicative_convolve(R: FiniteRing, f: Sequence[Fraction], g: Sequence[Fraction]) -> list[Fraction]:
    out = [Fraction(0)] * R.size
    for a, fa in enumerate(f):
        if fa:
            for b, gb in enumerate(g):
                if gb:
                    out[R.mul_table[a][b]] += fa * gb
    return out


def polynomial_operator_matrix(
    P: Distribution, Q: Distribution, coeffs: Polynomial | Mapping, symmetrize_violations: bool = False
) -> TransitionMatrix:
    """Transpose of the matrix of ``p(P, Q)`` acting on the basis ``V``.

    In the affine-monoid algebra ``P^i Q^j`` is the measure of ``x -> a x + b``
    with ``a ~ Q^{*j}`` (multiplicative convolution power) and
    ``b ~ P^{*i}`` (additive convolution power), so each monomial is an
    affine-walk matrix for those powers.
    """
    V = _check_pair(P, Q)
    P = prepare_P(P, symmetrize_violations)
    poly = coeffs if isinstance(coeffs, Polynomial) else Polynomial.from_mapping(coeffs)
    R = V.ring
    p_powers = [_point(V.size, V.zero)]
    q_powers = [_point(R.size, R.one)]
    terms = poly.coefficients()
    for i, j in terms:
        while len(p_powers) <= i:
            p_powers.append(_additive_convolve(V, p_powers[-1], P.weights))
        while len(q_powers) <= j:
            q_powers.append(_multiplicative_convolve(R, q_powers[-1], Q.weights))
    n = V.size
    real = [[Fraction(0)] * n for _ in range(n)]
    imag = [[Fraction(0)] * n for _ in range(n)]
    for (i, j), (re, im) in terms.items():
        term = _affine_entries(V, q_powers[j], p_powers[i])
        for x in range(n):
            for y, t in enumerate(term[x]):
                if t:
                    real[x][y] += re * t
                    imag[x][y] += im * t
    complex_valued = not poly.is_real
    return TransitionMatrix(
        _freeze(real),
        _freeze(imag) if complex_valued else None,
        stochastic=poly.is_stochastic,
        labels=V.labels,
    )


def walk_matrix(spec: WalkSpec, symmetrize_violations: bool = False) -> TransitionMatrix:
    kind = spec.kind
    if isinstance(kind, CoinToss):
        return coin_toss_matrix(spec.P, spec.Q, kind.alpha, symmetrize_violations)
    if isinstance(kind, Affine):
        return affine_matrix(spec.P, spec.Q, symmetrize_violations)
    return polynomial_operator_matrix(spec.P, spec.Q, kind, symmetrize_violations)


# Irreducibility -----------------------------------------------------------

@dataclass(frozen=True)
class IrreducibilityReport:
    support_generates: bool
    one_in_support_Q: bool
    zero_in_monoid_Q: bool
    sufficient_irreducible: bool | None
    sufficient_aperiodic: bool | None
    irreducible: bool
    aperiodic: bool

    @property
    def sound(self) -> bool:
        """The sufficient conditions never claim more than the exact check."""
        if self.sufficient_irreducible and not self.irreducible:
            return False
        if self.sufficient_aperiodic and not (self.irreducible and self.aperiodic):
            return False
        return True


def support_generates(P: Distribution) -> bool:
    V = P.carrier
    group = {V.zero}
    frontier = [V.zero]
    gens = P.support()
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = V.add_table[x][g]
                if y not in group:
                    group.add(y)
                    nxt.append(y)
        frontier = nxt
    return len(group) == V.size


def multiplicative_monoid(Q: Distribution) -> frozenset[int]:
    R = Q.carrier
    monoid = {R.one}
    frontier = [R.one]
    gens = Q.support()
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = R.mul_table[x][g]
                if y not in monoid:
                    monoid.add(y)
                    nxt.append(y)
        frontier = nxt
    return frozenset(monoid)


def transition_digraph(A: TransitionMatrix) -> nx.DiGraph:
    G = nx.DiGraph()
    G.add_nodes_from(range(A.size))
    for x in range(A.size):
        for y in range(A.size):
            if A.real[x][y] or (A.imag is not None and A.imag[x][y]):
                G.add_edge(x, y)
    return G


def irreducibility_report(spec: WalkSpec, A: TransitionMatrix | None = None) -> IrreducibilityReport:
    """Sufficient conditions for irreducibility/aperiodicity next to the exact digraph answer."""
    gen = support_generates(spec.P)
    R = spec.Q.carrier
    one_in = R.one in spec.Q.support()
    zero_in = R.zero in multiplicative_monoid(spec.Q)
    kind = spec.kind
    if isinstance(kind, CoinToss):
        suff_irr = bool(0 < kind.alpha < 1 and gen)
        suff_ap = suff_irr and zero_in
    elif isinstance(kind, Affine):
        suff_irr = gen and one_in
        suff_ap = suff_irr and zero_in
    else:
        suff_irr = suff_ap = None
    if A is None:
        A = walk_matrix(spec, symmetrize_violations=True)
    G = transition_digraph(A)
    irreducible = nx.is_strongly_connected(G)
    aperiodic = irreducible and nx.is_aperiodic(G)
    return IrreducibilityReport(gen, one_in, zero_in, suff_irr, suff_ap, irreducible, aperiodic)

