"""Check a predicted spectrum against the matrix it describes.

Two multisets of ``n`` complex numbers coincide iff their power sums agree for
``k = 1..n``, and the power sums of the eigenvalues of ``A`` are the traces
``tr(A^k)``.  Traces are computed exactly over the rationals, so the only
floating-point error is on the predicted side.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import flint
import numpy as np

from .characters import dual_module
from .modules import FiniteModule
from .spectrum import SpectrumReport
from .walks import Distribution, TransitionMatrix, dilation_matrix

DEFAULT_TOL = 1e-8


class DimensionMismatch(ValueError):
    pass


def _fmpq_matrix(rows: Sequence[Sequence[Fraction]]) -> flint.fmpq_mat:
    n = len(rows)
    m = len(rows[0]) if n else 0
    return flint.fmpq_mat(n, m, [flint.fmpq(x.numerator, x.denominator) for row in rows for x in row])


def _fraction(q) -> Fraction:
    return Fraction(int(q.p), int(q.q))


def characteristic_polynomial(A: TransitionMatrix) -> list[Fraction]:
    """Coefficients ``[1, c_1, ..., c_n]`` of ``det(x I - A)`` (highest degree first)."""
    if A.imag is not None:
        raise ValueError("exact characteristic polynomial needs a real matrix")
    if A.size == 0:
        return [Fraction(1)]
    coeffs = _fmpq_matrix(A.real).charpoly().coeffs()
    return [_fraction(c) for c in reversed(coeffs)]


def newton_power_sums(charpoly: Sequence[Fraction], kmax: int) -> list[Fraction]:
    """Power sums ``p_1..p_kmax`` of the roots of a monic polynomial via Newton's identities."""
    n = len(charpoly) - 1
    c = list(charpoly)
    p: list[Fraction] = []
    for k in range(1, kmax + 1):
        s = k * c[k] if k <= n else Fraction(0)
        for i in range(1, min(k - 1, n) + 1):
            s += c[i] * p[k - i - 1]
        p.append(-s)
    return p


def _traces_by_powers(A: TransitionMatrix, kmax: int) -> list[tuple[Fraction, Fraction]]:
    n = A.size
    if A.imag is None:
        M = _fmpq_matrix(A.real)
        out, P = [], M
        for k in range(1, kmax + 1):
            if k > 1:
                P = P * M
            out.append((sum((_fraction(P[i, i]) for i in range(n)), Fraction(0)), Fraction(0)))
        return out
    # [[Re, -Im], [Im, Re]] represents A; its k-th power represents A^k the same way
    block = [list(A.real[i]) + [-x for x in A.imag[i]] for i in range(n)]
    block += [list(A.imag[i]) + list(A.real[i]) for i in range(n)]
    M = _fmpq_matrix(block)
    out, P = [], M
    for k in range(1, kmax + 1):
        if k > 1:
            P = P * M
        re = sum((_fraction(P[i, i]) for i in range(n)), Fraction(0))
        im = sum((_fraction(P[n + i, i]) for i in range(n)), Fraction(0))
        out.append((re, im))
    return out


def exact_power_traces(A: TransitionMatrix, kmax: int | None = None, method: str = "auto") -> list[tuple[Fraction, Fraction]]:
    """``tr(A^k)`` for ``k = 1..kmax`` as exact ``(re, im)`` pairs.

    ``method="charpoly"`` derives them from the exact characteristic
    polynomial by Newton's identities; ``"powers"`` multiplies matrices.
    ``"auto"`` uses the characteristic polynomial for real matrices.
    """
    kmax = A.size if kmax is None else kmax
    if method == "auto":
        method = "charpoly" if A.imag is None else "powers"
    if method == "charpoly":
        return [(p, Fraction(0)) for p in newton_power_sums(characteristic_polynomial(A), kmax)]
    if method == "powers":
        return _traces_by_powers(A, kmax)
    raise ValueError(f"unknown method {method!r}")


def predicted_power_sums(S: SpectrumReport, kmax: int) -> list[complex]:
    out = []
    for k in range(1, kmax + 1):
        terms = [it.multiplicity * it.value ** k for it in S.items]
        out.append(complex(math.fsum(t.real for t in terms), math.fsum(t.imag for t in terms)))
    return out


@dataclass(frozen=True)
class StationaryResult:
    vector: tuple[Fraction, ...] | None
    fixed_space_dim: int


@dataclass(frozen=True)
class VerificationReport:
    power_sum_residuals: tuple[float, ...]
    max_residual: float
    tol: float
    passed: bool
    char_poly_match: bool | None = None
    stationary: tuple[Fraction, ...] | None = None
    fixed_space_dim: int | None = None
    spectral_gap: float | None = None
    path: str = field(default="")

    def to_json(self) -> dict:
        return {
            "path": self.path,
            "passed": self.passed,
            "tol": self.tol,
            "max_residual": self.max_residual,
            "power_sum_residuals": list(self.power_sum_residuals),
            "char_poly_match": self.char_poly_match,
            "stationary": None if self.stationary is None else [str(x) for x in self.stationary],
            "fixed_space_dim": self.fixed_space_dim,
            "spectral_gap": self.spectral_gap,
        }


def _char_poly_matches(charpoly: Sequence[Fraction], S: SpectrumReport, tol: float) -> bool:
    predicted = np.poly(np.array(S.values(), dtype=complex)) if S.values() else np.array([1.0])
    n = len(charpoly) - 1
    for k, (c, q) in enumerate(zip(charpoly, predicted)):
        if abs(float(c) - q) > tol * max(1.0, math.comb(n, k)):
            return False
    return True


def verify_power_sums(
    A: TransitionMatrix,
    S: SpectrumReport,
    tol: float = DEFAULT_TOL,
    with_stationary: bool = True,
) -> VerificationReport:
    """PASS iff ``|tr(A^k) - sum_i lambda_i^k| < tol`` for every ``k = 1..n``."""
    n = A.size
    if S.total_multiplicity != n:
        raise DimensionMismatch(f"spectrum has {S.total_multiplicity} eigenvalues, matrix has size {n}")
    charpoly = characteristic_polynomial(A) if A.imag is None else None
    if charpoly is not None:
        traces = [(p, Fraction(0)) for p in newton_power_sums(charpoly, n)]
    else:
        traces = exact_power_traces(A, n, method="powers")
    sums = predicted_power_sums(S, n)
    residuals = tuple(abs(complex(float(re), float(im)) - s) for (re, im), s in zip(traces, sums))
    max_res = max(residuals, default=0.0)
    stationary = dim = None
    if with_stationary and A.stochastic and A.imag is None:
        st = stationary_distribution(A)
        stationary, dim = st.vector, st.fixed_space_dim
    return VerificationReport(
        power_sum_residuals=residuals,
        max_residual=max_res,
        tol=tol,
        passed=max_res < tol,
        char_poly_match=None if charpoly is None else _char_poly_matches(charpoly, S, max(tol, 1e-6)),
        stationary=stationary,
        fixed_space_dim=dim,
        spectral_gap=S.spectral_gap(),
        path=S.path,
    )


def stationary_distribution(A: TransitionMatrix) -> StationaryResult:
    """Solve ``pi A = pi``, ``sum pi = 1`` exactly.

    When the fixed space of ``A^T`` has dimension other than 1 no unique
    vector exists and only the dimension is reported.
    """
    if A.imag is not None:
        raise ValueError("stationary distributions need a real matrix")
    n = A.size
    M = _fmpq_matrix(A.real).transpose() - flint.fmpq_mat(n, n, [int(i == j) for i in range(n) for j in range(n)])
    rank = M.rref()[1]
    nullity = n - rank
    if nullity != 1:
        return StationaryResult(None, nullity)
    rows = [[M[i, j] for j in range(n)] for i in range(n - 1)] + [[flint.fmpq(1)] * n]
    system = flint.fmpq_mat(n, n, [x for row in rows for x in row])
    rhs = flint.fmpq_mat(n, 1, [0] * (n - 1) + [1])
    sol = system.solve(rhs)
    return StationaryResult(tuple(_fraction(sol[i, 0]) for i in range(n)), 1)


def is_stationary(A: TransitionMatrix, pi: Sequence[Fraction]) -> bool:
    n = A.size
    return all(sum((pi[x] * A.real[x][y] for x in range(n)), Fraction(0)) == pi[y] for y in range(n))


def cross_check_duality(Q: Distribution, V: FiniteModule, tol: float = 1e-9) -> bool:
    """Multiplication walks on ``V`` and on its dual have equal spectra (exact traces)."""
    if Q.carrier is not V.ring and not Q.carrier.same_tables(V.ring):
        raise ValueError("Q must be a distribution on the ring of V")
    A = dilation_matrix(Q, V)
    B = dilation_matrix(Q, dual_module(V).module)
    ta = exact_power_traces(A)
    tb = exact_power_traces(B)
    return all(abs(float(x[0] - y[0])) <= tol and abs(float(x[1] - y[1])) <= tol for x, y in zip(ta, tb))
