"""Bundled regression corpus.

Each case fixes a ring, a module and a pair of distributions; the walks run
on it are the coin-toss walks at alpha in {0, 1/3, 1/2, 1}, the affine walk
and the polynomial walk ``x^2 y``.  Random weights come from a seeded
generator, so the corpus is identical on every run.
"""

from __future__ import annotations

import copy
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction

from .modules import check_cyclic_equals_unit_orbit, is_regular
from .spec import ExperimentSpec, parse_document
from .spectrum import (
    multisets_agree,
    count_identity,
    predicted_spectrum,
    predicted_spectrum_frobenius,
    predicted_spectrum_triple,
    predicted_spectrum_uniform,
)
from .verify import cross_check_duality, verify_power_sums
from .walks import CoinToss, irreducibility_report, walk_matrix

SEED = 20240611
ALPHAS = ("0", "1/3", "1/2", "1")
WALKS: tuple[tuple[str, object], ...] = tuple(
    [(f"coin({a})", {"coin_toss": {"alpha": a}}) for a in ALPHAS]
    + [("affine", {"affine": {}}), ("x^2y", {"poly": [[2, 1, "1"]]})]
)

# (name, ring, module, P is uniform)
_LAYOUT = [
    *[(f"Z{n}", {"zn": n}, {"free": 1}, False) for n in range(1, 13)],
    ("Z6-uniform", {"zn": 6}, {"free": 1}, True),
    ("Z8-uniform", {"zn": 8}, {"free": 1}, True),
    ("Z9-uniform", {"zn": 9}, {"free": 1}, True),
    ("Z12-uniform", {"zn": 12}, {"free": 1}, True),
    ("Z2^2", {"zn": 2}, {"free": 2}, False),
    ("Z3^2", {"zn": 3}, {"free": 2}, False),
    ("Z4^2", {"zn": 4}, {"free": 2}, False),
    ("Z6^2", {"zn": 6}, {"free": 2}, False),
    ("Z8^2", {"zn": 8}, {"free": 2}, False),
    ("Z4^2-uniform", {"zn": 4}, {"free": 2}, True),
    ("Z12/(4)", {"zn": 12}, {"cyclic": {"ideal_of": 4}}, False),
    ("Z9/(3)", {"zn": 9}, {"cyclic": {"ideal_of": 3}}, False),
    ("Z4+Z4/(2)", {"zn": 4}, {"sum": [{"free": 1}, {"cyclic": {"ideal_of": 2}}]}, False),
    ("Z6+Z6/(3)", {"zn": 6}, {"sum": [{"free": 1}, {"cyclic": {"ideal_of": 3}}]}, False),
    ("Z12/(6)+Z12/(4)", {"zn": 12}, {"sum": [{"cyclic": {"ideal_of": 6}}, {"cyclic": {"ideal_of": 4}}]}, False),
    ("Z8/(4)+Z8/(2)-uniform", {"zn": 8}, {"sum": [{"cyclic": {"ideal_of": 4}}, {"cyclic": {"ideal_of": 2}}]}, True),
    ("GF4", {"gf": {"p": 2, "k": 2}}, {"free": 1}, False),
    ("GF4^2", {"gf": {"p": 2, "k": 2}}, {"free": 2}, False),
    ("GF4^2-uniform", {"gf": {"p": 2, "k": 2}}, {"free": 2}, True),
    ("GF9", {"gf": {"p": 3, "k": 2}}, {"free": 1}, False),
    ("GF9-uniform", {"gf": {"p": 3, "k": 2}}, {"free": 1}, True),
    ("Z2xZ4", {"product": [{"zn": 2}, {"zn": 4}]}, {"free": 1}, False),
    ("(Z2xZ4)^2", {"product": [{"zn": 2}, {"zn": 4}]}, {"free": 2}, False),
    ("Z2xZ4/((1,0))", {"product": [{"zn": 2}, {"zn": 4}]}, {"cyclic": {"ideal_of": 4}}, False),
    ("Z2xZ4+Z2xZ4/((0,2))", {"product": [{"zn": 2}, {"zn": 4}]},
     {"sum": [{"free": 1}, {"cyclic": {"ideal_of": 2}}]}, False),
    ("Z2xZ4-uniform", {"product": [{"zn": 2}, {"zn": 4}]}, {"free": 1}, True),
    ("Z6xZ2", {"product": [{"zn": 6}, {"zn": 2}]}, {"free": 1}, False),
    ("Z6xZ2/((2,0))", {"product": [{"zn": 6}, {"zn": 2}]}, {"cyclic": {"ideal_of": 4}}, False),
    ("Z6xZ2+Z6xZ2/((2,0))", {"product": [{"zn": 6}, {"zn": 2}]},
     {"sum": [{"free": 1}, {"cyclic": {"ideal_of": 4}}]}, False),
]


def _random_weights(rng: random.Random, n: int, zero_chance: float) -> list[str]:
    raw = [0 if rng.random() < zero_chance else rng.randint(1, 6) for _ in range(n)]
    if not any(raw):
        raw[rng.randrange(n)] = 1
    total = sum(raw)
    return [str(Fraction(w, total)) for w in raw]


@dataclass(frozen=True)
class CorpusCase:
    name: str
    document: dict
    uniform_P: bool

    def spec(self, walk: object = None) -> ExperimentSpec:
        doc = copy.deepcopy(self.document)
        if walk is not None:
            doc["walk"] = walk
        return parse_document(doc)

    def documents(self) -> list[tuple[str, dict]]:
        out = []
        for label, walk in WALKS:
            doc = copy.deepcopy(self.document)
            doc["walk"] = walk
            out.append((label, doc))
        return out


def build_cases(seed: int = SEED) -> list[CorpusCase]:
    rng = random.Random(seed)
    cases = []
    for name, ring, module, uniform in _LAYOUT:
        probe = parse_document({"ring": ring, "module": module})
        R, V = probe.ring, probe.module
        doc: dict = {"ring": ring, "module": module, "options": {"symmetrize": True}}
        doc["P"] = {"uniform": True} if uniform else {"weights": _random_weights(rng, V.size, 0.2)}
        doc["Q"] = {"weights": _random_weights(rng, R.size, 0.3)}
        cases.append(CorpusCase(name, doc, uniform))
    return cases


@dataclass
class CaseResult:
    name: str
    size: int
    checks: dict[str, bool] = field(default_factory=dict)
    max_residual: float = 0.0
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return all(self.checks.values())


def run_case(case: CorpusCase, tol: float = 1e-8, path_tol: float = 1e-9) -> CaseResult:
    t0 = time.perf_counter()
    base = case.spec()
    V = base.module
    result = CaseResult(case.name, V.size)
    result.checks["count_identity"] = count_identity(V) == V.size
    if V.size <= 32:
        result.checks["cyclic_sub"] = check_cyclic_equals_unit_orbit(V)
    result.checks["duality"] = cross_check_duality(base.walk.Q, V, path_tol)
    sound = True
    for label, walk in WALKS:
        spec = case.spec(walk).walk
        A = walk_matrix(spec)
        S = predicted_spectrum(spec)
        result.checks[f"items[{label}]"] = len(S.items) == V.size
        rep = verify_power_sums(A, S, tol, with_stationary=False)
        result.max_residual = max(result.max_residual, rep.max_residual)
        result.checks[f"power_sums[{label}]"] = rep.passed
        if label == "affine":
            triple = predicted_spectrum_triple(spec)
            result.checks["triple"] = multisets_agree(S.values(), triple.values(), path_tol)
            if is_regular(V) and base.ring.provenance[0] == "zn":
                frob = predicted_spectrum_frobenius(spec)
                result.checks["frobenius"] = multisets_agree(S.values(), frob.values(), path_tol)
        if case.uniform_P and isinstance(spec.kind, CoinToss):
            U = predicted_spectrum_uniform(spec.Q, spec.kind.alpha, V)
            result.checks[f"uniform[{label}]"] = multisets_agree(S.values(), U.values(), path_tol)
        irr = irreducibility_report(spec, A)
        sound = sound and irr.sound
    result.checks["irreducibility_sound"] = sound
    result.seconds = time.perf_counter() - t0
    return result
