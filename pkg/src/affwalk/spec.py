"""JSON experiment specifications.

A document names a ring, a module over it, a walk and the two
distributions, e.g.::

    {"ring": {"zn": 4}, "module": {"free": 1}, "walk": {"affine": {}},
     "P": {"weights": ["2/5", "1/5", "1/5", "1/5"]},
     "Q": {"weights": ["1/10", "3/10", "1/5", "2/5"]}}

Rationals are written as strings (``"1/3"``) or integers; JSON floats are
rejected so that every weight is exact.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .modules import FiniteModule, ModuleError, build_cyclic_module, build_free_module, direct_sum
from .rings import (
    FiniteRing,
    NotPrimeError,
    ReduciblePolynomialError,
    RingError,
    build_gf,
    build_product,
    build_zn,
    principal_ideal,
)
from .walks import (
    Affine,
    CoinToss,
    Distribution,
    Polynomial,
    WalkKind,
    WalkSpec,
    symmetrize as symmetrize_distribution,
    validate_constant_on_associates,
)

PATHS = ("general", "frobenius", "uniform", "triple")
TOP_LEVEL = {"ring", "module", "walk", "P", "Q", "options"}
OPTION_KEYS = {"tol", "symmetrize", "paths", "dot"}


@dataclass(frozen=True)
class Issue:
    path: str
    code: str
    message: str

    def __str__(self) -> str:
        return f"{self.path}: [{self.code}] {self.message}"


class SpecError(ValueError):
    def __init__(self, issues: list[Issue]):
        self.issues = issues
        super().__init__("; ".join(str(i) for i in issues))

    @property
    def codes(self) -> set[str]:
        return {i.code for i in self.issues}


@dataclass
class Options:
    tol: float = 1e-8
    symmetrize: bool = False
    paths: tuple[str, ...] | None = None
    dot: bool = False


@dataclass
class ExperimentSpec:
    ring: FiniteRing
    module: FiniteModule
    walk: WalkSpec
    options: Options = field(default_factory=Options)
    document: dict = field(default_factory=dict)


class _Parser:
    def __init__(self):
        self.issues: list[Issue] = []

    def fail(self, path: str, code: str, message: str) -> None:
        self.issues.append(Issue(path, code, message))

    def keys(self, obj: Any, path: str, allowed: set[str], required: set[str] = frozenset()) -> bool:
        if not isinstance(obj, dict):
            self.fail(path, "type", "expected an object")
            return False
        ok = True
        for k in obj:
            if k not in allowed:
                self.fail(f"{path}.{k}", "unknown_key", f"unknown key {k!r}")
                ok = False
        for k in required:
            if k not in obj:
                self.fail(f"{path}.{k}", "missing_key", f"missing key {k!r}")
                ok = False
        return ok

    def one_of(self, obj: Any, path: str, choices: set[str]) -> str | None:
        if not isinstance(obj, dict) or len(obj) != 1:
            self.fail(path, "type", f"expected an object with exactly one of {sorted(choices)}")
            return None
        (key,) = obj
        if key not in choices:
            self.fail(f"{path}.{key}", "unknown_key", f"unknown key {key!r}; expected one of {sorted(choices)}")
            return None
        return key

    def integer(self, x: Any, path: str, minimum: int | None = None) -> int | None:
        if isinstance(x, bool) or not isinstance(x, int):
            self.fail(path, "type", "expected an integer")
            return None
        if minimum is not None and x < minimum:
            self.fail(path, "value", f"expected an integer >= {minimum}")
            return None
        return x

    def rational(self, x: Any, path: str) -> Fraction | None:
        if isinstance(x, bool) or isinstance(x, float):
            self.fail(path, "type", "rationals must be integers or strings like \"1/3\"")
            return None
        if isinstance(x, int):
            return Fraction(x)
        if isinstance(x, str):
            try:
                return Fraction(x.strip())
            except (ValueError, ZeroDivisionError):
                self.fail(path, "value", f"not a rational literal: {x!r}")
                return None
        self.fail(path, "type", "expected a rational literal")
        return None

    # ring / module ---------------------------------------------------------

    def ring(self, desc: Any, path: str) -> FiniteRing | None:
        kind = self.one_of(desc, path, {"zn", "gf", "product"})
        if kind is None:
            return None
        body = desc[kind]
        sub = f"{path}.{kind}"
        if kind == "zn":
            n = self.integer(body, sub, minimum=1)
            return None if n is None else build_zn(n)
        if kind == "gf":
            if not self.keys(body, sub, {"p", "k", "poly"}, {"p"}):
                return None
            p = self.integer(body["p"], f"{sub}.p", minimum=2)
            k = self.integer(body.get("k", 1), f"{sub}.k", minimum=1)
            poly = body.get("poly")
            if poly is not None and (
                not isinstance(poly, list) or any(isinstance(c, bool) or not isinstance(c, int) for c in poly)
            ):
                self.fail(f"{sub}.poly", "type", "expected a list of integer coefficients")
                return None
            if p is None or k is None:
                return None
            try:
                return build_gf(p, k, poly)
            except NotPrimeError as exc:
                self.fail(f"{sub}.p", "not_prime", str(exc))
            except ReduciblePolynomialError as exc:
                self.fail(f"{sub}.poly", "reducible_poly", str(exc))
            except RingError as exc:
                self.fail(f"{sub}.poly", "value", str(exc))
            return None
        if not isinstance(body, list) or not body:
            self.fail(sub, "type", "expected a nonempty list of rings")
            return None
        factors = [self.ring(f, f"{sub}[{i}]") for i, f in enumerate(body)]
        if any(f is None for f in factors):
            return None
        return build_product(factors)

    def module(self, desc: Any, path: str, R: FiniteRing) -> FiniteModule | None:
        kind = self.one_of(desc, path, {"free", "cyclic", "sum"})
        if kind is None:
            return None
        body = desc[kind]
        sub = f"{path}.{kind}"
        if kind == "free":
            d = self.integer(body, sub, minimum=1)
            return None if d is None else build_free_module(R, d)
        if kind == "cyclic":
            if not self.keys(body, sub, {"ideal_of"}, {"ideal_of"}):
                return None
            a = self.integer(body["ideal_of"], f"{sub}.ideal_of", minimum=0)
            if a is None:
                return None
            if a >= R.size:
                self.fail(f"{sub}.ideal_of", "value", f"element {a} is not in a ring of size {R.size}")
                return None
            return build_cyclic_module(R, principal_ideal(R, a))
        if not isinstance(body, list) or not body:
            self.fail(sub, "type", "expected a nonempty list of modules")
            return None
        parts = [self.module(m, f"{sub}[{i}]", R) for i, m in enumerate(body)]
        if any(m is None for m in parts):
            return None
        try:
            return direct_sum(parts)
        except ModuleError as exc:  # pragma: no cover - all parts share R here
            self.fail(sub, "ring_mismatch", str(exc))
            return None

    # walk / distributions --------------------------------------------------

    def walk(self, desc: Any, path: str) -> WalkKind | None:
        if desc == "affine":
            return Affine()
        kind = self.one_of(desc, path, {"affine", "coin_toss", "poly"})
        if kind is None:
            return None
        body = desc[kind]
        sub = f"{path}.{kind}"
        if kind == "affine":
            if body not in ({}, None, True):
                self.fail(sub, "type", "affine takes no parameters")
                return None
            return Affine()
        if kind == "coin_toss":
            if not self.keys(body, sub, {"alpha"}, {"alpha"}):
                return None
            alpha = self.rational(body["alpha"], f"{sub}.alpha")
            if alpha is None:
                return None
            if not 0 <= alpha <= 1:
                self.fail(f"{sub}.alpha", "alpha_range", f"alpha must lie in [0, 1], got {alpha}")
                return None
            return CoinToss(alpha)
        if not isinstance(body, list) or not body:
            self.fail(sub, "type", "expected a nonempty list of [i, j, re, im] terms")
            return None
        coeffs: dict[tuple[int, int], tuple[Fraction, Fraction]] = {}
        for t, term in enumerate(body):
            tp = f"{sub}[{t}]"
            if not isinstance(term, list) or len(term) not in (3, 4):
                self.fail(tp, "type", "expected [i, j, re] or [i, j, re, im]")
                continue
            i = self.integer(term[0], f"{tp}[0]", minimum=0)
            j = self.integer(term[1], f"{tp}[1]", minimum=0)
            re = self.rational(term[2], f"{tp}[2]")
            im = self.rational(term[3], f"{tp}[3]") if len(term) == 4 else Fraction(0)
            if None in (i, j, re, im):
                continue
            old = coeffs.get((i, j), (Fraction(0), Fraction(0)))
            coeffs[(i, j)] = (old[0] + re, old[1] + im)
        return Polynomial.from_mapping(coeffs)

    def distribution(self, desc: Any, path: str, carrier) -> Distribution | None:
        kind = self.one_of(desc, path, {"uniform", "weights", "point"})
        if kind is None:
            return None
        body = desc[kind]
        sub = f"{path}.{kind}"
        n = carrier.size
        if kind == "uniform":
            if body is not True:
                self.fail(sub, "value", "expected true")
                return None
            return Distribution.uniform(carrier)
        if kind == "point":
            x = self.integer(body, sub, minimum=0)
            if x is None:
                return None
            if x >= n:
                self.fail(sub, "value", f"element {x} out of range for size {n}")
                return None
            return Distribution.point_mass(carrier, x)
        if isinstance(body, list):
            if len(body) != n:
                self.fail(sub, "weights_length", f"expected {n} weights, got {len(body)}")
                return None
            weights = [self.rational(w, f"{sub}[{i}]") for i, w in enumerate(body)]
        elif isinstance(body, dict):
            weights = [Fraction(0)] * n
            for key, w in body.items():
                try:
                    x = int(key)
                except ValueError:
                    self.fail(f"{sub}.{key}", "value", "keys must be element indices")
                    return None
                if not 0 <= x < n:
                    self.fail(f"{sub}.{key}", "value", f"element {x} out of range for size {n}")
                    return None
                weights[x] = self.rational(w, f"{sub}.{key}")
        else:
            self.fail(sub, "type", "expected a list or an object of weights")
            return None
        if any(w is None for w in weights):
            return None
        if any(w < 0 for w in weights):
            self.fail(sub, "weights_negative", "weights must be nonnegative")
            return None
        total = sum(weights, Fraction(0))
        if total != 1:
            self.fail(sub, "weights_sum", f"weights must sum to 1 (got {total})")
            return None
        return Distribution(carrier, tuple(weights))

    def options(self, desc: Any, path: str) -> Options:
        opts = Options()
        if desc is None:
            return opts
        if not self.keys(desc, path, OPTION_KEYS):
            return opts
        if "tol" in desc:
            tol = desc["tol"]
            try:
                opts.tol = float(tol) if not isinstance(tol, bool) else -1.0
            except (TypeError, ValueError):
                opts.tol = -1.0
            if not opts.tol > 0:
                self.fail(f"{path}.tol", "value", "tol must be a positive number")
        if "symmetrize" in desc:
            if not isinstance(desc["symmetrize"], bool):
                self.fail(f"{path}.symmetrize", "type", "expected a boolean")
            else:
                opts.symmetrize = desc["symmetrize"]
        if "dot" in desc:
            opts.dot = bool(desc["dot"])
        if "paths" in desc:
            paths = desc["paths"]
            if not isinstance(paths, list) or any(p not in PATHS for p in paths):
                self.fail(f"{path}.paths", "value", f"paths must be a list drawn from {list(PATHS)}")
            else:
                opts.paths = tuple(paths)
        return opts


def parse_document(doc: Any, symmetrize: bool | None = None) -> ExperimentSpec:
    p = _Parser()
    if not p.keys(doc, "$", TOP_LEVEL, {"ring"}):
        raise SpecError(p.issues)
    opts = p.options(doc.get("options"), "$.options")
    if symmetrize is not None:
        opts.symmetrize = opts.symmetrize or symmetrize
    R = p.ring(doc["ring"], "$.ring")
    V = p.module(doc.get("module", {"free": 1}), "$.module", R) if R is not None else None
    kind = p.walk(doc.get("walk", "affine"), "$.walk")
    P = p.distribution(doc.get("P", {"uniform": True}), "$.P", V) if V is not None else None
    Q = p.distribution(doc.get("Q", {"uniform": True}), "$.Q", R) if R is not None else None
    if P is not None and validate_constant_on_associates(P) is not None:
        if opts.symmetrize:
            P = symmetrize_distribution(P)
        else:
            v, w = validate_constant_on_associates(P)
            p.fail("$.P", "not_constant_on_associates",
                   f"P({v}) != P({w}) although {v} and {w} are associates; pass --symmetrize to average")
    if p.issues:
        raise SpecError(p.issues)
    return ExperimentSpec(R, V, WalkSpec(kind, P, Q), opts, doc)


def parse_spec(text: str, symmetrize: bool | None = None) -> ExperimentSpec:
    """Parse and validate a JSON experiment document.

    Raises :class:`SpecError` carrying every problem found, each with a
    JSON path and an error code.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError([Issue("$", "json", f"malformed JSON: {exc}")]) from None
    return parse_document(doc, symmetrize)
