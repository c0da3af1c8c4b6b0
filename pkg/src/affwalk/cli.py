"""Command-line front end.

    affwalk build     --spec case.json --out dir      transition matrix CSV (and DOT)
    affwalk spectrum  --spec case.json --out dir      predicted spectra, JSON and CSV
    affwalk verify    --spec case.json --out dir      both of the above plus verification JSON
    affwalk corpus    [--jobs N]                      run the bundled regression corpus
    affwalk selftest  [--spec case.json]              verify a deliberately perturbed spectrum

Exit codes: 0 pass, 1 verification failure, 2 spec error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .corpus import CaseResult, build_cases, run_case
from .spec import PATHS, ExperimentSpec, Issue, SpecError, parse_spec
from .spectrum import SpectrumReport, applicable_paths, multisets_agree, spectrum_for
from .verify import DEFAULT_TOL, DimensionMismatch, stationary_distribution, verify_power_sums
from .walks import irreducibility_report, walk_matrix

EXIT_PASS, EXIT_FAIL, EXIT_SPEC, EXIT_IO = 0, 1, 2, 3

EXAMPLE_SPEC = json.dumps({
    "ring": {"zn": 4},
    "module": {"free": 1},
    "walk": {"affine": {}},
    "P": {"weights": ["2/5", "1/5", "1/5", "1/5"]},
    "Q": {"weights": ["1/10", "3/10", "1/5", "2/5"]},
})


class IOFailure(Exception):
    pass


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise IOFailure(f"cannot read {path}: {exc}") from exc


def _write(out: Path, name: str, text: str) -> None:
    try:
        out.mkdir(parents=True, exist_ok=True)
        (out / name).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise IOFailure(f"cannot write {out / name}: {exc}") from exc


def _load(args) -> ExperimentSpec:
    text = _read(args.spec) if getattr(args, "spec", None) else EXAMPLE_SPEC
    return parse_spec(text, symmetrize=bool(getattr(args, "symmetrize", False)))


def _paths(args, spec: ExperimentSpec) -> list[str]:
    requested = args.paths.split(",") if getattr(args, "paths", None) else None
    available = applicable_paths(spec.walk)
    if requested is None:
        return list(spec.options.paths) if spec.options.paths else available
    issues = []
    for p in requested:
        if p not in PATHS:
            issues.append(Issue("--paths", "value", f"unknown path {p!r}; expected one of {list(PATHS)}"))
        elif p not in available:
            issues.append(Issue("--paths", "path_not_applicable", f"path {p!r} does not apply to this walk"))
    if issues:
        raise SpecError(issues)
    return requested


def _tol(args, spec: ExperimentSpec) -> float:
    return args.tol if getattr(args, "tol", None) is not None else spec.options.tol


def build(args, out: Path) -> tuple[ExperimentSpec, object]:
    spec = _load(args)
    A = walk_matrix(spec.walk)
    _write(out, "matrix.csv", A.to_csv())
    if spec.options.dot or getattr(args, "dot", False):
        _write(out, "walk.dot", A.to_dot())
    return spec, A


def spectra(args, spec: ExperimentSpec, out: Path) -> dict[str, SpectrumReport]:
    reports = {}
    for path in _paths(args, spec):
        S = spectrum_for(spec.walk, path)
        reports[path] = S
        _write(out, f"spectrum_{path}.json", S.dumps() + "\n")
        _write(out, f"spectrum_{path}.csv", S.to_csv())
    return reports


def verification(A, spec: ExperimentSpec, reports: dict[str, SpectrumReport], tol: float, perturb: float | None) -> dict:
    doc: dict = {"size": A.size, "tol": tol, "paths": {}, "agreement": {}}
    first = next(iter(reports.values()), None)
    passed = True
    for name, S in reports.items():
        if first is not None and S is not first:
            doc["agreement"][name] = multisets_agree(first.values(), S.values(), max(tol, 1e-9))
        if perturb:
            S = S.perturbed(perturb)
        rep = verify_power_sums(A, S, tol, with_stationary=False)
        doc["paths"][name] = rep.to_json()
        passed = passed and rep.passed
    if A.stochastic and A.imag is None:
        st = stationary_distribution(A)
        doc["stationary"] = None if st.vector is None else [str(x) for x in st.vector]
        doc["fixed_space_dim"] = st.fixed_space_dim
    irr = irreducibility_report(spec.walk, A)
    doc["irreducibility"] = {
        "sufficient_irreducible": irr.sufficient_irreducible,
        "sufficient_aperiodic": irr.sufficient_aperiodic,
        "irreducible": irr.irreducible,
        "aperiodic": irr.aperiodic,
        "sound": irr.sound,
    }
    doc["passed"] = passed and all(doc["agreement"].values())
    return doc


def cmd_build(args) -> int:
    build(args, Path(args.out))
    return EXIT_PASS


def cmd_spectrum(args) -> int:
    spec = _load(args)
    spectra(args, spec, Path(args.out))
    return EXIT_PASS


def cmd_verify(args, perturb: float | None = None) -> int:
    out = Path(args.out)
    spec, A = build(args, out)
    if getattr(args, "spectrum", None):
        try:
            S = SpectrumReport.from_json(json.loads(_read(args.spectrum)))
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise SpecError([Issue(args.spectrum, "spectrum_json", f"not a spectrum report: {exc}")]) from None
        reports = {S.path: S}
    else:
        reports = spectra(args, spec, out)
    try:
        doc = verification(A, spec, reports, _tol(args, spec), perturb or getattr(args, "perturb", None))
    except DimensionMismatch as exc:
        print(f"FAIL: {exc}", file=sys.stderr)
        return EXIT_FAIL
    _write(out, "verification.json", json.dumps(doc, indent=2) + "\n")
    for name, rep in doc["paths"].items():
        status = "PASS" if rep["passed"] else "FAIL"
        print(f"{status} {name}: max residual {rep['max_residual']:.3e} (tol {rep['tol']:g})")
    for name, ok in doc["agreement"].items():
        print(f"{'PASS' if ok else 'FAIL'} {name} agrees with {next(iter(doc['paths']))}")
    return EXIT_PASS if doc["passed"] else EXIT_FAIL


def cmd_selftest(args) -> int:
    code = cmd_verify(args, perturb=args.perturb or 0.01)
    if code == EXIT_FAIL:
        print("selftest: perturbed spectrum rejected, as it must be")
    else:
        print("selftest: perturbed spectrum was NOT rejected")
    # the perturbed spectrum is wrong by construction, so this mode always reports failure
    return EXIT_FAIL


def _run_one(job: tuple[int, float]) -> CaseResult:
    index, tol = job
    return run_case(build_cases()[index], tol)


def cmd_corpus(args) -> int:
    cases = build_cases()
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            results = list(pool.map(_run_one, [(i, _tol_or(args)) for i in range(len(cases))]))
    else:
        results = [run_case(c, _tol_or(args)) for c in cases]
    width = max(len(r.name) for r in results)
    print(f"{'case':<{width}}  {'|V|':>4}  {'max residual':>12}  status")
    for r in results:
        failed = [k for k, ok in r.checks.items() if not ok]
        status = "PASS" if r.passed else "FAIL " + ",".join(failed)
        print(f"{r.name:<{width}}  {r.size:>4}  {r.max_residual:>12.3e}  {status}")
    n_pass = sum(r.passed for r in results)
    print(f"{n_pass}/{len(results)} cases passed")
    if args.out:
        summary = [{"case": r.name, "size": r.size, "passed": r.passed, "max_residual": r.max_residual,
                    "checks": r.checks} for r in results]
        _write(Path(args.out), "corpus.json", json.dumps(summary, indent=2) + "\n")
    return EXIT_PASS if n_pass == len(results) else EXIT_FAIL


def _tol_or(args) -> float:
    return args.tol if args.tol is not None else DEFAULT_TOL


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="affwalk", description="Spectra of affine random walks on finite modules.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, needs_spec=True):
        p.add_argument("--spec", required=needs_spec, help="JSON experiment specification")
        p.add_argument("--out", default=".", help="output directory")
        p.add_argument("--symmetrize", action="store_true", help="average P over associate classes")

    p = sub.add_parser("build", help="write the transition matrix")
    common(p)
    p.add_argument("--dot", action="store_true", help="also write a DOT transition graph")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("spectrum", help="write predicted spectra")
    common(p)
    p.add_argument("--paths", help="comma-separated subset of " + ",".join(PATHS))
    p.set_defaults(func=cmd_spectrum)

    for name, func, needs_spec in (("verify", cmd_verify, True), ("selftest", cmd_selftest, False)):
        p = sub.add_parser(name, help="verify predicted spectra by power sums" if name == "verify"
                           else "check that a perturbed spectrum is rejected")
        common(p, needs_spec)
        p.add_argument("--paths", help="comma-separated subset of " + ",".join(PATHS))
        p.add_argument("--tol", type=float, help=f"power-sum tolerance (default {DEFAULT_TOL:g})")
        p.add_argument("--perturb", type=float, help="shift one predicted eigenvalue by this amount")
        p.add_argument("--dot", action="store_true", help="also write a DOT transition graph")
        if name == "verify":
            p.add_argument("--spectrum", help="verify this spectrum JSON instead of predicting one")
        p.set_defaults(func=func)

    p = sub.add_parser("corpus", help="run the bundled regression corpus")
    p.add_argument("--out", help="directory for corpus.json")
    p.add_argument("--tol", type=float)
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    p.set_defaults(func=cmd_corpus)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = make_parser().parse_args(argv)
    try:
        return args.func(args)
    except SpecError as exc:
        for issue in exc.issues:
            print(f"spec error: {issue}", file=sys.stderr)
        return EXIT_SPEC
    except IOFailure as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
