import json

import pytest

from affwalk.cli import EXIT_FAIL, EXIT_IO, EXIT_PASS, EXIT_SPEC, main
from affwalk.spectrum import SpectrumReport

Z4 = {
    "ring": {"zn": 4},
    "module": {"free": 1},
    "walk": {"affine": {}},
    "P": {"weights": ["2/5", "1/5", "1/5", "1/5"]},
    "Q": {"weights": ["1/10", "3/10", "1/5", "2/5"]},
}


@pytest.fixture
def z4_file(tmp_path):
    path = tmp_path / "z4.json"
    path.write_text(json.dumps(Z4))
    return path


def test_verify_z4_regression(z4_file, tmp_path, capsys):
    out = tmp_path / "out"
    assert main(["verify", "--spec", str(z4_file), "--out", str(out)]) == EXIT_PASS
    S = SpectrumReport.from_json(json.loads((out / "spectrum_general.json").read_text()))
    assert sorted(round(v.real, 12) for v in S.values()) == [-0.02, 0.14, 0.14, 1.0]
    report = json.loads((out / "verification.json").read_text())
    assert report["passed"] and set(report["paths"]) == {"general", "triple", "frobenius"}
    assert (out / "matrix.csv").read_text().splitlines()[1] == "0,2/5,1/5,1/5,1/5"
    assert "PASS general" in capsys.readouterr().out


def test_selftest_exits_one(tmp_path):
    assert main(["selftest", "--out", str(tmp_path)]) == EXIT_FAIL
    report = json.loads((tmp_path / "verification.json").read_text())
    assert not report["passed"]


def test_perturb_flag_fails_verification(z4_file, tmp_path):
    assert main(["verify", "--spec", str(z4_file), "--out", str(tmp_path), "--perturb", "0.01"]) == EXIT_FAIL


def test_round_trip_reverifies(z4_file, tmp_path):
    first = tmp_path / "a"
    second = tmp_path / "b"
    assert main(["verify", "--spec", str(z4_file), "--out", str(first), "--paths", "general"]) == EXIT_PASS
    spectrum = first / "spectrum_general.json"
    assert main(["verify", "--spec", str(z4_file), "--out", str(second), "--spectrum", str(spectrum)]) == EXIT_PASS
    a = json.loads((first / "verification.json").read_text())
    b = json.loads((second / "verification.json").read_text())
    assert a == b


def test_output_is_deterministic(z4_file, tmp_path):
    for name in ("a", "b"):
        main(["verify", "--spec", str(z4_file), "--out", str(tmp_path / name), "--dot"])
    files = sorted(p.name for p in (tmp_path / "a").iterdir())
    assert "walk.dot" in files
    for f in files:
        assert (tmp_path / "a" / f).read_bytes() == (tmp_path / "b" / f).read_bytes()


def test_build_and_spectrum_subcommands(z4_file, tmp_path):
    assert main(["build", "--spec", str(z4_file), "--out", str(tmp_path)]) == EXIT_PASS
    assert (tmp_path / "matrix.csv").exists()
    assert main(["spectrum", "--spec", str(z4_file), "--out", str(tmp_path), "--paths", "general,frobenius"]) == EXIT_PASS
    assert (tmp_path / "spectrum_frobenius.csv").exists()


def test_spec_errors_exit_two(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({**Z4, "P": {"weights": ["1/2", "1/5", "1/10", "1/10"]}}))
    assert main(["verify", "--spec", str(bad), "--out", str(tmp_path)]) == EXIT_SPEC
    assert "weights must sum to 1" in capsys.readouterr().err


def test_inapplicable_path_is_a_spec_error(z4_file, tmp_path):
    assert main(["spectrum", "--spec", str(z4_file), "--out", str(tmp_path), "--paths", "uniform"]) == EXIT_SPEC


def test_io_errors_exit_three(z4_file, tmp_path):
    assert main(["verify", "--spec", str(tmp_path / "missing.json"), "--out", str(tmp_path)]) == EXIT_IO
    blocker = tmp_path / "file"
    blocker.write_text("")
    assert main(["build", "--spec", str(z4_file), "--out", str(blocker / "sub")]) == EXIT_IO


def test_symmetrize_flag(tmp_path):
    spec = tmp_path / "s.json"
    spec.write_text(json.dumps({**Z4, "P": {"weights": ["4/10", "3/10", "2/10", "1/10"]}}))
    assert main(["verify", "--spec", str(spec), "--out", str(tmp_path)]) == EXIT_SPEC
    assert main(["verify", "--spec", str(spec), "--out", str(tmp_path), "--symmetrize"]) == EXIT_PASS


def test_corpus_mode(tmp_path, capsys):
    assert main(["corpus", "--out", str(tmp_path)]) == EXIT_PASS
    out = capsys.readouterr().out
    assert "cases passed" in out
    summary = json.loads((tmp_path / "corpus.json").read_text())
    assert len(summary) >= 30 and all(c["passed"] for c in summary)
