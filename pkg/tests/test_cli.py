import csv
import json
import shutil
import subprocess

import pytest

from token_spectra import harness
from token_spectra.cli import main, parse_multiset
from token_spectra.graph6 import parse_graph6
from token_spectra.multiset import EigMultiset


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_parse_multiset():
    assert parse_multiset("0,2,4^3,6") == EigMultiset.of({0: 1, 2: 1, 4: 3, 6: 1})
    assert parse_multiset("1,1") == EigMultiset.of({1: 2})


def test_spectrum(capsys):
    code, out, _ = run(capsys, "spectrum", "--family", "complete", "--n", "4", "--k", "2")
    assert code == 0
    clusters = json.loads(out)["clusters"]
    assert [(round(c["value"], 9), c["multiplicity"]) for c in clusters] == [(0, 1), (4, 3), (6, 2)]


def test_spectrum_edges(capsys):
    code, out, _ = run(capsys, "spectrum", "--edges", "1-2,2-3")
    assert code == 0
    assert json.loads(out)["eigenvalues"] == pytest.approx([0, 1, 3], abs=1e-12)


def test_token_output(tmp_path, capsys):
    out = tmp_path / "f.g6"
    code, _, _ = run(capsys, "token", "--family", "path", "--n", "4", "--k", "2", "--out", str(out))
    assert code == 0
    g = parse_graph6(out.read_text().strip())
    assert g.n == 6 and g.num_edges == 6
    labels = (tmp_path / "f.g6.labels").read_text().splitlines()
    assert labels[0].split("\t")[0] == "0" and len(labels) == 6


def test_check_exit_codes(capsys):
    code, out, _ = run(capsys, "check", "--family", "path", "--n", "6", "--k", "3")
    assert code == 0 and json.loads(out)["holds"]
    code, out, _ = run(capsys, "check", "--family", "path", "--n", "6", "--k", "3", "--tol", "-1")
    assert code == 1 and not json.loads(out)["holds"]


@pytest.mark.parametrize(
    "argv",
    [
        ["check", "--family", "path", "--k", "2"],
        ["check", "--graph6", "~~~~", "--k", "2"],
        ["check", "--family", "path", "--n", "4", "--graph6", "C~", "--k", "2"],
        ["sweep", "--graph6-file", "/nonexistent/x.g6"],
        ["sweep"],
        ["nosuchcommand"],
        ["spectrum", "--family", "path", "--n", "4", "--k", "2", "--bogus"],
    ],
)
def test_usage_errors(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_pair_complete(capsys):
    code, out, _ = run(capsys, "pair", "--family", "complete", "--n", "4", "--k", "2")
    assert code == 0
    triples = json.loads(out)["triples"]
    assert len(triples) == 6 and all(abs(t["lambda_bar"]) < 1e-10 for t in triples)


def test_pair_table_default(capsys):
    code, out, _ = run(capsys, "pair", "--table1")
    assert code == 0
    assert "E]v_" in out


def test_partition_and_bounds(capsys):
    code, out, _ = run(capsys, "partition", "--family", "path", "--n", "4", "--k", "2")
    assert code == 0 and json.loads(out)["status"] == "pass"
    code, out, _ = run(capsys, "bounds", "--family", "cycle", "--n", "6", "--k", "2")
    assert code == 0 and json.loads(out)["ok"]


def test_find_default(capsys):
    code, out, _ = run(capsys, "find")
    assert code == 0 and json.loads(out)["graph6"] == "E]v_"
    code, _, _ = run(capsys, "find", "--spectrum", "0,1,1", "--complement", "0,2,2", "--n", "3")
    assert code == 2


def test_sweep_exhaustive(tmp_path, capsys):
    out = tmp_path / "report.csv"
    code, text, _ = run(capsys, "sweep", "--exhaustive", "5", "--k", "2", "--jobs", "4", "--out", str(out))
    assert code == 0
    with open(out) as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 1024 and all(r["holds"] == "true" for r in rows)
    summary = json.loads(text)
    assert summary["fails"] == 0 and summary["rows"] == 1024


def test_sweep_guard_does_not_fail(capsys):
    code, text, _ = run(capsys, "sweep", "--family", "cycle", "--n", "8", "--guard", "30")
    assert code == 0 and json.loads(text)["skipped_guard"] == 2


def test_sweep_failure_exit(capsys, monkeypatch):
    real = harness._second_eigenvalues
    monkeypatch.setattr(harness, "_second_eigenvalues", lambda m, n, k: real(m, n, k) + (k > 1))
    code, text, _ = run(capsys, "sweep", "--family", "path", "--n", "4")
    assert code == 1
    failures = json.loads(text)["failures"]
    assert failures and failures[0]["reproducer"].startswith("token-spectra check --graph6")


@pytest.mark.skipif(shutil.which("token-spectra") is None, reason="console script not installed")
def test_console_script():
    proc = subprocess.run(["token-spectra", "check", "--family", "star", "--n", "5", "--k", "2"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["alpha_FkG"] == pytest.approx(1)
