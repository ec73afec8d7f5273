"""The ``kirbycalc`` command line."""

from __future__ import annotations

import subprocess
import sys

import pytest

from kirbycalc.cli import main

from helpers import BUNDLED


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    records = dict(line.split("=", 1) for line in out.splitlines() if "=" in line)
    return code, records, out


def test_validate(capsys, tmp_path):
    code, rec, _ = run(capsys, "validate", "trefoil")
    assert code == 0 and rec["crossings"] == "3"
    bad = tmp_path / "bad.kd"
    bad.write_text((BUNDLED / "trefoil.kd").read_text().replace("X[", "X(", 1))
    code, rec, out = run(capsys, "validate", str(bad))
    assert code == 1 and "line 2" in out


def test_validate_reports_non_planarity(capsys, tmp_path):
    text = (
        "kirbycalc-diagram v1\nX[3,1,4,6,+1]\nX[5,2,6,3,-1]\nX[1,5,2,4,+1]\n"
        "comp 0: arcs=[1,2,3,4,5,6] framing=none dotted=0 bracketed=0\n"
    )
    p = tmp_path / "np.kd"
    p.write_text(text)
    code, _, out = run(capsys, "validate", str(p))
    assert code == 1 and "V - E + F" in out


def test_invariants(capsys):
    code, rec, _ = run(capsys, "invariants", "square-knot")
    assert code == 0
    assert rec["alexander"] == "t^2 - 2*t + 3 - 2*t^-1 + t^-2"
    assert rec["signature"] == "0"
    assert rec["fox_milnor"] == "pass"
    code, rec, _ = run(capsys, "invariants", "trefoil")
    assert rec["signature"] == "-2" and rec["fox_milnor"] == "fail"


def test_reports_are_reproducible(capsys):
    _, _, a = run(capsys, "invariants", "figure-eight")
    _, _, b = run(capsys, "invariants", "figure-eight")
    assert a == b and "seconds" not in a
    _, rec, _ = run(capsys, "invariants", "figure-eight", "--timing")
    assert "seconds" in rec
    _, _, text = run(capsys, "invariants", "figure-eight", "--format", "text")
    assert "signature: 0" in text


def test_inputs_are_hashed(capsys):
    import hashlib

    _, rec, _ = run(capsys, "validate", "hopf")
    assert rec["sha256"] == hashlib.sha256((BUNDLED / "hopf.kd").read_bytes()).hexdigest()


def test_replay(capsys, tmp_path):
    code, rec, _ = run(capsys, "replay", str(BUNDLED / "cancellation-demo.ks"))
    assert code == 0 and rec["status"] == "verified" and rec["final_match"] == "isomorphic"
    broken = tmp_path / "broken.ks"
    broken.write_text(
        (BUNDLED / "cancellation-demo.ks").read_text().replace("crossings=3,4", "crossings=0,1")
        .replace("initial: cancellation-demo.kd", f"initial: {BUNDLED / 'cancellation-demo.kd'}")
    )
    code, rec, _ = run(capsys, "replay", str(broken))
    assert code == 1 and rec["failed_step"] == "4"


def test_surgery_h1(capsys):
    assert run(capsys, "surgery-h1", "rbg-meridional")[1]["h1"] == "Z"
    assert run(capsys, "surgery-h1", "trefoil-1")[1]["h1"] == "0"
    code, rec, _ = run(capsys, "surgery-h1", "rbg-meridional", "--components", "0,2")
    assert code == 0 and "h1" in rec


def test_rbg_check(capsys):
    assert run(capsys, "rbg-check", "rbg-meridional", "--r", "1", "--b", "0", "--g", "2")[0] == 0
    assert run(capsys, "rbg-check", "rbg-meridional", "--r", "0", "--b", "1", "--g", "2")[0] == 2


def test_rlink_check(capsys):
    code, rec, _ = run(capsys, "rlink-check", "unlink-2-0", "--pi1")
    assert code == 0 and rec["verdict"] == "pass+free(2)"
    code, rec, _ = run(capsys, "rlink-check", "trefoil-0", "--pi1")
    assert code == 3 and rec["verdict"] == "pass+inconclusive(1)" and rec["pi1_abelianization"] == "Z"
    code, rec, _ = run(capsys, "rlink-check", "hopf-0-0")
    assert code == 2 and rec["verdict"] == "fail"


def test_derivative_check(capsys, tmp_path):
    m = tmp_path / "v.txt"
    m.write_text("-1 1 0 0\n0 -1 0 0\n0 0 1 0\n0 0 -1 1\n")
    good, bad = tmp_path / "good.txt", tmp_path / "bad.txt"
    good.write_text("1 0 0 1\n0 1 1 0\n")
    bad.write_text("1 0 0 0\n0 1 1 0\n")
    code, rec, _ = run(capsys, "derivative-check", str(m), str(good))
    assert code == 0 and rec["verdict"] == "pass" and rec["genus"] == "2"
    code, rec, _ = run(capsys, "derivative-check", str(m), str(bad))
    assert code == 2 and rec["first_nonzero"] == "a0^T V a0 = -1"


def test_certify_unlink(capsys, tmp_path):
    out = tmp_path / "cert.ks"
    code, rec, _ = run(capsys, "certify-unlink", "unlink-2-0", "--emit-script", str(out))
    assert code == 0 and rec["status"] == "certificate"
    assert out.read_text().startswith("kirbycalc-script v1")
    code, rec, _ = run(capsys, "certify-unlink", "hopf")
    assert code == 2 and rec["status"] == "not-unlink"


def test_band_search(capsys):
    code, rec, _ = run(capsys, "band-search", "square-knot", "--max-band-length", "0", "--show", "2")
    assert code == 0 and int(rec["certified"]) >= 1
    assert rec["candidate_0"].startswith("certified ")
    code, rec, _ = run(capsys, "band-search", "trefoil")
    assert code == 2 and rec["obstruction"] == "slice obstruction: signature -2"


def test_corpus_and_missing_files(capsys):
    code, _, out = run(capsys, "corpus")
    assert code == 0 and "entry=square-knot" in out
    code, rec, _ = run(capsys, "validate", "no-such-knot")
    assert code == 1 and "no such file" in rec["error"]


def test_console_script_entry_point():
    res = subprocess.run(
        [sys.executable, "-m", "kirbycalc.cli", "validate", "hopf"], capture_output=True, text=True
    )
    assert res.returncode == 0 and "command=validate" in res.stdout


def test_external_corpus_directory(capsys, tmp_path, monkeypatch):
    (tmp_path / "mine.kd").write_text((BUNDLED / "trefoil.kd").read_text())
    monkeypatch.setenv("KIRBYCALC_CORPUS", str(tmp_path))
    code, rec, _ = run(capsys, "invariants", "mine")
    assert code == 0 and rec["signature"] == "-2"
