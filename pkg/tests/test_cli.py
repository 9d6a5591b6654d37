import json
import subprocess
import sys

import pytest

from sdrewrite.cli import main
from sdrewrite.cospan import cospans_isomorphic
from sdrewrite.serialize import cospan_from_json, cospan_to_json, dumps
from sdrewrite.theories import COUNTEREXAMPLE, fs_counterexample


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_check_term(capsys):
    code, out, _ = run(capsys, "check", "(delta + id(1)) ; (id(1) + mu)", "--ruleset", "fs")
    assert code == 0 and "MA: yes" in out


def test_check_merged_inputs(capsys, tmp_path):
    f = tmp_path / "m.json"
    f.write_text(json.dumps({"nodes": [{"id": 0, "colour": "•"}], "edges": [], "inputs": [0, 0], "outputs": [0]}))
    code, out, _ = run(capsys, "check", str(f))
    assert code == 1 and "MA: no (leg not mono)" in out


def test_check_bad_json(capsys, tmp_path):
    f = tmp_path / "bad.json"
    f.write_text("{oops")
    assert run(capsys, "check", str(f))[0] == 2


def test_check_bad_term(capsys):
    code, _, err = run(capsys, "check", "mu ; ;")
    assert code == 2 and "offset" in err


def test_rewrite_normalize_and_measure(capsys, tmp_path):
    code, out, _ = run(capsys, "rewrite", COUNTEREXAMPLE, "--ruleset", "fs", "--normalize",
                       "--strategy", "rule-order", "--out", str(tmp_path), "--dot")
    assert code == 0 and "1 step(s), normal form" in out
    doc = json.loads((tmp_path / "trace.json").read_text())
    assert [s["rule"] for s in doc["steps"]] == ["FS3"]
    assert (tmp_path / "trace.step001.dot").exists()
    code, out, _ = run(capsys, "measure", str(tmp_path / "trace.json"), "--measure", "fs")
    assert code == 0 and "fs: PASS" in out


def test_rewrite_ba_mu_delta(capsys, tmp_path):
    code, out, _ = run(capsys, "rewrite", "mu ; delta", "--ruleset", "ba", "--normalize", "--out", str(tmp_path))
    assert code == 0 and out.splitlines()[0] == "1: BA9"


def test_rewrite_step_listing_and_apply(capsys, tmp_path):
    code, out, _ = run(capsys, "rewrite", COUNTEREXAMPLE, "--ruleset", "fs", "--step")
    assert code == 0 and "[0] FS3" in out and "[1] FS4" in out
    code, out, _ = run(capsys, "rewrite", COUNTEREXAMPLE, "--ruleset", "fs", "--step", "1",
                       "--output", str(tmp_path / "t.json"))
    assert code == 0 and "applied FS4" in out
    assert run(capsys, "rewrite", COUNTEREXAMPLE, "--ruleset", "fs", "--step", "7")[0] == 3
    assert run(capsys, "rewrite", "mu + mu", "--ruleset", "fs", "--step")[0] == 3


def test_rewrite_frobenius_mode_accepts_non_ma(capsys, tmp_path):
    f = tmp_path / "m.json"
    f.write_text(json.dumps({"nodes": [{"id": 0, "colour": "•"}], "edges": [], "inputs": [0, 0], "outputs": [0]}))
    assert run(capsys, "rewrite", str(f), "--normalize", "--out", str(tmp_path))[0] == 2
    assert run(capsys, "rewrite", str(f), "--normalize", "--mode", "frobenius", "--out", str(tmp_path))[0] == 0


def test_rule_file(capsys, tmp_path):
    rules = tmp_path / "rules.json"
    rules.write_text(json.dumps({"rules": [{"name": "swap", "lhs": "mu ; delta", "rhs": "mu ; delta"},
                                           {"name": "fuse", "lhs": "eta ; epsilon", "rhs": "id(0)"}]}))
    code, out, _ = run(capsys, "rewrite", "(eta ; epsilon) + id(1)", "--ruleset", str(rules), "--step")
    assert code == 0 and "[0] fuse" in out


def test_measure_failures(capsys, tmp_path):
    g = cospan_to_json(fs_counterexample())
    trace = {"initial": g, "steps": [{"rule": "FS3", "result": g}]}
    (tmp_path / "t.json").write_text(json.dumps(trace))
    assert run(capsys, "measure", str(tmp_path / "t.json"), "--measure", "fs")[0] == 1
    (tmp_path / "e.json").write_text(json.dumps({"initial": g, "steps": []}))
    assert run(capsys, "measure", str(tmp_path / "e.json"), "--measure", "fs")[0] == 0
    (tmp_path / "x.json").write_text(json.dumps({"steps": 3}))
    assert run(capsys, "measure", str(tmp_path / "x.json"))[0] == 2


@pytest.mark.parametrize("name", ["fs-nonconfluence", "boundary-uniqueness", "convexity-blocking"])
def test_demos(capsys, tmp_path, name):
    code, out, _ = run(capsys, "demo", name, "--out", str(tmp_path))
    assert code == 0 and f"{name}: ok" in out


def test_demo_files_and_env_dir(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("SDREWRITE_OUTPUT_DIR", str(tmp_path))
    assert run(capsys, "demo", "fs-nonconfluence")[0] == 0
    cert = json.loads((tmp_path / "fs-nonconfluence" / "certificate.json").read_text())
    assert cert["H1_isomorphic_to_H2"] is False
    h1 = cospan_from_json(json.loads((tmp_path / "fs-nonconfluence" / "H1.json").read_text()))
    assert cospans_isomorphic(h1, cospan_from_json(cospan_to_json(h1)))


def test_extract_both_directions(capsys, tmp_path):
    code, out, _ = run(capsys, "extract", COUNTEREXAMPLE, "--ruleset", "fs")
    assert code == 0
    f = tmp_path / "g.json"
    f.write_text(out)
    assert cospans_isomorphic(cospan_from_json(json.loads(out)), fs_counterexample())
    code, out, _ = run(capsys, "extract", str(f), "--ruleset", "fs")
    assert code == 0
    code, back, _ = run(capsys, "extract", out.strip(), "--ruleset", "fs")
    assert cospans_isomorphic(cospan_from_json(json.loads(back)), fs_counterexample())


def test_round_trip_file(tmp_path):
    g = fs_counterexample()
    text = dumps(cospan_to_json(g))
    assert cospans_isomorphic(cospan_from_json(json.loads(text)), g)
    assert dumps(cospan_to_json(cospan_from_json(json.loads(text)))) == text


def test_console_script_runs(tmp_path):
    r = subprocess.run([sys.executable, "-m", "sdrewrite.cli", "demo", "convexity-blocking", "--out", str(tmp_path)],
                       capture_output=True, text=True)
    assert r.returncode == 0, r.stderr
