import json
import subprocess
import sys

import pytest

from ckforms import cli
from ckforms.catalog import dump_pair, find_entry
from ckforms.report import to_json


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_check_json_gl4r(capsys):
    code, out, _ = run(capsys, "check", "--pair", "gl4r-gl2c", "--max-degree", "8", "--format", "json")
    assert code == 0
    r = json.loads(out)
    assert r["verdict"] == "obstruction_found"
    assert r["witness"] == "c2@1 - c2@2"
    assert r["poly_degree"] == 2 and r["coh_degree"] == 4
    assert r["coefficients"] == {"c2@1": "1", "c2@2": "-1"}
    assert r["legend"] == {"c2@1": "c2 ⊗ 1", "c2@2": "1 ⊗ c2"}
    assert all(s["coh_degree"] == 2 * s["degree"] for s in r["degrees"])


def test_check_text_sl4r(capsys):
    code, out, _ = run(capsys, "check", "--pair", "sl4r-so13")
    assert code == 0
    assert "witness: e\n" in out
    assert "obstruction found: G/H admits no compact Clifford–Klein form" in out
    assert "polynomial degree 2, cohomological degree 4" in out


def test_verdict_wordings(capsys):
    _, out, _ = run(capsys, "check", "--pair", "sl4r-so13", "--max-degree", "1")
    assert "inconclusive: no witness up to degree 1 (this does NOT imply existence)" in out
    _, out, _ = run(capsys, "check", "--pair", "sl2c-sl2r")
    assert "verdict: criterion inapplicable" in out and "complexification" in out


def test_text_and_json_agree(capsys):
    for pair in ("gl4r-gl2c", "o22-o2c", "u-prq-upq-ur(1,1,1)", "sl-pq-so-pq(1,3)"):
        _, text, _ = run(capsys, "check", "--pair", pair)
        _, raw, _ = run(capsys, "check", "--pair", pair, "--format", "json")
        r = json.loads(raw)
        assert f"verdict: {r['verdict_text']}" in text
        if r["witness"]:
            assert f"witness: {r['witness']}\n" in text
            assert f"polynomial degree {r['poly_degree']}," in text


def test_json_roundtrip_is_byte_identical(capsys):
    _, raw, _ = run(capsys, "check", "--pair", "sl-c-blocks(2,2)", "--format", "json")
    assert to_json(json.loads(raw)) == raw

    def no_floats(v):
        if isinstance(v, dict):
            return all(no_floats(x) for x in v.values())
        if isinstance(v, list):
            return all(no_floats(x) for x in v)
        return not isinstance(v, float)

    assert no_floats(json.loads(raw))


def test_spec_file_and_errors(capsys, tmp_path):
    good = tmp_path / "good.json"
    good.write_text(dump_pair(find_entry("gl4r-gl2c").pair))
    code, out, _ = run(capsys, "check", "--spec", str(good), "--format", "json")
    assert code == 0 and json.loads(out)["witness"] == "c2@1 - c2@2"
    code, out, _ = run(capsys, "check", "--pair", str(good))
    assert code == 0
    bad = tmp_path / "bad.json"
    bad.write_text('{"id": "x"}')
    code, _, err = run(capsys, "check", "--spec", str(bad))
    assert code == 2 and "schema violation" in err
    code, _, err = run(capsys, "check", "--spec", str(tmp_path / "missing.json"))
    assert code == 2
    code, _, err = run(capsys, "check", "--pair", "no-such-pair")
    assert code == 2 and "unknown pair" in err
    code, _, _ = run(capsys, "check")
    assert code == 2
    code, _, _ = run(capsys, "check", "--pair", "gl4r-gl2c", "--max-degree", "0")
    assert code == 2
    code, _, _ = run(capsys, "frobnicate")
    assert code == 2


def test_family_instance_selector(capsys):
    code, out, _ = run(capsys, "check", "--pair", "sl-pq-so-pq(1,5)", "--format", "json")
    assert code == 0 and json.loads(out)["witness"] == "e"
    code, _, _ = run(capsys, "check", "--pair", "sl-pq-so-pq(0,5)")
    assert code == 2


def test_internal_error_exit_code(capsys, monkeypatch):
    def boom(*a, **k):
        raise RuntimeError("kaboom")

    monkeypatch.setattr(cli, "check_obstruction", boom)
    code, _, err = run(capsys, "check", "--pair", "gl4r-gl2c")
    assert code == 1 and "internal error" in err


def test_max_degree_env_and_flag(capsys, monkeypatch):
    monkeypatch.setenv("CKFORMS_MAX_DEGREE", "1")
    _, out, _ = run(capsys, "check", "--pair", "sl4r-so13", "--format", "json")
    assert json.loads(out)["max_degree"] == 1 and json.loads(out)["verdict"] == "inconclusive"
    _, out, _ = run(capsys, "check", "--pair", "sl4r-so13", "--format", "json", "--max-degree", "3")
    assert json.loads(out)["verdict"] == "obstruction_found"
    monkeypatch.setenv("CKFORMS_MAX_DEGREE", "lots")
    code, _, _ = run(capsys, "check", "--pair", "sl4r-so13")
    assert code == 2
    monkeypatch.delenv("CKFORMS_MAX_DEGREE")
    _, out, _ = run(capsys, "check", "--pair", "sl4r-so13", "--format", "json")
    assert json.loads(out)["max_degree"] == 12


def test_list(capsys):
    code, out, _ = run(capsys, "list")
    assert code == 0
    assert "sl-pq-so-pq(1,3) | Cor 1.4 (2)" in out
    code, out, _ = run(capsys, "list", "--format", "json")
    rows = json.loads(out)
    assert isinstance(rows, list) and {"id", "description", "source", "expected"} <= set(rows[0])
    code, out, _ = run(capsys, "list", "--filter", "zzz-nothing")
    assert code == 0 and out.strip().count("\n") == 0
    code, out, _ = run(capsys, "list", "--filter", "zzz-nothing", "--format", "json")
    assert json.loads(out) == []


def test_sweep_odd_pq(capsys):
    code, out, _ = run(
        capsys, "sweep", "--family", "sl-pq-so-pq", "--param", "p=1..5/2", "--param", "q=1,3,5", "--format", "json"
    )
    assert code == 0
    doc = json.loads(out)
    assert [r["params"] for r in doc["reports"]] == [[p, q] for p in (1, 3, 5) for q in (1, 3, 5)]
    assert all(r["verdict"] == "obstruction_found" and r["witness"] == "e" for r in doc["reports"])
    assert doc["summary"] == {"obstruction_found": 9, "inconclusive": 0, "inapplicable": 0}


def test_sweep_empty_and_inapplicable(capsys, tmp_path):
    out_file = tmp_path / "sweep.txt"
    code, out, _ = run(
        capsys, "sweep", "--family", "sl-pq-so-pq", "--param", "p=", "--param", "q=1", "--out", str(out_file)
    )
    assert code == 0 and out == ""
    assert out_file.read_text() == "summary: obstruction_found=0, inconclusive=0, inapplicable=0\n"
    code, out, _ = run(
        capsys, "sweep", "--family", "u-prq-upq-ur", "--param", "p=1,2", "--param", "q=1", "--param", "r=1,2",
        "--format", "json",
    )
    doc = json.loads(out)
    assert len(doc["reports"]) == 4
    assert all(r["verdict"] == "inapplicable" and r["reason"] == "equal_rank_hk" for r in doc["reports"])


def test_sweep_errors(capsys):
    assert run(capsys, "sweep", "--family", "nope")[0] == 2
    assert run(capsys, "sweep", "--family", "sl-pq-so-pq", "--param", "p=9", "--param", "q=9")[0] == 2
    assert run(capsys, "sweep", "--family", "sl-pq-so-pq", "--param", "p=1")[0] == 2
    assert run(capsys, "sweep", "--family", "sl-pq-so-pq", "--param", "p=x", "--param", "q=1")[0] == 2
    assert run(capsys, "sweep", "--family", "sl-r-blocks", "--param", "n=3")[0] == 2
    code, out, _ = run(capsys, "sweep", "--family", "sl-r-blocks", "--tuple", "3,3", "--tuple", "2,2", "--format", "json")
    assert code == 0 and [r["params"] for r in json.loads(out)["reports"]] == [[2, 2], [3, 3]]


def test_sweep_parallel_matches_serial(capsys):
    args = ["sweep", "--family", "o-pq-rs", "--param", "p=1", "--param", "q=1,3", "--param", "r=1,2",
            "--param", "s=0", "--format", "json"]
    _, serial, _ = run(capsys, *args)
    _, parallel, _ = run(capsys, *args, "--jobs", "2")
    assert serial == parallel


def test_timing_is_opt_in(capsys):
    _, out, _ = run(capsys, "check", "--pair", "gl4r-gl2c", "--format", "json")
    assert "elapsed_ms" not in json.loads(out)
    _, out, _ = run(capsys, "check", "--pair", "gl4r-gl2c", "--format", "json", "--timing")
    assert isinstance(json.loads(out)["elapsed_ms"], int)


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "ckforms", "check", "--pair", "gl4r-gl2c", "--format", "json"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0 and json.loads(proc.stdout)["witness"] == "c2@1 - c2@2"
    proc = subprocess.run(
        [sys.executable, "-m", "ckforms", "check", "--spec", "/nonexistent.json"], capture_output=True, text=True
    )
    assert proc.returncode == 2
