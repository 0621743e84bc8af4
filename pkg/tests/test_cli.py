import io
import json
import subprocess
import sys

import pytest

from qaffine.cli import main


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_catalog_lists_families():
    code, out, err = run("catalog")
    doc = json.loads(out)
    assert code == 0
    assert [f["kind"] for f in doc["families"]].count("super") == 4
    assert [f["kind"] for f in doc["families"]].count("partner") == 5
    assert "{" not in err


def test_catalog_csv():
    code, out, _ = run("catalog", "--format", "csv")
    assert out.splitlines()[0] == "family,kind,detail"


def test_validate_roundtrip(tmp_path):
    _, out, _ = run("export", "--algebra", "B1_0_2")
    spec = tmp_path / "b.json"
    spec.write_text(out)
    code, out, _ = run("validate", "--spec", str(spec))
    assert code == 0 and json.loads(out)["status"] == "pass"


def test_validate_failure_names_condition(tmp_path):
    spec = tmp_path / "bad.json"
    spec.write_text(json.dumps({"matrix": [[1, -1], [-4, 2]], "d": ["2", "1/2"], "theta": [1]}))
    code, out, err = run("validate", "--spec", str(spec))
    assert code == 1
    assert json.loads(out)["counterexample"]["condition"] == "a_ii = 2"
    assert "a_ii = 2" in err


def test_validate_parse_error(tmp_path):
    spec = tmp_path / "broken.json"
    spec.write_text('{"matrix": [[2, -1],\n [-4, 2]')
    code, out, err = run("validate", "--spec", str(spec))
    assert code == 2 and out == ""
    assert "line" in err


def test_validate_missing_field(tmp_path):
    spec = tmp_path / "nod.json"
    spec.write_text('{"matrix": [[2, -2], [-2, 2]]}')
    code, _, err = run("validate", "--spec", str(spec))
    assert code == 2 and "'d'" in err


def test_character_trivial():
    code, out, _ = run("character", "--algebra", "B1_0_1", "--labels", "0,0", "--depth", "3")
    doc = json.loads(out)
    assert code == 0
    assert doc["entries"] == [{"alpha_coords": [0, 0], "multiplicity": 1}]
    assert "elapsed_ms" not in doc


def test_character_rejects_odd_label():
    code, out, err = run("character", "--algebra", "B1_0_1", "--labels", "0,1")
    assert code == 2 and out == ""
    assert "even" in err


def test_character_allow_nonintegrable():
    code, out, _ = run("character", "--algebra", "B1_0_1", "--labels", "0,1", "--depth", "3", "--allow-nonintegrable")
    assert code == 0
    mults = {tuple(e["alpha_coords"]): e["multiplicity"] for e in json.loads(out)["entries"]}
    assert mults[(0, 3)] == 1


def test_character_bad_labels():
    assert run("character", "--algebra", "B1_0_1", "--labels", "1,0,0")[0] == 2
    assert run("character", "--algebra", "B1_0_1", "--labels", "a,b")[0] == 2
    assert run("character", "--algebra", "B1_0_1", "--labels", "1,0", "--lambda0", "5")[0] == 2


def test_character_resource_limit():
    code, out, err = run("character", "--algebra", "B1_0_1", "--labels", "2,2", "--depth", "6", "--max-space", "4")
    doc = json.loads(out)
    assert code == 3 and doc["partial"] is True
    assert "resource limit" in err


def test_character_csv():
    code, out, _ = run("character", "--algebra", "B1_0_1", "--labels", "1,0", "--depth", "2", "--format", "csv")
    assert out.splitlines()[:3] == ["c0,c1,multiplicity", "0,0,1", "1,0,1"]


def test_character_deterministic_and_cache(tmp_path):
    args = ("character", "--algebra", "B1_0_2", "--labels", "1,0,2", "--depth", "3", "--seed", "5")
    cold = run(*args)[1]
    again = run(*args)[1]
    c1 = run(*args, "--cache-dir", str(tmp_path))
    c2 = run(*args, "--cache-dir", str(tmp_path))
    assert cold == again == c1[1] == c2[1]
    assert "cache hits 0" in c1[2] and "cache hits 0" not in c2[2]


def test_cache_env_var(tmp_path, monkeypatch):
    monkeypatch.setenv("QAFFINE_CACHE_DIR", str(tmp_path))
    run("character", "--algebra", "B1_0_1", "--labels", "1,0", "--depth", "3")
    assert any(tmp_path.rglob("*.json"))


def test_cache_version_stamp(tmp_path):
    from qaffine.cache import DiskCache
    a = DiskCache(tmp_path, version="one")
    a.put("k", {"rank": 1})
    assert a.get("k") == {"rank": 1}
    assert DiskCache(tmp_path, version="two").get("k") is None


def test_timing_flag():
    _, out, _ = run("verify", "presentation", "--algebra", "B1_0_1")
    assert json.loads(out)["elapsed_ms"] is None
    _, out, _ = run("verify", "presentation", "--algebra", "B1_0_1", "--timing")
    assert json.loads(out)["elapsed_ms"] is not None


def test_integrable_command():
    code, out, _ = run("integrable", "--algebra", "B1_0_1", "--labels", "1,2")
    doc = json.loads(out)
    assert code == 0 and doc["integrable_dominant"] and doc["nilpotency_index"] == {"f0": 2, "f1": 3}
    code, out, _ = run("integrable", "--algebra", "B1_0_1", "--labels", "1,1")
    assert code == 0 and json.loads(out)["nilpotency_index"]["f1"] is None


def test_verify_serre():
    code, out, err = run("verify", "serre", "--algebra", "B1_0_1", "--labels", "2,2", "--depth", "4")
    assert code == 0 and json.loads(out)["status"] == "pass"
    assert err.startswith("[PASS]")


def test_verify_twist_and_mutation():
    code, _, _ = run("verify", "twist", "--family", "B", "--n", "1", "--labels", "1,0", "--depth", "4")
    assert code == 0
    code, out, err = run("verify", "twist", "--family", "B", "--n", "1", "--labels", "1,0", "--depth", "4",
                         "--mutate", "omit-delta")
    assert code == 1
    assert json.loads(out)["counterexample"]["relation"].startswith("[e_i, f_j}")
    assert "{" not in err.split("first failure")[0]


def test_verify_twist_bad_mutation():
    assert run("verify", "twist", "--algebra", "B1_0_1", "--labels", "1,0", "--mutate", "nonsense")[0] == 2


def test_verify_tensor_and_classical():
    assert run("verify", "tensor", "--algebra", "B1_0_1", "--labels", "1,0", "--labels2", "0,2")[0] == 0
    assert run("verify", "classical", "--algebra", "B1_0_1", "--labels", "1,0", "--depth", "3")[0] == 0


def test_verify_presentation_spec(tmp_path):
    _, out, _ = run("export", "--algebra", "C2_3")
    spec = tmp_path / "c.json"
    spec.write_text(out)
    assert run("verify", "presentation", "--spec", str(spec))[0] == 0


def test_no_algebra_is_input_error():
    assert run("verify", "presentation")[0] == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "qaffine", "catalog", "--format", "csv"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert "B1_0,super" in proc.stdout
