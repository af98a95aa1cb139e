"""End-to-end command-line interface tests.

Each test drives ``main`` directly with argv lists, captures the JSON
payload, and checks both the payload and the exit code.
"""

import json
import math
import subprocess
import sys
from fractions import Fraction

import numpy as np
import pytest

from interlace import VectorSystem
from interlace.cli import main


def run_cli(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else None)


@pytest.fixture
def iso_system_file(tmp_path):
    rng = np.random.default_rng(103)
    vs = VectorSystem.random_isotropic(4, 9, rng)
    path = tmp_path / "system.json"
    path.write_text(json.dumps({"vectors": vs.vectors.astype(float).tolist()}))
    return str(path)


def test_ri_happy_path(capsys, iso_system_file):
    code, payload = run_cli(capsys, ["ri", iso_system_file, "-k", "2"])
    assert code == 0
    assert payload["command"] == "ri"
    assert payload["n"] == 4 and payload["m"] == 9 and payload["k"] == 2
    assert len(payload["subset"]) == 2
    assert payload["certificate_valid"] is True
    assert payload["achieved"] >= payload["pledged"] - 1e-7
    assert payload["achieved"] >= payload["bound"] - 1e-7


def test_ri_reads_stdin(capsys, monkeypatch):
    import io
    monkeypatch.setattr(sys, "stdin", io.StringIO(json.dumps(
        {"vectors": [[1.0, 0.0], [0.0, 1.0]]})))
    code, payload = run_cli(capsys, ["ri", "-", "-k", "1"])
    assert code == 0
    assert payload["subset"] in ([0], [1])


def test_ri_parse_failure_exit_2(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("this is not json")
    code, _ = run_cli(capsys, ["ri", str(bad), "-k", "1"])
    assert code == 2


def test_ri_missing_file_exit_2(capsys):
    code, _ = run_cli(capsys, ["ri", "/nonexistent/file.json", "-k", "1"])
    assert code == 2


def test_ri_precondition_failure_exit_3(capsys, tmp_path):
    aniso = tmp_path / "aniso.json"
    aniso.write_text(json.dumps({"vectors": [[2.0, 0.0], [0.0, 1.0]]}))
    code, _ = run_cli(capsys, ["ri", str(aniso), "-k", "1"])
    assert code == 3


def test_ri_basis_system_achieves_one(capsys, tmp_path):
    basis = tmp_path / "basis.json"
    basis.write_text(json.dumps([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]))
    code, payload = run_cli(capsys, ["ri", str(basis), "-k", "1"])
    assert code == 0
    assert payload["achieved"] == pytest.approx(1.0)


def test_ri_k_too_large_exit_3(capsys, tmp_path):
    basis = tmp_path / "basis.json"
    basis.write_text(json.dumps([[1.0, 0.0], [0.0, 1.0]]))
    code, _ = run_cli(capsys, ["ri", str(basis), "-k", "2"])
    assert code == 3


def test_weaver_happy_path(capsys, iso_system_file):
    code, payload = run_cli(capsys, ["weaver", iso_system_file])
    assert code == 0
    assert sorted(payload["s1"] + payload["s2"]) == list(range(9))
    assert payload["norm1"] <= payload["bound"] + 1e-7
    assert payload["norm2"] <= payload["bound"] + 1e-7
    assert payload["certificate_valid"] is True


def test_weaver_explicit_alpha_too_small_exit_3(capsys, iso_system_file):
    code, _ = run_cli(capsys, ["weaver", iso_system_file, "--alpha", "1e-6"])
    assert code == 3


def test_weaver_exact_mode(capsys, tmp_path):
    # Hadamard halves: entries +-1/2, exactly isotropic in dim 2
    vecs = [["1/2", "1/2"], ["1/2", "-1/2"], ["1/2", "1/2"], ["1/2", "-1/2"]]
    path = tmp_path / "had.json"
    path.write_text(json.dumps({"vectors": vecs}))
    code, payload = run_cli(capsys, ["weaver", str(path), "--mode", "exact"])
    assert code == 0
    assert payload["norm1"] == pytest.approx(0.5)
    assert payload["norm2"] == pytest.approx(0.5)
    assert payload["bound"] == pytest.approx(2.0)  # (1 + sqrt(2 * 1/2))^2 / 2


def test_weaver_empty_system_exit_2(capsys, tmp_path):
    path = tmp_path / "empty.json"
    path.write_text(json.dumps({"vectors": []}))
    code, _ = run_cli(capsys, ["weaver", str(path)])
    assert code == 2


def test_lift_single_iteration(capsys, tmp_path):
    k33 = tmp_path / "k33.txt"
    k33.write_text("\n".join(f"{a} {b}" for a in range(3) for b in range(3, 6)))
    code, payload = run_cli(capsys, ["lift", str(k33)])
    assert code == 0
    step = payload["steps"][0]
    assert step["n"] == 6 and step["d"] == 3
    assert step["lambda_max_signed"] <= step["threshold"] + 1e-7
    assert step["lift_ramanujan"] is True
    assert payload["final_n"] == 12
    assert len(step["signs"]) == 9
    assert set(step["signs"]) <= {-1, 1}


def test_lift_non_regular_exit_3(capsys, tmp_path):
    p = tmp_path / "path.txt"
    p.write_text("0 1\n1 2\n")
    code, _ = run_cli(capsys, ["lift", str(p)])
    assert code == 3


def test_lift_degree_one_exit_3(capsys, tmp_path):
    k2 = tmp_path / "k2.txt"
    k2.write_text("0 1\n")
    code, _ = run_cli(capsys, ["lift", str(k2)])
    assert code == 3  # d >= 2 required for the threshold to make sense


def test_lift_non_bipartite_exit_3(capsys, tmp_path):
    k4 = tmp_path / "k4.txt"
    k4.write_text("\n".join(f"{a} {b}" for a in range(4) for b in range(a + 1, 4)))
    code, _ = run_cli(capsys, ["lift", str(k4)])
    assert code == 3


def test_lift_malformed_edges_exit_2(capsys, tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("0 1 2 3 4\n")
    code, _ = run_cli(capsys, ["lift", str(bad)])
    assert code == 2


def test_mixedchar_happy_path(capsys, tmp_path):
    mats = tmp_path / "mats.json"
    mats.write_text(json.dumps({"matrices": [
        [[0.5, 0.0], [0.0, 0.0]],
        [[0.0, 0.0], [0.0, 0.5]],
    ]}))
    code, payload = run_cli(capsys, ["mixedchar", str(mats)])
    assert code == 0
    assert payload["degree"] == 2
    assert payload["poly"] == pytest.approx([0.25, -1.0, 1.0])
    assert payload["roots"] == pytest.approx([0.5, 0.5])


def test_mixedchar_exact_mode(capsys, tmp_path):
    mats = tmp_path / "mats.json"
    mats.write_text(json.dumps({"matrices": [[[1, 0], [0, 1]]]}))
    code, payload = run_cli(capsys, ["mixedchar", str(mats), "--mode", "exact"])
    assert code == 0
    assert payload["poly"] == [0, -2, 1]  # x^2 - 2x, serialized as integers


def test_mixedchar_exact_fractions_serialize(capsys, tmp_path):
    mats = tmp_path / "mats.json"
    mats.write_text(json.dumps({"matrices": [[["1/2", "0"], ["0", "1/2"]]]}))
    code, payload = run_cli(capsys, ["mixedchar", str(mats), "--mode", "exact"])
    assert code == 0
    assert payload["poly"] == [0, -1, 1]


def test_mixedchar_non_psd_exit_3(capsys, tmp_path):
    mats = tmp_path / "mats.json"
    mats.write_text(json.dumps({"matrices": [[[-1.0, 0.0], [0.0, 1.0]]]}))
    code, _ = run_cli(capsys, ["mixedchar", str(mats)])
    assert code == 3


def test_mixedchar_empty_list_exit_2(capsys, tmp_path):
    mats = tmp_path / "mats.json"
    mats.write_text(json.dumps({"matrices": []}))
    code, _ = run_cli(capsys, ["mixedchar", str(mats)])
    assert code == 2


def test_budget_exceeded_exit_4(capsys, tmp_path):
    rng = np.random.default_rng(107)
    vs = VectorSystem.random_isotropic(3, 25, rng)
    path = tmp_path / "big.json"
    path.write_text(json.dumps({"vectors": vs.vectors.astype(float).tolist()}))
    # 2^25 outcomes blow the budget of 2^20 during the weaver walk
    code, _ = run_cli(capsys, ["weaver", str(path)])
    assert code == 4


def test_out_flag_writes_file(capsys, tmp_path, iso_system_file):
    target = tmp_path / "result.json"
    code = main(["ri", iso_system_file, "-k", "1", "--out", str(target)])
    assert code == 0
    payload = json.loads(target.read_text())
    assert payload["command"] == "ri"
    assert capsys.readouterr().out == ""


def test_bad_config_exit_2(capsys, iso_system_file):
    code, _ = run_cli(capsys, ["ri", iso_system_file, "-k", "1", "--tol", "-1"])
    assert code == 2
    code, _ = run_cli(capsys, ["ri", iso_system_file, "-k", "1", "--budget", "0"])
    assert code == 2


def test_identical_invocations_are_byte_identical(tmp_path, iso_system_file):
    outs = []
    for name in ("a.json", "b.json"):
        target = tmp_path / name
        assert main(["ri", iso_system_file, "-k", "2", "--seed", "7",
                     "--out", str(target)]) == 0
        outs.append(target.read_bytes())
    assert outs[0] == outs[1]


def test_console_script_installed():
    proc = subprocess.run(["interlace", "--help"], capture_output=True, text=True)
    assert proc.returncode == 0
    for sub in ("ri", "weaver", "lift", "mixedchar"):
        assert sub in proc.stdout
