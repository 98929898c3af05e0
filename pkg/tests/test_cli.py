import json
import subprocess
import sys

import pytest

from symlie.cli import main, parse_config
from symlie.core import element_from_dict, element_to_dict


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_circuit_json_has_2k_generators(capsys):
    code, out = run(capsys, "circuit", "--k", "3", "--truncation", "4", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["command"] == "circuit"
    assert len(data["model"]["generators"]) == 6
    assert data["model"]["morphisms"]["sigma"]["x3"] == "x1"
    assert all(r["status"] == "pass" for r in data["results"])


def test_circuit_text_shows_linear_part(capsys):
    code, out = run(capsys, "circuit", "--k", "3", "--truncation", "4")
    assert code == 0
    assert "d1(x1) = v2 - v1" in out.splitlines()


@pytest.mark.parametrize(
    "argv",
    [
        ["circuit", "--k", "2"],
        ["circuit", "--truncation", "0"],
        ["circuit", "--truncation", "7"],
        ["circuit", "--format", "xml"],
        ["frobnicate"],
        [],
    ],
)
def test_usage_errors_exit_2(argv, capsys):
    with pytest.raises(SystemExit) as info:
        main(argv)
    assert info.value.code == 2


def test_large_truncation_allowed_with_flag():
    cfg = parse_config(["circuit", "--truncation", "7", "--allow-large"])
    assert cfg["truncation"] == 7
    assert parse_config(["verify"])["seed"] == 0


def test_invariant_mc_length_one(capsys):
    code, out = run(capsys, "invariant-mc", "--k", "3", "--truncation", "1", "--format", "json")
    assert code == 0
    omega = json.loads(out)["elements"]["Omega"]
    assert omega["terms"] == [
        {"word": ["v1"], "coeff": "1/3"},
        {"word": ["v2"], "coeff": "1/3"},
        {"word": ["v3"], "coeff": "1/3"},
    ]


def test_invariant_mc_k4_reports_tau_residual(capsys):
    code, out = run(capsys, "invariant-mc", "--k", "4", "--truncation", "4", "--format", "json")
    assert code == 0
    data = json.loads(out)
    by_name = {r["name"]: r for r in data["results"]}
    assert by_name["tau Omega - Omega"]["residual"] == "0"
    assert [d["length"] for d in data["diagnostics"]] == [2, 3, 4]
    for name, el in data["elements"].items():
        assert element_to_dict(element_from_dict(el)) == el


def test_symmetric_triangle_reports_loop_relations(capsys):
    code, out = run(capsys, "symmetric-triangle", "--truncation", "3", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["loop_relations"] == {"lambda": "-1/3", "mu": "2/3"}
    assert any(g["name"] == "e'" for g in data["model"]["generators"])


def test_verify_is_deterministic(tmp_path):
    outs = []
    for name in ("a.json", "b.json"):
        path = tmp_path / name
        code = main(["verify", "--seed", "7", "--format", "json", "--output", str(path), "--trials", "3"])
        assert code == 0
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]
    data = json.loads(outs[0])
    assert {"command", "config", "results", "elements"} <= set(data)
    assert all(set(r) == {"name", "paper_anchor", "status", "residual"} for r in data["results"])


def test_verify_fault_injection_names_generator(capsys):
    code, out = run(capsys, "verify", "--trials", "2", "--inject-fault")
    assert code == 1
    failing = [line for line in out.splitlines() if line.startswith("[FAIL]")]
    assert len(failing) == 1
    assert "d^2 x1" in failing[0]


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "symlie", "triangle", "--truncation", "3"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert "d_v1(x1*x2*x3) = 0" in proc.stdout
