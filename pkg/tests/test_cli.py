from __future__ import annotations

import json
import subprocess
import sys

import pytest

from radkit.cli import cli_main
from radkit.emitter import read_back_stats
from radkit.formulation import FormulationKind, build_model, model_stats
from radkit.harness import load_system
from radkit.netmodel import to_per_unit

CLOSED_33 = ",".join(str(k) for k in range(1, 33))  # the 32 sectionalising branches


def run(capsys, *argv):
    code = cli_main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_validate(capsys):
    code, out, err = run(capsys, "validate", "--system", "33bus")
    assert code == 0 and out.startswith("valid: 33bus: 33 buses, 37 branches")


def test_validate_invalid_file(capsys, tmp_path):
    path = tmp_path / "bad.net"
    path.write_text(
        "[system]\nbase_kv = 10\nbase_mva = 1\n"
        "[buses]\nid,p_kw,q_kvar,vmin_pu,vmax_pu,is_substation\n1,0,0,,,1\n2,10,5,,,0\n"
        "[branches]\nfrom,to,r_ohm,x_ohm,imax_a,switchable,closed\n1,2,0,0,,1,1\n",
        encoding="utf-8",
    )
    code, out, err = run(capsys, "validate", "--system", str(path))
    assert code == 1 and out.startswith("invalid") and "zero impedance" in err


def test_check_radial(capsys):
    code, out, _ = run(capsys, "check-radial", "--system", "33bus", "--closed", CLOSED_33)
    assert code == 0 and out == "radial: true\n"
    code, out, _ = run(capsys, "check-radial", "--system", "33bus", "--closed", CLOSED_33 + ",33")
    assert code == 0 and out == "radial: false\n"
    code, out, _ = run(capsys, "check-radial", "--system", "33bus", "--open", "7,9,14,32,37")
    assert out == "radial: true\n"


def test_branch_numbers_checked(capsys):
    code, _, err = run(capsys, "check-radial", "--system", "33bus", "--closed", "0")
    assert code == 2 and "outside 1..37" in err
    code, _, err = run(capsys, "check-radial", "--system", "33bus", "--closed", "1", "--open", "2")
    assert code == 2


def test_powerflow(capsys, tmp_path):
    out_path = tmp_path / "pf.json"
    code, out, _ = run(capsys, "powerflow", "--system", "33bus", "--out", str(out_path))
    assert code == 0 and out == ""
    doc = json.loads(out_path.read_text())
    assert doc["losses_kw"] == pytest.approx(202.677, rel=1e-4)
    code, _, err = run(capsys, "powerflow", "--system", "33bus", "--closed", "1,2,3")
    assert code == 1 and "not radial" in err


def test_solve_exact_33bus(capsys):
    code, out, _ = run(capsys, "solve", "--system", "33bus", "--mode", "exact")
    doc = json.loads(out)
    assert code == 0 and doc["best_losses_kw"] == pytest.approx(139.55, rel=5e-3)
    assert [b["number"] for b in doc["open_branches"]] == [7, 9, 14, 32, 37]


def test_solve_exact_14bus(capsys):
    code, out, _ = run(capsys, "solve", "--system", "14bus", "--mode", "exact")
    assert code == 0
    assert json.loads(out)["best_losses_kw"] == pytest.approx(605.92, rel=5e-3)


def test_solve_falls_back_on_budget(capsys):
    code, out, err = run(capsys, "solve", "--system", "33bus", "--mode", "exact", "--max-trees", "10", "--starts", "2")
    doc = json.loads(out)
    assert code == 0 and "falling back" in err
    assert doc["mode"] == "local_search" and doc["starts"] == 2 and doc["seed"] == 0


def test_solve_local(capsys):
    code, out, _ = run(capsys, "solve", "--system", "14bus", "--mode", "local")
    assert code == 0 and json.loads(out)["mode"] == "local_search"


def test_emit_writes_file(capsys, tmp_path):
    path = tmp_path / "m.lp"
    code, out, _ = run(capsys, "emit", "--system", "33bus", "--formulation", "mcf+st", "--format", "lp", "--out", str(path))
    assert code == 0 and out == ""
    net = to_per_unit(load_system("33bus"))
    assert read_back_stats(path.read_text(), "lp") == model_stats(build_model(net, FormulationKind.MCF_ST))


def test_emit_format_from_suffix(capsys, tmp_path):
    path = tmp_path / "m.mps"
    assert run(capsys, "emit", "--system", "14bus", "--formulation", "st", "--out", str(path))[0] == 0
    assert path.read_text().startswith("* Generator: radkit")


def test_emit_unknown_formulation(capsys):
    code, _, err = run(capsys, "emit", "--system", "14bus", "--formulation", "tree")
    assert code == 1 and "unknown formulation" in err


def test_stats(capsys):
    code, out, _ = run(capsys, "stats", "--system", "33bus", "--formulation", "base,mcf")
    doc = json.loads(out)
    assert doc["formulations"]["base"]["n_binary"] == 37
    assert doc["formulations"]["mcf"]["n_continuous"] == 183 + 2368


def test_bench_markdown(capsys):
    code, out, _ = run(capsys, "bench", "--systems", "14bus", "--formulations", "st,scf", "--mode", "exact",
                       "--format", "markdown")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "| formulation | 14bus |" and len(lines) == 4


def test_missing_system_is_domain_error(capsys):
    code, _, err = run(capsys, "validate", "--system", "does-not-exist")
    assert code == 1 and "error:" in err


def test_usage_errors(capsys):
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys)[0] == 2
    code, _, err = run(capsys, "solve", "--system", "33bus", "--mode", "fast")
    assert code == 2 and "usage" in err


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "radkit", "check-radial", "--system", "33bus"], capture_output=True, text=True
    )
    assert proc.returncode == 0 and proc.stdout == "radial: true\n"
