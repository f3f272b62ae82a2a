import json
import os
import subprocess
import sys

import pytest

from pseudoherm import cli

CHAIN = "model=asymmetric_xxz N=4 random seed=9\n"


@pytest.fixture
def cfg_file(tmp_path):
    def write(text, name="run.cfg"):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return str(path)

    return write


def test_validate_writes_json(cfg_file, capsys):
    assert cli.main(["validate", cfg_file(CHAIN)]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["tool"] == "pseudoherm" and doc["passed"]


def test_validate_output_file_and_byte_identity(cfg_file, tmp_path):
    path = cfg_file(CHAIN)
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert cli.main(["validate", path, "--output", str(a)]) == 0
    assert cli.main(["validate", path, "--output", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_seed_flag_changes_the_draw(cfg_file, tmp_path):
    path = cfg_file(CHAIN)
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    cli.main(["validate", path, "--output", str(a)])
    cli.main(["validate", path, "--output", str(b), "--seed", "10"])
    assert json.loads(a.read_text())["resolved"]["w"] != json.loads(b.read_text())["resolved"]["w"]


def test_exit_code_check_failure(cfg_file):
    path = cfg_file("model=asymmetric_xxz N=3 A=1 B=2 theta=pi/2 checks=pt_symmetry")
    assert cli.main(["validate", path, "--output", os.devnull]) == 1


def test_exit_code_config_error(cfg_file, capsys):
    assert cli.main(["validate", cfg_file("model=asymmetric_xxz N=4 phi=0.1")]) == 2
    assert "unknown key 'phi'" in capsys.readouterr().err


def test_exit_code_capacity(cfg_file, capsys):
    assert cli.main(["validate", cfg_file("model=asymmetric_xxz N=13")]) == 3
    assert "capacity error" in capsys.readouterr().err


def test_exit_code_missing_file(tmp_path):
    assert cli.main(["validate", str(tmp_path / "missing.cfg")]) == 2


def test_argparse_errors_exit_2():
    with pytest.raises(SystemExit) as info:
        cli.main(["frobnicate"])
    assert info.value.code == 2
    with pytest.raises(SystemExit) as info:
        cli.main(["validate", "x.cfg", "--format", "xml"])
    assert info.value.code == 2


def test_spectrum_csv(cfg_file, capsys):
    assert cli.main(["spectrum", cfg_file("model=asymmetric_xxz N=3 random seed=2"), "--format", "csv"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "index,Re(E_H),Im(E_H),E_h,|dE|" and len(lines) == 9


def test_spectrum_json_has_no_checks(cfg_file, capsys):
    assert cli.main(["spectrum", cfg_file("model=haldane_shastry N=4 random seed=2")]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["checks"] == [] and len(doc["spectra"]) == 16


def test_evolve_formats(cfg_file, capsys):
    path = cfg_file("model=asymmetric_xxz N=3 random seed=2 t_max=1 steps=3")
    assert cli.main(["evolve", path, "--format", "csv"]) == 0
    assert capsys.readouterr().out.splitlines()[0] == "t,dirac_norm,eta_norm"
    assert cli.main(["evolve", path]) == 0
    assert json.loads(capsys.readouterr().out)["times"] == [0.0, 0.5, 1.0]


def test_evolve_rejects_non_chain_model(cfg_file):
    assert cli.main(["evolve", cfg_file("model=calogero_fock")]) == 2


def test_presets_listing(capsys):
    assert cli.main(["presets"]) == 0
    assert set(json.loads(capsys.readouterr().out)) == {"asymmetric_phase", "transverse_ising", "xx_field", "su_q2"}


def test_console_script_stdin():
    proc = subprocess.run(
        [sys.executable, "-m", "pseudoherm.cli", "validate", "-"],
        input="model=calogero_fock d=10", capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0, proc.stderr
    assert json.loads(proc.stdout)["model"] == "calogero_fock"


def test_capacity_message_names_the_dimension(cfg_file, capsys):
    assert cli.main(["validate", cfg_file("model=calogero_grid n=65")]) == 3
    assert "4290" in capsys.readouterr().err
