import json
import subprocess
import sys

import numpy as np
import pytest

from dressedlines.cli import main

from conftest import gaussian_bands


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def strict_json(text):
    def reject(c):
        raise ValueError(f"non-finite constant {c}")

    return json.loads(text, parse_constant=reject)


@pytest.fixture
def data_files(tmp_path):
    lam = np.arange(340, 480, 0.1)
    w0 = 1e7 / 382
    emi = gaussian_bands(lam, [(w0 - n * 1450, 200, 1.0 / n) for n in (1, 2, 3)])
    np.savetxt(tmp_path / "emission.csv", np.column_stack([lam, emi]), delimiter=",", header="wavelength_nm,intensity")
    neu = gaussian_bands(lam, [(1e7 / 398, 250, 1.0)])
    ox = gaussian_bands(lam, [(1e7 / 376, 250, 0.6), (1e7 / 440, 250, 0.5)])
    np.savetxt(tmp_path / "neutral.csv", np.column_stack([lam, neu]), delimiter=",")
    np.savetxt(tmp_path / "oxidized.csv", np.column_stack([lam, ox]), delimiter=",")
    c = np.array([0.0125, 0.025, 0.05, 0.1])
    np.savetxt(tmp_path / "scaling.csv", np.column_stack([c, 3e4 * c**1.5 + 100]), delimiter=",")
    (tmp_path / "empty.csv").write_text("")
    (tmp_path / "bad.csv").write_text("380,1\n390,x\n")
    return tmp_path


COMMANDS = [
    ["convert", "--value", "382", "--from", "nm", "--to", "cm-1"],
    ["geometry", "--d-nm", "0.272", "--r-nm", "0.069"],
    ["purcell", "--lambda-nm", "380", "--q", "7", "--volume-nm3", "0.0027"],
    ["jc-ladder", "--omega-mode", "26196", "--omega-atom", "26196", "--g", "686", "--n-max", "4"],
    ["doublet", "--omega0", "26196", "--omega", "1372"],
    ["collective", "--omega0", "26196", "--coupling", "1372"],
    ["collective", "--omega0", "26196", "--coupling", "686", "--model", "tavis-cummings", "--n-max", "3"],
    ["eta", "--splitting", "9590", "--omega0", "26196"],
    ["mollow", "--omega0", "382nm", "--omega-prime", "1450", "--orders", "3"],
    ["mollow-spectrum", "--rabi", "10", "--gamma", "1", "--grid-points", "401"],
    ["simulate", "mollow", "--rabi", "10", "--gamma", "1", "--grid", "401"],
    ["simulate", "g2", "--rabi", "2", "--gamma", "1", "--grid", "101"],
    ["distance", "--c-mm", "0.1", "--calibration", "0.93"],
]


@pytest.mark.parametrize("argv", COMMANDS, ids=lambda a: " ".join(a[:2]))
def test_json_output_is_strict_and_stable(capsys, argv):
    code, out, _ = run(capsys, *argv, "--json")
    assert code == 0
    rec = strict_json(out)
    assert isinstance(rec, dict) and rec
    code2, out2, _ = run(capsys, *argv, "--json")
    assert code2 == 0 and out2 == out


@pytest.mark.parametrize("argv", COMMANDS, ids=lambda a: " ".join(a[:2]))
def test_table_output(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 0 and out.strip() and not err
    assert out == run(capsys, *argv)[1]


def test_file_commands(capsys, data_files):
    d = data_files
    code, out, _ = run(capsys, "analyze", "--input", str(d / "emission.csv"), "--model", "mollow", "--omega0", "382nm", "--json")
    assert code == 0
    rec = strict_json(out)
    assert rec["coupling_cm1"] == pytest.approx(1450, abs=15)
    assert sorted(m["order"] for m in rec["matches"]) == [1, 2, 3]

    code, out, _ = run(capsys, "delta-a", "--oxidized", str(d / "oxidized.csv"), "--neutral", str(d / "neutral.csv"),
                       "--dark", "398nm", "--json", "--output", str(d / "da.csv"))
    assert code == 0
    assert strict_json(out)["coupling_cm1"] == pytest.approx(3869, abs=5)
    da = np.loadtxt(d / "da.csv", delimiter=",", comments="#")
    assert da.shape[1] == 2

    code, out, _ = run(capsys, "fit-scaling", "--input", str(d / "scaling.csv"), "--law", "csqrtc", "--json")
    assert code == 0
    assert strict_json(out)["r_squared"] == pytest.approx(1.0, abs=1e-12)


def test_spectrum_output_file(capsys, tmp_path):
    code, _, _ = run(capsys, "simulate", "mollow", "--rabi", "10", "--gamma", "1", "--grid", "201",
                     "--output", str(tmp_path / "s.csv"))
    assert code == 0
    assert np.loadtxt(tmp_path / "s.csv", delimiter=",", comments="#").shape == (201, 2)


def test_convert_values(capsys):
    assert run(capsys, "convert", "--value", "382", "--from", "nm", "--to", "cm-1")[1].strip() == "26178"
    assert run(capsys, "convert", "--value", "382", "--from", "nm", "--to", "cm-1", "--precision", "7")[1].strip() == "26178.01"
    assert run(capsys, "convert", "--value", "382nm", "--to", "eV", "--json")[1]
    rec = strict_json(run(capsys, "convert", "--value", "26178.01", "--to", "nm", "--json")[1])
    assert rec["value"] == pytest.approx(382, abs=1e-3)


@pytest.mark.parametrize(
    "argv",
    [
        ["convert", "--value", "-5", "--from", "nm", "--to", "cm-1"],
        ["geometry", "--d-nm", "0.1", "--r-nm", "0.069"],
        ["eta", "--splitting", "100", "--omega0", "0"],
        ["simulate", "mollow", "--rabi", "1", "--gamma", "0"],
    ],
)
def test_domain_errors_exit_1(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 1
    assert err.startswith("error:")
    assert out == ""


def test_bad_files_exit_1(capsys, data_files):
    for name in ("empty.csv", "bad.csv", "missing.csv"):
        code, _, err = run(capsys, "analyze", "--input", str(data_files / name), "--model", "mollow", "--omega0", "26178")
        assert code == 1, name
        assert err.startswith("error:")
    assert "line 2" in run(capsys, "analyze", "--input", str(data_files / "bad.csv"), "--model", "mollow",
                           "--omega0", "26178")[2]


def test_usage_errors_exit_2():
    for argv in (["frobnicate"], ["convert", "--value", "1"], ["analyze", "--input", "x", "--model", "dicke", "--omega0", "1"]):
        with pytest.raises(SystemExit) as e:
            main(argv)
        assert e.value.code == 2


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "dressedlines", "eta", "--splitting", "9590", "--omega0", "26196", "--json"],
                       capture_output=True, text=True, check=True)
    assert strict_json(r.stdout)["regime"] == "ultrastrong"
