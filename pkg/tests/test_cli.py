import io
import json
import subprocess
import sys

import numpy as np
import pytest

from heisodiam import cli, sets


def run(argv, stdin="", monkeypatch=None, capsys=None):
    monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = cli.run(argv)
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def call(monkeypatch, capsys):
    return lambda argv, stdin="": run(argv, stdin, monkeypatch, capsys)


def test_dist_vertical(call):
    code, out, _ = call(["dist", "0", "0", "0", "--", "0", "0", "1"])
    assert code == 0 and out.strip() == "1.77245385"


def test_dist_bisection_and_errors(call):
    code, out, _ = call(["dist", "0", "0", "0", "--", "0.5", "0", "0.2", "--method", "bisection"])
    assert code == 0 and out.strip() == "0.600526516"
    code, _, err = call(["dist", "0", "0", "0", "0", "0", "1"])
    assert code != 0 and err
    code, _, err = call(["dist", "0", "0", "0", "--", "0", "1"])
    assert code != 0 and err


def test_unknown_flag_and_subcommand(call):
    assert call(["volume", "--bogus"])[0] != 0
    assert call(["frobnicate"])[0] != 0


def test_malformed_set_file(call):
    code, _, err = call(["volume"], stdin="a,b\n1,2\n")
    assert code != 0 and "error" in err
    code, _, err = call(["volume"], stdin="{not json")
    assert code != 0


def test_make_a_pipeline(call):
    code, csv, _ = call(["make-a", "--lambda", "2"])
    assert code == 0
    prof = sets.ProfileSet.from_csv(csv)
    assert prof.R == 1.0
    code, out, _ = call(["cross-section", "--samples", "11"], stdin=csv)
    rows = np.array([[float(v) for v in ln.split(",")] for ln in out.strip().splitlines()[1:]])
    assert out.startswith("r,upper,lower")
    np.testing.assert_allclose(rows[:, 0], np.linspace(0, 1, 11))
    np.testing.assert_allclose(rows[:, 1], -rows[:, 2])
    assert rows[0, 1] == pytest.approx(4 / (2 * np.pi), rel=1e-8)
    code, vol, _ = call(["volume"], stdin=csv)
    assert float(vol) == pytest.approx(0.217638190 * 16, rel=1e-4)


def test_make_ball_json_volume(call, tmp_path):
    path = tmp_path / "ball.json"
    assert call(["make-ball", "--format", "json", "--zcount", "1024", "-o", str(path)])[0] == 0
    code, vol, _ = call(["volume", str(path)])
    assert float(vol) == pytest.approx(3.30350305, rel=1e-6)


def test_perturb_and_rejection(call):
    code, js, _ = call(["perturb", "--rings", "16", "--angles", "24"])
    assert code == 0 and json.loads(js)["n"] == 1
    code, out, err = call(["perturb", "--lipschitz", "1"])
    assert code != 0 and out == "" and "Lipschitz" in err


def test_symmetrize_and_tco_preserve_volume(call, tmp_path):
    rng = np.random.default_rng(0)
    from heisodiam import analysis

    s = analysis.random_sigma_invariant_set(rng)
    path = tmp_path / "s.json"
    path.write_text(s.to_json())
    _, sym, _ = call(["symmetrize", str(path)])
    _, v1, _ = call(["volume"], stdin=sym)
    assert float(v1) == pytest.approx(sets.volume(s), rel=1e-8)
    _, hull, _ = call(["tco", str(path)])
    assert sets.SectionSet.from_json(hull).lengths.max() >= s.lengths.max()


def test_diameter_report_json(call, tmp_path):
    rng = np.random.default_rng(1)
    from heisodiam import analysis

    s = analysis.random_sigma_invariant_set(rng)
    path = tmp_path / "s.json"
    path.write_text(s.to_json())
    code, out, _ = call(["diameter", str(path), "--threads", "2"])
    rep = json.loads(out)
    assert code == 0 and rep["value"] == pytest.approx(sets.diameter(s).value, rel=1e-8)


def test_profile_table(call):
    code, out, _ = call(["profile", "--m", "4"])
    lines = out.strip().splitlines()
    assert lines[0] == "r,h,h_prime,h_second" and len(lines) == 5
    assert lines[1].split(",")[1] == "0.318309886"


def test_output_is_deterministic(call):
    a = call(["make-a", "--m", "32"])[1]
    b = call(["make-a", "--m", "32"])[1]
    assert a == b


def test_console_entry_point():
    res = subprocess.run([sys.executable, "-m", "heisodiam", "dist", "0", "0", "0", "--", "0", "0", "1"],
                         capture_output=True, text=True, check=True)
    assert res.stdout.strip() == "1.77245385"
