import csv
import io
import json
from dataclasses import replace
from pathlib import Path

import numpy as np
import pytest

from resonance_dynamics import AtomPairConfig, CouplingMode, DickeParity, delta_e, delta_e_stationary
from resonance_dynamics import config as config_mod
from resonance_dynamics.cli import main

DATA = Path(__file__).parent / "data"
PAIR = str(DATA / "pair.json")


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def read_csv(text):
    rows = list(csv.reader(io.StringIO(text)))
    return rows[0], rows[1:]


def write_cfg(tmp_path, **changes):
    data = json.loads(Path(PAIR).read_text())
    data.update(changes)
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(data))
    return str(path)


def assert_matches_golden(text, golden):
    head, rows = read_csv(text)
    ghead, grows = read_csv((DATA / golden).read_text())
    assert head == ghead and len(rows) == len(grows)
    for row, grow in zip(rows, grows):
        for a, b in zip(row, grow):
            try:
                assert float(a) == pytest.approx(float(b), rel=1e-12, abs=1e-300, nan_ok=True)
            except ValueError:
                assert a == b


def test_trace(capsys):
    code, out, err = run(capsys, "trace", PAIR)
    assert code == 0
    assert "light cone" in err
    assert_matches_golden(out, "trace_golden.csv")
    head, rows = read_csv(out)
    cfg = AtomPairConfig((20, 0, 0), (0, 0, 0), (0, 0, 1), (0, 0, 1), 1.0)
    for row in rows:
        t = float(row[0])
        assert float(row[3]) == delta_e(t, cfg, DickeParity.SYMMETRIC, CouplingMode.FULL)
    assert "\r" not in out


def test_trace_overrides(capsys):
    code, out, _ = run(capsys, "trace", PAIR, "--parity", "antisymmetric", "--mode", "rwa",
                       "--t-start", "1", "--t-end", "3", "--n-samples", "3")
    assert code == 0
    _, rows = read_csv(out)
    assert [float(r[0]) for r in rows] == [1.0, 2.0, 3.0]
    assert float(rows[0][4]) == -delta_e_stationary(
        AtomPairConfig((20, 0, 0), (0, 0, 0), (0, 0, 1), (0, 0, 1), 1.0), DickeParity.SYMMETRIC)
    # RWA mode reports the acausal rotating part as the total
    assert float(rows[0][3]) == float(rows[0][1]) != 0.0


def test_map(capsys):
    code, out, _ = run(capsys, "map", PAIR)
    assert code == 0
    assert_matches_golden(out, "map_golden.csv")


def test_probe(capsys):
    code, out, _ = run(capsys, "probe", PAIR, "--point", "10", "15", "0", "--alpha", "2")
    assert code == 0
    rep = json.loads(out)
    assert rep["alpha"] == 2.0
    # point on the bisector: symmetric density is twice the uncorrelated one
    assert rep["density"]["total"] == pytest.approx(2 * rep["uncorrelated"]["density"], rel=1e-12)
    np.testing.assert_allclose(rep["probe_force"], 2 * np.array(rep["uncorrelated"]["probe_force"]), rtol=1e-6)


def test_probe_requires_point(capsys, tmp_path):
    data = json.loads(Path(PAIR).read_text())
    del data["probe_point"]
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(data))
    code, _, err = run(capsys, "probe", str(path))
    assert code == 2 and "probe_point" in err


def test_oracle_check(capsys):
    code, out, _ = run(capsys, "oracle-check", PAIR)
    assert code == 0
    rep = json.loads(out)
    assert rep["all_pass"] is True


def test_specfun_check(capsys):
    code, out, _ = run(capsys, "specfun-check")
    assert code == 0 and json.loads(out)["all_pass"] is True


def test_si_force(capsys):
    code, out, _ = run(capsys, "si-force")
    assert code == 0
    assert 1e-22 <= json.loads(out)["abs_force_N"] <= 1e-20


def test_determinism(capsys, tmp_path):
    outs = []
    for i in range(2):
        path = tmp_path / f"out{i}.csv"
        assert main(["map", PAIR, "-o", str(path)]) == 0
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]
    capsys.readouterr()


def test_round_trip():
    cfg = config_mod.load(PAIR)
    again = config_mod.loads(config_mod.dumps(cfg))
    assert again == cfg
    assert config_mod.dumps(again) == config_mod.dumps(cfg)


def test_si_units_converted(tmp_path):
    data = {
        "atoms": {"r_A": [1e-6, 0, 0], "r_B": [0, 0, 0], "mu_A": [0, 0, 1e-29], "mu_B": [0, 0, 1e-29], "k0": 1e7},
        "units": "gaussian_from_si",
        "time_grid": {"t_start": 0.0, "t_end": 1e-14, "n_samples": 2},
    }
    cfg = config_mod.parse_config(data)
    assert cfg.atoms.distance == pytest.approx(1e-4)
    assert cfg.atoms.k0 == pytest.approx(1e5)
    assert cfg.time_grid.t_end == pytest.approx(2.99792458e-4)
    # serialized values are already converted, so they re-load as natural units
    assert config_mod.loads(config_mod.dumps(cfg)) == replace(cfg, units="natural")


@pytest.mark.parametrize("changes, needle", [
    ({"parity": "dressed"}, "parity"),
    ({"time_grid": {"t_start": -1.0, "t_end": 2.0, "n_samples": 5}}, "t_start"),
    ({"time_grid": {"t_start": 0.0, "t_end": 2.0, "n_samples": 1}}, "n_samples"),
    ({"atoms": {"r_A": [0, 0], "r_B": [0, 0, 0], "mu_A": [0, 0, 1], "mu_B": [0, 0, 1], "k0": 1}}, "r_A"),
    ({"quadrature": {"k_max": 10.0}}, "k_max"),
    ({"colour": "blue"}, "unknown"),
])
def test_config_errors(capsys, tmp_path, changes, needle):
    code, _, err = run(capsys, "trace", write_cfg(tmp_path, **changes))
    assert code == 2
    assert needle in err


def test_invalid_json_reports_position(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"atoms": [1, 2,\n')
    code, _, err = run(capsys, "trace", str(path))
    assert code == 2 and "line" in err


def test_numerical_error_exit(capsys, tmp_path):
    # atoms coincide
    atoms = {"r_A": [0, 0, 0], "r_B": [0, 0, 0], "mu_A": [0, 0, 1], "mu_B": [0, 0, 1], "k0": 1}
    code, _, _ = run(capsys, "trace", write_cfg(tmp_path, atoms=atoms))
    assert code == 2
    # probe sitting on a light cone: t = 30 and |p - r_B| = 30
    code, _, err = run(capsys, "probe", PAIR, "--point", "0", "30", "0")
    assert code == 3 and "numerical" in err


def test_quadrature_env_default(capsys, tmp_path, monkeypatch):
    q = tmp_path / "quad.json"
    q.write_text(json.dumps({"k_max": 10.0}))
    monkeypatch.setenv(config_mod.QUADRATURE_ENV_VAR, str(q))
    code, _, err = run(capsys, "oracle-check", PAIR)
    assert code == 2 and "k_max" in err
    q.write_text(json.dumps({"k_max": 800.0}))
    assert config_mod.load(PAIR).quadrature.k_max == 800.0


def test_lifetime_warning(capsys, tmp_path):
    code, _, err = run(capsys, "trace", write_cfg(tmp_path, lifetime_hint=100.0))
    assert code == 0 and "lifetime" in err
