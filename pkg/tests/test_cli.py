import csv
import json

import numpy as np
import pytest

from lifshitz_lab.cli import PRESETS, build_config, main
from lifshitz_lab.errors import ConfigError


def run(tmp_path, *args, config=None):
    argv = list(args)
    if config is not None:
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps(config) if not isinstance(config, str) else config)
        argv += ["--config", str(cfg)]
    return main(argv)


def rows(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def test_roots_grid_and_plasma_column(tmp_path):
    out = tmp_path / "r"
    assert run(tmp_path, "roots", "--out", str(out)) == 0
    s = json.loads((out / "roots.json").read_text())
    assert s["residual_ok"] and s["vieta_ok"] and s["plasma_column_error"] < 1e-14
    om3 = [r for r in rows(out / "roots.csv") if r["branch"] == "omega3" and float(r["gamma"]) == 0]
    assert om3 and all(float(r["re"]) == 0 and float(r["im"]) == 0 for r in om3)


def test_outputs_are_byte_identical(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    assert run(tmp_path, "kappa", "--preset", "fig5", "--out", str(a)) == 0
    assert run(tmp_path, "kappa", "--preset", "fig5", "--out", str(b)) == 0
    for name in ("kappa.csv", "events.csv", "loops.csv", "kappa.json"):
        assert (a / name).read_bytes() == (b / name).read_bytes()


def test_fig4_curve5_self_intersects(tmp_path):
    out = tmp_path / "f4"
    assert run(tmp_path, "kappa", "--preset", "fig4", "--out", str(out)) == 0
    ev = rows(out / "events.csv")
    curves = {int(r["curve"]) for r in ev if r["kind"] == "self_intersection"}
    assert 5 in curves
    assert {int(r["curve"]) for r in rows(out / "kappa.csv")} == {1, 2, 3, 4, 5}


def test_fig5_loop_table(tmp_path):
    out = tmp_path / "f5"
    assert run(tmp_path, "kappa", "--preset", "fig5", "--out", str(out)) == 0
    loops = rows(out / "loops.csv")
    assert [float(r["gamma"]) for r in loops] == [0.1, 0.06, 0.03, 0.01, 0.001]
    assert all(float(r["area"]) != 0 for r in loops)


def test_fig1_probe(tmp_path):
    out = tmp_path / "f1"
    assert run(tmp_path, "roots", "--preset", "fig1", "--out", str(out)) == 0
    s = json.loads((out / "roots.json").read_text())
    assert [p["alpha"] for p in s["probes"]] == pytest.approx([0.0, 0.2 * np.pi, np.pi])
    assert s["probes"][0]["collision_gamma"] == pytest.approx(2.0, abs=0.05)


def test_preset_parameters():
    assert PRESETS["fig2"][1]["alphas"] == [0.0, 0.2, 0.7, 0.85, 0.885]
    assert PRESETS["fig3"][1]["alphas"] == [0.886, 0.9, 0.95, 0.995]
    assert PRESETS["fig4"][1]["alphas"] == [0.2, 0.4, 0.85, 0.95, 1.0]
    assert PRESETS["fig5"][1]["gammas"] == [0.1, 0.06, 0.03, 0.01, 0.001]
    assert PRESETS["fig2"][1]["gamma"] == PRESETS["fig3"][1]["gamma"] == 1.0
    assert PRESETS["fig1"][1]["probe_k"] == 0.3


def test_paths_preset_and_schema(tmp_path):
    out = tmp_path / "f2"
    assert run(tmp_path, "paths", "--preset", "fig2", "--out", str(out)) == 0
    header = (out / "paths.csv").read_text().splitlines()[0].split(",")
    from importlib.resources import files
    schema = json.loads(files("lifshitz_lab").joinpath("schema/paths_csv.json").read_text())
    assert header == schema["files"]["paths.csv"]
    assert "note" in json.loads((out / "paths.json").read_text())["meta"]


@pytest.mark.parametrize("config,args", [
    ({"bogus": 1}, ["paths"]),
    ({"alphas": [1.5]}, ["paths"]),
    ({"temperatures": []}, ["free-energy"]),
    ({"gammas": [0.1]}, ["roots"]),
    ({"tol": -1}, ["kappa"]),
    ('{"gamma": 0.1, ', ["paths"]),
])
def test_config_errors_exit_2(tmp_path, capsys, config, args):
    assert run(tmp_path, *args, "--out", str(tmp_path / "x"), config=config) == 2
    assert "error" in capsys.readouterr().err


def test_malformed_json_reports_line(tmp_path, capsys):
    run(tmp_path, "paths", config='{\n "gamma": 0.1,\n }')
    assert "line 3" in capsys.readouterr().err


def test_preset_command_mismatch():
    with pytest.raises(ConfigError):
        build_config("paths", preset="fig4")


def test_nonconvergence_exit_3(tmp_path, monkeypatch):
    from lifshitz_lab.errors import ConvergenceError
    import lifshitz_lab.cli as cli

    def boom(cfg, out):
        raise ConvergenceError("forced")
    monkeypatch.setitem(cli.COMMANDS, "defect", boom)
    assert run(tmp_path, "defect") == 3


def test_thread_cap_validated(tmp_path, monkeypatch):
    monkeypatch.setenv("LIFSHITZ_LAB_THREADS", "zero")
    assert run(tmp_path, "kappa", "--out", str(tmp_path / "k")) == 2
    monkeypatch.setenv("LIFSHITZ_LAB_THREADS", "1")
    assert run(tmp_path, "kappa", "--out", str(tmp_path / "k")) == 0


def test_free_energy_compare_plasma(tmp_path):
    out = tmp_path / "fe"
    cfg = {"temperatures": [0.3], "polarizations": ["TE"], "compare": True}
    assert run(tmp_path, "free-energy", "--out", str(out), config=cfg) == 0
    res = json.loads((out / "free_energy.json").read_text())["results"][0]
    assert res["agreement"] is True


def test_free_energy_drude_real_has_imaginary_part(tmp_path):
    out = tmp_path / "fd"
    cfg = {"model": "drude", "gamma": 0.01, "temperatures": [0.3], "polarizations": ["TE"]}
    assert run(tmp_path, "free-energy", "--representation", "real", "--out", str(out), config=cfg) == 0
    th = json.loads((out / "free_energy.json").read_text())["results"][0]["report"]["thermal_part"]
    assert th["im"] != 0


def test_defect_command(tmp_path):
    out = tmp_path / "d"
    assert run(tmp_path, "defect", "--out", str(out)) == 0
    d = json.loads((out / "defect.json").read_text())
    assert d["defect"]["relative_spread"] < 1e-8
    assert d["check"]["converged"] and d["check"]["nonzero"]
    assert len(rows(out / "defect.csv")) == 4


def test_entropy_command_plasma(tmp_path):
    out = tmp_path / "e"
    cfg = {"models": ["plasma"], "temperatures": np.geomspace(2e-2, 2e-3, 5).tolist()}
    assert run(tmp_path, "entropy", "--out", str(out), config=cfg) == 0
    fit = json.loads((out / "nernst.json").read_text())["fits"][0]
    assert abs(fit["S0"]) < 1e-6
