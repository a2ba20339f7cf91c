"""Command-line front end.

Every subcommand reads an optional JSON config (``--config``), overlays a
figure preset (``--preset``) and writes CSV/JSON files into ``--out``.
Exit codes: 0 success, 2 configuration or validation error, 3 numerical
non-convergence.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .errors import ConfigError, DomainError, LifshitzLabError
from .model import ModelParams, TemperatureLaw
from .reports import write_csv, write_json

HALF_PI = np.pi / 2

# ----------------------------------------------------------------------------
# configuration
# ----------------------------------------------------------------------------

DEFAULTS = {
    "roots": {
        "omega_p": 1.0,
        "gammas": np.linspace(0.0, 1.0, 20).tolist(),
        "ks": np.linspace(0.0, 2.0, 20).tolist(),
        "alphas": None,        # radians; switches to the gamma*exp(i*alpha) probe
        "probe_k": 0.3,
        "tol": 1e-12,          # residual and Vieta threshold
    },
    "paths": {
        "omega_p": 1.0,
        "gamma": 0.1,
        "k_par": 0.0,
        "alphas": [0.0, 0.2, 0.7, 0.85, 0.885],   # units of pi/2
        "xi_max": None,
        "n_xi": 512,
        "critical_alpha": False,
        "tol": 1e-5,           # bracket width of the critical alpha (units of pi/2)
    },
    "kappa": {
        "omega_p": 1.0,
        "gammas": [0.1],
        "k_par": 1.0,
        "alphas": [1.0],       # units of pi/2
        "tol": 0.002,          # relative sample spacing of the refined path
    },
    "free-energy": {
        "model": "plasma",
        "omega_p": 1.0,
        "gamma": 0.0,
        "temperatures": [0.5],
        "gaps": [1.0],
        "representation": "matsubara",
        "polarizations": ["TE", "TM"],
        "compare": False,
        "tol": 1e-4,           # agreement threshold for ``compare``
    },
    "defect": {
        "omega_p": 1.0,
        "gap": 1.0,
        "temperature": 0.3,
        "probe_gammas": [1e-1, 1e-2, 1e-3],
        "check_gammas": [1e-1, 1e-2, 1e-3, 1e-4],
        "tol": 0.02,
    },
    "entropy": {
        "omega_p": 1.0,
        "gap": 1.0,
        "models": ["plasma", "drude"],
        "temperatures": np.geomspace(1e-3, 1e-4, 6).tolist(),
        "gamma1s": [1.0, 10.0],
        "alpha_exp": 2.0,
        "tol": 0.02,           # agreement threshold between the Drude S0 values
    },
    "figures": {},
}

# Parameter sets of the figure presets.
PRESETS = {
    "fig1": ("roots", {"omega_p": 1.0, "alphas": [0.0, 0.2 * np.pi, np.pi], "probe_k": 0.3,
                       "gammas": np.linspace(0.005, 3.0, 600).tolist()}),
    "fig2": ("paths", {"omega_p": 1.0, "gamma": 1.0, "alphas": [0.0, 0.2, 0.7, 0.85, 0.885]}),
    "fig3": ("paths", {"omega_p": 1.0, "gamma": 1.0, "alphas": [0.886, 0.9, 0.95, 0.995]}),
    "fig4": ("kappa", {"omega_p": 1.0, "gammas": [0.1], "k_par": 1.0,
                       "alphas": [0.2, 0.4, 0.85, 0.95, 1.0]}),
    "fig5": ("kappa", {"omega_p": 1.0, "gammas": [0.1, 0.06, 0.03, 0.01, 0.001], "k_par": 1.0,
                       "alphas": [1.0]}),
}

PRESET_NOTES = {
    "fig2": "gamma = 1; the start value omega1 = 0.99 - 0.05i belongs to gamma = 0.1",
    "fig3": "gamma = 1; the start value omega1 = 0.99 - 0.05i belongs to gamma = 0.1",
}

GRID_KEYS = {"roots": {"gammas", "ks"}}         # grids: need >= 2 points
LIST_KEYS = {"alphas", "gammas", "temperatures", "gaps", "polarizations", "probe_gammas",
             "check_gammas", "models", "gamma1s"}  # evaluation lists: need >= 1 point


@dataclass
class RunConfig:
    command: str
    values: dict = field(default_factory=dict)
    preset: str | None = None

    def __getitem__(self, key):
        return self.values[key]

    def params(self, **extra) -> ModelParams:
        v = self.values
        kw = {"omega_p": v.get("omega_p", 1.0), "gamma": v.get("gamma", 0.0),
              "gap": v.get("gap", 1.0), "temperature": v.get("temperature", 0.0)}
        kw.update(extra)
        try:
            return ModelParams(**kw)
        except (ValueError, TypeError) as exc:
            raise ConfigError(f"invalid model parameters: {exc}") from exc


def load_config_file(path) -> dict:
    text = Path(path).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: top level must be a JSON object")
    return data


def build_config(command: str, file_values: dict | None = None, preset: str | None = None,
                 tol: float | None = None, representation: str | None = None) -> RunConfig:
    """Defaults, then preset, then config file, then explicit flags."""
    if command not in DEFAULTS:
        raise ConfigError(f"unknown command {command!r}")
    values = {k: (list(v) if isinstance(v, list) else v) for k, v in DEFAULTS[command].items()}
    if preset is not None:
        if preset not in PRESETS:
            raise ConfigError(f"unknown preset {preset!r}")
        pc, pv = PRESETS[preset]
        if pc != command:
            raise ConfigError(f"preset {preset} belongs to the '{pc}' command")
        values.update(pv)
    for key, val in (file_values or {}).items():
        if key not in values:
            raise ConfigError(f"field '{key}': unknown key for '{command}' "
                              f"(allowed: {', '.join(sorted(values))})")
        values[key] = val
    if tol is not None:
        values["tol"] = tol
    if representation is not None:
        if command != "free-energy":
            raise ConfigError("--representation applies to free-energy only")
        values["representation"] = representation
    cfg = RunConfig(command, values, preset)
    validate(cfg)
    return cfg


def _num(key, v, positive=False):
    if isinstance(v, bool) or not isinstance(v, (int, float)) or not np.isfinite(v):
        raise ConfigError(f"field '{key}': expected a finite number, got {v!r}")
    if positive and not v > 0:
        raise ConfigError(f"field '{key}': must be positive")
    return float(v)


def validate(cfg: RunConfig):
    v = cfg.values
    for key, val in v.items():
        if key == "tol":
            _num(key, val, positive=True)
        elif key in LIST_KEYS or key in GRID_KEYS.get(cfg.command, ()):
            if val is None:
                continue
            if not isinstance(val, list):
                raise ConfigError(f"field '{key}': expected a list")
            need = 2 if key in GRID_KEYS.get(cfg.command, ()) else 1
            if len(val) < need:
                raise ConfigError(f"field '{key}': needs at least {need} point(s), got {len(val)}")
            if key not in ("polarizations", "models"):
                for x in val:
                    _num(key, x)
        elif key in ("omega_p", "gap", "temperature", "k_par", "probe_k", "gamma",
                     "alpha_exp", "xi_max") and val is not None:
            _num(key, val, positive=key in ("omega_p", "gap", "alpha_exp", "xi_max"))
        elif key == "n_xi":
            if not isinstance(val, int) or val < 2:
                raise ConfigError("field 'n_xi': must be an integer >= 2")
    if cfg.command in ("paths", "kappa"):
        for a in v["alphas"]:
            if not 0 <= a <= 1:
                raise ConfigError(f"field 'alphas': {a} outside [0, 1] (units of pi/2)")
    if cfg.command == "free-energy":
        if v["representation"] not in ("matsubara", "real", "abel-plana"):
            raise ConfigError("field 'representation': matsubara, real or abel-plana")
        if v["model"] not in ("plasma", "drude"):
            raise ConfigError("field 'model': plasma or drude")
        for p in v["polarizations"]:
            if p not in ("TE", "TM"):
                raise ConfigError(f"field 'polarizations': unknown polarization {p!r}")
        for t in v["temperatures"]:
            _num("temperatures", t, positive=True)
        for g in v["gaps"]:
            _num("gaps", g, positive=True)
    if cfg.command == "entropy":
        for m in v["models"]:
            if m not in ("plasma", "drude"):
                raise ConfigError(f"field 'models': unknown model {m!r}")


def thread_cap() -> int | None:
    """Value of LIFSHITZ_LAB_THREADS (validated); None when unset."""
    raw = os.environ.get("LIFSHITZ_LAB_THREADS")
    if raw is None or raw == "":
        return None
    try:
        n = int(raw)
    except ValueError as exc:
        raise ConfigError(f"LIFSHITZ_LAB_THREADS must be a positive integer, got {raw!r}") from exc
    if n < 1:
        raise ConfigError("LIFSHITZ_LAB_THREADS must be a positive integer")
    return n


def _meta(cfg: RunConfig):
    m = {"command": cfg.command, "preset": cfg.preset, "config": cfg.values,
         "version": __version__}
    if cfg.preset in PRESET_NOTES:
        m["note"] = PRESET_NOTES[cfg.preset]
    return m


# ----------------------------------------------------------------------------
# commands
# ----------------------------------------------------------------------------

def cmd_roots(cfg: RunConfig, out: Path) -> dict:
    from .dispersion import (cubic_residual, plasma_roots, probe_convergence,
                             solve_dispersion_grid)

    v = cfg.values
    W = float(v["omega_p"])
    params = cfg.params()
    if v["alphas"] is not None:
        gam = np.asarray(v["gammas"], dtype=float)
        if np.any(gam <= 0) or np.any(np.diff(gam) <= 0):
            raise ConfigError("field 'gammas': the gamma*exp(i*alpha) probe needs ascending positive values")
        rows, summary = [], []
        for a in v["alphas"]:
            pr = probe_convergence(params, float(v["probe_k"]), float(a), gam)
            for i, g in enumerate(pr.gamma):
                for j, lab in enumerate(("omega1", "omega2", "omega3")):
                    z = pr.roots[i, j]
                    rows.append((float(a), float(g), float(z.real), float(z.imag), lab))
            summary.append({"alpha": float(a), "collision_gamma": pr.collision_gamma,
                            "min_separation": float(np.min(pr.min_separation))})
        write_csv(out / "probe.csv", ["alpha", "gamma", "re", "im", "branch"], rows)
        res = {"meta": _meta(cfg), "probes": summary}
        write_json(out / "roots.json", res)
        return res
    gammas = np.asarray(v["gammas"], dtype=float)
    ks = np.asarray(v["ks"], dtype=float)
    rows = []
    max_res = vieta_sum = vieta_prod = plasma_err = 0.0
    for g in gammas:
        roots = solve_dispersion_grid(params, ks, float(g))
        K = ks * ks
        res = cubic_residual(roots, K[:, None], float(g), W)
        max_res = max(max_res, float(np.max(res)))
        vieta_sum = max(vieta_sum, float(np.max(np.abs(roots.sum(axis=1) + 1j * g))))
        vieta_prod = max(vieta_prod, float(np.max(np.abs(roots.prod(axis=1) - 1j * g * K))))
        if g == 0:
            pr = plasma_roots(K, W)
            plasma_err = max(plasma_err, float(np.max(np.abs(roots - pr))))
        for i, k in enumerate(ks):
            for j, lab in enumerate(("omega1", "omega2", "omega3")):
                z = roots[i, j]
                rows.append((float(g), float(k), lab, float(z.real), float(z.imag), float(res[i, j])))
    write_csv(out / "roots.csv", ["gamma", "k", "branch", "re", "im", "residual"], rows)
    tol = float(v["tol"])
    summary = {"meta": _meta(cfg), "max_residual": max_res, "vieta_sum_error": vieta_sum,
               "vieta_product_error": vieta_prod, "plasma_column_error": plasma_err,
               "residual_ok": max_res <= tol, "vieta_ok": max(vieta_sum, vieta_prod) <= 1e-10}
    write_json(out / "roots.json", summary)
    return summary


def cmd_paths(cfg: RunConfig, out: Path) -> dict:
    from .spectral_paths import (_default_xi_grid, endpoint_pairing_changed,
                                 find_critical_alpha, trace_omega_paths)

    v = cfg.values
    params = cfg.params()
    k_par = float(v["k_par"])
    xi_max = v["xi_max"]
    if xi_max is None:
        xi_max = 6.0 * params.omega_p + 2.0 * abs(params.gamma) + k_par
    grid = _default_xi_grid(float(xi_max), n=int(v["n_xi"]))
    rows, curves = [], []
    for c, a in enumerate(v["alphas"], start=1):
        alpha = float(a) * HALF_PI
        paths = trace_omega_paths(params, k_par, alpha, xi_grid=grid)
        for lab, pth in paths.items():
            for x, z in zip(pth.parameter_samples, pth.points):
                rows.append((c, float(x), float(z.real), float(z.imag), lab, float(a), params.gamma))
        curves.append({"curve": c, "alpha": float(a),
                       "pairing_changed": endpoint_pairing_changed(params, alpha, k_par, float(xi_max)),
                       "endpoints": {lab: [complex(p.points[0]), complex(p.points[-1])]
                                     for lab, p in paths.items()}})
    write_csv(out / "paths.csv", ["curve", "xi", "re", "im", "branch", "alpha", "gamma"], rows)
    res = {"meta": _meta(cfg), "curves": curves}
    if v["critical_alpha"]:
        a_star, ev = find_critical_alpha(params, k_par, tol=float(v["tol"]))
        res["critical_alpha"] = a_star / HALF_PI
        res["collision_point"] = ev.location
    write_json(out / "paths.json", res)
    return res


def cmd_kappa(cfg: RunConfig, out: Path) -> dict:
    from .errors import DegenerateLoopError
    from .spectral_paths import detect_cusps, detect_self_intersection, loop_metrics, trace_kappa_path

    v = cfg.values
    k_par = float(v["k_par"])
    rows, events, loops, curves = [], [], [], []
    c = 0
    for g in v["gammas"]:
        params = cfg.params(gamma=float(g))
        for a in v["alphas"]:
            c += 1
            pth = trace_kappa_path(params, k_par, float(a) * HALF_PI, rel_spacing=float(v["tol"]))
            for x, z in zip(pth.parameter_samples, pth.points):
                rows.append((c, float(x), float(z.real), float(z.imag), "kappa", float(a), float(g)))
            ev = detect_self_intersection(pth) if len(pth) >= 4 else None
            info = {"curve": c, "alpha": float(a), "gamma": float(g), "self_intersection": ev is not None}
            if ev is not None:
                try:
                    m = loop_metrics(pth, ev)
                    area, per = m.area, m.perimeter
                except DegenerateLoopError:
                    area = per = None
                events.append((c, ev.kind.value, float(a), float(g), ev.location.real,
                               ev.location.imag, ev.parameter_pair[0], ev.parameter_pair[1], area, per))
                info.update(location=ev.location, area=area, perimeter=per)
                if float(a) == 1.0:
                    loops.append((float(g), area, per))
            elif float(a) == 1.0:
                loops.append((float(g), None, None))
            for cu in detect_cusps(pth):
                events.append((c, cu.kind.value, float(a), float(g), cu.location.real,
                               cu.location.imag, cu.parameter_value, None, None, None))
            curves.append(info)
    write_csv(out / "kappa.csv", ["curve", "xi", "re", "im", "branch", "alpha", "gamma"], rows)
    write_csv(out / "events.csv", ["curve", "kind", "alpha", "gamma", "re", "im", "xi_a", "xi_b",
                                   "area", "perimeter"], events)
    if loops:
        write_csv(out / "loops.csv", ["gamma", "area", "perimeter"], loops)
    res = {"meta": _meta(cfg), "curves": curves,
           "loops": [{"gamma": g, "area": a, "perimeter": p} for g, a, p in loops]}
    write_json(out / "kappa.json", res)
    return res


def _free_energy_one(params, model, representation, pols):
    from .free_energy.abel_plana import abel_plana_thermal_part
    from .free_energy.matsubara import matsubara_free_energy
    from .free_energy.realfreq import real_frequency_thermal_part

    if representation == "matsubara":
        return matsubara_free_energy(params, model, pols=pols)
    if representation == "real":
        return real_frequency_thermal_part(params, model, pols=pols)
    if model != "drude" or tuple(pols) != ("TE",):
        raise ConfigError("abel-plana representation: Drude model, polarizations ['TE']")
    return abel_plana_thermal_part(params)


def cmd_free_energy(cfg: RunConfig, out: Path) -> dict:
    v = cfg.values
    pols = tuple(v["polarizations"])
    reports = []
    for L in v["gaps"]:
        for T in v["temperatures"]:
            params = cfg.params(gap=float(L), temperature=float(T))
            rep = _free_energy_one(params, v["model"], v["representation"], pols)
            entry = {"gap": float(L), "temperature": float(T), "report": rep.to_dict()}
            if v["compare"]:
                other = "real" if v["representation"] == "matsubara" else "matsubara"
                rep2 = _free_energy_one(params, v["model"], other, pols)
                a, b = complex(rep.thermal_part), complex(rep2.thermal_part)
                rel = abs(a - b) / max(abs(b), 1e-300)
                entry.update(compared_with=other, other_thermal_part=b, relative_difference=rel,
                             agreement=bool(rel <= float(v["tol"])))
            reports.append(entry)
    res = {"meta": _meta(cfg), "results": reports}
    write_json(out / "free_energy.json", res)
    return res


def cmd_defect(cfg: RunConfig, out: Path) -> dict:
    from .free_energy.abel_plana import defect_f_D0
    from .free_energy.thermo import nonperturbative_defect_check

    v = cfg.values
    params = cfg.params()
    d = defect_f_D0(params, gammas=tuple(v["probe_gammas"]))
    chk = nonperturbative_defect_check(params, v["check_gammas"], rel_tol=float(v["tol"]))
    rows = [(g, x, chk.defect, r) for g, x, r in zip(chk.gammas, chk.differences, chk.relative_deviation)]
    write_csv(out / "defect.csv", ["gamma", "drude_minus_plasma", "defect", "relative_deviation"], rows)
    res = {"meta": _meta(cfg), "defect": d.to_dict(), "check": chk.to_dict()}
    write_json(out / "defect.json", res)
    return res


def cmd_entropy(cfg: RunConfig, out: Path) -> dict:
    from .free_energy.abel_plana import defect_closed_form
    from .free_energy.thermo import nernst_limit

    v = cfg.values
    params = cfg.params()
    Ts = [float(t) for t in v["temperatures"]]
    rows, fits = [], []
    for model in v["models"]:
        laws = [None] if model == "plasma" else [TemperatureLaw(float(g), float(v["alpha_exp"]))
                                                 for g in v["gamma1s"]]
        for law in laws:
            r = nernst_limit(params, model, law, Ts)
            g1 = None if law is None else law.gamma1
            for T, S in zip(r.temperatures, r.entropies):
                rows.append((model, g1, float(v["alpha_exp"]) if law else None, T, S, None))
            fits.append({"model": model, "gamma1": g1, "S0": r.S0, "S0_error": r.S0_error,
                         "c": r.c, "p": r.p, "max_rel_residual": r.max_rel_residual})
    write_csv(out / "entropy.csv", ["model", "gamma1", "alpha_exp", "T", "S", "error_estimate"], rows)
    expected = -defect_closed_form(params) / (16 * np.pi ** 2 * params.gap ** 2)
    drude = [f["S0"] for f in fits if f["model"] == "drude"]
    res = {"meta": _meta(cfg), "fits": fits, "expected_drude_S0": expected}
    if len(drude) >= 2:
        spread = (max(drude) - min(drude)) / abs(np.mean(drude))
        res["drude_S0_spread"] = spread
        res["drude_S0_agree"] = bool(abs(spread) <= float(v["tol"]))
    write_json(out / "nernst.json", res)
    return res


def cmd_figures(cfg: RunConfig, out: Path) -> dict:
    done = {}
    for name, (command, _) in PRESETS.items():
        sub = build_config(command, preset=name)
        done[name] = COMMANDS[command](sub, out / name)
    write_json(out / "figures.json", {"presets": sorted(done)})
    return done


COMMANDS = {
    "roots": cmd_roots,
    "paths": cmd_paths,
    "kappa": cmd_kappa,
    "free-energy": cmd_free_energy,
    "defect": cmd_defect,
    "entropy": cmd_entropy,
    "figures": cmd_figures,
}


# ----------------------------------------------------------------------------
# entry point
# ----------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="lifshitz-lab",
                                 description="Casimir free energy of plasma and Drude mirrors.")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)
    helps = {
        "roots": "roots of the dispersion cubic on a (gamma, k) grid or along gamma*exp(i*alpha)",
        "paths": "omega_a(xi*exp(i*alpha)) curves for a list of rotation angles",
        "kappa": "kappa paths, self-intersections and loop areas",
        "free-energy": "free energy in the Matsubara, real-frequency or Abel-Plana form",
        "defect": "gamma -> 0 defect of the Drude free energy",
        "entropy": "entropy sequences and their T -> 0 extrapolation",
        "figures": "all figure presets",
    }
    for name, h in helps.items():
        p = sub.add_parser(name, help=h, description=h)
        p.add_argument("--config", help="JSON file with parameter overrides")
        p.add_argument("--out", default="lifshitz_out", help="output directory")
        if name != "figures":
            p.add_argument("--preset", choices=sorted(k for k, (c, _) in PRESETS.items() if c == name)
                           or None, help="figure preset")
            p.add_argument("--tol", type=float, help="command tolerance (see README)")
        if name == "free-energy":
            p.add_argument("--representation", choices=["matsubara", "real", "abel-plana"])
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        thread_cap()
        file_values = load_config_file(args.config) if args.config else None
        cfg = build_config(args.command, file_values, getattr(args, "preset", None),
                           getattr(args, "tol", None), getattr(args, "representation", None))
        out = Path(args.out)
        COMMANDS[args.command](cfg, out)
    except (ConfigError, DomainError, OSError) as exc:
        print(f"lifshitz-lab: error: {exc}", file=sys.stderr)
        return 2
    except LifshitzLabError as exc:
        print(f"lifshitz-lab: numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    print(f"lifshitz-lab: wrote {args.command} output to {out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
