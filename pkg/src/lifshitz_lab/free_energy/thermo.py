"""Entropy S = -dF/dT and its T -> 0 limit.

F is the full Matsubara sum (vacuum part included), so a temperature
dependent relaxation gamma(T) is differentiated consistently.  The
truncation l_max is fixed for all evaluations around one T, which keeps the
finite differences smooth.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import curve_fit

from ..errors import DomainError, FitUnstableError, StepTooLargeError
from ..model import ModelParams, TemperatureLaw, make_permittivity
from .matsubara import matsubara_sum


def _params_at(params: ModelParams, T: float, law: TemperatureLaw | None):
    g = params.gamma if law is None else law(T)
    return params.with_(temperature=float(T), gamma=float(g))


def free_energy_T(params: ModelParams, model: str, T: float, law=None, l_max=None):
    """Matsubara free energy at temperature T, gamma from ``law`` if given."""
    p = _params_at(params, T, law)
    return matsubara_sum(p, make_permittivity(model, p), l_max)[0]


@dataclass(frozen=True)
class EntropyResult:
    value: float
    error_estimate: float
    h: float
    coarse: float
    fine: float
    l_max: int


def entropy(params: ModelParams, model: str = "plasma", T: float | None = None,
            h: float | None = None, law: TemperatureLaw | None = None) -> EntropyResult:
    """Central-difference entropy with one Richardson step.

    S_h = -(F(T+h) - F(T-h))/(2h); returns (4 S_{h/2} - S_h)/3, with
    |S_{h/2} - S_h|/3 as error estimate.

    Raises StepTooLargeError if S_h and S_{h/2} differ by more than 10%.
    """
    T = params.temperature if T is None else float(T)
    h = T / 50 if h is None else float(h)
    if not (T > h > 0):
        raise DomainError("need T > h > 0")
    lm = matsubara_sum(_params_at(params, T - h, law),
                       make_permittivity(model, _params_at(params, T - h, law)))[2]

    def F(t):
        return free_energy_T(params, model, t, law, lm)

    s_h = -(F(T + h) - F(T - h)) / (2 * h)
    s_h2 = -(F(T + h / 2) - F(T - h / 2)) / h
    if abs(s_h - s_h2) > 0.1 * max(abs(s_h2), 1e-300) and abs(s_h - s_h2) > 1e-14:
        raise StepTooLargeError(f"Richardson pair disagrees: {s_h:.6g} vs {s_h2:.6g}")
    val = (4 * s_h2 - s_h) / 3
    return EntropyResult(val, abs(s_h2 - s_h) / 3, h, s_h, s_h2, lm)


@dataclass(frozen=True)
class NernstResult:
    S0: float
    S0_error: float
    c: float
    p: float
    temperatures: tuple
    entropies: tuple
    max_rel_residual: float


def _model(T, S0, c, p):
    return S0 + c * T ** p


def nernst_limit(params: ModelParams, model: str, law: TemperatureLaw | None, T_sequence,
                 p0=None) -> NernstResult:
    """Extrapolate S(T) to T = 0 by fitting S0 + c*T**p.

    Parameters
    ----------
    T_sequence : sequence of float
        Descending, at least 5 points spanning a decade.
    """
    Ts = np.asarray(T_sequence, dtype=float)
    if Ts.size < 5 or np.any(np.diff(Ts) >= 0) or Ts[0] / Ts[-1] < 10 * (1 - 1e-12):
        raise DomainError("T_sequence must be descending with >= 5 points spanning a decade")
    S = np.array([entropy(params, model, float(t), law=law).value for t in Ts])
    guess = p0 or (S[-1], (S[0] - S[-1]) / Ts[0], 1.5)
    try:
        popt, pcov = curve_fit(_model, Ts, S, p0=guess, maxfev=20000)
    except RuntimeError as exc:
        raise FitUnstableError(str(exc)) from exc
    S0, c, p = popt
    resid = S - _model(Ts, *popt)
    scale = max(np.max(np.abs(S - S0)), 1e-300)
    rel = float(np.max(np.abs(resid)) / scale)
    if p < 0.2 or rel > 0.05:
        raise FitUnstableError(f"fit unstable: p = {p:.3g}, max relative residual {rel:.3g}")
    err = float(np.sqrt(pcov[0, 0])) if np.all(np.isfinite(pcov)) else float("inf")
    return NernstResult(float(S0), err, float(c), float(p), tuple(Ts), tuple(S), rel)


@dataclass
class DefectCheck:
    gammas: tuple
    differences: tuple
    defect: float
    f_D0: float
    relative_deviation: tuple
    converged: bool
    nonzero: bool
    alt_prefactor_defect: float
    rel_tol: float = 0.02

    def to_dict(self):
        return {"gamma": list(self.gammas), "drude_minus_plasma": list(self.differences),
                "defect": self.defect, "f_D0": self.f_D0,
                "relative_deviation": list(self.relative_deviation),
                "converged": self.converged, "nonzero": self.nonzero,
                "defect_with_16_pi_L2_prefactor": self.alt_prefactor_defect,
                "rel_tol": self.rel_tol}


def nonperturbative_defect_check(params: ModelParams, gamma_sequence, rel_tol: float = 0.02
                                 ) -> DefectCheck:
    """Tabulate Delta_T F^Drude(gamma) - Delta_T F^plasma against the defect.

    The defect T*f_D0/(16 pi^2 L^2) is computed independently by
    ``defect_f_D0``.  ``alt_prefactor_defect`` records T*f_D0/(16 pi L^2) for
    comparison; the table uses the 16 pi^2 L^2 normalisation.
    """
    from .abel_plana import defect_f_D0
    from .matsubara import matsubara_free_energy

    gs = tuple(float(g) for g in gamma_sequence)
    if len(gs) < 1 or any(b >= a for a, b in zip(gs[:-1], gs[1:])) or gs[-1] <= 0:
        raise DomainError("gamma_sequence must be positive and descending")
    p0 = params.with_(gamma=0.0)
    plasma = matsubara_free_energy(p0, "plasma").thermal_part
    diffs = tuple(matsubara_free_energy(params.with_(gamma=g), "drude").thermal_part - plasma
                  for g in gs)
    d = defect_f_D0(p0.with_(gamma=0.0))
    rel = tuple((x - d.defect) / d.defect for x in diffs)
    L = params.gap
    return DefectCheck(gs, diffs, d.defect, d.f_D0, rel, abs(rel[-1]) <= rel_tol,
                       abs(diffs[-1]) > 0.5 * abs(d.defect),
                       params.temperature * d.f_D0 / (16 * np.pi * L ** 2), rel_tol)
