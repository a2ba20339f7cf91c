"""Abel-Plana form of the TE thermal part and the gamma -> 0 defect.

Applying the Abel-Plana formula to the Matsubara sum of phi(xi) gives

    Delta_T F = (1/4pi^2) int_0^inf dx n(x) i[phi(ix) - phi(-ix)]
              = (1/4pi^2) int_0^inf dx n(x) (-2 Im phi(ix)),

with n(x) = 1/(exp(x/T) - 1), since phi(-ix) = conj(phi(ix)).  The
continuation of

    phi(xi) = int_xi^inf eta d eta ln(1 - r(xi, eta)^2 exp(-2 eta L))

to xi = ix splits at k_par = x: the segment eta = ip, 0 < p < x, gives
phi_1(ix) = int_0^x p dp ln(1 - r(ix, ip)^2 exp(-2ipL)), and the real-eta
part gives phi_2(ix) = int_0^inf eta d eta ln(1 - r(ix, eta)^2 exp(-2 eta L)).
Both use w(ix) = Omega^2 ix/(ix + gamma) in r_TE = (eta - s)/(eta + s),
s = sqrt(w + eta^2), principal branch (Im s > 0 for gamma > 0).

For gamma -> 0 the phi_2 part yields a term linear in T that survives:
with x = gamma*zeta, w = Omega^2 i zeta/(i zeta + 1) does not depend on
gamma, and n(x) -> T/x, so

    Delta_T F_2 -> (T/4pi^2) int_0^inf (d zeta/zeta) (-2 Im phi_2)
                 = T f_D0 / (16 pi^2 L^2).

A contour argument in zeta reduces the integral to the plasma TE term at
zero frequency, f_D0 = -4 pi L^2 phi_TE^plasma(0) > 0, which serves as an
independent check.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import BranchError, ConvergenceError, DomainError
from ..model import ModelParams, Permittivity
from ..quadrature import integrate_exp_tail, integrate_unit
from .common import FreeEnergyReport, Representation
from .matsubara import phi
from .realfreq import BOSE_CUT


def _w_of(zeta_or_x, params, scaled: bool):
    W2 = params.omega_p ** 2
    if scaled:
        z = 1j * np.asarray(zeta_or_x)
        return W2 * z / (z + 1.0)
    g = params.gamma
    z = 1j * np.asarray(zeta_or_x)
    return W2 * z / (z + g)


def _log_term(eta, w, L):
    s = np.sqrt(w + eta * eta)
    r = (eta - s) / (eta + s)
    return np.log(1 - r * r * np.exp(-2 * eta * L))


def im_phi2(w, params: ModelParams, rtol: float = 1e-12, atol: float | None = None):
    """Im of phi_2 = int_0^inf eta ln(1 - r(w, eta)^2 exp(-2 eta L)) d eta for complex w.

    ``atol`` defaults to 1e-20/L**2, the natural scale of phi.
    """
    L = params.gap
    atol = 1e-20 / L ** 2 if atol is None else atol
    w = np.asarray(w, dtype=complex)

    def g(u, wr, wi):
        eta = -np.log(u) / (2 * L)
        val = eta * _log_term(eta, wr + 1j * wi, L) / (2 * L * u)
        return val.imag

    v, _ = integrate_unit(g, (w.real, w.imag), rtol=rtol, atol=atol, what="Im phi_2")
    return v


def im_phi1(x, params: ModelParams, rtol: float = 1e-12, atol: float | None = None):
    """Im of phi_1(ix) = int_0^x p ln(1 - r(ip)^2 exp(-2ipL)) dp (TE, Drude).

    The p range is split at p = Omega, where the branch point of
    s = sqrt(w - p^2) approaches the real axis for small gamma.
    """
    L, W = params.gap, params.omega_p
    atol = 1e-20 / L ** 2 if atol is None else atol
    x = np.asarray(x, dtype=float)
    w = _w_of(x, params, scaled=False)
    if params.gamma == 0 or np.any(w.imag < 0):
        raise BranchError("region k_par < x needs gamma > 0 (Im w > 0 keeps |r| < 1)")

    def g(s, a, b, wr, wi):
        p = a + (b - a) * s
        eta = 1j * p
        sq = np.sqrt(wr + 1j * wi + eta * eta)
        if np.any(sq.imag < 0):
            raise BranchError("square root left the upper half-plane")
        r = (eta - sq) / (eta + sq)
        val = (b - a) * p * np.log(1 - r * r * np.exp(-2j * p * L))
        return val.imag

    mid = np.minimum(x, W)
    v1, _ = integrate_unit(g, (0.0 * x, mid, w.real, w.imag), rtol=rtol, atol=atol,
                           what="Im phi_1")
    v2 = np.zeros_like(v1)
    hi = x > W
    if np.any(hi):
        v2[hi], _ = integrate_unit(g, (mid[hi], x[hi], w.real[hi], w.imag[hi]), rtol=rtol,
                                   atol=atol, what="Im phi_1")
    return v1 + v2


def abel_plana_regions(x, params: ModelParams):
    """(Im phi_1(ix), Im phi_2(ix)) for an array of x > 0."""
    x = np.asarray(x, dtype=float)
    w = _w_of(x, params, scaled=False)
    i2 = im_phi2(w, params)
    i1 = im_phi1(x, params) if params.gamma > 0 else np.full(x.shape, np.nan)
    return i1, i2


def abel_plana_thermal_part(params: ModelParams, rtol: float = 1e-11) -> FreeEnergyReport:
    """TE thermal part of the Drude model from the Abel-Plana representation."""
    if not params.temperature > 0:
        raise DomainError("T must be positive")
    if not params.gamma > 0:
        raise DomainError("the Abel-Plana split is used for the Drude model (gamma > 0); "
                          "for gamma = 0 the segment k_par < x meets the mode poles")
    T = params.temperature

    def integrand(x, part):
        i1 = im_phi1(x, params)
        i2 = im_phi2(_w_of(x, params, scaled=False), params)
        n = 1.0 / np.expm1(x / T)
        vals = {"1": i1, "2": i2, "all": i1 + i2}[part]
        return n * (-2.0) * vals

    # n(x) < exp(-BOSE_CUT) beyond x_max; below, the 1/x of n(x) is cancelled
    # by Im phi(ix) = O(x).  The x range is split at gamma, the scale of the
    # w(ix) crossover.
    x_max = BOSE_CUT * T
    cuts = [0.0, min(params.gamma, x_max), x_max]
    out = {}
    for part in ("1", "2"):
        tot, err = 0.0, 0.0
        for a, b in zip(cuts[:-1], cuts[1:]):
            if b <= a:
                continue
            f = lambda u, part=part, a=a, b=b: integrand(a + (b - a) * u, part) * (b - a)
            v, e = integrate_unit(f, (), rtol=rtol, atol=1e-300, what=f"Abel-Plana region {part}")
            tot += float(v)
            err += float(e)
        out[part] = (tot / (4 * np.pi ** 2), err / (4 * np.pi ** 2))
    val = out["1"][0] + out["2"][0]
    rep = FreeEnergyReport(Representation.ABEL_PLANA, params, "drude", val,
                           error_estimate=out["1"][1] + out["2"][1])
    rep.breakdown = {"region_k_below_x": out["1"][0], "region_k_above_x": out["2"][0],
                     "polarization": "TE"}
    return rep


@dataclass
class DefectResult:
    f_D0: float
    defect: float
    gamma_probe: list = field(default_factory=list)
    values: list = field(default_factory=list)
    spread: float = 0.0
    closed_form: float | None = None
    notes: list = field(default_factory=list)

    def to_dict(self):
        return {"f_D0": self.f_D0, "defect": self.defect, "gamma_probe": list(self.gamma_probe),
                "values": list(self.values), "relative_spread": self.spread,
                "closed_form": self.closed_form, "notes": list(self.notes)}


def _zeta_integral(params: ModelParams, gamma: float, rtol: float = 1e-12):
    """int_0^inf (d zeta/zeta) (-2 Im phi_2(i gamma zeta)), zeta = u/(1-u)."""
    W2 = params.omega_p ** 2

    def f(u):
        # x = gamma*zeta with zeta = u/(1-u); numerator and denominator of
        # w(ix) = Omega^2 ix/(ix + gamma) are multiplied by (1-u) so that
        # u -> 1 stays finite.
        z = 1j * gamma * u
        w = W2 * z / (z + gamma * (1 - u))
        return -2.0 * im_phi2(w, params) / (u * (1 - u))

    v, e = integrate_unit(f, (), rtol=rtol, atol=1e-300, what="defect zeta integral")
    return float(v), float(e)


def defect_closed_form(params: ModelParams) -> float:
    """f_D0 = -4 pi L^2 phi_TE^plasma(0)."""
    perm = Permittivity.plasma(params.with_(gamma=0.0))
    v, _ = phi(np.array([0.0]), params, perm, "TE")
    return float(-4 * np.pi * params.gap ** 2 * v[0])


def defect_f_D0(params: ModelParams, gammas=(1e-1, 1e-2, 1e-3), rel_spread: float = 1e-8
                ) -> DefectResult:
    """Dimensionless defect integral, evaluated at several gamma.

    The integral is gamma-independent after the substitution x = gamma*zeta;
    the spread over ``gammas`` is recorded and compared with ``rel_spread``.
    """
    L = params.gap
    vals = [4 * L ** 2 * _zeta_integral(params, g)[0] for g in gammas]
    f0 = float(np.mean(vals))
    spread = float((max(vals) - min(vals)) / abs(f0)) if f0 != 0 else np.inf
    T = params.temperature
    cf = defect_closed_form(params)
    res = DefectResult(f0, T * f0 / (16 * np.pi ** 2 * L ** 2), list(gammas), vals, spread, cf)
    if spread > rel_spread:
        raise ConvergenceError(f"defect integral varies with gamma (spread {spread:.2e})")
    return res


def region_two_thermal(params: ModelParams, rtol: float = 1e-10) -> float:
    """(1/4pi^2) int dx n(x) (-2 Im phi_2(ix)) at finite gamma.

    The integrand lives on the scale x ~ gamma, so the x range is cut
    geometrically from gamma up to the Bose cutoff.
    """
    T = params.temperature
    g = params.gamma
    if not g > 0:
        return 0.0
    x_max = BOSE_CUT * T
    cuts = [0.0]
    c = g
    while c < x_max:
        cuts.append(c)
        c *= 10.0
    cuts.append(x_max)

    def f(u, a, b):
        x = a + (b - a) * u
        return (b - a) * (-2.0) * im_phi2(_w_of(x, params, scaled=False), params) / np.expm1(x / T)

    tot = 0.0
    for a, b in zip(cuts[:-1], cuts[1:]):
        v, _ = integrate_unit(f, (a, b), rtol=rtol, atol=1e-300, what="region-two thermal part")
        tot += float(v)
    return tot / (4 * np.pi ** 2)
