"""Rotation of the k3 contour onto the imaginary axis for the plasma model.

After the rotation k3 -> i*kappa the Bose logarithm jumps by i*pi each time
kappa passes a threshold kappa_l = sqrt(xi_l**2 + Omega**2 + k_par**2), and
the kappa integral collapses onto a primed sum of ln t(i*kappa_l).  At those
points the gap momentum is q = i*eta_l with eta_l = sqrt(xi_l**2 + k_par**2),
and

    -ln t(i kappa_l) = ln(1 - r**2 exp(-2 eta L)) + eta L - ln(4 kappa eta/(kappa + Q)**2),

where Q = eta (TE) or eps*eta (TM), so that r**2 is the Lifshitz r**2 at
xi = xi_l.  The first term is the separation-dependent Lifshitz integrand;
eta*L is the free photon gas in the gap and the last term does not depend
on L.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import DomainError, MismatchError
from ..model import ModelParams, Permittivity, PermittivityKind
from ..scattering import Polarization, ScatteringInput, _pol, reflection, transmission

MISMATCH_TOL = 1e-10


@dataclass(frozen=True)
class StairFunction:
    """f_s(kappa) = i*pi * #{l >= 1 : kappa > kappa_l}."""

    kappa_thresholds: np.ndarray

    @classmethod
    def from_params(cls, params: ModelParams, k_par: float, l_max: int):
        xi = 2 * np.pi * params.temperature * np.arange(l_max + 1)
        return cls(np.sqrt(xi * xi + params.omega_p ** 2 + k_par ** 2))

    def __call__(self, kappa):
        kappa = np.asarray(kappa, dtype=float)
        n = np.searchsorted(self.kappa_thresholds[1:], kappa, side="left")
        return 1j * np.pi * n

    def matsubara_frequencies(self, params: ModelParams, k_par: float):
        """xi(kappa_l) = sqrt(kappa_l**2 - Omega**2 - k_par**2)."""
        d = self.kappa_thresholds ** 2 - params.omega_p ** 2 - k_par ** 2
        return np.sqrt(np.maximum(d, 0.0))


@dataclass
class ContourIdentityReport:
    k_par: float
    polarization: str
    thresholds: np.ndarray
    xi: np.ndarray
    log_t: np.ndarray
    lifshitz_log: np.ndarray
    free_gap: np.ndarray
    boundary_log: np.ndarray
    threshold_mismatch: float
    pole_side_mismatch: float
    surface_term: complex
    primed_sum: complex
    lifshitz_primed_sum: float
    notes: list = field(default_factory=list)


def _pole_side_log_t(kappa, eta, eps_inv, L, pol):
    """ln t(i kappa) assembled from real quantities (r, eta, kappa)."""
    if pol is Polarization.TE:
        Q_over = kappa / eta          # kappa/Q
        pref = np.log(4 * kappa * eta) - 2 * np.log(kappa + eta)
    else:
        # Q = eps*eta; written with 1/eps so that eps = inf (xi = 0) is harmless
        Q_over = kappa * eps_inv / eta
        with np.errstate(divide="ignore"):
            pref = np.log(4 * kappa * eta) + 2 * np.log(eps_inv) - 2 * np.log(kappa * eps_inv + eta)
    r = (Q_over - 1) / (Q_over + 1)
    lif = np.log1p(-(r * r) * np.exp(-2 * eta * L))
    return -(lif + eta * L - pref), lif, pref


def verify_plasma_contour_identity(params: ModelParams, k_par: float, pol="TE",
                                   l_max: int = 20) -> ContourIdentityReport:
    """Check the stair-function collapse onto Matsubara frequencies at one k_par.

    Verifies that the thresholds map exactly onto xi_l = 2 pi l T, that
    ``transmission`` evaluated at k3 = i kappa_l (l >= 1) agrees with the
    pole-side closed form, and that its separation-dependent part is the
    Lifshitz logarithm.  Raises MismatchError above 1e-10.
    """
    if params.gamma != 0:
        raise DomainError("the contour identity is checked for the plasma model")
    if not k_par > 0:
        raise DomainError("k_par must be positive")
    T, L, W = params.temperature, params.gap, params.omega_p
    if not T > 0:
        raise DomainError("temperature must be positive")
    p = _pol(pol)
    stair = StairFunction.from_params(params, k_par, l_max)
    l = np.arange(l_max + 1)
    xi_l = 2 * np.pi * T * l
    xi = stair.matsubara_frequencies(params, k_par)
    # compared on squares: sqrt amplifies roundoff near xi_0 = 0
    d2 = stair.kappa_thresholds ** 2 - W ** 2 - k_par ** 2
    thr_mis = float(np.max(np.abs(d2 - xi_l ** 2) / np.maximum(1.0, stair.kappa_thresholds ** 2)))
    jumps = stair(stair.kappa_thresholds[1:] * (1 + 1e-12)) - stair(stair.kappa_thresholds[1:] * (1 - 1e-12))
    if np.any(np.abs(jumps - 1j * np.pi) > 1e-12):
        thr_mis = max(thr_mis, 1.0)
    if thr_mis > MISMATCH_TOL:
        raise MismatchError(f"stair thresholds do not map onto Matsubara frequencies ({thr_mis:.2e})")

    kappa = stair.kappa_thresholds
    eta = np.sqrt(xi_l ** 2 + k_par ** 2)
    eps_inv = xi_l ** 2 / (xi_l ** 2 + W ** 2)
    log_t, lif, pref = _pole_side_log_t(kappa, eta, eps_inv, L, p)

    # direct evaluation of t on the imaginary k3 axis (eps finite for l >= 1)
    # direct evaluation of t on the imaginary k3 axis: eps is finite for l >= 1,
    # and exp(eta*L) must stay representable
    notes = []
    idx = [j for j in range(1, l_max + 1) if eta[j] * L < 600]
    if len(idx) < l_max:
        notes.append(f"direct t(i kappa_l) skipped for {l_max - len(idx)} terms with eta*L >= 600")
    direct = np.array([np.log(transmission(ScatteringInput(1j * kappa[j], k_par, 1.0 / eps_inv[j], L, p)))
                       for j in idx])
    pole_mis = float(np.max(np.abs(direct - log_t[idx]) / np.maximum(1.0, np.abs(log_t[idx])))) \
        if idx else 0.0
    perm = Permittivity(PermittivityKind.PLASMA, params)
    r = reflection(p.value, xi_l, k_par, perm)
    lif_ref = np.log1p(-(r * r) * np.exp(-2 * eta * L))
    pole_mis = max(pole_mis, float(np.max(np.abs(lif - lif_ref))))
    if pole_mis > MISMATCH_TOL:
        raise MismatchError(f"t(i kappa_l) disagrees with the pole-side closed form ({pole_mis:.2e})")

    w = np.ones(l_max + 1)
    w[0] = 0.5
    if p is Polarization.TM:
        notes.append("TM: t(i kappa_0) = 0 because eps is infinite at xi = 0, so ln t "
                     "diverges there; the divergence sits in the L-independent boundary log")
    with np.errstate(invalid="ignore"):
        primed = complex(T * np.sum(w * log_t))
    return ContourIdentityReport(k_par, p.value, kappa, xi, log_t, lif, eta * L, pref,
                                 thr_mis, pole_mis, complex(-0.5 * log_t[0]), primed,
                                 float(T * np.sum(w * lif)), notes)
