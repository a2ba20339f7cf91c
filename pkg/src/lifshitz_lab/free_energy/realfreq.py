"""Thermal free energy over physical frequencies.

At fixed parallel momentum the thermal part of the free energy of the gap is

    X(k_par) = sum_j g(omega_j) + (1/pi) int_0^inf dk3 g(omega(k3)) delta'(k3),
    g(omega) = T*ln(1 - exp(-omega/T)),

with omega_j the discrete modes and delta the scattering phase.  X contains,
besides the separation-dependent interaction, two pieces that the Lifshitz
formula does not carry:

* the free photons of a gap of width L, (L/pi) int_0^inf dq g(sqrt(q^2 + k_par^2));
* an L-independent interface term S(k_par).  For the plasma model

      S_TE = int_0^Omega (2/pi) g(q) dq/sqrt(Omega^2 - q^2) - g(0)/2,
      S_TM = -(1/pi) int_0^Omega theta'(q) g(q) dq - g(0)/2 + 2 g(omega_sp),

  where g(q) stands for g(sqrt(q^2 + k_par^2)), theta = 2 arg(e*q + i*kappa),
  kappa = sqrt(Omega^2 - q^2), e = (k_par^2 + q^2 - Omega^2)/(k_par^2 + q^2),
  and omega_sp is the surface plasmon of a single interface.  The two
  surface plasmons make the k_par integral of S_TM diverge, so the interface
  term has to be removed before integrating over k_par.

The reported thermal part is (1/2pi) int k_par dk_par [X - free - S], which
is the separation-dependent part.  For the Drude model only TE is
implemented: the modes are omega1(gamma, k) and the same plasma S is
subtracted, so that Drude minus plasma is the plain difference of X.
"""
from __future__ import annotations

import numpy as np

from ..dispersion import cubic_roots, domega_dK, omega1_newton
from ..errors import ConvergenceError, DomainError
from ..model import ModelParams, Permittivity, PermittivityKind, make_permittivity
from ..quadrature import gauss_legendre_panels, graded_breaks
from ..scattering import Polarization, _phase_parts, discrete_modes, secular
from .common import FreeEnergyReport, Representation

#: exp(-BOSE_CUT) is below double precision relative to O(1) terms.
BOSE_CUT = 42.0


def bose_log(omega, T):
    """T*ln(1 - exp(-omega/T)) for (complex) omega with positive real part."""
    return T * np.log(-np.expm1(-np.asarray(omega) / T))


def _qgrid(upper, n=24, width=0.25):
    return gauss_legendre_panels(graded_breaks(upper, width, first=1e-7, n_grade=16), n)


def free_gap_photons(k_par, params: ModelParams):
    """(L/pi) int_0^inf dq g(sqrt(q^2 + k_par^2)) for an array of k_par."""
    T, L = params.temperature, params.gap
    kp = np.atleast_1d(np.asarray(k_par, dtype=float))
    q, w = _qgrid(BOSE_CUT * T + 1.0, width=max(0.05, min(0.5, 2 * T)))
    om = np.sqrt(q[None, :] ** 2 + kp[:, None] ** 2)
    return L / np.pi * np.sum(w * bose_log(om, T), axis=1)


def _angle_nodes(n=24):
    # q = Omega*sin(phi) removes the inverse square root at q = Omega.  For
    # small k_par the TM phase turns by pi within kappa ~ k_par of q = Omega,
    # so the panels are graded geometrically towards both ends.
    half = graded_breaks(np.pi / 4, np.pi / 16, first=1e-12, n_grade=32)
    breaks = np.unique(np.concatenate([half, np.pi / 2 - half]))
    return gauss_legendre_panels(breaks, n)


def surface_term(k_par, params: ModelParams, pol):
    """L-independent interface term S_pol(k_par) of the plasma model."""
    T, W = params.temperature, params.omega_p
    kp = np.atleast_1d(np.asarray(k_par, dtype=float))[:, None]
    p, w = _angle_nodes()
    q = W * np.sin(p)[None, :]
    kap = W * np.cos(p)[None, :]
    g = bose_log(np.sqrt(q * q + kp * kp), T)
    g0 = bose_log(kp[:, 0], T)
    if Polarization(pol) is Polarization.TE:
        # -theta'/pi * dq = (2/pi) d phi
        return np.sum(w * (2 / np.pi) * g, axis=1) - 0.5 * g0
    denom = q * q + kp * kp
    e = (kp * kp + q * q - W * W) / denom
    de = 2 * q * W * W / denom ** 2
    X = e * q
    dX = e + q * de
    # theta'(q) * dq/dphi with dq/dphi = kappa and dkappa/dq = -q/kappa
    num = -X * q - kap * kap * dX
    dth_dphi = 2 * num / (X * X + kap * kap)
    wsp = surface_plasmon_frequency(kp[:, 0], W)
    return (-np.sum(w * dth_dphi * g, axis=1) / np.pi - 0.5 * g0 + 2 * bose_log(wsp, T))


def surface_plasmon_frequency(k_par, omega_p):
    """Single-interface plasma surface plasmon, written without cancellation.

    omega_sp**2 = Omega^2/2 + k^2 - sqrt(Omega^4/4 + k^4)
                = Omega^2 k^2 / (Omega^2/2 + k^2 + sqrt(Omega^4/4 + k^4)).
    """
    k2 = np.asarray(k_par, dtype=float) ** 2
    W2 = omega_p ** 2
    return np.sqrt(W2 * k2 / (W2 / 2 + k2 + np.sqrt(W2 * W2 / 4 + k2 * k2)))


# ----------------------------------------------------------------------------
# plasma
# ----------------------------------------------------------------------------

def _k3_nodes(params: ModelParams):
    T, L = params.temperature, params.gap
    width = min(0.5, np.pi / (4 * L))
    return gauss_legendre_panels(graded_breaks(BOSE_CUT * T + 2.0, width), 24)


def _plasma_continuum(kp, params, pol, k3, w3):
    T, L, W = params.temperature, params.gap, params.omega_p
    kp = kp[:, None]
    k3c = k3[None, :].astype(complex)
    om2 = W * W + kp * kp + k3c * k3c
    om = np.sqrt(om2)
    q = np.sqrt(W * W + k3c * k3c)
    dq = k3c / q
    if Polarization(pol) is Polarization.TE:
        Q, dQ = q, dq
    else:
        eps = (kp * kp + k3c * k3c) / om2
        deps = 2 * k3c * W * W / om2 ** 2
        Q, dQ = eps * q, deps * q + eps * dq
    _d, dd = _phase_parts(k3c, q, dq, Q, dQ, L)
    return np.sum(w3 * bose_log(om.real, T) * dd.real, axis=1) / np.pi


def plasma_kpar_integrand(k_par, params: ModelParams, pol, chunk: int = 128):
    """Per-k_par pieces of the plasma real-frequency thermal part.

    Returns a dict of arrays: ``modes``, ``continuum``, ``free``, ``surface``
    and ``regular`` = modes + continuum - free - surface.
    """
    kp = np.atleast_1d(np.asarray(k_par, dtype=float))
    perm = Permittivity.plasma(params.with_(gamma=0.0))
    T = params.temperature
    k3, w3 = _k3_nodes(params)
    cont = np.empty(kp.size)
    for s in range(0, kp.size, chunk):
        cont[s:s + chunk] = _plasma_continuum(kp[s:s + chunk], params, pol, k3, w3)
    modes = np.empty(kp.size)
    nmodes = np.empty(kp.size, dtype=int)
    for i, k in enumerate(kp):
        spec = discrete_modes(pol, float(k), perm, params.gap, density=512)
        modes[i] = np.sum(bose_log(spec.omega, T))
        nmodes[i] = len(spec)
    free = free_gap_photons(kp, params)
    surf = surface_term(kp, params, pol)
    return {"k_par": kp, "modes": modes, "continuum": cont, "free": free, "surface": surf,
            "regular": modes + cont - free - surf, "n_modes": nmodes}


def _kpar_nodes(params: ModelParams):
    T, L = params.temperature, params.gap
    upper = max(BOSE_CUT / (2 * L), BOSE_CUT * T) + 1.0
    return gauss_legendre_panels(graded_breaks(upper, 0.5, first=1e-6, n_grade=16), 24)


def real_frequency_thermal_part(params: ModelParams, perm_kind="plasma", pols=("TE", "TM"),
                                gamma_override=None) -> FreeEnergyReport:
    """Separation-dependent thermal free energy from modes and phase shifts.

    Parameters
    ----------
    params : ModelParams
        T must be positive.
    perm_kind : {"plasma", "drude"}
        ``"drude"`` supports TE only.
    gamma_override : complex, optional
        Evaluate the Drude model at this (possibly complex) gamma.
    """
    if not params.temperature > 0:
        raise DomainError("real-frequency representation requires T > 0")
    perm = perm_kind if isinstance(perm_kind, Permittivity) else make_permittivity(perm_kind, params)
    kp, wk = _kpar_nodes(params)
    T = params.temperature
    rep = FreeEnergyReport(Representation.REAL_FREQUENCY, params, perm.kind.value, 0.0)
    total = 0.0
    for pol in pols:
        if perm.kind is PermittivityKind.PLASMA or (
                perm.kind is PermittivityKind.DRUDE and gamma_override is None
                and params.gamma == 0):
            parts = plasma_kpar_integrand(kp, params, pol)
            reg = parts["regular"]
        elif perm.kind is PermittivityKind.DRUDE:
            if Polarization(pol) is not Polarization.TE:
                raise DomainError("the Drude real-frequency representation is implemented for TE only")
            g = params.gamma if gamma_override is None else complex(gamma_override)
            parts = drude_te_kpar_integrand(kp, params, g)
            reg = parts["regular"]
        else:
            raise DomainError(f"unsupported model {perm.kind.value}")
        tail = abs(kp[-1] * reg[-1])
        if tail > 1e-9 * max(1e-300, np.max(np.abs(kp * reg))):
            raise ConvergenceError("k_par integrand has not decayed at the cutoff")
        val = np.sum(wk * kp * reg) / (2 * np.pi)
        rep.breakdown[pol] = val
        rep.breakdown[f"n_modes_{pol}"] = [int(parts["n_modes"].min()), int(parts["n_modes"].max())]
        total = total + val
    rep.thermal_part = total
    rep.error_estimate = 0.0
    rep.notes.append("free gap photons and the plasma interface term are subtracted per k_par")
    return rep


# ----------------------------------------------------------------------------
# Drude, TE
# ----------------------------------------------------------------------------

def _drude_continuum(kp, params, gamma, k3, w3):
    T, L, W = params.temperature, params.gap, params.omega_p
    kp = kp[:, None]
    K = kp * kp + k3[None, :] ** 2
    om = omega1_newton(K, gamma, W)
    dom = 2 * k3[None, :] * domega_dK(om, K, gamma, W)
    # the cubic gives omega^2 = K + Omega^2 omega/(omega + i gamma), hence a
    # cancellation-free q^2 = omega^2 - k_par^2
    ig = 1j * complex(gamma)
    q2 = k3[None, :] ** 2 + W * W * om / (om + ig)
    q = np.sqrt(q2)
    dq = (k3[None, :] + 0.5 * W * W * ig * dom / (om + ig) ** 2) / q
    k3c = (k3[None, :] + 0 * kp).astype(complex)
    _d, dd = _phase_parts(k3c, q, dq, q, dq, L)
    return np.sum(w3 * bose_log(om, T) * dd, axis=1) / np.pi


def _drude_secular(kappa, kp, params, gamma, parity):
    L, W = params.gap, params.omega_p
    om = omega1_newton(kp * kp - kappa * kappa, gamma, W)
    q2 = W * W * om / (om + 1j * complex(gamma)) - kappa * kappa
    q = np.sqrt(q2)
    small = np.abs(q) < 1e-8
    qs = np.where(small, 1.0, q)
    S = np.where(small, L / 2, np.sin(qs * L / 2) / qs)
    C = np.cos(q * L / 2)
    if parity == "s":
        return kappa * C - q2 * S
    return kappa * S + C


def drude_te_modes(kp, params, gamma, iters: int = 40):
    """Complex mode kappas continued by Newton from the plasma modes."""
    perm = Permittivity.plasma(params.with_(gamma=0.0))
    spec0 = discrete_modes("TE", 0.0, perm, params.gap, density=512)
    out = []
    for kap0, parity in zip(spec0.kappa_list, spec0.parity):
        kap = np.full(kp.shape, kap0, dtype=complex)
        for _ in range(iters):
            h = 1e-6 * max(1.0, abs(kap0))
            f = _drude_secular(kap, kp, params, gamma, parity)
            df = (_drude_secular(kap + h, kp, params, gamma, parity)
                  - _drude_secular(kap - h, kp, params, gamma, parity)) / (2 * h)
            step = f / df
            kap = kap - step
            if np.all(np.abs(step) < 1e-13 * abs(kap0)):
                break
        res = np.abs(_drude_secular(kap, kp, params, gamma, parity))
        if np.any(res > 1e-10):
            raise ConvergenceError("Drude mode continuation did not converge")
        out.append(kap)
    return np.array(out)


def drude_te_kpar_integrand(k_par, params: ModelParams, gamma, chunk: int = 64):
    kp = np.atleast_1d(np.asarray(k_par, dtype=float))
    T, W = params.temperature, params.omega_p
    k3, w3 = _k3_nodes(params)
    cont = np.empty(kp.size, dtype=complex)
    for s in range(0, kp.size, chunk):
        cont[s:s + chunk] = _drude_continuum(kp[s:s + chunk], params, gamma, k3, w3)
    kaps = drude_te_modes(kp, params, gamma)
    om = omega1_newton(kp[None, :] ** 2 - kaps ** 2, gamma, W)
    modes = np.sum(bose_log(om, T), axis=0)
    free = free_gap_photons(kp, params)
    surf = surface_term(kp, params, "TE")
    return {"k_par": kp, "modes": modes, "continuum": cont, "free": free, "surface": surf,
            "regular": modes + cont - free - surf,
            "n_modes": np.full(kp.size, kaps.shape[0])}


def gamma_series(params: ModelParams, order: int = 2, radius: float = 1e-3, n_points: int = 8,
                 pols=("TE",)):
    """Taylor coefficients in gamma of the Drude real-frequency thermal part.

    The thermal part is evaluated at gamma = radius*exp(2 pi i m/n_points) and
    the coefficients follow from the discrete Cauchy integral.  Returns
    (coefficients, circle values).
    """
    if order >= n_points:
        raise DomainError("n_points must exceed order")
    th = 2 * np.pi * np.arange(n_points) / n_points
    vals = np.array([complex(real_frequency_thermal_part(params, "drude", pols,
                                                         gamma_override=radius * np.exp(1j * t)
                                                         ).thermal_part) for t in th])
    coef = [np.mean(vals * np.exp(-1j * n * th)) / radius ** n for n in range(order + 1)]
    return np.array(coef), vals


def overdamped_mode_growth(params: ModelParams, cutoffs, n: int = 48):
    """Partial k_par integrals of the over-damped TE term left out of the mode sum.

    The purely imaginary root omega3(gamma, K) of each TE mode, K = k_par^2 -
    kappa_j^2, tends to -i*gamma for large K, so g(omega3) approaches a
    nonzero constant and (1/2pi) int k_par dk_par g(omega3) grows like the
    square of the cutoff.  The term is never summed; this routine only
    measures the growth.

    Returns
    -------
    dict
        ``cutoffs``, the complex ``partial`` integrals and ``exponent``, the
        log-log slope of |partial| against the cutoff over the last two points.
    """
    g = complex(params.gamma)
    if not abs(g) > 0:
        raise DomainError("the over-damped root exists only for gamma != 0")
    if not params.temperature > 0:
        raise DomainError("T must be positive")
    lam = np.asarray(cutoffs, dtype=float)
    if lam.size < 2 or np.any(np.diff(lam) <= 0) or lam[0] <= 0:
        raise DomainError("cutoffs must be positive and increasing")
    T, W = params.temperature, params.omega_p
    perm = Permittivity.plasma(params.with_(gamma=0.0))
    kaps = np.asarray(discrete_modes("TE", 0.0, perm, params.gap, density=512).kappa_list)
    breaks = np.concatenate([[0.0], lam])
    kp, w = gauss_legendre_panels(breaks, n)
    K = kp[:, None] ** 2 - kaps[None, :] ** 2
    roots = cubic_roots(K, g, W)
    om3 = np.take_along_axis(roots, np.argmin(np.abs(roots.real), axis=-1)[..., None],
                             axis=-1)[..., 0]
    dens = kp * np.sum(bose_log(om3, T), axis=1) / (2 * np.pi)
    panel = np.add.reduceat(w * dens, np.arange(0, kp.size, n))
    partial = np.cumsum(panel)
    a = np.abs(partial[-2:])
    exponent = float(np.log(a[1] / a[0]) / np.log(lam[-1] / lam[-2]))
    return {"cutoffs": lam, "partial": partial, "exponent": exponent, "n_modes": kaps.size}
