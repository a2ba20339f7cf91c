"""One-dimensional scattering across the vacuum gap between two half-spaces.

At fixed parallel momentum k_par a photon with perpendicular momentum k3 in
the medium has momentum q in the gap, with

    eps*omega**2 = k_par**2 + k3**2,   omega**2 = k_par**2 + q**2,

so q**2 = ((1 - eps)*k_par**2 + k3**2)/eps.  The transmission coefficient is

    t(k3) = 4*k3*q / ((k3 + Q)**2 exp(-i q L) - (k3 - Q)**2 exp(i q L)),

with Q = q for TE and Q = eps*q for TM.  t is even in q, so the branch of the
square root is immaterial; ``transmission`` checks this numerically.

Discrete modes are the poles of t at k3 = i*kappa.  Writing
S = sin(qL/2)/q and C = cos(qL/2) (both even in q), they are the zeros of

    TE:  kappa*C - q**2*S   (symmetric)     kappa*S + C       (antisymmetric)
    TM:  kappa*C - eps*q**2*S               kappa*S + eps*C

and are real functions of kappa for the plasma and constant-eps models.
"""
from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.optimize.elementwise import find_root

from .errors import DomainError, PoleError
from .model import (Permittivity, PermittivityKind, inverse_permittivity_imag,
                    susceptibility_xi2)


class Polarization(enum.Enum):
    TE = "TE"
    TM = "TM"


def _pol(p) -> Polarization:
    return p if isinstance(p, Polarization) else Polarization(str(p).upper())


@dataclass(frozen=True)
class ScatteringInput:
    k3: complex
    k_par: float
    epsilon: complex
    gap: float
    polarization: Polarization = Polarization.TE

    def __post_init__(self):
        object.__setattr__(self, "polarization", _pol(self.polarization))
        if not self.k_par >= 0:
            raise DomainError("k_par must be >= 0")
        if not self.gap > 0:
            raise DomainError("gap must be > 0")

    @property
    def q(self):
        return gap_momentum(self.k3, self.k_par, self.epsilon)


def gap_momentum(k3, k_par, eps):
    """Principal branch q = sqrt(((1 - eps)*k_par**2 + k3**2)/eps)."""
    k3 = np.asarray(k3, dtype=complex)
    eps = np.asarray(eps, dtype=complex)
    return np.sqrt(((1 - eps) * k_par ** 2 + k3 * k3) / eps)


def _denominator(k3, q, Q, L):
    return (k3 + Q) ** 2 * np.exp(-1j * q * L) - (k3 - Q) ** 2 * np.exp(1j * q * L)


def transmission_from(k3, q, eps, L, pol):
    k3 = np.asarray(k3, dtype=complex)
    Q = q if _pol(pol) is Polarization.TE else eps * q
    den = _denominator(k3, q, Q, L)
    if np.any(np.abs(den) <= 1e-300):
        raise PoleError("transmission denominator vanishes (discrete mode)")
    return 4 * k3 * q / den


def transmission(inp: ScatteringInput, check_even: bool = True):
    """Transmission coefficient t(k3) across the gap.

    >>> abs(transmission(ScatteringInput(0.7, 0.3, 1.0, 2.0)) - np.exp(1.4j)) < 1e-14
    True
    """
    q = inp.q
    t = transmission_from(inp.k3, q, inp.epsilon, inp.gap, inp.polarization)
    if check_even:
        t_neg = transmission_from(inp.k3, -q, inp.epsilon, inp.gap, inp.polarization)
        if not np.allclose(t, t_neg, rtol=1e-9, atol=0):
            raise DomainError("t(q) != t(-q): branch dependence detected")
    return t


def _phase_parts(k3, q, dq, Q, dQ, L):
    """Phase shift and its k3 derivative from delta = qL + (ln(1-z-) - ln(1-z+))/(2i)."""
    rs = (k3 - Q) / (k3 + Q)
    drs = ((1 - dQ) * (k3 + Q) - (k3 - Q) * (1 + dQ)) / (k3 + Q) ** 2
    ep = np.exp(2j * q * L)
    em = np.exp(-2j * q * L)
    zp, zm = rs * rs * ep, rs * rs * em
    dzp = (2 * rs * drs + 2j * dq * L * rs * rs) * ep
    dzm = (2 * rs * drs - 2j * dq * L * rs * rs) * em
    delta = q * L + (np.log(1 - zm) - np.log(1 - zp)) / 2j
    ddelta = dq * L + (-dzm / (1 - zm) + dzp / (1 - zp)) / 2j
    return delta, ddelta


def _eps_and_q_real_axis(k3, k_par, perm: Permittivity):
    """eps, deps/dk3, q, dq/dk3 on the continuum of a lossless model."""
    k3 = np.asarray(k3, dtype=float)
    if perm.kind is PermittivityKind.PLASMA:
        W2 = perm.omega_p ** 2
        om2 = W2 + k_par ** 2 + k3 * k3
        eps = (k_par ** 2 + k3 * k3) / om2
        deps = 2 * k3 * W2 / om2 ** 2
        q = np.sqrt(W2 + k3 * k3)
        dq = k3 / q
    elif perm.kind in (PermittivityKind.CONSTANT, PermittivityKind.VACUUM):
        e = perm.eps_const if perm.kind is PermittivityKind.CONSTANT else 1.0
        eps = np.full_like(k3, e)
        deps = np.zeros_like(k3)
        q2 = ((1 - e) * k_par ** 2 + k3 * k3) / e
        if np.any(q2 < 0):
            raise DomainError("k3 below the continuum threshold of the constant-eps model")
        q = np.sqrt(q2)
        dq = np.where(q > 0, k3 / (e * np.where(q > 0, q, 1.0)), 0.0)
    else:
        raise DomainError("lossless continuum needs a plasma, constant or vacuum model")
    return eps, deps, q, dq


def phase_shift(k3, k_par: float, perm: Permittivity, gap: float, pol="TE",
                derivative: bool = False):
    """Scattering phase delta(k3) of a lossless model, continuous in k3.

    The branch is fixed by the closed form qL + (ln(1-z-) - ln(1-z+))/(2i),
    z+- = r**2 exp(+-2iqL), r = (k3-Q)/(k3+Q), which is continuous because
    |z| < 1 on the continuum; then a multiple of pi is removed so that
    delta(0+) lies in (-pi, pi].  Negative k3 use delta(-k3) = -delta(k3),
    i.e. q(k3) and q(-k3) share the branch.

    Returns delta, or (delta, ddelta/dk3) if ``derivative``.
    """
    k3 = np.asarray(k3, dtype=float)
    sgn = np.where(k3 < 0, -1.0, 1.0)
    a = np.abs(k3)
    if np.any(a == 0):
        raise DomainError("phase shift is defined for k3 != 0")
    a_all = np.concatenate([[1e-12 * max(1.0, k_par, perm.omega_p)], a.ravel()])
    delta, dd = _lossless_phase(a_all, k_par, perm, gap, pol)
    if np.max(np.abs(delta.imag)) > 1e-10 * max(1.0, np.max(np.abs(delta.real))):
        raise DomainError("phase shift acquired an imaginary part")
    delta = delta.real
    n = np.ceil((delta[0] - np.pi) / np.pi)
    delta = (delta[1:] - n * np.pi).reshape(a.shape) * sgn
    dd = dd.real[1:].reshape(a.shape)
    return (delta, dd) if derivative else delta


def _lossless_phase(k3, k_par, perm, gap, pol):
    eps, deps, q, dq = _eps_and_q_real_axis(k3, k_par, perm)
    if _pol(pol) is Polarization.TE:
        Q, dQ = q, dq
    else:
        Q, dQ = eps * q, deps * q + eps * dq
    return _phase_parts(k3.astype(complex), q.astype(complex), dq, Q, dQ, gap)


def phase_shift_derivative(k3, k_par, perm, gap, pol="TE"):
    """Analytic d(delta)/dk3 on the continuum of a lossless model."""
    k3 = np.asarray(k3, dtype=float)
    _d, dd = _lossless_phase(k3, k_par, perm, gap, pol)
    return dd.real


# ----------------------------------------------------------------------------
# reflection on the imaginary frequency axis
# ----------------------------------------------------------------------------

def reflection(pol, xi, k_par, perm: Permittivity):
    """Fresnel coefficient r at imaginary frequency i*xi.

    With w = (eps(i*xi) - 1)*xi**2 and s = sqrt(w + eta**2), eta = sqrt(xi**2 + k_par**2):

        r_TE = (eta - s)/(eta + s),
        r_TM = (eta - s/eps)/(eta + s/eps),  1/eps = xi**2/(xi**2 + w).

    Both forms are finite at xi = 0: a Drude medium gives r_TE = 0 there and
    any medium with w(0) > 0 gives r_TM = 1.
    """
    xi = np.asarray(xi, dtype=float)
    k_par = np.asarray(k_par, dtype=float)
    if np.any((xi == 0) & (k_par == 0)):
        raise DomainError("reflection undefined at xi = k_par = 0")
    eta = np.sqrt(xi * xi + k_par * k_par)
    return reflection_eta(pol, xi, eta, perm)


def reflection_eta(pol, xi, eta, perm: Permittivity):
    """Same as ``reflection`` but parametrised by eta (vectorised, xi may be complex)."""
    w = susceptibility_xi2(perm, xi)
    s = np.sqrt(w + eta * eta)
    if _pol(pol) is Polarization.TE:
        return (eta - s) / (eta + s)
    se = s * inverse_permittivity_imag(perm, xi)
    return (eta - se) / (eta + se)


# ----------------------------------------------------------------------------
# discrete modes
# ----------------------------------------------------------------------------

class ModeLabel(enum.Enum):
    WAVEGUIDE = "waveguide"
    EVANESCENT = "evanescent"


@dataclass(frozen=True)
class ModeSpectrum:
    kappa_list: np.ndarray
    labels: tuple
    parity: tuple
    polarization: Polarization
    k_par: float
    perm: Permittivity
    gap: float

    @property
    def omega(self):
        return mode_frequency(self.kappa_list, self.k_par, self.perm)

    def __len__(self):
        return self.kappa_list.size


def mode_frequency(kappa, k_par, perm: Permittivity):
    kappa = np.asarray(kappa, dtype=float)
    if perm.kind is PermittivityKind.PLASMA:
        return np.sqrt(perm.omega_p ** 2 + k_par ** 2 - kappa ** 2)
    e = perm.eps_const if perm.kind is PermittivityKind.CONSTANT else 1.0
    return np.sqrt((k_par ** 2 - kappa ** 2) / e)


def _mode_window(k_par, perm: Permittivity):
    if perm.kind is PermittivityKind.PLASMA:
        return np.sqrt(perm.omega_p ** 2 + k_par ** 2)
    if perm.kind is PermittivityKind.CONSTANT:
        if perm.eps_const <= 0:
            raise DomainError("constant eps must be positive")
        return float(k_par)
    if perm.kind is PermittivityKind.VACUUM:
        return float(k_par)
    raise DomainError("discrete_modes needs the plasma or a constant-eps model")


def _q2_and_eps_om2(kappa, k_par, perm):
    """q**2, eps*omega**2 and omega**2 at k3 = i*kappa (real arrays)."""
    if perm.kind is PermittivityKind.PLASMA:
        om2 = perm.omega_p ** 2 + k_par ** 2 - kappa ** 2
        return om2 - k_par ** 2, k_par ** 2 - kappa ** 2, om2
    e = perm.eps_const if perm.kind is PermittivityKind.CONSTANT else 1.0
    om2 = (k_par ** 2 - kappa ** 2) / e
    return om2 - k_par ** 2, k_par ** 2 - kappa ** 2, om2


def _SC(q2, L):
    q = np.sqrt(np.asarray(q2, dtype=complex))
    small = np.abs(q) < 1e-8
    qs = np.where(small, 1.0, q)
    S = np.where(small, L / 2 - q2 * L ** 3 / 48, np.sin(qs * L / 2) / qs)
    C = np.cos(q * L / 2)
    return S.real, C.real


def secular(kappa, k_par, perm: Permittivity, gap, pol, parity: str):
    """Pole-free secular function whose zeros are the mode kappas.

    For TM the eps factor is multiplied through by omega**2 to remove the
    pole of eps at omega = 0.
    """
    kappa = np.asarray(kappa, dtype=float)
    q2, epsom2, om2 = _q2_and_eps_om2(kappa, k_par, perm)
    S, C = _SC(q2, gap)
    if _pol(pol) is Polarization.TE:
        e_num, e_den = 1.0, 1.0
    else:
        e_num, e_den = epsom2, om2
    if parity == "s":
        return kappa * C * e_den - e_num * q2 * S
    if parity == "a":
        return kappa * S * e_den + e_num * C
    raise ValueError("parity must be 's' or 'a'")


def discrete_modes(pol, k_par: float, perm: Permittivity, gap: float,
                   kappa_max: float | None = None, density: int = 2048) -> ModeSpectrum:
    """All mode kappas in (0, kappa_max], bracketed on a grid and bisected.

    The grid carries ``density`` points per unit kappa (at least 512 in all)
    and is doubled locally when neighbouring sign changes crowd into
    adjacent cells.
    """
    pol = _pol(pol)
    kt = _mode_window(k_par, perm)
    kmax = kt if kappa_max is None else min(float(kappa_max), kt)
    if kmax <= 0:
        return ModeSpectrum(np.zeros(0), (), (), pol, float(k_par), perm, float(gap))
    n = int(max(512, np.ceil(density * kmax * max(1.0, gap))))
    # uniform cells plus geometric grading towards both window ends, where
    # modes crowd for small k_par
    ends = np.geomspace(1e-13, 0.5 / n, 48) * kmax
    grid = np.unique(np.concatenate([np.linspace(0.0, kmax, n + 1)[1:-1], ends,
                                     kmax - ends]))
    if kappa_max is not None:
        grid = np.append(grid, kmax)
    kap, par = [], []
    for parity in ("s", "a"):
        lo, hi = _brackets(grid, k_par, perm, gap, pol, parity)
        if lo.size == 0:
            continue
        f = lambda x: secular(x, k_par, perm, gap, pol, parity)
        res = find_root(f, (lo, hi), tolerances=dict(xatol=1e-15, xrtol=4e-16))
        kap.extend(res.x.tolist())
        par.extend([parity] * lo.size)
    order = np.argsort(kap)
    kap = np.array(kap)[order] if kap else np.zeros(0)
    par = tuple(np.array(par)[order]) if par else ()
    if kappa_max is not None and kap.size and kap[-1] > 0.99 * kmax:
        warnings.warn("a mode lies within 1% of kappa_max; the window may be too small",
                      RuntimeWarning, stacklevel=2)
    q2, _, _ = _q2_and_eps_om2(kap, k_par, perm)
    labels = tuple(ModeLabel.WAVEGUIDE if v >= 0 else ModeLabel.EVANESCENT for v in q2)
    return ModeSpectrum(kap, labels, par, pol, float(k_par), perm, float(gap))


def _brackets(grid, k_par, perm, gap, pol, parity, max_doublings=6):
    v = secular(grid, k_par, perm, gap, pol, parity)
    sc = np.nonzero(np.sign(v[:-1]) * np.sign(v[1:]) < 0)[0]
    # refine where sign changes occupy neighbouring cells
    for _ in range(max_doublings):
        crowded = sc[np.nonzero(np.diff(sc) <= 1)[0]] if sc.size > 1 else np.array([], int)
        if crowded.size == 0:
            break
        extra = []
        for i in np.unique(np.concatenate([crowded, crowded + 1])):
            i = min(i, grid.size - 2)
            extra.append(np.linspace(grid[i], grid[i + 1], 9)[1:-1])
        grid = np.sort(np.concatenate([grid, *extra]))
        v = secular(grid, k_par, perm, gap, pol, parity)
        sc = np.nonzero(np.sign(v[:-1]) * np.sign(v[1:]) < 0)[0]
    return grid[sc], grid[sc + 1]


def transmission_at_mode(spec: ModeSpectrum, j: int):
    """|t| evaluated at k3 = i*kappa_j (large at a pole)."""
    kap = spec.kappa_list[j]
    eps = mode_epsilon(kap, spec.k_par, spec.perm)
    q = gap_momentum(1j * kap, spec.k_par, eps)
    try:
        return abs(transmission_from(1j * kap, q, eps, spec.gap, spec.polarization))
    except PoleError:
        return np.inf


def mode_epsilon(kappa, k_par, perm):
    q2, epsom2, om2 = _q2_and_eps_om2(np.asarray(kappa, dtype=float), k_par, perm)
    if perm.kind is PermittivityKind.PLASMA:
        return epsom2 / om2
    return perm.eps_const if perm.kind is PermittivityKind.CONSTANT else 1.0
