"""Lifshitz formula: sum over Matsubara frequencies xi_l = 2*pi*l*T.

    F = (T/2pi) sum'_l sum_pol phi_pol(xi_l),
    phi(xi) = int_xi^inf eta d eta ln(1 - r(xi, eta)**2 exp(-2 eta L)),

where the prime halves the l = 0 term and eta = sqrt(xi**2 + k_par**2), so
that the k_par integral becomes an integral over eta from xi.  The vacuum
energy is E0 = (1/4pi^2) int_0^inf d xi sum_pol phi_pol(xi), and the thermal
part is F - E0.

The eta integral uses u = exp(-2(eta - xi)L), after which the integrand
on (0, 1) has only a logarithmic endpoint behaviour.
"""
from __future__ import annotations

import numpy as np

from ..errors import ConvergenceError, DomainError
from ..model import ModelParams, Permittivity, make_permittivity
from ..quadrature import integrate_exp_tail, integrate_unit
from ..scattering import reflection_eta
from .common import FreeEnergyReport, Representation

POLS = ("TE", "TM")


def phi(xi, params: ModelParams, perm: Permittivity, pol: str, rtol: float = 1e-13,
        atol: float = 1e-280):
    """phi_pol(xi) for an array of xi >= 0."""
    xi = np.asarray(xi, dtype=float)
    L = params.gap

    def g(u, x):
        eta = x - np.log(u) / (2 * L)
        r = reflection_eta(pol, x, eta, perm)
        return eta * np.log1p(-(r * r) * np.exp(-2 * x * L) * u) / (2 * L * u)

    val, err = integrate_unit(g, (xi,), rtol=rtol, atol=atol, what=f"phi_{pol}")
    return val, err


def matsubara_terms(params: ModelParams, perm: Permittivity, l, pols=POLS, rtol=1e-13):
    """sum_pol phi_pol(xi_l) for integer array l (unprimed, unscaled)."""
    l = np.asarray(l)
    xi = 2 * np.pi * params.temperature * l
    tot = np.zeros(xi.shape)
    err = np.zeros(xi.shape)
    for pol in pols:
        v, e = phi(xi, params, perm, pol, rtol)
        tot = tot + v
        err = err + e
    return tot, err


def _resolve_perm(params, perm_kind):
    if isinstance(perm_kind, Permittivity):
        return perm_kind
    return make_permittivity(perm_kind, params)


def matsubara_sum(params: ModelParams, perm, l_max: int | None = None, pols=POLS,
                  rel_tol: float = 1e-12, block: int = 64, max_terms: int = 200000):
    """(T/2pi) sum'_l sum_pol phi(xi_l) with a geometric tail estimate.

    Returns (value, error_estimate, l_max_used).  With ``l_max`` given the sum
    is truncated there (used to keep the truncation fixed across nearby T).
    """
    if not params.temperature > 0:
        raise DomainError("Matsubara sum requires T > 0")
    perm = _resolve_perm(params, perm)
    T = params.temperature
    if l_max is not None:
        l = np.arange(0, l_max + 1)
        terms, qerr = matsubara_terms(params, perm, l, pols)
        terms[0] *= 0.5
        tail = _geometric_tail(terms)
        tail = 0.0 if tail is None else tail
        return T / (2 * np.pi) * _pairwise(terms), T / (2 * np.pi) * (abs(tail) + qerr.sum()), l_max
    parts = []
    errs = []
    start = 0
    while True:
        if start > max_terms:
            raise ConvergenceError(f"Matsubara terms have not decayed by l = {start}")
        l = np.arange(start, start + block)
        terms, qerr = matsubara_terms(params, perm, l, pols)
        if start == 0:
            terms[0] *= 0.5
        parts.append(terms)
        errs.append(qerr)
        allt = np.concatenate(parts)
        total = _pairwise(allt)
        tail = _geometric_tail(allt)
        if tail is not None and abs(tail) <= rel_tol * max(abs(total), 1e-300):
            lm = int(l[-1])
            break
        if tail is None and np.all(allt[-8:] == 0):
            lm = int(l[-1])
            tail = 0.0
            break
        start += block
        block = min(2 * block, 4096)
    qe = float(np.concatenate(errs).sum())
    return (T / (2 * np.pi) * (total + tail), T / (2 * np.pi) * (abs(tail) + qe), lm)


def _geometric_tail(terms):
    t = terms[-6:]
    if t.size < 6 or np.any(t == 0):
        return None
    ratios = t[1:] / t[:-1]
    rho = float(np.max(ratios))
    if not 0 < rho < 1:
        return None
    return float(t[-1] * rho / (1 - rho))


def _pairwise(x):
    # numpy's sum is already pairwise for contiguous arrays, which fixes the
    # summation order independently of how the terms were produced.
    return float(np.sum(np.ascontiguousarray(x)))


def vacuum_energy(params: ModelParams, perm, pols=POLS, rtol: float = 1e-12):
    """E0 = (1/4pi^2) int_0^inf d xi sum_pol phi_pol(xi), as (value, error)."""
    perm = _resolve_perm(params, perm)
    L = params.gap

    # phi is O(1/L^2); an absolute floor keeps quadrature nodes at tiny xi
    # (where the Drude TE integrand is ~1e-40 and unresolvable in u) from
    # demanding relative accuracy
    floor = 1e-17 / L ** 2

    def f(xi):
        tot = 0.0
        for pol in pols:
            v, _ = phi(xi, params, perm, pol, atol=floor)
            tot = tot + v
        return tot

    val, err = integrate_exp_tail(f, 0.0, 2 * L, rtol=rtol, what="vacuum energy")
    return float(val) / (4 * np.pi ** 2), float(err) / (4 * np.pi ** 2)


def matsubara_free_energy(params: ModelParams, perm_kind="plasma", l_max: int | None = None,
                          pols=POLS, rel_tol: float = 1e-12, with_vacuum: bool = True
                          ) -> FreeEnergyReport:
    """Free energy per unit area from the Lifshitz formula.

    Parameters
    ----------
    params : ModelParams
        T must be positive.
    perm_kind : str or Permittivity
        ``"plasma"``, ``"drude"`` or ``"vacuum"``.
    l_max : int, optional
        Fixed truncation; by default the sum stops once the geometric tail
        estimate falls below ``rel_tol``.
    pols : tuple
        Polarisations to include.

    Examples
    --------
    >>> from lifshitz_lab.model import ModelParams
    >>> rep = matsubara_free_energy(ModelParams(omega_p=1.0, temperature=0.5), "vacuum")
    >>> rep.total
    0.0
    """
    perm = _resolve_perm(params, perm_kind)
    F, ferr, lm = matsubara_sum(params, perm, l_max, pols, rel_tol)
    rep = FreeEnergyReport(Representation.MATSUBARA, params, perm.kind.value,
                           thermal_part=0.0, error_estimate=ferr)
    rep.breakdown["l_max"] = lm
    rep.breakdown["matsubara_sum"] = F
    if with_vacuum:
        E0, e0err = vacuum_energy(params, perm, pols)
        rep.vacuum_part = E0
        rep.thermal_part = F - E0
        rep.error_estimate = ferr + e0err
    else:
        rep.thermal_part = None
    rep.total = F
    for pol in pols:
        rep.breakdown[f"sum_{pol}"] = matsubara_sum(params, perm, lm, (pol,))[0] \
            if len(pols) > 1 else F
    return rep
