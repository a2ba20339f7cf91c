"""Physical parameters and permittivity models.

Natural units hbar = c = k_B = 1 are used throughout; no quantity is rescaled
internally.  The Drude permittivity

    eps(omega) = 1 - Omega**2 / (omega * (omega + i*gamma))

reduces to the plasma model for gamma = 0.  On the imaginary axis,
omega = i*xi, it is real: eps(i*xi) = 1 + Omega**2 / (xi * (xi + gamma)).
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, replace

import numpy as np

from .errors import DomainError

#: Distance to a pole below which evaluation is refused.
POLE_TOL = 1e-12


@dataclass(frozen=True)
class ModelParams:
    """Plasma frequency, relaxation parameter, gap width and temperature."""

    omega_p: float = 1.0
    gamma: complex = 0.0
    gap: float = 1.0
    temperature: float = 0.0

    def __post_init__(self):
        if not self.omega_p > 0:
            raise DomainError(f"omega_p must be > 0, got {self.omega_p}")
        if not self.gap > 0:
            raise DomainError(f"gap must be > 0, got {self.gap}")
        if not self.temperature >= 0:
            raise DomainError(f"temperature must be >= 0, got {self.temperature}")
        g = complex(self.gamma)
        if g.imag == 0 and not g.real >= 0:
            raise DomainError(f"gamma must be >= 0, got {self.gamma}")
        if g.imag == 0:
            object.__setattr__(self, "gamma", float(g.real))

    @property
    def beta(self) -> float:
        if self.temperature <= 0:
            raise DomainError("beta = 1/T requires temperature > 0")
        return 1.0 / self.temperature

    def with_(self, **changes) -> "ModelParams":
        return replace(self, **changes)


@dataclass(frozen=True)
class TemperatureLaw:
    """gamma(T) = gamma1 * T**alpha_exp, vanishing at T = 0."""

    gamma1: float
    alpha_exp: float

    def __post_init__(self):
        if self.gamma1 < 0:
            raise DomainError("gamma1 must be >= 0")
        if not self.alpha_exp > 0:
            raise DomainError("alpha_exp must be > 0")

    def __call__(self, temperature: float) -> float:
        if temperature == 0:
            return 0.0
        return self.gamma1 * temperature ** self.alpha_exp


class PermittivityKind(enum.Enum):
    VACUUM = "vacuum"
    PLASMA = "plasma"
    DRUDE = "drude"
    CONSTANT = "constant"


@dataclass(frozen=True)
class Permittivity:
    """A permittivity model bound to a parameter record.

    ``CONSTANT`` is a frequency-independent eps (``eps_const``), used for
    the real-eps scattering checks.
    """

    kind: PermittivityKind
    params: ModelParams = ModelParams()
    eps_const: float = 1.0

    @classmethod
    def vacuum(cls):
        return cls(PermittivityKind.VACUUM)

    @classmethod
    def plasma(cls, params: ModelParams):
        return cls(PermittivityKind.PLASMA, params)

    @classmethod
    def drude(cls, params: ModelParams):
        return cls(PermittivityKind.DRUDE, params)

    @classmethod
    def constant(cls, eps: float):
        return cls(PermittivityKind.CONSTANT, eps_const=float(eps))

    @property
    def gamma(self) -> complex:
        return self.params.gamma if self.kind is PermittivityKind.DRUDE else 0.0

    @property
    def omega_p(self) -> float:
        if self.kind in (PermittivityKind.PLASMA, PermittivityKind.DRUDE):
            return self.params.omega_p
        return 0.0

    def as_plasma(self) -> "Permittivity":
        if self.kind is PermittivityKind.DRUDE:
            return Permittivity.plasma(self.params.with_(gamma=0.0))
        return self


def make_permittivity(kind: str | PermittivityKind, params: ModelParams) -> Permittivity:
    kind = PermittivityKind(kind)
    if kind is PermittivityKind.DRUDE and params.gamma == 0:
        return Permittivity(PermittivityKind.DRUDE, params)
    return Permittivity(kind, params)


def eval_permittivity_real(perm: Permittivity, omega):
    """eps(omega) at (complex) frequency omega; raises on the poles 0 and -i*gamma."""
    omega = np.asarray(omega, dtype=complex)
    if perm.kind is PermittivityKind.VACUUM:
        return _like(np.ones_like(omega), omega)
    if perm.kind is PermittivityKind.CONSTANT:
        return _like(np.full_like(omega, perm.eps_const), omega)
    wp2 = perm.omega_p ** 2
    g = perm.gamma
    scale = max(perm.omega_p, abs(g), 1.0)
    if np.any(np.abs(omega) < POLE_TOL * scale) or np.any(np.abs(omega + 1j * g) < POLE_TOL * scale):
        raise DomainError("permittivity evaluated at a pole (omega = 0 or omega = -i*gamma)")
    return _like(1.0 - wp2 / (omega * (omega + 1j * g)), omega)


def eval_permittivity_imag(perm: Permittivity, xi):
    """eps(i*xi) for real xi >= 0 (xi = 0 only without damping)."""
    xi_arr = np.asarray(xi, dtype=float)
    if np.any(xi_arr < 0):
        raise DomainError("xi must be >= 0")
    if perm.kind is PermittivityKind.VACUUM:
        return _like(np.ones_like(xi_arr), xi_arr)
    if perm.kind is PermittivityKind.CONSTANT:
        return _like(np.full_like(xi_arr, perm.eps_const), xi_arr)
    if np.any(xi_arr <= POLE_TOL * perm.omega_p):
        raise DomainError("eps(i*xi) diverges at xi = 0 for plasma/Drude models")
    wp2 = perm.omega_p ** 2
    return _like(1.0 + wp2 / (xi_arr * (xi_arr + perm.gamma)), xi_arr)


def susceptibility_xi2(perm: Permittivity, xi):
    """(eps(i*xi) - 1) * xi**2, finite at xi = 0.

    Equal to Omega**2 * xi / (xi + gamma) for Drude (Omega**2 for plasma).
    ``xi`` may be complex, which gives the analytic continuation used by the
    Abel-Plana representation.
    """
    xi = np.asarray(xi)
    if perm.kind is PermittivityKind.VACUUM:
        return _like(np.zeros_like(xi, dtype=np.result_type(xi, float)), xi)
    if perm.kind is PermittivityKind.CONSTANT:
        return _like((perm.eps_const - 1.0) * xi * xi, xi)
    wp2 = perm.omega_p ** 2
    g = perm.gamma
    if g == 0:
        return _like(np.full(xi.shape, wp2, dtype=np.result_type(xi, float)), xi)
    return _like(wp2 * xi / (xi + g), xi)


def inverse_permittivity_imag(perm: Permittivity, xi):
    """1/eps(i*xi), finite everywhere including xi = 0 (where it is 0 for metals).

    Drude: xi*(xi + gamma)/(xi*(xi + gamma) + Omega**2).  ``xi`` may be complex.
    """
    xi = np.asarray(xi)
    if perm.kind is PermittivityKind.VACUUM:
        return _like(np.ones(xi.shape, dtype=np.result_type(xi, float)), xi)
    if perm.kind is PermittivityKind.CONSTANT:
        return _like(np.full(xi.shape, 1.0 / perm.eps_const, dtype=np.result_type(xi, float)), xi)
    a = xi * (xi + perm.gamma)
    return _like(a / (a + perm.omega_p ** 2), xi)


def _like(value, ref):
    return value[()] if np.ndim(ref) == 0 else value
