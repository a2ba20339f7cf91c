"""Frequencies of the Drude medium: roots of the dispersion cubic.

With K = k**2 the equation eps(omega)*omega**2 = k**2 becomes

    omega**3 + i*gamma*omega**2 - (K + Omega**2)*omega - i*gamma*K = 0.

In the plasma limit the roots are +-sqrt(Omega**2 + K) and 0.  They are
labelled omega1, omega2, omega3 by continuity in gamma from that limit;
omega3 is the over-damped root that runs from 0 (K = 0) to -i*gamma
(K -> infinity) on the imaginary axis.

Vieta on the monic cubic gives
omega1 + omega2 + omega3 = -i*gamma and omega1*omega2*omega3 = i*gamma*K.

>>> from lifshitz_lab.model import ModelParams
>>> r = solve_dispersion_cubic(ModelParams(omega_p=1.0, gamma=0.1), 0.5)
>>> abs(r.omega1 + r.omega2 + r.omega3 + 0.1j) < 1e-12
True
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .errors import ClassificationAmbiguousError, DomainError, UnsupportedOrderError
from .model import ModelParams

_PERMS = np.array(list(itertools.permutations(range(3))))


def cubic_coefficients(K, gamma, omega_p):
    """Monic coefficients (c2, c1, c0) of the dispersion cubic."""
    K = np.asarray(K, dtype=complex)
    g = complex(gamma)
    return 1j * g * np.ones_like(K), -(K + omega_p ** 2), -1j * g * K


def cubic_residual(omega, K, gamma, omega_p):
    """Relative residual |(w^2-K)(w+i*gamma) - w*Omega^2| / max(1, |w|^3)."""
    omega = np.asarray(omega, dtype=complex)
    K = np.asarray(K, dtype=complex)
    raw = (omega ** 2 - K) * (omega + 1j * complex(gamma)) - omega * omega_p ** 2
    return np.abs(raw) / np.maximum(1.0, np.abs(omega) ** 3)


def _polish(omega, K, gamma, omega_p, steps=2):
    c2, c1, c0 = cubic_coefficients(K, gamma, omega_p)
    c2, c1, c0 = (c[..., None] for c in (c2, c1, c0))
    for _ in range(steps):
        p = ((omega + c2) * omega + c1) * omega + c0
        dp = (3 * omega + 2 * c2) * omega + c1
        safe = np.abs(dp) > 1e-300
        step = np.where(safe, p / np.where(safe, dp, 1.0), 0.0)
        omega = omega - step
    return omega


def cubic_roots(K, gamma, omega_p):
    """Unordered roots of the cubic for an array of K.

    Companion-matrix eigenvalues followed by Newton polishing.  Returns an
    array of shape ``K.shape + (3,)``.
    """
    K = np.asarray(K, dtype=complex)
    c2, c1, c0 = cubic_coefficients(K, gamma, omega_p)
    comp = np.zeros(K.shape + (3, 3), dtype=complex)
    comp[..., 0, 0] = -c2
    comp[..., 0, 1] = -c1
    comp[..., 0, 2] = -c0
    comp[..., 1, 0] = 1.0
    comp[..., 2, 1] = 1.0
    roots = np.linalg.eigvals(comp)
    return _polish(roots, K, gamma, omega_p)


def match_roots(previous, current):
    """Reorder ``current`` (..., 3) so that each slot is nearest its ``previous`` value.

    Returns the reordered array and the cost ratio between the best and the
    second-best assignment (values near 1 signal an ambiguous step).
    """
    cand = current[..., _PERMS]                                 # (..., 6, 3)
    cost = np.sum(np.abs(cand - previous[..., None, :]), axis=-1)  # (..., 6)
    order = np.argsort(cost, axis=-1)
    best = order[..., 0]
    matched = np.take_along_axis(cand, best[..., None, None], axis=-2)[..., 0, :]
    c_sorted = np.take_along_axis(cost, order, axis=-1)
    ratio = c_sorted[..., 0] / np.maximum(c_sorted[..., 1], 1e-300)
    return matched, ratio


def plasma_roots(K, omega_p):
    w = np.sqrt(np.asarray(K, dtype=complex) + omega_p ** 2)
    return np.stack([w, -w, np.zeros_like(w)], axis=-1)


def track_in_gamma(K, gamma, omega_p, steps: int = 64, tol_collision=None):
    """Labelled roots at ``gamma`` by homotopy gamma' = s*gamma, s: 0 -> 1.

    Steps are halved (up to 20 times) where the assignment is ambiguous.
    A collision of two roots along the segment raises
    ClassificationAmbiguousError.
    """
    K = np.atleast_1d(np.asarray(K, dtype=complex))
    kmag = np.sqrt(np.abs(K))
    if tol_collision is None:
        tol_collision = 1e-6 * np.maximum(omega_p, kmag)
    cur = plasma_roots(K, omega_p)
    s_grid = list(np.linspace(0.0, 1.0, steps + 1)[1:])
    s_prev = 0.0
    depth = {s: 0 for s in s_grid}
    while s_grid:
        s = s_grid[0]
        new = cubic_roots(K, s * complex(gamma), omega_p)
        matched, ratio = match_roots(cur, new)
        if np.any(ratio > 0.5) and depth[s] < 20:
            mid = 0.5 * (s_prev + s)
            depth[mid] = depth[s] + 1
            s_grid.insert(0, mid)
            continue
        sep = np.min(np.abs(matched[..., _PAIRS[:, 0]] - matched[..., _PAIRS[:, 1]]), axis=-1)
        if np.any(sep < tol_collision):
            raise ClassificationAmbiguousError(
                f"roots collide within {np.max(tol_collision):.3g} along the gamma homotopy")
        cur = matched
        s_prev = s
        s_grid.pop(0)
    return cur


_PAIRS = np.array([[0, 1], [0, 2], [1, 2]])


@dataclass(frozen=True)
class RootTriple:
    """The three labelled roots at one momentum."""

    omega1: complex
    omega2: complex
    omega3: complex
    k: float
    gamma_used: complex
    residuals: tuple = field(default=(), compare=False)

    def as_array(self):
        return np.array([self.omega1, self.omega2, self.omega3])


def solve_dispersion_cubic(params: ModelParams, k: float, gamma_override=None,
                           steps: int = 64) -> RootTriple:
    """Roots of the dispersion cubic at real momentum k >= 0, labelled by continuity.

    Parameters
    ----------
    params : ModelParams
        Supplies Omega and gamma.
    k : float
        Momentum magnitude.
    gamma_override : complex, optional
        Replaces ``params.gamma``; complex values probe gamma*exp(i*alpha).
    """
    if not k >= 0:
        raise DomainError("k must be >= 0")
    g = params.gamma if gamma_override is None else complex(gamma_override)
    roots = track_in_gamma(np.array([k * k]), g, params.omega_p, steps=steps)[0]
    if complex(g).imag == 0 and abs(g) < 0.1 * params.omega_p:
        _check_sign_labels(roots, k)
    res = cubic_residual(roots, k * k, g, params.omega_p)
    return RootTriple(complex(roots[0]), complex(roots[1]), complex(roots[2]), float(k),
                      complex(g), tuple(float(r) for r in res))


def solve_dispersion_grid(params: ModelParams, k, gamma, steps: int = 64):
    """Labelled roots for an array of momenta at a single gamma; shape ``k.shape + (3,)``."""
    k = np.asarray(k, dtype=float)
    if np.any(k < 0):
        raise DomainError("k must be >= 0")
    out = track_in_gamma((k * k).ravel(), gamma, params.omega_p, steps=steps)
    return out.reshape(k.shape + (3,))


def _check_sign_labels(roots, k):
    # For small real damping the continuity labels must agree with the sign
    # pattern Re(omega1) > 0 > Re(omega2), Re(omega3) = 0.
    if k > 0 and not (roots[0].real > 0 > roots[1].real):
        raise ClassificationAmbiguousError("continuity labels disagree with sign classification")


def omega1_newton(K, gamma, omega_p, iters: int = 30):
    """omega1(gamma, K) for large arrays, seeded by the first-order series.

    Valid for |gamma| small compared with Omega (the regime where the series
    seed lies in the basin of omega1).  K may be complex.
    """
    K = np.asarray(K, dtype=complex)
    g = complex(gamma)
    w = np.sqrt(K + omega_p ** 2)
    om = w - 0.5j * g * omega_p ** 2 / w ** 2
    for _ in range(iters):
        p = ((om + 1j * g) * om - (K + omega_p ** 2)) * om - 1j * g * K
        dp = (3 * om + 2j * g) * om - (K + omega_p ** 2)
        step = p / dp
        om = om - step
        if np.all(np.abs(step) <= 1e-15 * np.maximum(1.0, np.abs(om))):
            break
    return om


def domega_dK(omega, K, gamma, omega_p):
    """Derivative of a root with respect to K = k**2 (implicit differentiation)."""
    g = complex(gamma)
    return (omega + 1j * g) / (2 * omega * (omega + 1j * g) + omega ** 2 - K - omega_p ** 2)


_LABELS = ("omega1", "omega2", "omega3")


@dataclass(frozen=True)
class SeriesExpansion:
    """Taylor coefficients of one root in powers of gamma."""

    root_label: str
    coefficients: tuple
    k: float
    omega_p: float

    def __call__(self, gamma):
        return sum(c * complex(gamma) ** n for n, c in enumerate(self.coefficients))


def perturbative_roots(params: ModelParams, k: float, order: int):
    """Series of omega1, omega2, omega3 in gamma up to ``order`` (0, 1 or 2).

    With w = sqrt(Omega**2 + k**2):

    * omega1 = w - (i/2) Omega^2/w^2 gamma - (1/8)(Omega^2 + 4k^2) Omega^2/w^5 gamma^2
    * omega2 = -conj(omega1) for real gamma, i.e. -w - (i/2) Omega^2/w^2 gamma + (1/8)(...) gamma^2
    * omega3 = -i k^2/w^2 gamma + 0 * gamma^2

    The second-order terms follow from substituting the ansatz into the cubic;
    the coefficient of omega1 is negative.
    """
    if order not in (0, 1, 2):
        raise UnsupportedOrderError(f"order must be 0, 1 or 2, got {order}")
    W2 = params.omega_p ** 2
    k2 = float(k) ** 2
    w = np.sqrt(W2 + k2)
    c1 = [w, -0.5j * W2 / w ** 2, -(W2 + 4 * k2) * W2 / (8 * w ** 5)]
    c2 = [-w, -0.5j * W2 / w ** 2, (W2 + 4 * k2) * W2 / (8 * w ** 5)]
    c3 = [0.0, -1j * k2 / w ** 2, 0.0]
    out = {}
    for lab, cs in zip(_LABELS, (c1, c2, c3)):
        out[lab] = SeriesExpansion(lab, tuple(complex(c) for c in cs[:order + 1]), float(k),
                                   params.omega_p)
    return out


@dataclass
class GammaProbe:
    """Root curves along gamma*exp(i*alpha) plus the first near-collision."""

    gamma: np.ndarray
    alpha: float
    roots: np.ndarray            # (n, 3), columns omega1, omega2, omega3
    min_separation: np.ndarray   # (n,)
    collision_gamma: float | None

    def paths(self):
        from .spectral_paths import ComplexPath
        return {lab: ComplexPath(self.gamma.copy(), self.roots[:, i].copy(),
                                 {"alpha": self.alpha, "branch": lab, "parameter": "gamma"})
                for i, lab in enumerate(_LABELS)}


def probe_convergence(params: ModelParams, k: float, alpha: float, gamma_grid,
                      tol_collision=None, refine: bool = True) -> GammaProbe:
    """Follow the labelled roots along gamma*exp(i*alpha) for the given moduli.

    A collision (two roots closer than ``tol_collision``, default
    1e-6*max(Omega, k)) is reported in ``collision_gamma``; the location is
    refined by bisection on the minimum pair separation.
    """
    g = np.asarray(gamma_grid, dtype=float)
    if g.ndim != 1 or g.size < 2 or np.any(np.diff(g) <= 0) or g[0] <= 0:
        raise DomainError("gamma_grid must be ascending and positive")
    if not 0 <= alpha < 2 * np.pi:
        raise DomainError("alpha must lie in [0, 2*pi)")
    if tol_collision is None:
        tol_collision = 1e-6 * max(params.omega_p, k)
    ph = np.exp(1j * alpha)
    K = complex(k * k)
    cur = track_in_gamma(np.array([K]), g[0] * ph, params.omega_p)[0]
    rows = [cur]
    for gi in g[1:]:
        new = cubic_roots(np.array(K), gi * ph, params.omega_p)
        cur, _ = match_roots(cur, new)
        rows.append(cur)
    roots = np.array(rows)
    sep = _min_sep(roots)
    collision = None
    hits = np.nonzero(sep < tol_collision)[0]
    if hits.size:
        collision = float(g[hits[0]])
    elif refine:
        # A collision can fall between grid points: look for an interior
        # minimum of the separation and shrink it by golden-section search.
        i = int(np.argmin(sep))
        if 0 < i < g.size - 1:
            def sep_at(x):
                return _min_sep(cubic_roots(np.array([K]), x * ph, params.omega_p))[0]
            a, b = g[i - 1], g[i + 1]
            gr = (np.sqrt(5) - 1) / 2
            c, d = b - gr * (b - a), a + gr * (b - a)
            for _ in range(200):
                if sep_at(c) < sep_at(d):
                    b = d
                else:
                    a = c
                c, d = b - gr * (b - a), a + gr * (b - a)
            xm = 0.5 * (a + b)
            if sep_at(xm) < max(tol_collision, 1e-7 * max(params.omega_p, k)) * 10:
                collision = float(xm)
    return GammaProbe(g, float(alpha), roots, sep, collision)


def _min_sep(roots):
    return np.min(np.abs(roots[..., _PAIRS[:, 0]] - roots[..., _PAIRS[:, 1]]), axis=-1)


def discriminant(K, gamma, omega_p):
    """Discriminant of the cubic in omega; zero where two roots coincide."""
    a = 1.0
    b, c, d = cubic_coefficients(K, gamma, omega_p)
    return (18 * a * b * c * d - 4 * b ** 3 * d + b ** 2 * c ** 2 - 4 * a * c ** 3
            - 27 * a ** 2 * d ** 2)
