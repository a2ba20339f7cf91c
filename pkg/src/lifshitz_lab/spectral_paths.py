"""Complex-plane curves traced under rotation of the integration contour.

Two families of curves are handled:

* the dispersion roots omega_a(k) along the rotated momentum k = xi*exp(i*alpha)
  (k**2 = k_par**2 + (xi*exp(i*alpha))**2), followed in xi by nearest
  continuation;
* kappa(z) = sqrt(z**2 + Omega**2/(1 + gamma/z) + k_par**2) along the rotated
  frequency z = xi*exp(-i*alpha), with the square-root sign carried
  continuously.

For gamma > 0 the omega1 and omega3 curves touch at a critical rotation
alpha*, beyond which the start and end points are paired differently.  The
kappa curve develops a self-intersection whose loop keeps a finite area as
gamma -> 0.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .dispersion import _PAIRS, cubic_roots, match_roots
from .errors import (BranchError, DegenerateLoopError, DomainError, NoCollisionError,
                     TrackingLostError)
from .model import ModelParams

BRANCHES = ("omega1", "omega2", "omega3")


class EventKind(enum.Enum):
    BRANCH_COLLISION = "branch_collision"
    CUSP = "cusp"
    SELF_INTERSECTION = "self_intersection"
    LOOP_DETECTED = "loop_detected"


@dataclass(frozen=True)
class PathEvent:
    kind: EventKind
    location: complex
    parameter_value: float
    alpha_at_event: float
    parameter_pair: tuple = ()   # (xi_a, xi_b) for self-intersections
    segment_pair: tuple = ()     # indices (i, j) of the crossing segments


@dataclass
class ComplexPath:
    """Samples of a parametric complex curve with its defining metadata."""

    parameter_samples: np.ndarray
    points: np.ndarray
    meta: dict = field(default_factory=dict)
    events: list = field(default_factory=list)

    def __post_init__(self):
        self.parameter_samples = np.asarray(self.parameter_samples, dtype=float)
        self.points = np.asarray(self.points, dtype=complex)
        if self.parameter_samples.shape != self.points.shape or self.points.ndim != 1:
            raise ValueError("parameter_samples and points must be 1-D arrays of equal length")
        if np.any(np.diff(self.parameter_samples) <= 0):
            raise ValueError("parameter samples must be strictly ascending")
        if not np.all(np.isfinite(self.points)):
            raise ValueError("path points must be finite")

    def __len__(self):
        return self.points.size

    @property
    def diameter(self) -> float:
        re, im = self.points.real, self.points.imag
        return float(np.hypot(np.ptp(re), np.ptp(im)))


# ----------------------------------------------------------------------------
# omega_a along a rotated momentum
# ----------------------------------------------------------------------------

def _K_of(xi, alpha, k_par):
    return k_par ** 2 + (np.asarray(xi) * np.exp(1j * alpha)) ** 2


def _initial_triple(params, k_par, alpha):
    # xi = 0: identical for every alpha, labelled by continuity in gamma.
    from .dispersion import track_in_gamma
    return track_in_gamma(np.array([_K_of(0.0, alpha, k_par)]), params.gamma,
                          params.omega_p)[0]


def _default_xi_grid(xi_max, n=512, xi_min=1e-4):
    return np.concatenate([[0.0], np.geomspace(xi_min, xi_max, n)])


def _track(params, k_par, alpha, xi, start, max_depth=20):
    """Nearest-continuation tracking with bisection of ambiguous steps."""
    g, W = params.gamma, params.omega_p
    xs = [float(xi[0])]
    pts = [start]
    cur = start
    todo = list(xi[1:][::-1])
    depth = {}
    flagged = []
    while todo:
        x = todo.pop()
        new = cubic_roots(np.array(_K_of(x, alpha, k_par)), g, W)
        matched, ratio = match_roots(cur, new)
        step = float(np.max(np.abs(matched - cur)))
        sep = float(np.min(np.abs(matched[_PAIRS[:, 0]] - matched[_PAIRS[:, 1]])))
        d = depth.get(x, 0)
        if (ratio > 0.25 or step > 0.5 * max(sep, 1e-300)) and d < max_depth:
            mid = 0.5 * (xs[-1] + x)
            if mid > xs[-1]:
                depth[x] = d + 1
                depth[mid] = d + 1
                todo.extend([x, mid])
                continue
        if d >= max_depth and ratio > 0.25:
            flagged.append(x)
        scale = max(abs(x - xs[-1]) * max(1.0, abs(x)), 1e-12)
        if step > 10 * max(scale, np.max(np.abs(cur))):
            raise TrackingLostError(f"continuation step {step:.3g} at xi={x:.6g} too large")
        cur = matched
        xs.append(x)
        pts.append(cur)
    return np.array(xs), np.array(pts), flagged


def trace_omega_paths(params: ModelParams, k_par: float = 0.0, alpha: float = 0.0,
                      xi_max: float | None = None, xi_grid=None):
    """The three root curves omega_a(xi) for k = xi*exp(i*alpha).

    Parameters
    ----------
    params : ModelParams
    k_par : float
        Fixed parallel momentum added in quadrature (0 reproduces the
        k-plane plots).
    alpha : float
        Rotation angle in [0, pi/2].
    xi_max : float, optional
        End of the xi range; default chosen so that |omega1| > 5*Omega.

    Returns
    -------
    dict
        ``{"omega1": ComplexPath, "omega2": ..., "omega3": ...}``.
    """
    if not 0 <= alpha <= np.pi / 2 + 1e-15:
        raise DomainError("alpha must lie in [0, pi/2]")
    if xi_grid is None:
        if xi_max is None:
            xi_max = 6.0 * params.omega_p + 2.0 * abs(params.gamma) + k_par
        xi_grid = _default_xi_grid(xi_max)
    xi = np.asarray(xi_grid, dtype=float)
    start = _initial_triple(params, k_par, alpha)
    xs, pts, flagged = _track(params, k_par, alpha, xi, start)
    out = {}
    for i, lab in enumerate(BRANCHES):
        path = ComplexPath(xs, pts[:, i], {"alpha": float(alpha), "gamma": params.gamma,
                                         "k_par": float(k_par), "omega_p": params.omega_p,
                                         "branch": lab})
        out[lab] = path
    sep13 = np.abs(pts[:, 0] - pts[:, 2])
    j = int(np.argmin(sep13[1:])) + 1
    ev = PathEvent(EventKind.BRANCH_COLLISION, complex(0.5 * (pts[j, 0] + pts[j, 2])),
                   float(xs[j]), float(alpha))
    out["omega1"].meta["min_separation_13"] = float(sep13[j])
    if flagged:
        out["omega1"].events.append(ev)
    return out


def endpoint_pairing_changed(params: ModelParams, alpha: float, k_par: float = 0.0,
                             xi_max: float | None = None) -> bool:
    """True when the curve starting at omega1(xi = 0) no longer ends near +k."""
    paths = trace_omega_paths(params, k_par, alpha, xi_max)
    p1 = paths["omega1"]
    k_end = np.sqrt(_K_of(p1.parameter_samples[-1], alpha, k_par))
    return bool(abs(p1.points[-1] - k_end) > 0.25 * abs(k_end))


def find_critical_alpha(params: ModelParams, k_par: float = 0.0, tol: float = 1e-5,
                        xi_max: float | None = None):
    """Critical rotation alpha* at which omega1 and omega3 touch.

    Bisection in alpha on whether the endpoint pairing has changed; ``tol``
    is the bracket width in units of pi/2.  Returns ``(alpha_star, event)``.
    """
    if not abs(params.gamma) > 0:
        raise NoCollisionError("plasma branches never touch (gamma = 0)")
    lo, hi = 0.0, np.pi / 2
    if endpoint_pairing_changed(params, lo, k_par, xi_max):
        raise NoCollisionError("pairing already changed at alpha = 0")
    if not endpoint_pairing_changed(params, hi, k_par, xi_max):
        raise NoCollisionError("no branch exchange for alpha <= pi/2")
    while (hi - lo) / (np.pi / 2) > tol:
        mid = 0.5 * (lo + hi)
        if endpoint_pairing_changed(params, mid, k_par, xi_max):
            hi = mid
        else:
            lo = mid
    a_star = 0.5 * (lo + hi)
    paths = trace_omega_paths(params, k_par, lo, xi_max)
    p1, p3 = paths["omega1"], paths["omega3"]
    sep = np.abs(p1.points - p3.points)
    j = int(np.argmin(sep[1:])) + 1
    ev = PathEvent(EventKind.BRANCH_COLLISION, complex(0.5 * (p1.points[j] + p3.points[j])),
                   float(p1.parameter_samples[j]), float(a_star))
    return float(a_star), ev


def critical_alpha_from_discriminant(params: ModelParams):
    """alpha* for k_par = 0 from the double root of the cubic in K.

    The discriminant of the cubic in omega is a quadratic polynomial in K; a
    double root at K_c occurs on the ray K = xi**2*exp(2i*alpha) for
    alpha = arg(K_c)/2.  Returns the candidates in [0, pi/2] of the root
    with Im K_c > 0 (the side swept by the rotation).
    """
    g = complex(params.gamma)
    W2 = params.omega_p ** 2
    # Discriminant of w^3 + b w^2 + c w + d with b = i g, c = -(K + W2), d = -i g K.
    # Expand as polynomial in K by sampling (it has degree 4 in K).
    Ks = np.arange(7, dtype=float)
    from .dispersion import discriminant
    vals = discriminant(Ks, g, params.omega_p)
    coef = np.polyfit(Ks, vals, 4)
    coef[np.abs(coef) < 1e-13 * np.max(np.abs(coef))] = 0
    rts = np.roots(np.trim_zeros(coef, "f"))
    rts = rts[np.abs(rts) > 1e-12]
    out = []
    for K in rts:
        a = 0.5 * np.angle(K)
        if 0 < a <= np.pi / 2 + 1e-12:
            out.append((float(a), complex(K)))
    return sorted(out)


# ----------------------------------------------------------------------------
# kappa along a rotated frequency
# ----------------------------------------------------------------------------

def kappa_squared(z, params: ModelParams, k_par: float):
    z = np.asarray(z, dtype=complex)
    return z * z + params.omega_p ** 2 * z / (z + params.gamma) + k_par ** 2


def _continue_sqrt(v):
    """sqrt(v) with the sign chosen sample by sample for continuity."""
    r = np.sqrt(v)
    out = np.empty_like(r)
    out[0] = r[0]
    for i in range(1, r.size):
        out[i] = r[i] if abs(r[i] - out[i - 1]) <= abs(r[i] + out[i - 1]) else -r[i]
    return out


def default_kappa_grid(params: ModelParams, xi_max: float = 20.0, n: int = 512):
    """Log-spaced xi samples reaching below 1e-3*gamma, where the loop forms."""
    g = abs(params.gamma)
    xi_min = min(1e-4, 1e-3 * g) if g > 0 else 1e-4
    return np.geomspace(xi_min, xi_max, n)


def trace_kappa_path(params: ModelParams, k_par: float, alpha: float, xi_grid=None,
                     rel_spacing: float = 0.002, max_levels: int = 20) -> ComplexPath:
    """kappa(xi*exp(-i*alpha)) with adaptive refinement of the xi samples.

    Intervals whose end points are further apart than ``rel_spacing`` times the
    path diameter are bisected (in log xi) up to ``max_levels`` times.
    """
    if not 0 <= alpha <= np.pi / 2 + 1e-15:
        raise DomainError("alpha must lie in [0, pi/2]")
    xi = default_kappa_grid(params) if xi_grid is None else np.asarray(xi_grid, dtype=float)
    if np.any(xi <= 0):
        raise DomainError("xi samples must be positive")
    ph = np.exp(-1j * alpha)

    def evaluate(x):
        return _continue_sqrt(kappa_squared(x * ph, params, k_par))

    k = evaluate(xi)
    for _ in range(max_levels):
        diam = np.hypot(np.ptp(k.real), np.ptp(k.imag))
        gap = np.abs(np.diff(k))
        bad = gap > rel_spacing * diam
        if not np.any(bad):
            break
        mids = np.sqrt(xi[:-1][bad] * xi[1:][bad])
        xi = np.sort(np.concatenate([xi, mids]))
        k = evaluate(xi)
    else:
        gap = np.abs(np.diff(k))
        diam = np.hypot(np.ptp(k.real), np.ptp(k.imag))
        if np.any(gap > 10 * rel_spacing * diam):
            raise BranchError("kappa path did not resolve after refinement")
    return ComplexPath(xi, k, {"alpha": float(alpha), "gamma": params.gamma,
                               "k_par": float(k_par), "omega_p": params.omega_p,
                               "branch": "kappa"})


# ----------------------------------------------------------------------------
# geometry
# ----------------------------------------------------------------------------

def _segment_crossings(p, i_idx, j_idx):
    """Proper crossings between segments i and j (arrays of start indices)."""
    a, b = p[i_idx], p[i_idx + 1]
    c, d = p[j_idx], p[j_idx + 1]
    r = b - a
    s = d - c
    denom = (r.conjugate() * s).imag
    qp = c - a
    with np.errstate(divide="ignore", invalid="ignore"):
        t = (qp.conjugate() * s).imag / denom
        u = (qp.conjugate() * r).imag / denom
    ok = (np.abs(denom) > 0) & (t >= 0) & (t <= 1) & (u >= 0) & (u <= 1)
    return ok, t, u


def _bbox(p0, p1):
    return (np.minimum(p0.real, p1.real), np.maximum(p0.real, p1.real),
            np.minimum(p0.imag, p1.imag), np.maximum(p0.imag, p1.imag))


def find_self_intersections(path: ComplexPath, block: int = 64):
    """All proper crossings of non-adjacent segments, ordered by the first index.

    Segments are grouped into blocks whose bounding boxes are compared first,
    so only overlapping block pairs are tested segment by segment.
    """
    p = path.points
    n = p.size - 1
    if n < 3:
        return []
    starts = np.arange(0, n, block)
    ends = np.minimum(starts + block, n)
    bx = np.array([[p[s:e + 1].real.min(), p[s:e + 1].real.max(),
                    p[s:e + 1].imag.min(), p[s:e + 1].imag.max()] for s, e in zip(starts, ends)])
    hits = []
    for bi in range(starts.size):
        for bj in range(bi, starts.size):
            if (bx[bi, 0] > bx[bj, 1] or bx[bj, 0] > bx[bi, 1]
                    or bx[bi, 2] > bx[bj, 3] or bx[bj, 2] > bx[bi, 3]):
                continue
            ii = np.arange(starts[bi], ends[bi])
            jj = np.arange(starts[bj], ends[bj])
            I, J = np.meshgrid(ii, jj, indexing="ij")
            keep = J > I + 1
            I, J = I[keep], J[keep]
            if I.size == 0:
                continue
            x0, x1, y0, y1 = _bbox(p[I], p[I + 1])
            u0, u1, v0, v1 = _bbox(p[J], p[J + 1])
            pre = (x0 <= u1) & (u0 <= x1) & (y0 <= v1) & (v0 <= y1)
            I, J = I[pre], J[pre]
            if I.size == 0:
                continue
            ok, t, _u = _segment_crossings(p, I, J)
            for i, j, tt in zip(I[ok], J[ok], t[ok]):
                hits.append((int(i), int(j), float(tt)))
    hits.sort()
    return hits


def detect_self_intersection(path: ComplexPath, tol_rel: float = 1e-8):
    """First self-intersection of the path, or None.

    The crossing parameters are interpolated linearly inside the two
    crossing segments; their images agree to ``tol_rel`` times the path
    diameter by construction of the segment intersection.
    """
    if len(path) < 4:
        raise DomainError("self-intersection test needs at least 4 points")
    hits = find_self_intersections(path)
    if not hits:
        return None
    i, j, t = hits[0]
    p, x = path.points, path.parameter_samples
    loc = p[i] + t * (p[i + 1] - p[i])
    # parameter of the second branch at the same point
    r = p[j + 1] - p[j]
    u = float(np.real((loc - p[j]) * np.conj(r)) / max(abs(r) ** 2, 1e-300))
    xa = x[i] + t * (x[i + 1] - x[i])
    xb = x[j] + u * (x[j + 1] - x[j])
    return PathEvent(EventKind.SELF_INTERSECTION, complex(loc), float(xa),
                     float(path.meta.get("alpha", np.nan)), (float(xa), float(xb)), (i, j))


@dataclass(frozen=True)
class LoopMetrics:
    area: float          # signed (counter-clockwise positive)
    perimeter: float
    centroid: complex

    @property
    def abs_area(self):
        return abs(self.area)


def loop_metrics(path: ComplexPath, event: PathEvent) -> LoopMetrics:
    """Shoelace area, perimeter and centroid of the loop closed at ``event``."""
    if event.kind is not EventKind.SELF_INTERSECTION or not event.segment_pair:
        raise DomainError("loop_metrics needs a self-intersection event of this path")
    i, j = event.segment_pair
    ring = np.concatenate([[event.location], path.points[i + 1:j + 1], [event.location]])
    x, y = ring.real, ring.imag
    cross = x[:-1] * y[1:] - x[1:] * y[:-1]
    area = 0.5 * np.sum(cross)
    if abs(area) < 1e-14:
        raise DegenerateLoopError(f"loop area {area:.3g} below 1e-14")
    cx = np.sum((x[:-1] + x[1:]) * cross) / (6 * area)
    cy = np.sum((y[:-1] + y[1:]) * cross) / (6 * area)
    perim = float(np.sum(np.abs(np.diff(ring))))
    return LoopMetrics(float(area), perim, complex(cx, cy))


def detect_cusps(path: ComplexPath, angle: float = 0.9 * np.pi):
    """Samples where the tangent direction turns by more than ``angle``."""
    d = np.diff(path.points)
    turn = np.abs(np.angle(d[1:] / np.where(d[:-1] == 0, 1, d[:-1])))
    idx = np.nonzero(turn > angle)[0] + 1
    return [PathEvent(EventKind.CUSP, complex(path.points[i]), float(path.parameter_samples[i]),
                      float(path.meta.get("alpha", np.nan))) for i in idx]


def loop_area_sequence(params: ModelParams, gammas, k_par: float = 1.0,
                       alpha: float = np.pi / 2):
    """Loop areas of the kappa path for a sequence of gamma values."""
    rows = []
    for g in gammas:
        pth = trace_kappa_path(params.with_(gamma=float(g)), k_par, alpha)
        ev = detect_self_intersection(pth)
        if ev is None:
            rows.append((float(g), None, None))
            continue
        m = loop_metrics(pth, ev)
        rows.append((float(g), m.area, m.perimeter))
    return rows
