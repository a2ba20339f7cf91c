"""Quadrature helpers.

Two building blocks cover every integral in the package:

* fixed Gauss-Legendre panels (``numpy.polynomial.legendre.leggauss``) for
  oscillatory integrands on finite, piecewise-graded intervals;
* ``scipy.integrate.tanhsinh`` on the unit interval, after mapping
  exponentially decaying semi-infinite integrals with u = exp(-rate*(x-a)).
  The double-exponential rule tolerates the logarithmic endpoint behaviour
  that this substitution produces at u = 0.
"""
from __future__ import annotations

from functools import lru_cache

import numpy as np
from scipy.integrate import tanhsinh

from .errors import ConvergenceError


@lru_cache(maxsize=32)
def _leggauss(n: int):
    x, w = np.polynomial.legendre.leggauss(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def gauss_legendre_panels(breaks, n: int = 24):
    """Nodes and weights of an n-point Gauss-Legendre rule on each panel.

    Parameters
    ----------
    breaks : array_like
        Ascending panel boundaries.
    n : int
        Nodes per panel.

    Returns
    -------
    nodes, weights : ndarray
    """
    b = np.asarray(breaks, dtype=float)
    if b.ndim != 1 or b.size < 2 or np.any(np.diff(b) <= 0):
        raise ValueError("breaks must be a strictly ascending sequence of >= 2 points")
    x, w = _leggauss(n)
    half = 0.5 * np.diff(b)
    mid = 0.5 * (b[1:] + b[:-1])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


def graded_breaks(upper: float, width: float, first: float = 1e-6, n_grade: int = 12):
    """Panel boundaries on [0, upper]: geometric grading near 0, then uniform width."""
    if upper <= 0:
        raise ValueError("upper must be positive")
    g_end = min(0.5 * width, upper)
    grade = np.geomspace(min(first, 0.5 * g_end), g_end, n_grade)
    n_uni = max(1, int(np.ceil((upper - g_end) / width)))
    uni = np.linspace(g_end, upper, n_uni + 1)[1:] if upper > g_end else []
    return np.concatenate([[0.0], grade, uni])


def integrate_unit(f, args=(), rtol: float = 1e-12, atol: float = 0.0, what: str = "integral"):
    """Vectorised integral of ``f(u, *args)`` over u in (0, 1).

    ``args`` are broadcast against each other, so one call evaluates a whole
    family of integrals.  Raises ConvergenceError if any member fails.

    The first error estimate is taken at level 3: stopping at level 2 was
    seen to report rtol 1e-12 with an actual error of 2e-9.
    """
    res = tanhsinh(f, 0.0, 1.0, args=tuple(args), rtol=rtol, atol=atol, minlevel=3,
                   maxlevel=12)
    ok = np.asarray(res.success)
    if not np.all(ok):
        raise ConvergenceError(f"{what}: tanh-sinh quadrature did not converge "
                               f"({np.count_nonzero(~ok)} of {ok.size} members)")
    return res.integral, res.error


def integrate_exp_tail(f, a, rate, args=(), rtol: float = 1e-12, atol: float = 0.0,
                       what: str = "integral"):
    """Integral of ``f(x, *args)`` over x in (a, inf) for integrands ~ exp(-rate*x).

    Uses x = a - log(u)/rate, dx = du/(rate*u).
    """
    a = np.asarray(a, dtype=float)

    def g(u, a_, *rest):
        x = a_ - np.log(u) / rate
        return f(x, *rest) / (rate * u)

    return integrate_unit(g, (a, *args), rtol=rtol, atol=atol, what=what)
