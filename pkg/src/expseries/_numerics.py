"""Small shared numerical helpers."""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

# Below this rate the closed form (e^{rt}-1)/r loses digits to cancellation.
_RATE_SWITCH = 1e-12


def exp_integral(rate: float, t: float) -> float:
    """Integral of exp(rate*s) over s in [0, t].

    Uses the three-term series for tiny rates so the rate -> 0 limit (= t)
    is reproduced without cancellation.
    """
    x = rate * t
    if abs(rate) < _RATE_SWITCH:
        return t * (1.0 + 0.5 * x + x * x / 6.0)
    return math.expm1(x) / rate


def exp_integral_grid(rates: np.ndarray, times: np.ndarray) -> np.ndarray:
    """``exp_integral`` broadcast over a time grid (rows) and rates (columns)."""
    rates = np.asarray(rates, dtype=float)
    times = np.asarray(times, dtype=float)
    x = np.multiply.outer(times, rates)
    small = np.abs(rates) < _RATE_SWITCH
    safe = np.where(small, 1.0, rates)
    closed = np.expm1(x) / safe
    series = times[:, None] * (1.0 + 0.5 * x + x * x / 6.0)
    return np.where(small[None, :], series, closed)


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(16)


def _gl_panel(f: Callable[[np.ndarray], np.ndarray], a: float, b: float) -> float:
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    return half * float(np.dot(_GL_WEIGHTS, f(mid + half * _GL_NODES)))


def adaptive_gauss_legendre(
    f: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    tol: float = 1e-10,
    max_depth: int = 48,
) -> float:
    """Adaptive panel-splitting Gauss-Legendre quadrature (16-node panels).

    ``f`` must accept a numpy array of evaluation points. A panel is accepted
    when its value agrees with the sum of its two halves to within ``tol``.
    """
    if a == b:
        return 0.0

    def recurse(lo: float, hi: float, whole: float, depth: int) -> float:
        mid = 0.5 * (lo + hi)
        left = _gl_panel(f, lo, mid)
        right = _gl_panel(f, mid, hi)
        if depth >= max_depth or abs(left + right - whole) <= tol:
            return left + right
        return recurse(lo, mid, left, depth + 1) + recurse(mid, hi, right, depth + 1)

    return recurse(a, b, _gl_panel(f, a, b), 0)
