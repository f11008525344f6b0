"""Taylor re-expansion of exponential sums with explicit remainder certificates.

For ``phi(t) = sum_j alpha_j exp(-lambda_j t)`` with all ``lambda_j > 0`` the
function is analytic on (0, inf): around any center ``tau > 0``,

    phi(t) = sum_n b_n (t - tau)^n,
    b_n    = sum_j alpha_j e^{-lambda_j tau} (-lambda_j)^n / n!,

valid on ``(0, 2 tau)``. Termwise ``e^{-lambda tau} lambda^n <= (n/(e tau))^n``
and, with the factorial lower bound ``n! >= sqrt(2 pi n) (n/e)^n``, the
absolute coefficients obey the envelope

    a_n <= S0 / (tau^n sqrt(2 pi n)),   S0 = sum_j |alpha_j|.

Summing the geometric tail with the square-root factor frozen at its largest
value gives the fully explicit enclosure implemented here:

    |phi(t) - sum_{j<=n} b_j (t - tau)^j|
        <= S0 / sqrt(2 pi (n+1)) * r^{n+1} / (1 - r),   r = |t - tau| / tau.

The 1/(1-r) factor is kept (rather than collapsing the geometric tail to its
first term) so the bound is rigorous, not merely an asymptotic rate.
Coefficients are accumulated by the per-term update
``term <- term * (-lambda) / (n+1)``; no factorial is ever formed, so orders
beyond 170 do not overflow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .series import DirichletSeries, SeriesValue, _fsum, _require_finite

_TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class TaylorExpansion:
    """Coefficients ``b_0..b_N`` around ``center`` with certified envelopes.

    ``coeff_bounds[n]`` dominates ``|b_n|`` including the contribution of any
    certified tail, and ``sum_abs_alpha`` is the total absolute-coefficient
    mass ``S0`` (explicit terms plus tail bound) that feeds the remainder
    certificate.
    """

    center: float
    coeffs: tuple[float, ...]
    coeff_bounds: tuple[float, ...]
    sum_abs_alpha: float

    def __post_init__(self) -> None:
        if self.center <= 0 or not math.isfinite(self.center):
            raise ValueError("center must be a positive finite real")
        if len(self.coeffs) != len(self.coeff_bounds) or not self.coeffs:
            raise ValueError("coeffs and coeff_bounds must be nonempty and equally long")

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @cached_property
    def coeff_array(self) -> np.ndarray:
        return np.array(self.coeffs, dtype=float)


@dataclass(frozen=True)
class RemainderCertificate:
    """Certified bound on the truncation error of a partial sum."""

    order: int
    t: float
    bound: float


def _tail_coefficient_bound(sum_bound: float, tau: float, n: int) -> float:
    # Tail contribution to a_n: sum_bound * (n/(e tau))^n / n!, stable in logs.
    if n == 0:
        return sum_bound
    log_term = n * (math.log(n) - 1.0 - math.log(tau)) - math.lgamma(n + 1)
    return sum_bound * math.exp(log_term)


def expand(series: DirichletSeries, tau: float, order: int) -> TaylorExpansion:
    """Taylor coefficients of the sum around ``tau`` up to ``order``.

    Requires strictly positive exponents (apply
    :func:`expseries.series.shift_normalize` first) and ``tau > 0``. The
    zeroth coefficient reproduces ``evaluate(series, tau).value`` exactly: it
    is the same error-free accumulation of the same term values.
    """
    tau = _require_finite(tau, "tau")
    if tau <= 0:
        raise ValueError("tau must be positive")
    order = int(order)
    if order < 0:
        raise ValueError("order must be nonnegative")
    lams = series.lambdas
    if np.any(lams <= 0):
        raise ValueError("all exponents must be strictly positive; shift_normalize first")

    tail_sum = series.tail.sum_bound if series.tail is not None else 0.0
    term = series.alphas * np.exp(-lams * tau)
    coeffs = [_fsum(term)]
    bounds = [_fsum(np.abs(term)) + _tail_coefficient_bound(tail_sum, tau, 0)]
    for n in range(1, order + 1):
        term = term * (-lams) / n
        coeffs.append(_fsum(term))
        bounds.append(_fsum(np.abs(term)) + _tail_coefficient_bound(tail_sum, tau, n))
    return TaylorExpansion(
        center=tau,
        coeffs=tuple(coeffs),
        coeff_bounds=tuple(bounds),
        sum_abs_alpha=series.sum_abs_coefficients,
    )


def _radius_ratio(expansion: TaylorExpansion, t: float) -> float:
    t = _require_finite(t, "t")
    tau = expansion.center
    if not (0.0 < t < 2.0 * tau):
        raise ValueError(f"t must lie in (0, 2*tau) = (0, {2.0 * tau}); got {t}")
    return abs(t - tau) / tau


def remainder_bound(expansion: TaylorExpansion, n: int, t: float) -> RemainderCertificate:
    """Certified bound on ``|phi(t) - sum_{j<=n} b_j (t-tau)^j``.

    Valid for ``t`` in (0, 2*tau) and ``1 <= n <= expansion.order``; the n = 0
    case is rejected because the factorial lower bound behind the envelope
    starts at n = 1.
    """
    n = int(n)
    if n < 1:
        raise ValueError("n must be at least 1")
    if n > expansion.order:
        raise ValueError(f"n={n} exceeds the expansion order {expansion.order}")
    r = _radius_ratio(expansion, t)
    bound = (
        expansion.sum_abs_alpha
        / math.sqrt(_TWO_PI * (n + 1))
        * r ** (n + 1)
        / (1.0 - r)
    )
    return RemainderCertificate(order=n, t=float(t), bound=bound)


def evaluate_via_expansion(expansion: TaylorExpansion, t: float) -> SeriesValue:
    """Horner evaluation of the expansion with its remainder certificate."""
    if expansion.order < 1:
        raise ValueError("expansion must have order >= 1 to certify a remainder")
    _radius_ratio(expansion, t)  # validates t in (0, 2*tau)
    dt = float(t) - expansion.center
    acc = 0.0
    for b in reversed(expansion.coeffs):
        acc = acc * dt + b
    cert = remainder_bound(expansion, expansion.order, t)
    return SeriesValue(acc, cert.bound)


def partial_sums(expansion: TaylorExpansion, t: float) -> np.ndarray:
    """All partial sums ``sum_{j<=n} b_j (t-tau)^j`` for n = 0..order.

    Each partial sum is an error-free-transformation accumulation of the
    individual terms, so measured remainders are not polluted by naive
    summation error.
    """
    t = _require_finite(t, "t")
    dt = t - expansion.center
    terms = []
    power = 1.0
    for b in expansion.coeffs:
        terms.append(b * power)
        power *= dt
    return np.array([math.fsum(terms[: n + 1]) for n in range(len(terms))])


def order_for_tolerance(
    expansion: TaylorExpansion, t: float, tol: float, max_order: int = 10_000
) -> int:
    """Smallest ``n >= 1`` whose certified bound at ``t`` is at most ``tol``.

    Scans upward (the bounds are cheap). The result may exceed the order the
    expansion was built with, in which case re-expand at the returned order.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    r = _radius_ratio(expansion, t)
    s0 = expansion.sum_abs_alpha
    for n in range(1, max_order + 1):
        bound = s0 / math.sqrt(_TWO_PI * (n + 1)) * r ** (n + 1) / (1.0 - r)
        if bound <= tol:
            return n
    raise ValueError(f"no order up to {max_order} certifies tolerance {tol}")


def to_document(expansion: TaylorExpansion) -> dict:
    return {
        "center": expansion.center,
        "coeffs": list(expansion.coeffs),
        "bounds": list(expansion.coeff_bounds),
        "sumAbsAlpha": expansion.sum_abs_alpha,
    }


def from_document(doc: dict) -> TaylorExpansion:
    return TaylorExpansion(
        center=float(doc["center"]),
        coeffs=tuple(float(c) for c in doc["coeffs"]),
        coeff_bounds=tuple(float(b) for b in doc["bounds"]),
        sum_abs_alpha=float(doc["sumAbsAlpha"]),
    )
