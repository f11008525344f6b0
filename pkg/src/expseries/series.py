"""Finite exponential sums with certified tail bounds.

The central object is a finite list of terms ``(alpha_j, lambda_j)``
representing

    phi(t) = sum_j alpha_j * exp(-lambda_j * t),

optionally extended by a :class:`TailModel` certifying bounds on whatever was
truncated away. Every operation returns plain values plus, where meaningful,
a rigorous bound on the omitted tail contribution, so downstream consumers
(Taylor expansion, vanishing tests) stay fully certified.

Terms are kept sorted by strictly increasing exponent; duplicate exponents
are rejected at construction (see :func:`merge` for explicit combination).
Sums are accumulated with error-free-transformation summation (``math.fsum``)
in increasing-exponent order.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import numpy as np


def _require_finite(value: float, name: str) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite")
    return value


def _fsum(values: Iterable[float]) -> float:
    return math.fsum(float(v) for v in values)


@dataclass(frozen=True)
class TailModel:
    """Certified bounds for the truncated part of an exponential sum.

    ``sum_bound`` dominates the sum of absolute truncated coefficients,
    ``lambda_floor`` is a positive lower bound on every truncated exponent,
    and ``weighted_bounds`` optionally stores extra certified bounds on
    ``sum_j |alpha_j| / lambda_j**k`` for selected integers ``k``.
    """

    sum_bound: float
    lambda_floor: float
    weighted_bounds: tuple[tuple[int, float], ...] = ()

    def __post_init__(self) -> None:
        sum_bound = _require_finite(self.sum_bound, "sum_bound")
        if sum_bound < 0:
            raise ValueError("sum_bound must be nonnegative")
        floor = _require_finite(self.lambda_floor, "lambda_floor")
        if floor <= 0:
            raise ValueError("lambda_floor must be positive")
        merged: dict[int, float] = {0: sum_bound}
        for key, bound in dict(self.weighted_bounds).items():
            k = int(key)
            if k < 0:
                raise ValueError("weighted bound orders must be nonnegative")
            bound = _require_finite(bound, f"weighted bound for k={k}")
            if bound < 0:
                raise ValueError("weighted bounds must be nonnegative")
            if k == 0 and bound != sum_bound:
                raise ValueError("weighted bound at k=0 must equal sum_bound")
            merged[k] = bound
        object.__setattr__(self, "sum_bound", sum_bound)
        object.__setattr__(self, "lambda_floor", floor)
        object.__setattr__(self, "weighted_bounds", tuple(sorted(merged.items())))

    def weighted_sum_bound(self, k: int) -> float:
        """Certified bound on the tail sum of ``|alpha_j| / lambda_j**k``.

        Derived as the best of ``W(k') / lambda_floor**(k - k')`` over stored
        orders ``k' <= k``; valid because every tail exponent is at least
        ``lambda_floor``.
        """
        k = int(k)
        if k < 0:
            raise ValueError("k must be nonnegative")
        candidates = [
            bound / self.lambda_floor ** (k - kk)
            for kk, bound in self.weighted_bounds
            if kk <= k
        ]
        return min(candidates)


@dataclass(frozen=True)
class SeriesValue:
    """A computed value together with a certified bound on what was omitted."""

    value: float
    error_bound: float

    def __post_init__(self) -> None:
        if self.error_bound < 0:
            raise ValueError("error_bound must be nonnegative")


@dataclass(frozen=True, init=False)
class DirichletSeries:
    """A finite exponential sum ``sum_j alpha_j exp(-lambda_j t)``.

    ``terms`` is stored sorted by strictly increasing exponent; an optional
    ``tail`` certifies everything beyond the explicit terms. Instances are
    immutable and safe to share across threads.
    """

    terms: tuple[tuple[float, float], ...]
    tail: TailModel | None

    def __init__(
        self,
        terms: Iterable[Sequence[float]],
        tail: TailModel | None = None,
    ) -> None:
        cleaned = []
        for pair in terms:
            alpha, lam = pair
            cleaned.append(
                (_require_finite(alpha, "coefficient"), _require_finite(lam, "exponent"))
            )
        if not cleaned:
            raise ValueError("a series needs at least one term")
        cleaned.sort(key=lambda item: item[1])
        for (_, left), (_, right) in zip(cleaned, cleaned[1:]):
            if left == right:
                raise ValueError(
                    f"duplicate exponent {left!r}; combine terms explicitly with merge()"
                )
        if tail is not None and not isinstance(tail, TailModel):
            raise TypeError("tail must be a TailModel or None")
        object.__setattr__(self, "terms", tuple(cleaned))
        object.__setattr__(self, "tail", tail)

    def __len__(self) -> int:
        return len(self.terms)

    @cached_property
    def alphas(self) -> np.ndarray:
        return np.array([alpha for alpha, _ in self.terms], dtype=float)

    @cached_property
    def lambdas(self) -> np.ndarray:
        return np.array([lam for _, lam in self.terms], dtype=float)

    @property
    def sum_abs_coefficients(self) -> float:
        """``sum_j |alpha_j|`` over explicit terms plus the certified tail sum."""
        total = _fsum(abs(a) for a, _ in self.terms)
        if self.tail is not None:
            total += self.tail.sum_bound
        return total


def evaluate(series: DirichletSeries, t: float) -> SeriesValue:
    """Evaluate the sum at ``t`` with a certified bound for the omitted tail.

    Explicit terms are summed exactly (error-free transformations) in
    increasing-exponent order. When a tail is present the result carries
    ``tail.sum_bound * exp(-tail.lambda_floor * t)`` as error bound, which is
    only certified for ``t >= 0``; negative ``t`` is therefore rejected for
    tailed series (and allowed otherwise, e.g. for negative exponents).
    """
    t = _require_finite(t, "t")
    if series.tail is not None and t < 0:
        raise ValueError("t < 0 with certified tail (tail bound holds for t >= 0 only)")
    value = _fsum(series.alphas * np.exp(-series.lambdas * t))
    if series.tail is None:
        bound = 0.0
    else:
        bound = series.tail.sum_bound * math.exp(-series.tail.lambda_floor * t)
    return SeriesValue(value, bound)


def shift_normalize(series: DirichletSeries) -> tuple[DirichletSeries, float]:
    """Shift exponents so the smallest becomes 1; returns ``(shifted, shift)``.

    The identity ``phi(t) = exp(-shift * t) * shifted(t)`` holds for all t,
    with ``shift = lambda_min - 1``. Targeting 1 (not 0) keeps later
    divisions by exponents well conditioned.
    """
    lam_min = series.terms[0][1]
    shift = lam_min - 1.0
    # (lam - lam_min) + 1 rather than lam - shift: the smallest exponent maps
    # to exactly 1.0 and none can round below it.
    new_terms = [(alpha, (lam - lam_min) + 1.0) for alpha, lam in series.terms]
    tail = series.tail
    if tail is not None:
        # Tail exponents follow the explicit ones in an increasing sequence,
        # so max(explicit lambda) is also a certified tail floor.
        floor = (max(tail.lambda_floor, series.terms[-1][1]) - lam_min) + 1.0
        if shift <= 0:
            # Exponents grow under the shift, so stored weighted bounds stay valid.
            weighted = {k: b for k, b in tail.weighted_bounds if k > 0}
        else:
            weighted = {}
        tail = TailModel(tail.sum_bound, floor, tuple(weighted.items()))
    return DirichletSeries(new_terms, tail), shift


def antiderivative_reduce(series: DirichletSeries, k: int) -> DirichletSeries:
    """Divide every coefficient by its exponent ``k`` times.

    Requires strictly positive exponents (apply :func:`shift_normalize`
    first). The k-th derivative of the result equals ``(-1)**k`` times the
    original sum: each term ``(alpha/lambda**k) e^{-lambda t}`` differentiates
    back to ``alpha (-1)**k e^{-lambda t}``. Division is applied one factor at
    a time so that reducing by ``j`` then ``k`` reproduces the reduction by
    ``j + k`` bit for bit.
    """
    k = int(k)
    if k < 0:
        raise ValueError("k must be nonnegative")
    lams = series.lambdas
    if np.any(lams <= 0):
        raise ValueError("all exponents must be strictly positive; shift_normalize first")
    coeffs = series.alphas.copy()
    for _ in range(k):
        coeffs = coeffs / lams
    tail = series.tail
    if tail is not None:
        new_sum = tail.weighted_sum_bound(k)
        weighted = {kk - k: bound for kk, bound in tail.weighted_bounds if kk >= k}
        weighted[0] = new_sum
        tail = TailModel(new_sum, tail.lambda_floor, tuple(weighted.items()))
    return DirichletSeries(zip(coeffs, lams), tail)


def merge(first: DirichletSeries, second: DirichletSeries) -> DirichletSeries:
    """Combine two series, adding coefficients on exactly equal exponents."""
    combined: dict[float, float] = {}
    for alpha, lam in first.terms + second.terms:
        combined[lam] = combined.get(lam, 0.0) + alpha
    tails = [tail for tail in (first.tail, second.tail) if tail is not None]
    if not tails:
        tail = None
    elif len(tails) == 1:
        tail = tails[0]
    else:
        one, two = tails
        orders = {k for k, _ in one.weighted_bounds} | {k for k, _ in two.weighted_bounds}
        weighted = {
            k: one.weighted_sum_bound(k) + two.weighted_sum_bound(k) for k in orders
        }
        tail = TailModel(
            one.sum_bound + two.sum_bound,
            min(one.lambda_floor, two.lambda_floor),
            tuple(weighted.items()),
        )
    return DirichletSeries([(alpha, lam) for lam, alpha in sorted(combined.items())], tail)


# ---------------------------------------------------------------------------
# Structured-text documents
# ---------------------------------------------------------------------------


def _parse_number(raw: object, name: str) -> float:
    """Accept JSON numbers plus decimal or rational strings such as "1/3"."""
    if isinstance(raw, bool):
        raise ValueError(f"{name} must be a number, got a bool")
    if isinstance(raw, (int, float)):
        return _require_finite(raw, name)
    if isinstance(raw, str):
        try:
            return _require_finite(float(Fraction(raw.strip())), name)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"{name} does not parse as decimal or rational: {raw!r}") from exc
    raise ValueError(f"{name} must be a number or numeric string")


def to_document(series: DirichletSeries) -> dict:
    doc: dict = {"terms": [[alpha, lam] for alpha, lam in series.terms]}
    if series.tail is None:
        doc["tail"] = None
    else:
        doc["tail"] = {
            "sumBound": series.tail.sum_bound,
            "lambdaFloor": series.tail.lambda_floor,
            "weightedBounds": {str(k): b for k, b in series.tail.weighted_bounds},
        }
    return doc


def from_document(doc: Mapping) -> DirichletSeries:
    if "terms" not in doc:
        raise ValueError("series document lacks 'terms'")
    terms = [
        (_parse_number(pair[0], "coefficient"), _parse_number(pair[1], "exponent"))
        for pair in doc["terms"]
    ]
    tail_doc = doc.get("tail")
    tail = None
    if tail_doc is not None:
        weighted = {
            int(k): _parse_number(v, f"weighted bound k={k}")
            for k, v in (tail_doc.get("weightedBounds") or {}).items()
        }
        tail = TailModel(
            _parse_number(tail_doc["sumBound"], "sumBound"),
            _parse_number(tail_doc["lambdaFloor"], "lambdaFloor"),
            tuple(weighted.items()),
        )
    return DirichletSeries(terms, tail)


def dumps(series: DirichletSeries) -> str:
    return json.dumps(to_document(series), indent=2) + "\n"


def loads(text: str) -> DirichletSeries:
    return from_document(json.loads(text))
