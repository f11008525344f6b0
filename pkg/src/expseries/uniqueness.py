"""Vanishing tests and leading-coefficient recovery for exponential sums.

An exponential sum with summable coefficients that vanishes on an interval
[0, T] has all coefficients zero. This module realizes the two computable
faces of that fact:

* :func:`is_identically_zero` checks a series against a tolerance on a
  Chebyshev sample of [0, T] (certified tail bounds included), and

* :func:`peel_leading` recovers leading coefficients from samples by the
  divide-and-peel device: the slowest-decaying exponential dominates at late
  times, so its coefficient can be fit there, subtracted, and the argument
  repeated for the next exponent.

Exponents are assumed known; identifying unknown exponents from data is a
different problem (Prony-type methods) and out of scope here.
"""

from __future__ import annotations

import csv
import io
import math
import warnings
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from .series import DirichletSeries, _require_finite, evaluate


class SeparationWarning(UserWarning):
    """Exponent gaps too small for the sampling horizon to separate modes."""


@dataclass(frozen=True, init=False)
class SampledSignal:
    """A real signal sampled at strictly increasing times within [0, horizon]."""

    times: tuple[float, ...]
    values: tuple[float, ...]
    horizon: float

    def __init__(self, times: Sequence[float], values: Sequence[float], horizon: float) -> None:
        horizon = _require_finite(horizon, "horizon")
        if horizon <= 0:
            raise ValueError("horizon must be positive")
        times = tuple(_require_finite(t, "sample time") for t in times)
        values = tuple(_require_finite(v, "sample value") for v in values)
        if not times:
            raise ValueError("signal needs at least one sample")
        if len(times) != len(values):
            raise ValueError("times and values must have equal length")
        if any(b <= a for a, b in zip(times, times[1:])):
            raise ValueError("sample times must be strictly increasing")
        if times[0] < 0 or times[-1] > horizon:
            raise ValueError("sample times must lie within [0, horizon]")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "horizon", horizon)

    def __len__(self) -> int:
        return len(self.times)

    @cached_property
    def time_array(self) -> np.ndarray:
        return np.array(self.times, dtype=float)

    @cached_property
    def value_array(self) -> np.ndarray:
        return np.array(self.values, dtype=float)


@dataclass(frozen=True)
class PeelResult:
    """Recovered ``(coefficient, exponent)`` pairs and the leftover residual."""

    recovered: tuple[tuple[float, float], ...]
    residual_norm: float


def chebyshev_sample(horizon: float, nodes: int) -> np.ndarray:
    """Chebyshev points of the second kind mapped to [0, horizon]."""
    nodes = int(nodes)
    if nodes < 2:
        raise ValueError("need at least two nodes")
    k = np.arange(nodes)
    return horizon * 0.5 * (1.0 - np.cos(np.pi * k / (nodes - 1)))


def is_identically_zero(
    series: DirichletSeries, horizon: float, tol: float, nodes: int = 129
) -> bool:
    """True when ``|value| + error_bound <= tol`` on a Chebyshev sample of [0, T].

    Tolerance semantics are absolute: this is a statement about the zero
    function, where relative comparisons are meaningless. With tol -> 0 the
    verdict characterizes all-zero coefficients.
    """
    horizon = _require_finite(horizon, "horizon")
    if horizon <= 0:
        raise ValueError("horizon must be positive")
    if tol <= 0:
        raise ValueError("tol must be positive")
    for t in chebyshev_sample(horizon, nodes):
        result = evaluate(series, float(t))
        if abs(result.value) + result.error_bound > tol:
            return False
    return True


def peel_leading(
    signal: SampledSignal,
    known_lambdas: Sequence[float],
    count: int,
    dominance: float = 10.0,
    max_sweeps: int = 2000,
) -> PeelResult:
    """Estimate the ``count`` slowest coefficients by sequential extraction.

    Extraction pass: working from the slowest exponent up, each coefficient
    is fit by least squares on the late-time window where its exponential
    dominates the next one by at least ``dominance``; the fitted component is
    subtracted and the next mode extracted, sweeping until the estimates
    settle.

    Refinement sweeps then repeat the fit-subtract cycle with each window
    widened to every sample that is safe against the modes *not* being
    extracted (fitted modes are already handled by subtraction). This keeps
    partial extraction protected from unmodeled fast modes while letting a
    full extraction use all the data, which drives the noise amplification of
    the narrow late-time windows down to the joint least-squares level.

    Emits :class:`SeparationWarning` when a consecutive exponent gap is below
    ``1 / horizon``: the horizon is then too short for the dominance windows
    to separate those modes.
    """
    lams = [_require_finite(l, "exponent") for l in known_lambdas]
    if any(b <= a for a, b in zip(lams, lams[1:])):
        raise ValueError("known_lambdas must be strictly increasing")
    count = int(count)
    if count < 1:
        raise ValueError("count must be at least 1")
    if count > len(lams):
        raise ValueError(f"count={count} exceeds the {len(lams)} known exponents")
    if len(signal) < 2 * count:
        raise ValueError(f"need at least {2 * count} samples to extract {count} modes")
    if dominance <= 1:
        raise ValueError("dominance must exceed 1")

    horizon = signal.horizon
    relevant = lams[: min(count + 1, len(lams))]
    tight = [(a, b) for a, b in zip(relevant, relevant[1:]) if b - a < 1.0 / horizon]
    if tight:
        warnings.warn(
            f"exponent gaps {tight} are below 1/horizon = {1.0 / horizon:.3g}; "
            "windowed extraction may not separate these modes",
            SeparationWarning,
            stacklevel=2,
        )

    times = signal.time_array
    values = signal.value_array
    design = np.exp(-np.outer(times, np.array(lams[:count])))
    fallback = max(2, len(times) // 4)

    def window_against(i: int, guard: int) -> np.ndarray:
        # Samples where mode i beats the slowest mode not subtracted away.
        if guard >= len(lams):
            return np.ones(len(times), dtype=bool)
        selected = times >= math.log(dominance) / (lams[guard] - lams[i])
        if selected.sum() < 2:
            selected = np.zeros(len(times), dtype=bool)
            selected[-fallback:] = True
        return selected

    extraction_windows = [window_against(i, i + 1) for i in range(count)]
    refinement_windows = [window_against(i, count) for i in range(count)]

    estimates = np.zeros(count)

    def sweep_until_settled(windows: list[np.ndarray], budget: int) -> None:
        for _ in range(budget):
            previous = estimates.copy()
            for i in range(count):
                others = values - design @ estimates + design[:, i] * estimates[i]
                sel = windows[i]
                basis = design[sel, i]
                denom = float(basis @ basis)
                if denom == 0.0:
                    warnings.warn(
                        f"mode with exponent {lams[i]} carries no signal on its window",
                        SeparationWarning,
                        stacklevel=3,
                    )
                    estimates[i] = 0.0
                    continue
                estimates[i] = float(others[sel] @ basis) / denom
            if np.max(np.abs(estimates - previous)) <= 1e-13 * (
                1.0 + np.max(np.abs(estimates))
            ):
                return

    sweep_until_settled(extraction_windows, 64)
    sweep_until_settled(refinement_windows, max_sweeps)

    residual = values - design @ estimates
    return PeelResult(
        recovered=tuple((float(estimates[i]), lams[i]) for i in range(count)),
        residual_norm=float(np.max(np.abs(residual))),
    )


# ---------------------------------------------------------------------------
# Structured-text and CSV round trips
# ---------------------------------------------------------------------------


def peel_result_to_document(result: PeelResult) -> dict:
    return {
        "recovered": [[alpha, lam] for alpha, lam in result.recovered],
        "residualNorm": result.residual_norm,
    }


def peel_result_from_document(doc: dict) -> PeelResult:
    return PeelResult(
        recovered=tuple((float(a), float(l)) for a, l in doc["recovered"]),
        residual_norm=float(doc["residualNorm"]),
    )


def signal_to_csv(signal: SampledSignal) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["t", "value"])
    for t, v in zip(signal.times, signal.values):
        writer.writerow([repr(t), repr(v)])
    return out.getvalue()


def signal_from_csv(text: str, horizon: float | None = None) -> SampledSignal:
    times: list[float] = []
    values: list[float] = []
    for row in csv.reader(io.StringIO(text)):
        if not row or row[0].startswith("#") or row[0] == "t":
            continue
        times.append(float(row[0]))
        values.append(float(row[1]))
    if horizon is None:
        horizon = times[-1] if times else 1.0
    return SampledSignal(times, values, horizon)
