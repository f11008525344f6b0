"""Shared corpus builders for the test suite."""

from __future__ import annotations

import numpy as np
import pytest

from expseries.series import DirichletSeries


def random_series(
    rng: np.random.Generator,
    max_terms: int = 40,
    lam_range: tuple[float, float] = (0.1, 100.0),
    total_abs: tuple[float, float] = (1.0, 8.0),
) -> DirichletSeries:
    """A random finite series with positive exponents and bounded mass.

    The absolute coefficient mass is kept moderate so floating-point noise in
    measured remainders stays well below the certificates' absolute slack.
    """
    n_terms = int(rng.integers(3, max_terms + 1))
    lams = np.sort(rng.uniform(*lam_range, size=n_terms))
    while len(np.unique(lams)) != n_terms:  # pragma: no cover - measure-zero event
        lams = np.sort(rng.uniform(*lam_range, size=n_terms))
    alphas = rng.standard_normal(n_terms)
    alphas *= rng.uniform(*total_abs) / np.sum(np.abs(alphas))
    return DirichletSeries(zip(alphas, lams))


def well_scaled_series(rng: np.random.Generator, n_terms: int = 6) -> DirichletSeries:
    """Positive coefficients and mild exponents: derivatives stay O(1)."""
    lams = np.sort(rng.uniform(0.5, 5.0, size=n_terms))
    alphas = rng.uniform(0.2, 1.0, size=n_terms)
    return DirichletSeries(zip(alphas, lams))


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240817)
