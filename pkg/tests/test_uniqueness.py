import math

import numpy as np
import pytest

from expseries.series import DirichletSeries, evaluate, shift_normalize
from expseries.uniqueness import (
    PeelResult,
    SampledSignal,
    SeparationWarning,
    chebyshev_sample,
    is_identically_zero,
    peel_leading,
    peel_result_from_document,
    peel_result_to_document,
    signal_from_csv,
    signal_to_csv,
)

from conftest import random_series


def exponential_sum_signal(
    alphas, lams, horizon: float, n_samples: int, noise: float = 0.0, seed: int = 0
) -> SampledSignal:
    rng = np.random.default_rng(seed)
    t = np.linspace(0.0, horizon, n_samples)
    values = sum(a * np.exp(-l * t) for a, l in zip(alphas, lams))
    if noise:
        values = values + rng.standard_normal(n_samples) * noise
    return SampledSignal(t.tolist(), np.asarray(values).tolist(), horizon)


class TestIsIdenticallyZero:
    def test_zero_coefficients(self):
        s = DirichletSeries([(0.0, 1.0), (0.0, 2.0)])
        assert is_identically_zero(s, 1.0, 1e-12)

    def test_two_mode_difference_is_nonzero(self):
        # Vanishes at t = 0 but not at t = 1: e^-1 - e^-2 = 0.23254...
        s = DirichletSeries([(1.0, 1.0), (-1.0, 2.0)])
        assert abs(evaluate(s, 1.0).value - 0.23254415793482963) < 1e-15
        assert not is_identically_zero(s, 1.0, 1e-6)

    def test_near_cancellation_below_tolerance(self):
        # |e^-t - e^-(1+1e-9)t| <= 1e-9 t e^-t, far below the tolerance: the
        # verdict is about the tolerance, not about exact coefficients.
        s = DirichletSeries([(1.0, 1.0), (-1.0, 1.0 + 1e-9)])
        assert is_identically_zero(s, 1.0, 1e-6)

    def test_soundness_small_mass_is_zero(self, rng):
        # sup |phi| <= sum |alpha_j| for nonnegative exponents.
        for _ in range(5):
            s = random_series(rng, max_terms=8, lam_range=(0.0, 20.0), total_abs=(1e-9, 1e-8))
            assert is_identically_zero(s, 2.0, 1e-7)

    def test_single_heat_modes_are_nonzero(self):
        for j in (1, 2, 3, 5):
            beta = math.sqrt(2) * (1 - math.cos(j * math.pi)) / (j * math.pi)
            if beta == 0.0:
                continue
            s = DirichletSeries([(beta, (j * math.pi) ** 2)])
            assert not is_identically_zero(s, 1.0, 1e-9)

    def test_shift_invariant_verdict(self, rng):
        s = random_series(rng, max_terms=6, lam_range=(-2.0, 8.0), total_abs=(0.5, 2.0))
        shifted, shift = shift_normalize(s)
        scale = max(math.exp(-shift * t) for t in (0.0, 1.0))
        tol = 1e-9
        assert is_identically_zero(s, 1.0, tol) == is_identically_zero(
            shifted, 1.0, tol / scale if scale > 1 else tol
        )

    def test_nodes_cover_endpoints(self):
        nodes = chebyshev_sample(2.0, 9)
        assert nodes[0] == 0.0
        assert nodes[-1] == pytest.approx(2.0)
        assert np.all(np.diff(nodes) > 0)

    def test_validation(self):
        s = DirichletSeries([(1.0, 1.0)])
        with pytest.raises(ValueError):
            is_identically_zero(s, 0.0, 1e-6)
        with pytest.raises(ValueError):
            is_identically_zero(s, 1.0, 0.0)


class TestPeelLeading:
    def test_single_mode_exact(self):
        signal = exponential_sum_signal([2.0], [1.0], 5.0, 50)
        result = peel_leading(signal, [1.0], 1)
        assert abs(result.recovered[0][0] - 2.0) < 1e-6
        assert result.residual_norm < 1e-12

    def test_zero_signal(self):
        t = np.linspace(0.0, 3.0, 30)
        signal = SampledSignal(t.tolist(), [0.0] * 30, 3.0)
        result = peel_leading(signal, [1.0, 2.5], 2)
        assert all(abs(a) < 1e-10 for a, _ in result.recovered)
        assert result.residual_norm < 1e-10

    def test_heat_mode_pair(self):
        lams = [math.pi**2, 4 * math.pi**2]
        signal = exponential_sum_signal([1.0, -0.5], lams, 1.0, 200)
        result = peel_leading(signal, lams, 2)
        assert abs(result.recovered[0][0] - 1.0) < 1e-4
        assert abs(result.recovered[1][0] + 0.5) < 1e-4

    def test_recovered_order_matches_lambdas(self):
        signal = exponential_sum_signal([1.0, 2.0, 3.0], [1.0, 3.0, 5.0], 4.0, 100)
        result = peel_leading(signal, [1.0, 3.0, 5.0], 3)
        assert [lam for _, lam in result.recovered] == [1.0, 3.0, 5.0]

    def test_noise_sweep_errors_decrease(self):
        lams = [1.0, 2.2, 3.5]
        alphas = [1.5, -0.8, 0.6]
        errors = []
        for k, sigma in enumerate((1e-4, 1e-6, 1e-8)):
            signal = exponential_sum_signal(alphas, lams, 6.0, 400, noise=sigma, seed=k)
            result = peel_leading(signal, lams, 3)
            errors.append(
                max(abs(a_est - a) for (a_est, _), a in zip(result.recovered, alphas))
            )
        assert errors[0] > errors[1] > errors[2]
        assert errors[1] < 1e-4

    def test_partial_extraction_protected_from_fast_modes(self):
        # Only the slow mode is extracted; the unmodeled fast one must not
        # corrupt it beyond the dominance-window guarantee.
        signal = exponential_sum_signal([2.0, 3.0], [1.0, 5.0], 6.0, 400)
        result = peel_leading(signal, [1.0, 5.0], 1)
        assert abs(result.recovered[0][0] - 2.0) < 0.2

    def test_separation_warning(self):
        signal = exponential_sum_signal([1.0, 1.0], [1.0, 1.05], 2.0, 60)
        with pytest.warns(SeparationWarning):
            peel_leading(signal, [1.0, 1.05], 2)

    def test_validation(self):
        signal = exponential_sum_signal([1.0], [1.0], 2.0, 10)
        with pytest.raises(ValueError, match="exceeds"):
            peel_leading(signal, [1.0], 2)
        with pytest.raises(ValueError, match="strictly increasing"):
            peel_leading(signal, [2.0, 1.0], 1)
        with pytest.raises(ValueError, match="samples"):
            peel_leading(exponential_sum_signal([1.0], [1.0], 2.0, 3), [1.0, 2.0], 2)


class TestSampledSignal:
    def test_validation(self):
        with pytest.raises(ValueError, match="strictly increasing"):
            SampledSignal([0.0, 0.0], [1.0, 1.0], 1.0)
        with pytest.raises(ValueError, match="within"):
            SampledSignal([0.0, 2.0], [1.0, 1.0], 1.0)
        with pytest.raises(ValueError, match="equal length"):
            SampledSignal([0.0, 0.5], [1.0], 1.0)

    def test_csv_round_trip(self):
        signal = exponential_sum_signal([1.0, -0.25], [0.5, 2.0], 3.0, 17)
        text = signal_to_csv(signal)
        again = signal_from_csv(text, horizon=3.0)
        assert again.times == signal.times
        assert again.values == signal.values

    def test_peel_result_document_round_trip(self):
        signal = exponential_sum_signal([2.0, -1.0], [1.0, 2.5], 5.0, 80)
        result = peel_leading(signal, [1.0, 2.5], 2)
        doc = peel_result_to_document(result)
        assert set(doc) == {"recovered", "residualNorm"}
        assert peel_result_from_document(doc) == result
