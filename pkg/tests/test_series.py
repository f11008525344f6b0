import math

import numpy as np
import pytest

from expseries.series import (
    DirichletSeries,
    TailModel,
    antiderivative_reduce,
    dumps,
    evaluate,
    from_document,
    loads,
    merge,
    shift_normalize,
    to_document,
)

from conftest import random_series


def geometric_series(n_terms: int = 40) -> DirichletSeries:
    # sum_{j>=1} 2^-j e^{-j t}; truncated tail mass is exactly 2^-n_terms.
    terms = [(2.0**-j, float(j)) for j in range(1, n_terms + 1)]
    tail = TailModel(sum_bound=2.0**-n_terms, lambda_floor=float(n_terms + 1))
    return DirichletSeries(terms, tail)


def geometric_closed_form(t: float) -> float:
    x = math.exp(-t) / 2.0
    return x / (1.0 - x)


class TestEvaluate:
    def test_constant_term(self):
        s = DirichletSeries([(1.0, 0.0)])
        result = evaluate(s, 5.0)
        assert result.value == 1.0
        assert result.error_bound == 0.0

    def test_geometric_with_certified_tail(self):
        s = geometric_series()
        result = evaluate(s, 1.0)
        closed = geometric_closed_form(1.0)
        brute = math.fsum(2.0**-j * math.exp(-j) for j in range(1, 201))
        assert abs(closed - brute) < 1e-15
        assert abs(result.value - closed) <= 1e-12 + result.error_bound

    def test_cancellation_at_zero(self):
        for delta in (1e-3, 1e-6, 1e-9):
            s = DirichletSeries([(1.0, 1.0), (-1.0, 1.0 + delta)])
            assert evaluate(s, 0.0).value == 0.0

    def test_negative_t_allowed_without_tail(self):
        s = DirichletSeries([(1.0, -2.0)])
        assert evaluate(s, -1.0).value == pytest.approx(math.exp(-2.0))

    def test_negative_t_rejected_with_tail(self):
        s = geometric_series()
        with pytest.raises(ValueError, match="certified tail"):
            evaluate(s, -0.5)

    def test_non_finite_t_rejected(self):
        s = DirichletSeries([(1.0, 1.0)])
        with pytest.raises(ValueError):
            evaluate(s, math.nan)
        with pytest.raises(ValueError):
            evaluate(s, math.inf)

    def test_error_bound_nonincreasing_in_t(self):
        s = geometric_series()
        bounds = [evaluate(s, t).error_bound for t in np.linspace(0.0, 5.0, 40)]
        assert all(b >= 0 for b in bounds)
        assert all(later <= earlier for earlier, later in zip(bounds, bounds[1:]))

    def test_linearity_of_disjoint_merge(self, rng):
        for _ in range(10):
            s1 = random_series(rng, max_terms=10, lam_range=(0.1, 10.0))
            s2 = random_series(rng, max_terms=10, lam_range=(11.0, 30.0))
            combined = merge(s1, s2)
            for t in (0.0, 0.3, 1.7):
                lhs = evaluate(combined, t).value
                rhs = evaluate(s1, t).value + evaluate(s2, t).value
                assert abs(lhs - rhs) <= 1e-12 * (1.0 + abs(lhs))


class TestConstruction:
    def test_needs_a_term(self):
        with pytest.raises(ValueError, match="at least one term"):
            DirichletSeries([])

    def test_duplicate_exponent_rejected(self):
        with pytest.raises(ValueError, match="duplicate exponent"):
            DirichletSeries([(1.0, 2.0), (3.0, 2.0)])

    def test_terms_sorted_by_exponent(self):
        s = DirichletSeries([(1.0, 5.0), (2.0, 1.0)])
        assert s.terms == ((2.0, 1.0), (1.0, 5.0))

    def test_non_finite_rejected(self):
        with pytest.raises(ValueError):
            DirichletSeries([(math.inf, 1.0)])
        with pytest.raises(ValueError):
            DirichletSeries([(1.0, math.nan)])

    def test_merge_combines_equal_exponents(self):
        s1 = DirichletSeries([(1.0, 1.0), (2.0, 2.0)])
        s2 = DirichletSeries([(3.0, 2.0)])
        merged = merge(s1, s2)
        assert merged.terms == ((1.0, 1.0), (5.0, 2.0))


class TestTailModel:
    def test_sum_bound_is_order_zero(self):
        tail = TailModel(0.5, 2.0, ((1, 0.2),))
        assert tail.weighted_sum_bound(0) == 0.5

    def test_weighted_bounds_nonincreasing_for_floor_ge_one(self):
        tail = TailModel(0.5, 2.0, ((2, 0.05),))
        values = [tail.weighted_sum_bound(k) for k in range(6)]
        assert all(b <= a for a, b in zip(values, values[1:]))

    def test_derived_bound_uses_floor(self):
        tail = TailModel(1.0, 10.0)
        assert tail.weighted_sum_bound(2) == pytest.approx(1.0 / 100.0)

    def test_inconsistent_zero_entry_rejected(self):
        with pytest.raises(ValueError, match="k=0 must equal"):
            TailModel(0.5, 2.0, ((0, 0.4),))

    def test_invalid_parameters_rejected(self):
        with pytest.raises(ValueError):
            TailModel(-0.1, 1.0)
        with pytest.raises(ValueError):
            TailModel(0.1, 0.0)
        with pytest.raises(ValueError):
            TailModel(0.1, 1.0, ((-1, 0.5),))


class TestShiftNormalize:
    def test_negative_exponent_example(self):
        s = DirichletSeries([(1.0, -2.0), (1.0, 3.0)])
        shifted, shift = shift_normalize(s)
        assert shift == -3.0
        assert shifted.terms == ((1.0, 1.0), (1.0, 6.0))
        for t in (0.0, 0.5, 1.0):
            lhs = evaluate(s, t).value
            rhs = math.exp(-shift * t) * evaluate(shifted, t).value
            assert abs(lhs - rhs) <= 1e-12 * (1.0 + abs(lhs))

    def test_already_normalized(self):
        s = DirichletSeries([(1.0, 1.0)])
        shifted, shift = shift_normalize(s)
        assert shift == 0.0
        assert shifted.terms == s.terms

    def test_identity_on_random_series(self, rng):
        s = random_series(rng, max_terms=10, lam_range=(-3.0, 12.0))
        shifted, shift = shift_normalize(s)
        assert min(shifted.lambdas) == 1.0
        for t in rng.uniform(0.0, 10.0, size=100):
            lhs = evaluate(s, float(t)).value
            rhs = math.exp(-shift * t) * evaluate(shifted, float(t)).value
            assert abs(lhs - rhs) <= 1e-12 * (1.0 + abs(lhs))

    def test_tail_stays_valid(self):
        s = geometric_series()
        shifted, shift = shift_normalize(s)
        assert shift == 0.0
        assert shifted.tail is not None
        assert shifted.tail.lambda_floor > 0
        # Shift upward: floor must stay positive even though it moves down.
        s2 = DirichletSeries([(1.0, 5.0), (1.0, 7.0)], TailModel(0.25, 8.0))
        shifted2, shift2 = shift_normalize(s2)
        assert shift2 == 4.0
        assert shifted2.tail.lambda_floor == pytest.approx(4.0)


class TestAntiderivativeReduce:
    def test_single_term(self):
        s = DirichletSeries([(4.0, 2.0)])
        assert antiderivative_reduce(s, 2).terms == ((1.0, 2.0),)

    def test_two_terms(self):
        s = DirichletSeries([(1.0, 1.0), (8.0, 2.0)])
        assert antiderivative_reduce(s, 3).terms == ((1.0, 1.0), (1.0, 2.0))

    def test_rejects_nonpositive_exponents(self):
        s = DirichletSeries([(1.0, -1.0), (1.0, 2.0)])
        with pytest.raises(ValueError, match="strictly positive"):
            antiderivative_reduce(s, 1)

    def test_k_zero_is_identity(self):
        s = DirichletSeries([(1.5, 1.0), (2.5, 3.0)])
        assert antiderivative_reduce(s, 0).terms == s.terms

    def test_second_derivative_matches_original(self):
        # Finite-difference oracle: psi'' at t = 1 must equal (+1) * phi(1).
        s = DirichletSeries([(0.7, 1.0), (0.4, 2.5), (0.2, 4.0)])
        reduced = antiderivative_reduce(s, 2)
        h = 1e-4
        fd = (
            evaluate(reduced, 1.0 + h).value
            - 2.0 * evaluate(reduced, 1.0).value
            + evaluate(reduced, 1.0 - h).value
        ) / h**2
        target = evaluate(s, 1.0).value
        assert abs(fd - target) / abs(target) < 1e-6

    def test_first_derivative_sign(self):
        # psi' at t = 1 equals (-1) * phi(1).
        s = DirichletSeries([(0.9, 1.2), (0.3, 2.2)])
        reduced = antiderivative_reduce(s, 1)
        h = 1e-4
        fd = (evaluate(reduced, 1.0 + h).value - evaluate(reduced, 1.0 - h).value) / (2 * h)
        target = -evaluate(s, 1.0).value
        assert abs(fd - target) / abs(target) < 1e-6

    def test_round_trip_composition_exact(self, rng):
        s = random_series(rng, max_terms=12, lam_range=(0.5, 20.0))
        two_step = antiderivative_reduce(antiderivative_reduce(s, 1), 2)
        one_step = antiderivative_reduce(s, 3)
        assert two_step.terms == one_step.terms

    def test_tail_weights_shift_down(self):
        tail = TailModel(1.0, 2.0, ((2, 0.1),))
        s = DirichletSeries([(1.0, 1.0)], tail)
        reduced = antiderivative_reduce(s, 2)
        assert reduced.tail.sum_bound == pytest.approx(0.1)
        assert reduced.tail.weighted_sum_bound(0) == pytest.approx(0.1)


class TestDocuments:
    def test_round_trip(self):
        s = geometric_series(8)
        again = loads(dumps(s))
        assert again.terms == s.terms
        assert again.tail == s.tail

    def test_rational_strings_accepted(self):
        doc = {"terms": [["1/3", "1/2"], [1, "2"]], "tail": None}
        s = from_document(doc)
        assert s.terms[0] == (pytest.approx(1.0 / 3.0), 0.5)
        assert s.terms[1] == (1.0, 2.0)

    def test_decimal_strings_exact(self):
        s = from_document({"terms": [["0.3", "1"]], "tail": None})
        assert s.terms[0][0] == 0.3

    def test_bad_strings_rejected(self):
        with pytest.raises(ValueError):
            from_document({"terms": [["1/3x", 1.0]], "tail": None})
        with pytest.raises(ValueError):
            from_document({"terms": [[1.0, "1/0"]], "tail": None})

    def test_tail_round_trip(self):
        tail = TailModel(0.25, 3.0, ((2, 0.01),))
        s = DirichletSeries([(1.0, 1.0)], tail)
        doc = to_document(s)
        assert doc["tail"]["weightedBounds"] == {"0": 0.25, "2": 0.01}
        assert from_document(doc).tail == tail
