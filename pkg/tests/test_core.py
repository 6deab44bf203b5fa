import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays
from numpy.testing import assert_allclose, assert_array_equal

from spurious_ts import rng
from spurious_ts.core import AlignedFrame, Series, align, difference, lag, trend_correlation
from spurious_ts.errors import (
    DegenerateSeries,
    InsufficientObservations,
    InvalidSeries,
    LagTooLarge,
    NoOverlap,
    OrderTooLarge,
)

finite = st.floats(-1e6, 1e6, allow_nan=False, allow_infinity=False)
values = arrays(np.float64, st.integers(4, 40), elements=finite)


def S(vals, start=1):
    return Series.from_values(vals, start=start)


class TestSeries:
    def test_construction(self):
        s = Series([1951, 1952, 1953], [0.5, 0.6, 0.7])
        assert len(s) == 3
        assert s.start == 1951 and s.end == 1953

    def test_immutable(self):
        s = S([1.0, 2.0])
        with pytest.raises(ValueError):
            s.values[0] = 3.0

    @pytest.mark.parametrize("times", [[1, 3, 4], [3, 2, 1], [1, 1, 2]])
    def test_rejects_irregular_index(self, times):
        with pytest.raises(InvalidSeries):
            Series(times, [1.0, 2.0, 3.0])

    @pytest.mark.parametrize("bad", [np.nan, np.inf, -np.inf])
    def test_rejects_non_finite(self, bad):
        with pytest.raises(InvalidSeries):
            S([1.0, bad, 2.0])

    def test_rejects_short(self):
        with pytest.raises(InvalidSeries):
            S([1.0])

    def test_rejects_fractional_years(self):
        with pytest.raises(InvalidSeries):
            Series([1.5, 2.5], [1.0, 2.0])


class TestDifference:
    def test_constant(self):
        assert_array_equal(difference(S([5, 5, 5]), 1).values, [0, 0])

    def test_ramp(self):
        assert_array_equal(difference(S([1, 2, 3, 4]), 1).values, [1, 1, 1])

    def test_second_order_is_composition(self):
        s = S([3, 1, 4, 1, 5])
        twice = difference(difference(s, 1), 1)
        assert_array_equal(twice.values, [5, -6, 7])
        assert difference(s, 2) == twice

    def test_time_index_shift(self):
        d = difference(S([3, 1, 4, 1, 5], start=1951), 2)
        assert_array_equal(d.times, [1953, 1954, 1955])

    def test_order_too_large(self):
        with pytest.raises(OrderTooLarge):
            difference(S([1, 2, 3]), 3)
        with pytest.raises(OrderTooLarge):
            difference(S([1, 2, 3]), 0)

    @given(values)
    def test_cumsum_round_trip(self, v):
        s = S(v)
        d = difference(s, 1)
        rebuilt = np.concatenate(([v[0]], v[0] + np.cumsum(d.values)))
        assert_allclose(rebuilt, v, rtol=1e-12, atol=1e-12 * max(1.0, np.abs(v).max()) * len(v))

    @given(values, values, finite, finite)
    def test_linear(self, v1, v2, a, b):
        n = min(len(v1), len(v2))
        s, r = S(v1[:n]), S(v2[:n])
        combo = difference(S(a * s.values + b * r.values), 1).values
        expect = a * difference(s, 1).values + b * difference(r, 1).values
        scale = max(1.0, abs(a), abs(b)) * max(1.0, np.abs(v1).max(), np.abs(v2).max())
        assert_allclose(combo, expect, rtol=0, atol=1e-12 * scale * 4)

    @given(values, st.integers(1, 3), st.integers(1, 3))
    def test_iterated_order_adds(self, v, k1, k2):
        s = S(v)
        if k1 + k2 > len(v) - 2:
            return
        assert_allclose(difference(difference(s, k1), k2).values,
                        difference(s, k1 + k2).values, rtol=0, atol=0)


class TestLag:
    def test_basic(self):
        lagged, current = lag(S([1, 2, 3]), 1)
        assert_array_equal(lagged.values, [1, 2])
        assert_array_equal(current.values, [2, 3])
        assert_array_equal(lagged.times, current.times)

    def test_constant_two(self):
        lagged, current = lag(S([7, 7, 7, 7]), 2)
        assert_array_equal(lagged.values, [7, 7])
        assert_array_equal(current.values, [7, 7])

    @pytest.mark.parametrize("k", [0, -1, 3, 4])
    def test_rejected(self, k):
        with pytest.raises(LagTooLarge):
            lag(S([1, 2, 3]), k)


class TestAlign:
    def test_intersection(self):
        y = Series.from_values(np.arange(63.0), start=1951)
        x = Series.from_values(np.arange(51.0), start=1950)
        frame = align(y, [("x", x)])
        assert frame.times[0] == 1951 and frame.times[-1] == 2000
        assert_array_equal(frame.predictor("x").times, frame.outcome.times)
        assert_array_equal(frame.predictor("x").values, np.arange(1.0, 51.0))

    def test_identity(self):
        y = S(np.arange(10.0))
        x = S(np.arange(10.0) ** 2)
        frame = align(y, [("x", x)])
        assert frame.outcome == y and frame.predictor("x") == x

    def test_disjoint(self):
        with pytest.raises(NoOverlap):
            align(S([1, 2, 3], start=1900), [("x", S([1, 2, 3], start=2000))])

    def test_too_short(self):
        with pytest.raises(InsufficientObservations):
            align(S(range(10), start=1), [("x", S(range(10), start=9))])

    def test_column_order_preserved(self):
        y = S(range(10))
        cols = [(name, S(np.random.default_rng(i).normal(size=10))) for i, name in
                enumerate(["c", "a", "b"])]
        assert align(y, cols).names == ["c", "a", "b"]

    @given(st.integers(1900, 1950), st.integers(1900, 1950), st.integers(20, 40), st.integers(20, 40))
    def test_idempotent(self, s1, s2, n1, n2):
        y = S(np.arange(n1, dtype=float), start=s1)
        x = S(np.arange(n2, dtype=float) * 2, start=s2)
        try:
            frame = align(y, [("x", x)])
        except (NoOverlap, InsufficientObservations):
            return
        again = align(frame.outcome, frame.predictors)
        assert again == frame

    def test_frame_requires_alignment(self):
        with pytest.raises(InvalidSeries):
            AlignedFrame(S(range(5)), (("x", S(range(5), start=2)),))


class TestTrendCorrelation:
    def test_increasing(self):
        assert trend_correlation(S([1, 5, 6, 20, 21])) == 1.0

    def test_decreasing(self):
        assert trend_correlation(S([3, 2, 1, -10])) == -1.0

    def test_constant(self):
        with pytest.raises(DegenerateSeries):
            trend_correlation(S([2, 2, 2, 2]))

    @given(arrays(np.float64, st.integers(3, 50), elements=st.floats(-1e3, 1e3), unique=True))
    def test_monotone_is_unit(self, v):
        v = np.sort(v)
        assert trend_correlation(S(v)) == pytest.approx(1.0, abs=1e-12)
        assert trend_correlation(S(v[::-1])) == pytest.approx(-1.0, abs=1e-12)

    @pytest.mark.slow
    def test_white_noise_has_no_trend(self):
        small = 0
        for seed in range(1000):
            z = rng.polar_normal(rng.generator(seed), 1000)
            small += abs(trend_correlation(S(z))) < 0.1
        assert small >= 950
