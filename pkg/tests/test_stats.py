import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays
from numpy.testing import assert_allclose, assert_array_equal
from scipy.integrate import quad

from spurious_ts import rng
from spurious_ts.core import AlignedFrame, Series
from spurious_ts.errors import (
    DegenerateSeries,
    LengthMismatch,
    UnknownPredictor,
    ZeroResiduals,
)
from spurious_ts.regress import fit_ols
from spurious_ts.stats import (
    betainc_reg,
    durbin_watson,
    midranks,
    partial_correlation,
    pearson,
    spearman,
    student_t_sf,
)

T_GRID = [0.5 * i for i in range(11)]
DF_GRID = [1, 2, 5, 10, 30, 61]


def t_density(x, df):
    c = math.exp(math.lgamma((df + 1) / 2) - math.lgamma(df / 2)) / math.sqrt(df * math.pi)
    return c * (1 + x * x / df) ** (-(df + 1) / 2)


def quad_sf(t, df):
    val, _ = quad(t_density, t, math.inf, args=(df,), epsabs=1e-13, epsrel=1e-12, limit=200)
    return val


def fraction_pearson(x, y):
    x = [Fraction(v) for v in x]
    y = [Fraction(v) for v in y]
    n = len(x)
    mx, my = sum(x) / n, sum(y) / n
    sxy = sum((a - mx) * (b - my) for a, b in zip(x, y))
    sxx = sum((a - mx) ** 2 for a in x)
    syy = sum((b - my) ** 2 for b in y)
    return float(sxy) / math.sqrt(float(sxx * syy))


class TestPearson:
    def test_self(self):
        x = [1.0, 4.0, 2.0, 8.0]
        assert pearson(x, x).r == pytest.approx(1.0, abs=1e-15)
        assert pearson(x, x).p_value == 0.0
        assert math.isinf(pearson(x, x).t_stat)

    def test_negated(self):
        x = np.array([1.0, 4.0, 2.0, 8.0])
        res = pearson(x, -x)
        assert res.r == pytest.approx(-1.0, abs=1e-15)
        assert res.t_stat == -math.inf and res.p_value == 0.0

    def test_small_exact(self):
        expect = fraction_pearson([1, 2, 3], [1, 2, 4])
        assert expect == pytest.approx(0.982, abs=5e-4)
        assert pearson([1, 2, 3], [1, 2, 4]).r == pytest.approx(expect, abs=1e-14)

    def test_t_and_p(self):
        x = np.arange(10.0)
        y = np.array([0.3, -1.2, 2.2, 1.1, 0.4, 3.0, 2.5, 1.9, 4.2, 3.3])
        res = pearson(x, y)
        t = res.r * math.sqrt(8 / (1 - res.r ** 2))
        assert res.t_stat == pytest.approx(t, rel=1e-12)
        assert res.p_value == pytest.approx(2 * quad_sf(abs(t), 8), abs=1e-10)

    def test_errors(self):
        with pytest.raises(LengthMismatch):
            pearson([1, 2, 3], [1, 2])
        with pytest.raises(DegenerateSeries):
            pearson([1, 1, 1], [1, 2, 3])

    def test_accepts_series(self):
        s = Series.from_values([1.0, 3.0, 2.0, 5.0])
        assert pearson(s, s.values).r == pytest.approx(1.0)

    @given(arrays(np.float64, 12, elements=st.floats(-100, 100)),
           arrays(np.float64, 12, elements=st.floats(-100, 100)),
           st.floats(0.01, 50), st.floats(-50, 50))
    def test_symmetry_and_affine(self, x, y, a, b):
        if np.ptp(x) < 1e-3 or np.ptp(y) < 1e-3:
            return
        r = pearson(x, y).r
        assert pearson(y, x).r == pytest.approx(r, abs=1e-12)
        assert pearson(a * x + b, y).r == pytest.approx(r, abs=1e-12)
        assert pearson(x, -a * y + b).r == pytest.approx(-r, abs=1e-12)

    def test_slope_identity(self):
        gen = rng.generator(3)
        x = rng.polar_normal(gen, 40)
        y = 0.7 * x + rng.polar_normal(gen, 40)
        fit = fit_ols(AlignedFrame(Series.from_values(y), (("x", Series.from_values(x)),)))
        beta = fit.coef("x").estimate
        assert pearson(x, y).r == pytest.approx(beta * x.std() / y.std(), abs=1e-10)


class TestSpearman:
    def test_monotone(self):
        assert spearman([1, 2, 3, 4], [10, 11, 50, 51]).r == pytest.approx(1.0)

    def test_midranks(self):
        assert_array_equal(midranks([1, 2, 2, 3]), [1, 2.5, 2.5, 4])
        assert_array_equal(midranks([3, 1, 3, 3]), [3, 1, 3, 3])

    def test_rank_formula(self):
        # d^2 = (0, 1, 1, 0): rho = 1 - 6 * 2 / (4 * 15)
        assert spearman([1, 2, 3, 4], [10, 30, 20, 40]).r == pytest.approx(0.8, abs=1e-14)

    @given(arrays(np.float64, st.integers(3, 30), elements=st.floats(-10, 10),
                  unique=True))
    def test_no_ties_matches_classic_formula(self, x):
        y = np.sin(x * 7.0) + x
        if len(np.unique(y)) != len(y):
            return
        rx = np.argsort(np.argsort(x)) + 1
        ry = np.argsort(np.argsort(y)) + 1
        n = len(x)
        classic = 1 - 6 * np.sum((rx - ry) ** 2) / (n * (n * n - 1))
        assert spearman(x, y).r == pytest.approx(classic, abs=1e-12)


class TestStudentT:
    def test_zero(self):
        for df in [0.5, 1, 7, 100]:
            assert student_t_sf(0.0, df) == 0.5

    def test_cauchy_quartile(self):
        assert student_t_sf(1.0, 1) == pytest.approx(0.25, abs=1e-15)
        # closed form 1/2 - arctan(t)/pi
        for t in [0.2, 3.0, 40.0]:
            assert student_t_sf(t, 1) == pytest.approx(0.5 - math.atan(t) / math.pi, abs=1e-14)

    def test_table_value(self):
        expect = quad_sf(2.086, 20)
        assert expect == pytest.approx(0.025, abs=5e-5)
        assert student_t_sf(2.086, 20) == pytest.approx(expect, abs=1e-10)

    @pytest.mark.parametrize("df", DF_GRID)
    def test_grid_against_quadrature(self, df):
        prev = 1.0
        for t in T_GRID:
            v = student_t_sf(t, df)
            assert v == pytest.approx(quad_sf(t, df), abs=1e-10)
            assert v <= prev
            prev = v

    def test_df2_closed_form(self):
        for t in [0.1, 1.3, 7.0]:
            assert student_t_sf(t, 2) == pytest.approx(0.5 - t / (2 * math.sqrt(t * t + 2)), abs=1e-15)

    def test_negative_t(self):
        assert student_t_sf(-1.5, 9) == pytest.approx(1 - student_t_sf(1.5, 9), abs=1e-15)

    def test_far_tail(self):
        # two-sided P for |t| = 40 at 61 dof is tiny but positive
        v = student_t_sf(40.0, 61)
        assert 0 < v < 1e-40

    def test_large_df_approaches_normal(self):
        assert student_t_sf(1.96, 1e7) == pytest.approx(0.5 * math.erfc(1.96 / math.sqrt(2)), abs=1e-7)

    def test_rejects_bad_df(self):
        with pytest.raises(ValueError):
            student_t_sf(1.0, 0)

    @given(st.floats(0.1, 50), st.floats(0.1, 50), st.floats(0.001, 0.999))
    def test_betainc_symmetry(self, a, b, x):
        assert betainc_reg(a, b, x) + betainc_reg(b, a, 1 - x) == pytest.approx(1.0, abs=1e-12)


def _brute_partial(y, X, j):
    # residualize y and X[:, j] on the remaining columns plus intercept
    others = np.column_stack([np.ones(len(y))] + [X[:, k] for k in range(X.shape[1]) if k != j])
    ry = y - others @ np.linalg.lstsq(others, y, rcond=None)[0]
    rx = X[:, j] - others @ np.linalg.lstsq(others, X[:, j], rcond=None)[0]
    return float(ry @ rx / math.sqrt((ry @ ry) * (rx @ rx)))


class TestPartialCorrelation:
    def _frame(self, y, X):
        return AlignedFrame(Series.from_values(y),
                            tuple((f"x{k}", Series.from_values(X[:, k])) for k in range(X.shape[1])))

    def test_matches_residualized_correlation(self):
        gen = np.random.default_rng(11)
        for _ in range(100):
            n = int(gen.integers(6, 13))
            k = int(gen.integers(1, 4))
            X = gen.normal(size=(n, k))
            y = X @ gen.normal(size=k) + gen.normal(size=n)
            fit = fit_ols(self._frame(y, X))
            for j in range(k):
                pc = partial_correlation(fit, f"x{j}")
                assert abs(pc.r) <= 1
                assert pc.r == pytest.approx(_brute_partial(y, X, j), abs=1e-8)
                assert pc.p_value == fit.coef(f"x{j}").p_value

    def test_zero_t(self):
        class Fake:
            terms = ["const", "x"]
            tvalues = np.array([1.0, 0.0])
            pvalues = np.array([0.3, 1.0])
            df_resid = 10
            n = 12
        assert partial_correlation(Fake(), "x").r == 0.0

    def test_single_predictor_equals_pearson(self):
        gen = np.random.default_rng(2)
        x = gen.normal(size=20)
        y = x + gen.normal(size=20)
        fit = fit_ols(self._frame(y, x[:, None]))
        assert partial_correlation(fit, "x0").r == pytest.approx(pearson(x, y).r, abs=1e-12)

    def test_unknown(self):
        gen = np.random.default_rng(2)
        X = gen.normal(size=(10, 1))
        fit = fit_ols(self._frame(gen.normal(size=10), X))
        with pytest.raises(UnknownPredictor):
            partial_correlation(fit, "nope")


class TestDurbinWatson:
    def test_constant_residuals(self):
        assert durbin_watson([2.5, 2.5, 2.5, 2.5]) == 0.0

    def test_alternating(self):
        assert durbin_watson([1, -1, 1, -1]) == 3.0

    def test_zero(self):
        with pytest.raises(ZeroResiduals):
            durbin_watson([0.0, 0.0, 0.0])

    def test_bounds(self):
        gen = np.random.default_rng(0)
        for _ in range(200):
            e = gen.normal(size=int(gen.integers(2, 30)))
            assert 0 <= durbin_watson(e) <= 4

    def test_white_noise_expectation(self):
        d = [durbin_watson(rng.polar_normal(rng.generator(s), 63)) for s in range(10_000)]
        assert 1.9 <= np.mean(d) <= 2.1
