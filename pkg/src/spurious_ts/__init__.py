"""Diagnostics for spurious regressions between trending annual series."""

__version__ = "0.1.0"

from .core import AlignedFrame, Series, align, difference, lag, trend_correlation
from .stats import (
    CorrelationResult,
    durbin_watson,
    partial_correlation,
    pearson,
    spearman,
    student_t_sf,
)
from .regress import RegressionFit, fit_differenced, fit_lagged_dv, fit_ols
from .arima import ArimaFit, ArimaOrder, css_negloglik, fit_regression_arima, simulate_arima
from .select import KpssResult, SelectionTrace, auto_arima, kpss_test, select_d
from .montecarlo import (
    McConfig,
    McResult,
    gen_coinflip_walk,
    gen_random_walk,
    run_experiment,
    trend_target,
)
from .io import format_series_csv, parse_series_csv, read_series, write_series
from .diagnose import DiagnosticReport, VerdictPolicy, diagnose, format_table
