"""Ordinary least squares with classical inference.

Fits are solved through a column-pivoted Householder QR of the
column-normalized design matrix; the pivoted diagonal doubles as the rank
test, so near-collinear trending regressors fail loudly instead of producing
unstable estimates.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
import scipy.linalg

from .core import AlignedFrame, Series, difference, lag
from .errors import DegenerateSeries, RankDeficient
from .stats import two_sided_p

__all__ = [
    "Coefficient",
    "RegressionFit",
    "fit_ols",
    "fit_differenced",
    "fit_lagged_dv",
    "solve_ols",
    "INTERCEPT",
    "LAGGED_OUTCOME",
]

INTERCEPT = "const"
LAGGED_OUTCOME = "y_lag1"
RANK_RTOL = 1e-10


class Coefficient(NamedTuple):
    estimate: float
    std_error: float
    t_stat: float
    p_value: float


@dataclass(frozen=True, eq=False)
class RegressionFit:
    """Result of an OLS fit.

    Arrays ``params``, ``bse``, ``tvalues`` and ``pvalues`` are indexed like
    ``terms``; the intercept, when present, comes first.
    """

    terms: list[str]
    params: np.ndarray
    bse: np.ndarray
    tvalues: np.ndarray
    pvalues: np.ndarray
    residuals: np.ndarray
    df_resid: int
    r_squared: float
    n: int
    times: np.ndarray
    has_intercept: bool = True

    def coef(self, name: str) -> Coefficient:
        i = self.terms.index(name)
        return Coefficient(float(self.params[i]), float(self.bse[i]),
                           float(self.tvalues[i]), float(self.pvalues[i]))

    @property
    def rss(self) -> float:
        return float(self.residuals @ self.residuals)

    @property
    def sigma2(self) -> float:
        return self.rss / self.df_resid


def solve_ols(X: np.ndarray, y: np.ndarray):
    """Least-squares solve of ``X b = y``.

    Returns ``(beta, xtx_inv)``: the coefficient vector and the unscaled
    covariance ``(X'X)^-1``. Raises :class:`RankDeficient` when the pivoted
    QR diagonal of the column-normalized design decays below ``RANK_RTOL``
    relative to its leading entry.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    n, k = X.shape
    if n < k:
        raise RankDeficient(f"{k} columns but only {n} rows")
    norms = np.sqrt(np.einsum("ij,ij->j", X, X))
    if np.any(norms == 0):
        raise RankDeficient("design matrix has an all-zero column")
    Xs = X / norms
    Q, R, piv = scipy.linalg.qr(Xs, mode="economic", pivoting=True)
    diag = np.abs(np.diag(R))
    if diag[-1] <= RANK_RTOL * diag[0]:
        raise RankDeficient(
            "design matrix is rank deficient (collinear columns, e.g. a "
            "constant regressor alongside the intercept)"
        )
    beta_perm = scipy.linalg.solve_triangular(R, Q.T @ y)
    r_inv = scipy.linalg.solve_triangular(R, np.eye(k))
    cov_perm = r_inv @ r_inv.T
    inv_piv = np.empty_like(piv)
    inv_piv[piv] = np.arange(k)
    beta = beta_perm[inv_piv] / norms
    cov = cov_perm[np.ix_(inv_piv, inv_piv)] / np.outer(norms, norms)
    return beta, cov


def _fit_matrix(X: np.ndarray, y: np.ndarray, terms: list[str],
                times: np.ndarray, has_intercept: bool) -> RegressionFit:
    n, k = X.shape
    beta, xtx_inv = solve_ols(X, y)
    resid = y - X @ beta
    df = n - k
    rss = float(resid @ resid)
    s2 = rss / df
    bse = np.sqrt(np.clip(np.diag(xtx_inv), 0, None) * s2)
    with np.errstate(divide="ignore", invalid="ignore"):
        tvalues = beta / bse
    pvalues = np.array([two_sided_p(t, df) for t in tvalues])
    if has_intercept:
        tss = float(np.sum((y - y.mean()) ** 2))
    else:
        tss = float(y @ y)
    r2 = 1.0 - rss / tss if tss > 0 else float("nan")
    r2 = min(1.0, max(0.0, r2)) if tss > 0 else r2
    return RegressionFit(
        terms=terms, params=beta, bse=bse, tvalues=tvalues, pvalues=pvalues,
        residuals=resid, df_resid=df, r_squared=r2, n=n, times=times,
        has_intercept=has_intercept,
    )


def fit_ols(frame: AlignedFrame, include_intercept: bool = True) -> RegressionFit:
    """OLS of the frame's outcome on its predictors."""
    X = frame.matrix()
    terms = frame.names
    if include_intercept:
        X = np.column_stack([np.ones(frame.n), X])
        terms = [INTERCEPT] + terms
    return _fit_matrix(X, frame.outcome.values, terms, frame.times, include_intercept)


def fit_differenced(frame: AlignedFrame, include_intercept: bool = True) -> RegressionFit:
    """OLS in changes: every column first-differenced once, then :func:`fit_ols`."""
    outcome = difference(frame.outcome, 1)
    predictors = []
    for name, s in frame.predictors:
        ds = difference(s, 1)
        if include_intercept and np.ptp(ds.values) == 0:
            raise DegenerateSeries(
                f"predictor {name!r} has constant changes (a linear ramp in levels)"
            )
        predictors.append((name, ds))
    return fit_ols(AlignedFrame(outcome, tuple(predictors)), include_intercept)


def fit_lagged_dv(frame: AlignedFrame, include_intercept: bool = True) -> RegressionFit:
    """OLS of ``y_t`` on the predictors and ``y_{t-1}``.

    The first year is dropped; the lagged outcome enters as the last term,
    named :data:`LAGGED_OUTCOME`.
    """
    if LAGGED_OUTCOME in frame.names:
        raise ValueError(f"predictor name {LAGGED_OUTCOME!r} is reserved")
    lagged, current = lag(frame.outcome, 1)
    start, end = current.start, current.end
    predictors = [(name, s.restrict(start, end)) for name, s in frame.predictors]
    predictors.append((LAGGED_OUTCOME, lagged))
    return fit_ols(AlignedFrame(current, tuple(predictors)), include_intercept)


def residual_series(fit: RegressionFit) -> Series:
    return Series(fit.times, fit.residuals)
