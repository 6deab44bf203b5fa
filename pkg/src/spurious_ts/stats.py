"""Correlation measures, exact Student t tail probabilities and the
Durbin-Watson residual statistic.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    DegenerateSeries,
    InsufficientObservations,
    LengthMismatch,
    UnknownPredictor,
    ZeroResiduals,
)

__all__ = [
    "CorrelationResult",
    "pearson",
    "spearman",
    "midranks",
    "student_t_sf",
    "two_sided_p",
    "betainc_reg",
    "partial_correlation",
    "durbin_watson",
]

_CF_EPS = 1e-16
_CF_TINY = 1e-300
_CF_MAXITER = 20000


@dataclass(frozen=True)
class CorrelationResult:
    r: float
    n: int
    t_stat: float
    p_value: float


def _as_vector(x) -> np.ndarray:
    values = getattr(x, "values", x)
    return np.asarray(values, dtype=float).ravel()


def _t_from_r(r: float, df: float) -> float:
    if abs(r) >= 1.0:
        return math.copysign(math.inf, r)
    return r * math.sqrt(df / (1.0 - r * r))


def pearson(x, y) -> CorrelationResult:
    """Pearson product-moment correlation with a two-sided t-test.

    ``x`` and ``y`` may be arrays, sequences or :class:`~spurious_ts.core.Series`.
    """
    x = _as_vector(x)
    y = _as_vector(y)
    if x.size != y.size:
        raise LengthMismatch(f"lengths differ: {x.size} vs {y.size}")
    n = x.size
    if n < 3:
        raise InsufficientObservations(f"correlation needs n >= 3, got {n}")
    dx = x - x.mean()
    dy = y - y.mean()
    sxx = float(dx @ dx)
    syy = float(dy @ dy)
    if sxx == 0.0 or syy == 0.0:
        raise DegenerateSeries("correlation undefined for a constant sequence")
    r = float(dx @ dy) / math.sqrt(sxx * syy)
    r = min(1.0, max(-1.0, r))
    t = _t_from_r(r, n - 2)
    return CorrelationResult(r=r, n=n, t_stat=t, p_value=two_sided_p(t, n - 2))


def midranks(x) -> np.ndarray:
    """1-based ranks; tied values share the mean of the ranks they span."""
    x = _as_vector(x)
    order = np.argsort(x, kind="mergesort")
    sorted_x = x[order]
    ranks = np.empty(x.size, dtype=float)
    # boundaries of runs of equal values in sorted order
    edges = np.flatnonzero(np.diff(sorted_x)) + 1
    starts = np.concatenate(([0], edges))
    stops = np.concatenate((edges, [x.size]))
    for lo, hi in zip(starts, stops):
        ranks[order[lo:hi]] = 0.5 * (lo + 1 + hi)
    return ranks


def spearman(x, y) -> CorrelationResult:
    """Spearman rank correlation: Pearson on midranks."""
    x = _as_vector(x)
    y = _as_vector(y)
    if x.size != y.size:
        raise LengthMismatch(f"lengths differ: {x.size} vs {y.size}")
    return pearson(midranks(x), midranks(y))


def _betacf(a: float, b: float, x: float) -> float:
    # modified Lentz evaluation of the incomplete beta continued fraction
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _CF_TINY:
        d = _CF_TINY
    d = 1.0 / d
    h = d
    for m in range(1, _CF_MAXITER + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _CF_TINY:
            d = _CF_TINY
        c = 1.0 + aa / c
        if abs(c) < _CF_TINY:
            c = _CF_TINY
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _CF_TINY:
            d = _CF_TINY
        c = 1.0 + aa / c
        if abs(c) < _CF_TINY:
            c = _CF_TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _CF_EPS:
            return h
    raise ArithmeticError(f"incomplete beta fraction did not converge (a={a}, b={b}, x={x})")


def betainc_reg(a: float, b: float, x: float, xc: float | None = None) -> float:
    """Regularized incomplete beta function ``I_x(a, b)``.

    ``xc`` may carry an accurately computed ``1 - x``; it avoids cancellation
    when ``x`` is close to 1.
    """
    if xc is None:
        xc = 1.0 - x
    if a <= 0 or b <= 0:
        raise ValueError("betainc_reg requires a > 0 and b > 0")
    if x <= 0.0:
        return 0.0
    if xc <= 0.0:
        return 1.0
    log_front = (
        math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
        + a * math.log(x) + b * math.log(xc)
    )
    front = math.exp(log_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _betacf(a, b, x) / a
    return 1.0 - front * _betacf(b, a, xc) / b


def student_t_sf(t: float, df: float) -> float:
    """Upper-tail probability ``P(T > t)`` for Student's t with ``df`` dof."""
    df = float(df)
    if not df > 0:
        raise ValueError(f"degrees of freedom must be positive, got {df}")
    t = float(t)
    if math.isnan(t):
        return math.nan
    if t == 0.0:
        return 0.5
    if math.isinf(t):
        return 0.0 if t > 0 else 1.0
    t2 = t * t
    denom = df + t2
    tail = 0.5 * betainc_reg(0.5 * df, 0.5, df / denom, t2 / denom)
    return tail if t > 0 else 1.0 - tail


def two_sided_p(t: float, df: float) -> float:
    if math.isnan(t):
        return math.nan
    return min(1.0, 2.0 * student_t_sf(abs(t), df))


def partial_correlation(fit, predictor_name: str) -> CorrelationResult:
    """Partial correlation of the outcome with one regressor of a fitted OLS.

    Recovered from the coefficient's t-statistic ``t`` and the residual
    degrees of freedom: ``sign(t) * sqrt(t^2 / (t^2 + df))``.
    """
    try:
        idx = fit.terms.index(predictor_name)
    except ValueError:
        raise UnknownPredictor(
            f"{predictor_name!r} is not a term of the fit (terms: {fit.terms})"
        ) from None
    t = float(fit.tvalues[idx])
    df = fit.df_resid
    if math.isinf(t):
        r = math.copysign(1.0, t)
    else:
        r = math.copysign(math.sqrt(t * t / (t * t + df)), t) if t != 0 else 0.0
    return CorrelationResult(r=r, n=fit.n, t_stat=t, p_value=float(fit.pvalues[idx]))


def durbin_watson(residuals: Sequence[float]) -> float:
    """Durbin-Watson statistic of a residual sequence.

    Near 2 for serially uncorrelated residuals, near 0 under strong positive
    autocorrelation.
    """
    e = _as_vector(residuals)
    if e.size < 2:
        raise InsufficientObservations("Durbin-Watson needs at least 2 residuals")
    denom = float(e @ e)
    if denom == 0.0:
        raise ZeroResiduals("all residuals are zero")
    de = np.diff(e)
    return float(de @ de) / denom
