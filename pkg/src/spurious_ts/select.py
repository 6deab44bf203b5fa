"""Automatic order selection for regression with ARIMA errors.

The differencing order comes from repeated level-stationarity KPSS tests on
the outcome; (p, q) come from a stepwise AICc search around the best of a
small set of seed orders, in the manner of Hyndman and Khandakar (2008).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import product

import numpy as np

from .arima import ArimaFit, ArimaOrder, max_inverse_root, fit_regression_arima
from .core import Series
from .errors import (
    DegenerateSeries,
    InsufficientObservations,
    NonConvergence,
    NumericalError,
)

__all__ = [
    "KpssResult",
    "SelectionTrace",
    "kpss_test",
    "kpss_lags",
    "select_d",
    "auto_arima",
    "KPSS_CRITICAL_VALUES",
]

# candidates with an AR or MA root closer than this to the unit circle are
# discarded as near-nonstationary / near-cancelling
ROOT_MARGIN = 1.01

# level-stationarity asymptotic critical values (Kwiatkowski et al. 1992)
KPSS_CRITICAL_VALUES = {0.10: 0.347, 0.05: 0.463, 0.025: 0.574, 0.01: 0.739}


@dataclass(frozen=True)
class KpssResult:
    statistic: float
    lags: int
    reject_stationarity: bool
    critical_value: float = KPSS_CRITICAL_VALUES[0.05]


def kpss_lags(n: int) -> int:
    """Bartlett window width ``floor(4 (n/100)^(1/4))``."""
    return int(math.floor(4.0 * (n / 100.0) ** 0.25))


def kpss_test(s, lags: int | None = None) -> KpssResult:
    """KPSS test of the null that ``s`` is level stationary, at 5%."""
    x = np.asarray(getattr(s, "values", s), dtype=float)
    n = x.size
    if n < 10:
        raise InsufficientObservations(f"KPSS needs at least 10 observations, got {n}")
    if np.ptp(x) == 0:
        raise DegenerateSeries("KPSS is undefined for a constant series")
    e = x - x.mean()
    partial = np.cumsum(e)
    eta = float(partial @ partial) / (n * n)
    L = kpss_lags(n) if lags is None else int(lags)
    lrv = float(e @ e) / n
    for lag in range(1, L + 1):
        weight = 1.0 - lag / (L + 1.0)
        lrv += 2.0 * weight * float(e[lag:] @ e[:-lag]) / n
    stat = eta / lrv
    crit = KPSS_CRITICAL_VALUES[0.05]
    return KpssResult(statistic=stat, lags=L, reject_stationarity=stat > crit)


def select_d(s, max_d: int = 2) -> int:
    """Smallest d in ``0..max_d`` whose d-th difference passes KPSS."""
    if not 0 <= max_d <= 2:
        raise ValueError(f"max_d must be in 0..2, got {max_d}")
    x = np.asarray(getattr(s, "values", s), dtype=float)
    if x.size - max_d < 10:
        raise InsufficientObservations(
            f"{x.size} observations leave fewer than 10 after {max_d} differences"
        )
    for d in range(max_d + 1):
        if not kpss_test(x).reject_stationarity:
            return d
        x = np.diff(x)
    return max_d


@dataclass
class SelectionTrace:
    """Record of a stepwise search.

    ``visited`` lists every order that was fitted successfully with its
    AICc, in the order fitted; ``failed`` lists orders that were skipped
    with the reason.
    """

    visited: list[tuple[ArimaOrder, float]] = field(default_factory=list)
    chosen: ArimaOrder | None = None
    chosen_fit: ArimaFit | None = None
    failed: list[tuple[ArimaOrder, str]] = field(default_factory=list)

    def __str__(self) -> str:
        lines = [f"{'order':<10}{'AICc':>14}"]
        for order, value in self.visited:
            mark = "  <- chosen" if order == self.chosen else ""
            lines.append(f"{str(order):<10}{value:>14.4f}{mark}")
        for order, reason in self.failed:
            lines.append(f"{str(order):<10}{'skipped':>14}  ({reason})")
        return "\n".join(lines)


def _rank(order: ArimaOrder, value: float):
    return (value, order.p + order.q, order.p)


def _neighbours(order: ArimaOrder, max_p: int, max_q: int):
    p, q, d = order.p, order.q, order.d
    moves = [(-1, 0), (1, 0), (0, -1), (0, 1),
             (-1, -1), (1, 1), (-1, 1), (1, -1)]
    for dp, dq in moves:
        np_, nq = p + dp, q + dq
        if 0 <= np_ <= max_p and 0 <= nq <= max_q:
            yield ArimaOrder(np_, d, nq)


def auto_arima(
    y,
    x=None,
    max_p: int = 5,
    max_q: int = 5,
    max_d: int = 2,
    d: int | None = None,
    stepwise: bool = True,
    include_intercept: bool = True,
    root_margin: float = ROOT_MARGIN,
) -> SelectionTrace:
    """Select and fit an ARIMA(p, d, q) error model for ``y`` on ``x``.

    ``d`` is chosen by :func:`select_d` on ``y`` alone unless passed
    explicitly. With ``stepwise=False`` every ``p <= max_p``, ``q <= max_q``
    combination is fitted (an exhaustive check on the stepwise result).
    Candidates that fail to converge, are otherwise numerically unusable,
    or have an AR or MA root of modulus below ``root_margin`` are recorded
    in ``trace.failed`` and skipped.
    """
    if not isinstance(y, Series):
        y = Series.from_values(np.asarray(y, dtype=float))
    if d is None:
        d = select_d(y, max_d=max_d)
    trace = SelectionTrace()
    fits: dict[ArimaOrder, ArimaFit] = {}
    tried: set[ArimaOrder] = set()

    def attempt(order: ArimaOrder):
        if order in tried:
            return
        tried.add(order)
        try:
            fit = fit_regression_arima(y, x, order, include_intercept=include_intercept)
        except (NumericalError, InsufficientObservations) as exc:
            trace.failed.append((order, type(exc).__name__))
            return
        if not math.isfinite(fit.aicc):
            trace.failed.append((order, "non-finite AICc"))
            return
        inv_root = max(max_inverse_root(fit.phi, -1.0), max_inverse_root(fit.theta, 1.0))
        if inv_root * root_margin > 1.0:
            trace.failed.append((order, f"root modulus {1.0 / inv_root:.4f} < {root_margin}"))
            return
        fits[order] = fit
        trace.visited.append((order, fit.aicc))

    def best_order():
        return min(fits, key=lambda o: _rank(o, fits[o].aicc))

    if stepwise:
        seeds = [(0, 0), (1, 0), (0, 1), (2, 2)]
        for p, q in seeds:
            if p <= max_p and q <= max_q:
                attempt(ArimaOrder(p, d, q))
        if not fits:
            raise NonConvergence(f"no seed order could be fitted:\n{trace}")
        current = best_order()
        while True:
            for cand in _neighbours(current, max_p, max_q):
                attempt(cand)
            best = best_order()
            if best == current:
                break
            current = best
    else:
        for p, q in product(range(max_p + 1), range(max_q + 1)):
            attempt(ArimaOrder(p, d, q))
        if not fits:
            raise NonConvergence(f"no candidate order could be fitted:\n{trace}")

    trace.chosen = best_order()
    trace.chosen_fit = fits[trace.chosen]
    return trace
