"""Regression with ARIMA(p, d, q) errors, estimated by conditional sum of
squares.

The model is

    y_t = b_0 + x_t' b + eta_t,    phi(L) (1 - L)^d eta_t = theta(L) e_t

and is estimated on the d-times differenced scale, where the intercept acts
as a drift term when ``d >= 1``:

    z_t = diff^d y_t = c + (diff^d x_t)' b + w_t,    phi(L) w_t = theta(L) e_t.

Innovations ``e_t`` are recovered recursively with all pre-sample ``w`` and
``e`` set to zero, and the innovation variance is concentrated out of the
Gaussian likelihood.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.signal import lfilter

from . import rng as _rng
from .core import Series, align
from .errors import (
    InsufficientObservations,
    InvalidParameters,
    LengthMismatch,
    NonConvergence,
)
from .regress import INTERCEPT, solve_ols
from .simplex import nelder_mead
from .stats import two_sided_p

__all__ = [
    "ArimaOrder",
    "ArimaFit",
    "css_negloglik",
    "fit_regression_arima",
    "simulate_arima",
    "is_stationary",
    "is_invertible",
    "max_inverse_root",
    "MAX_ORDER",
    "PENALTY",
]

MAX_ORDER = 5
PENALTY = 1e6
XTOL = 1e-8
MAXFEV = 5000
HESSIAN_REL_STEP = 1e-4


@dataclass(frozen=True, order=True)
class ArimaOrder:
    p: int
    d: int
    q: int

    def __post_init__(self):
        for name in ("p", "d", "q"):
            v = getattr(self, name)
            if int(v) != v or not 0 <= v <= MAX_ORDER:
                raise ValueError(f"{name} must be an integer in 0..{MAX_ORDER}, got {v}")
            object.__setattr__(self, name, int(v))

    def __iter__(self):
        return iter((self.p, self.d, self.q))

    def __str__(self) -> str:
        return f"({self.p},{self.d},{self.q})"

    @classmethod
    def coerce(cls, order) -> "ArimaOrder":
        return order if isinstance(order, cls) else cls(*order)


def max_inverse_root(coefs, sign: float) -> float:
    """Largest inverse-root modulus of ``1 + sign*c_1 z + ... + sign*c_m z^m``.

    Use ``sign=-1`` for AR and ``sign=+1`` for MA coefficients; the
    polynomial has all roots outside the unit circle iff the result is < 1.
    """
    coefs = np.asarray(coefs, dtype=float)
    if coefs.size == 0:
        return 0.0
    if coefs.size == 1:
        return abs(coefs[0])
    return float(np.max(np.abs(np.roots(np.concatenate(([1.0], sign * coefs))))))


def is_stationary(phi) -> bool:
    """All roots of ``1 - phi_1 z - ... - phi_p z^p`` lie outside the unit circle."""
    return max_inverse_root(np.asarray(phi, dtype=float), -1.0) < 1.0


def is_invertible(theta) -> bool:
    """All roots of ``1 + theta_1 z + ... + theta_q z^q`` lie outside the unit circle."""
    return max_inverse_root(np.asarray(theta, dtype=float), 1.0) < 1.0


def _exog_matrix(y, x):
    """Normalize ``(y, x)`` into ``(y_series, X, names)``.

    ``x`` may be None, a Series, a list of ``(name, Series)`` pairs (aligned
    against ``y`` on their common years), or an ``(n,)``/``(n, k)`` array.
    """
    if not isinstance(y, Series):
        y = Series.from_values(np.asarray(y, dtype=float))
    if x is None:
        return y, np.empty((len(y), 0)), []
    if isinstance(x, Series):
        x = [("x1", x)]
    if isinstance(x, (list, tuple)) and x and isinstance(x[0], tuple):
        frame = align(y, x)
        return frame.outcome, frame.matrix(), frame.names
    X = np.asarray(x, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    if X.shape[0] != len(y):
        raise LengthMismatch(f"exogenous rows {X.shape[0]} != series length {len(y)}")
    return y, X, [f"x{i + 1}" for i in range(X.shape[1])]


def _diff(a: np.ndarray, d: int) -> np.ndarray:
    for _ in range(d):
        a = a[1:] - a[:-1]
    return a


class _CssObjective:
    """Concentrated CSS negative log-likelihood on prepared arrays."""

    def __init__(self, z: np.ndarray, D: np.ndarray, p: int, q: int):
        self.z = z
        self.D = D
        self.p = p
        self.q = q
        self.kb = D.shape[1]
        self.n = z.size

    def split(self, params):
        params = np.asarray(params, dtype=float)
        kb, p = self.kb, self.p
        return params[:kb], params[kb:kb + p], params[kb + p:kb + p + self.q]

    def innovations(self, params) -> np.ndarray:
        beta, phi, theta = self.split(params)
        w = self.z - self.D @ beta if self.kb else self.z
        if self.p == 0 and self.q == 0:
            return w
        return lfilter(np.concatenate(([1.0], -phi)),
                       np.concatenate(([1.0], theta)), w)

    def violation(self, params) -> float:
        _, phi, theta = self.split(params)
        ar = max_inverse_root(phi, -1.0)
        ma = max_inverse_root(theta, 1.0)
        return max(ar, ma)

    def __call__(self, params) -> float:
        worst = self.violation(params)
        if worst >= 1.0:
            return PENALTY + worst
        e = self.innovations(params)
        ssr = max(float(e @ e), 1e-300)
        if not math.isfinite(ssr):
            return PENALTY
        n = self.n
        return 0.5 * n * (math.log(2.0 * math.pi * ssr / n) + 1.0)


def _prepare(y, x, order: ArimaOrder, include_intercept: bool):
    y, X, names = _exog_matrix(y, x)
    z = _diff(y.values, order.d)
    Xd = _diff(X, order.d)
    if include_intercept:
        D = np.column_stack([np.ones(z.size), Xd])
        names = [INTERCEPT] + names
    else:
        D = Xd
    return y, z, D, names


def css_negloglik(params, y, x=None, order=(0, 0, 0), include_intercept: bool = True) -> float:
    """Conditional-sum-of-squares Gaussian negative log-likelihood.

    ``params`` is ``[intercept, exogenous coefficients..., phi_1..phi_p,
    theta_1..theta_q]`` (the intercept only when ``include_intercept``); the
    innovation variance is concentrated out. Parameters outside the
    stationary/invertible region return ``PENALTY`` plus the largest
    offending root modulus.
    """
    order = ArimaOrder.coerce(order)
    _, z, D, _ = _prepare(y, x, order, include_intercept)
    obj = _CssObjective(z, D, order.p, order.q)
    params = np.asarray(params, dtype=float)
    expected = D.shape[1] + order.p + order.q
    if params.size != expected:
        raise ValueError(f"expected {expected} parameters, got {params.size}")
    return obj(params)


@dataclass(frozen=True, eq=False)
class ArimaFit:
    """Estimated regression with ARIMA errors.

    ``beta`` and friends are indexed like ``terms`` (intercept or drift
    first). ``phi``/``theta`` hold the AR and MA coefficients and
    ``arma_se`` their standard errors in the same order.
    """

    order: ArimaOrder
    terms: list[str]
    beta: np.ndarray
    beta_se: np.ndarray
    beta_t: np.ndarray
    beta_p: np.ndarray
    phi: np.ndarray
    theta: np.ndarray
    arma_se: np.ndarray
    sigma2: float
    loglik: float
    aicc: float
    residuals: np.ndarray
    n_eff: int
    k: int
    nfev: int
    start_negloglik: float = field(default=math.nan)

    def coef(self, name: str):
        i = self.terms.index(name)
        return (float(self.beta[i]), float(self.beta_se[i]),
                float(self.beta_t[i]), float(self.beta_p[i]))

    @property
    def params(self) -> np.ndarray:
        return np.concatenate((self.beta, self.phi, self.theta))


def aicc(loglik: float, k: int, n_eff: int) -> float:
    if n_eff - k - 1 <= 0:
        return math.inf
    return -2.0 * loglik + 2.0 * k + 2.0 * k * (k + 1) / (n_eff - k - 1)


def _hessian(f, x: np.ndarray, h: np.ndarray) -> np.ndarray:
    m = x.size
    H = np.empty((m, m))
    f0 = f(x)
    fp = np.empty(m)
    fm = np.empty(m)
    for i in range(m):
        e = np.zeros(m)
        e[i] = h[i]
        fp[i] = f(x + e)
        fm[i] = f(x - e)
        H[i, i] = (fp[i] - 2.0 * f0 + fm[i]) / (h[i] * h[i])
    for i in range(m):
        for j in range(i + 1, m):
            ei = np.zeros(m)
            ej = np.zeros(m)
            ei[i] = h[i]
            ej[j] = h[j]
            v = (f(x + ei + ej) - f(x + ei - ej) - f(x - ei + ej) + f(x - ei - ej))
            H[i, j] = H[j, i] = v / (4.0 * h[i] * h[j])
    return H


def _standard_errors(obj: _CssObjective, x: np.ndarray, scale: np.ndarray) -> np.ndarray:
    h = HESSIAN_REL_STEP * np.maximum(np.abs(x), scale)
    H = _hessian(obj, x, h)
    if not np.all(np.isfinite(H)) or np.any(H >= PENALTY / 10):
        return np.full(x.size, np.nan)
    try:
        cov = np.linalg.inv(H)
    except np.linalg.LinAlgError:
        return np.full(x.size, np.nan)
    var = np.diag(cov)
    with np.errstate(invalid="ignore"):
        return np.where(var > 0, np.sqrt(np.abs(var)), np.nan)


def fit_regression_arima(
    y,
    x=None,
    order=(0, 0, 0),
    include_intercept: bool = True,
    xtol: float = XTOL,
    maxfev: int = MAXFEV,
) -> ArimaFit:
    """Fit a regression with ARIMA(p, d, q) errors by CSS and Nelder-Mead.

    The simplex starts from the OLS solution on the differenced scale with
    zero ARMA coefficients; its initial edges are the OLS standard errors
    for the regression terms and 0.1 for ARMA terms. If the evaluation
    budget runs out, the search restarts once from the best vertex found.

    Standard errors come from a central finite-difference Hessian of the
    concentrated objective and are approximate. P-values use Student t with
    ``n_eff - k`` degrees of freedom, where ``k`` counts every free
    parameter including the innovation variance.
    """
    order = ArimaOrder.coerce(order)
    y, z, D, names = _prepare(y, x, order, include_intercept)
    kb = D.shape[1]
    n_eff = z.size
    k = kb + order.p + order.q + 1
    if n_eff <= k + 2:
        raise InsufficientObservations(
            f"{n_eff} observations after differencing for {k} parameters"
        )
    obj = _CssObjective(z, D, order.p, order.q)

    if kb:
        beta0, xtx_inv = solve_ols(D, z)
        resid = z - D @ beta0
        s2 = float(resid @ resid) / max(n_eff - kb, 1)
        se0 = np.sqrt(np.clip(np.diag(xtx_inv), 0, None) * s2)
        beta_step = np.maximum(se0, 1e-6 * np.maximum(np.abs(beta0), 1.0))
    else:
        beta0 = np.empty(0)
        beta_step = np.empty(0)
    x0 = np.concatenate((beta0, np.zeros(order.p + order.q)))
    step = np.concatenate((beta_step, np.full(order.p + order.q, 0.1)))
    f_start = obj(x0)

    res = nelder_mead(obj, x0, step=step, xtol=xtol, maxfev=maxfev)
    nfev = res.nfev
    if not res.converged:
        res = nelder_mead(obj, res.x, step=step, xtol=xtol, maxfev=maxfev)
        nfev += res.nfev
        if not res.converged:
            raise NonConvergence(
                f"ARIMA{order} did not converge within 2 x {maxfev} evaluations"
            )
    xhat = res.x
    if obj.violation(xhat) >= 1.0:
        raise NonConvergence(f"ARIMA{order} optimum left the admissible region")

    se = _standard_errors(obj, xhat, step)
    beta, phi, theta = obj.split(xhat)
    e = obj.innovations(xhat)
    sigma2 = float(e @ e) / n_eff
    loglik = -res.fun
    df = n_eff - k
    beta_se = se[:kb]
    with np.errstate(divide="ignore", invalid="ignore"):
        beta_t = beta / beta_se
    beta_p = np.array([two_sided_p(t, df) for t in beta_t])
    return ArimaFit(
        order=order,
        terms=names,
        beta=beta.copy(),
        beta_se=beta_se,
        beta_t=beta_t,
        beta_p=beta_p,
        phi=phi.copy(),
        theta=theta.copy(),
        arma_se=se[kb:],
        sigma2=sigma2,
        loglik=loglik,
        aicc=aicc(loglik, k, n_eff),
        residuals=e,
        n_eff=n_eff,
        k=k,
        nfev=nfev,
        start_negloglik=f_start,
    )


def simulate_arima(
    order=(0, 0, 0),
    phi: Sequence[float] = (),
    theta: Sequence[float] = (),
    beta: Sequence[float] = (0.0,),
    sigma2: float = 1.0,
    x=None,
    n: int = 100,
    seed: int = 0,
    burn_in: int = 100,
    start: int = 1,
) -> Series:
    """Draw one path of a regression with ARIMA errors.

    ``beta[0]`` is the intercept (a drift on the differenced scale when
    ``d >= 1``) and ``beta[1:]`` multiply the columns of ``x``. The
    differenced-scale errors follow the ARMA recursion with Gaussian
    innovations and ``burn_in`` discarded warm-up draws; they are then
    integrated ``d`` times from zero pre-sample levels.
    """
    order = ArimaOrder.coerce(order)
    phi = np.asarray(phi, dtype=float)
    theta = np.asarray(theta, dtype=float)
    beta = np.asarray(beta, dtype=float)
    if phi.size != order.p or theta.size != order.q:
        raise ValueError(f"ARIMA{order} needs {order.p} AR and {order.q} MA coefficients")
    if not is_stationary(phi):
        raise InvalidParameters(f"AR coefficients {phi} are not stationary")
    if not is_invertible(theta):
        raise InvalidParameters(f"MA coefficients {theta} are not invertible")
    if n < 10:
        raise ValueError(f"n must be >= 10, got {n}")
    if sigma2 <= 0:
        raise ValueError("sigma2 must be positive")
    if beta.size == 0:
        beta = np.zeros(1)
    if x is None:
        X = np.empty((n, 0))
    else:
        X = np.asarray(getattr(x, "values", x), dtype=float)
        if X.ndim == 1:
            X = X[:, None]
    if X.shape[0] != n:
        raise LengthMismatch(f"x has {X.shape[0]} rows, expected {n}")
    if X.shape[1] != beta.size - 1:
        raise ValueError(f"{X.shape[1]} exogenous columns but {beta.size - 1} slopes")

    gen = _rng.generator(seed)
    eps = math.sqrt(sigma2) * _rng.polar_normal(gen, n + burn_in)
    u = lfilter(np.concatenate(([1.0], theta)), np.concatenate(([1.0], -phi)), eps)
    w = beta[0] + u[burn_in:]
    for _ in range(order.d):
        w = np.cumsum(w)
    y = w + X @ beta[1:]
    return Series(np.arange(start, start + n), y)
