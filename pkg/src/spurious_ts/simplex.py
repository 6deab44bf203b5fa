"""Nelder-Mead downhill simplex minimization.

Standard coefficients (reflection 1, expansion 2, contraction 1/2, shrink
1/2). Terminates when the simplex diameter falls below ``xtol`` or after
``maxfev`` objective evaluations, whichever comes first.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

__all__ = ["SimplexResult", "nelder_mead"]


@dataclass
class SimplexResult:
    x: np.ndarray
    fun: float
    nfev: int
    nit: int
    converged: bool


def _diameter(sim: np.ndarray) -> float:
    d = sim[:, None, :] - sim[None, :, :]
    return float(np.sqrt(np.max(np.einsum("ijk,ijk->ij", d, d))))


def nelder_mead(
    f: Callable[[np.ndarray], float],
    x0: Sequence[float],
    step: Sequence[float] | float = 0.1,
    xtol: float = 1e-8,
    maxfev: int = 5000,
) -> SimplexResult:
    """Minimize ``f`` starting from ``x0``.

    Parameters
    ----------
    f : callable
        Objective ``f(x) -> float``. Non-finite values are treated as +inf.
    x0 : array_like
        Starting vertex.
    step : float or array_like
        Edge length of the initial simplex along each coordinate axis.
    xtol : float
        Convergence threshold on the simplex diameter.
    maxfev : int
        Evaluation budget.
    """
    x0 = np.asarray(x0, dtype=float).ravel()
    dim = x0.size
    step = np.broadcast_to(np.asarray(step, dtype=float), (dim,)).copy()
    step[step == 0] = 0.1

    nfev = 0

    def fun(x):
        nonlocal nfev
        nfev += 1
        v = float(f(x))
        return v if np.isfinite(v) else np.inf

    sim = np.empty((dim + 1, dim))
    sim[0] = x0
    for i in range(dim):
        sim[i + 1] = x0
        sim[i + 1, i] += step[i]
    fsim = np.array([fun(v) for v in sim])

    nit = 0
    converged = False
    while True:
        order = np.argsort(fsim, kind="stable")
        sim = sim[order]
        fsim = fsim[order]
        if _diameter(sim) < xtol:
            converged = True
            break
        if nfev >= maxfev:
            break
        nit += 1

        centroid = sim[:-1].mean(axis=0)
        worst = sim[-1]
        xr = 2.0 * centroid - worst
        fr = fun(xr)
        if fr < fsim[0]:
            xe = 3.0 * centroid - 2.0 * worst
            fe = fun(xe)
            if fe < fr:
                sim[-1], fsim[-1] = xe, fe
            else:
                sim[-1], fsim[-1] = xr, fr
            continue
        if fr < fsim[-2]:
            sim[-1], fsim[-1] = xr, fr
            continue
        if fr < fsim[-1]:
            xc = centroid + 0.5 * (xr - centroid)
            fc = fun(xc)
            if fc <= fr:
                sim[-1], fsim[-1] = xc, fc
                continue
        else:
            xc = centroid + 0.5 * (worst - centroid)
            fc = fun(xc)
            if fc < fsim[-1]:
                sim[-1], fsim[-1] = xc, fc
                continue
        # shrink towards the best vertex
        sim[1:] = sim[0] + 0.5 * (sim[1:] - sim[0])
        for i in range(1, dim + 1):
            fsim[i] = fun(sim[i])

    best = int(np.argmin(fsim))
    return SimplexResult(x=sim[best].copy(), fun=float(fsim[best]), nfev=nfev,
                         nit=nit, converged=converged)
