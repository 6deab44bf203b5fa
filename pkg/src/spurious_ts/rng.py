"""Seeded random streams.

Every simulated series gets its own generator derived from ``(master seed,
index)`` through :class:`numpy.random.SeedSequence`, whose hash-based
spawning makes each stream independent of batch size and evaluation order.
"""
from __future__ import annotations

import numpy as np

__all__ = ["generator", "child_seed", "polar_normal", "coin_flips"]


def generator(seed: int, index: int | None = None) -> np.random.Generator:
    """PCG64 generator for ``seed``, or for the ``index``-th child stream."""
    if seed < 0:
        raise ValueError(f"seed must be non-negative, got {seed}")
    if index is None:
        ss = np.random.SeedSequence(seed)
    else:
        ss = np.random.SeedSequence(seed, spawn_key=(int(index),))
    return np.random.Generator(np.random.PCG64(ss))


def child_seed(seed: int, index: int) -> int:
    """64-bit integer seed for the ``index``-th stream below ``seed``."""
    ss = np.random.SeedSequence(seed, spawn_key=(int(index),))
    lo, hi = ss.generate_state(2, dtype=np.uint32)
    return int(lo) | (int(hi) << 32)


def polar_normal(rng: np.random.Generator, n: int) -> np.ndarray:
    """Standard normal variates by Marsaglia's polar method.

    Pairs of uniforms on (-1, 1) falling inside the unit disc are kept and
    mapped to two independent normals each.
    """
    out = np.empty(n)
    filled = 0
    while filled < n:
        need = n - filled
        # acceptance rate is pi/4; oversample so one pass nearly always suffices
        m = int(need * 0.65) + 8
        u = 2.0 * rng.random((m, 2)) - 1.0
        s = np.einsum("ij,ij->i", u, u)
        keep = (s > 0.0) & (s < 1.0)
        u = u[keep]
        s = s[keep]
        factor = np.sqrt(-2.0 * np.log(s) / s)
        z = (u * factor[:, None]).ravel()
        take = min(need, z.size)
        out[filled:filled + take] = z[:take]
        filled += take
    return out


def coin_flips(rng: np.random.Generator, n: int) -> np.ndarray:
    """``n`` fair +1/-1 steps."""
    return np.where(rng.random(n) < 0.5, 1.0, -1.0)
