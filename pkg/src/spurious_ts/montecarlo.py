"""Spurious-significance experiments on random walks.

A batch of independent random walks is correlated against a fixed target
series twice: in levels and in first differences. Trending targets produce
"significant" level correlations far more often than the nominal rate,
while the changes recover the nominal size.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Literal

import numpy as np

from . import rng as _rng
from .core import Series, difference, trend_correlation
from .errors import DegenerateSeries, LengthMismatch
from .stats import pearson

__all__ = [
    "McConfig",
    "McRecord",
    "McResult",
    "gen_coinflip_walk",
    "gen_random_walk",
    "trend_target",
    "run_experiment",
    "FAMILIES",
    "N_BINS",
]

Family = Literal["coin_flip", "gaussian_walk"]
N_BINS = 100
BIN_EDGES = np.linspace(0.0, 1.0, N_BINS + 1)


def gen_coinflip_walk(length: int, seed: int, start: int = 1) -> Series:
    """Running count of heads minus tails over ``length`` fair tosses."""
    if length < 2:
        raise ValueError(f"length must be >= 2, got {length}")
    steps = _rng.coin_flips(_rng.generator(seed), length)
    return Series(np.arange(start, start + length), np.cumsum(steps))


def gen_random_walk(length: int, seed: int, start: int = 1) -> Series:
    """Gaussian random walk ``r_t = r_{t-1} + e_t`` with ``r_1 = e_1``."""
    if length < 2:
        raise ValueError(f"length must be >= 2, got {length}")
    steps = _rng.polar_normal(_rng.generator(seed), length)
    return Series(np.arange(start, start + length), np.cumsum(steps))


FAMILIES = {"coin_flip": gen_coinflip_walk, "gaussian_walk": gen_random_walk}


def trend_target(length: int, seed: int, start: int = 1, noise_var: float = 0.25) -> Series:
    """Linear trend ``t`` plus N(0, ``noise_var``) noise.

    Stand-in for an empirical trending target. The noise stream is the
    ``seed``'s root stream, disjoint from every per-series child stream.
    """
    t = np.arange(1, length + 1, dtype=float)
    noise = math.sqrt(noise_var) * _rng.polar_normal(_rng.generator(seed), length)
    return Series(np.arange(start, start + length), t + noise)


@dataclass(frozen=True)
class McConfig:
    family: Family = "gaussian_walk"
    n_series: int = 10_000
    length: int = 63
    seed: int = 0
    alpha: float = 0.01

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"family must be one of {sorted(FAMILIES)}, got {self.family!r}")
        if self.n_series < 1:
            raise ValueError("n_series must be >= 1")
        if self.length < 10:
            raise ValueError("length must be >= 10")
        if not 0.0 < self.alpha <= 1.0:
            # alpha = 1 is allowed as a vacuous threshold
            raise ValueError("alpha must lie in (0, 1]")


@dataclass(frozen=True)
class McRecord:
    index: int
    level_r: float
    level_p: float
    change_r: float
    change_p: float
    trend_rho: float


@dataclass
class McResult:
    config: McConfig
    records: list[McRecord]
    n_skipped: int
    level_sig_rate: float
    change_sig_rate: float
    level_hist: np.ndarray
    change_hist: np.ndarray
    trend_summary: float
    skipped: list[int] = field(default_factory=list)

    @property
    def n_used(self) -> int:
        return len(self.records)

    def level_pvalues(self) -> np.ndarray:
        return np.array([r.level_p for r in self.records])

    def change_pvalues(self) -> np.ndarray:
        return np.array([r.change_p for r in self.records])

    def to_dict(self, include_records: bool = True) -> dict:
        out = {
            "config": asdict(self.config),
            "n_used": self.n_used,
            "n_skipped": self.n_skipped,
            "skipped": list(self.skipped),
            "level_sig_rate": self.level_sig_rate,
            "change_sig_rate": self.change_sig_rate,
            "trend_summary": self.trend_summary,
            "histogram": {
                "bin_edges": BIN_EDGES.tolist(),
                "levels": self.level_hist.tolist(),
                "changes": self.change_hist.tolist(),
            },
        }
        if include_records:
            out["records"] = [asdict(r) for r in self.records]
        return out

    def histogram_rows(self):
        """``(bin_low, bin_high, count_levels, count_changes)`` per bin."""
        for i in range(N_BINS):
            yield (float(BIN_EDGES[i]), float(BIN_EDGES[i + 1]),
                   int(self.level_hist[i]), int(self.change_hist[i]))


def _evaluate(target: Series, dtarget: Series, family: str, seed: int, index: int):
    gen = FAMILIES[family]
    s = gen(len(target), _rng.child_seed(seed, index), start=target.start)
    try:
        level = pearson(target, s)
        change = pearson(dtarget, difference(s, 1))
        rho = abs(trend_correlation(s))
    except DegenerateSeries:
        return None
    return McRecord(index, level.r, level.p_value, change.r, change.p_value, rho)


def _evaluate_chunk(args):
    target, dtarget, family, seed, lo, hi = args
    return [(i, _evaluate(target, dtarget, family, seed, i)) for i in range(lo, hi)]


def run_experiment(target: Series, config: McConfig, workers: int = 1) -> McResult:
    """Correlate ``config.n_series`` generated walks against ``target``.

    Series ``i`` is drawn from the child stream ``(config.seed, i)``, so the
    result does not depend on ``workers`` or on evaluation order. Walks that
    are constant in levels or in changes are skipped and counted.
    """
    if len(target) != config.length:
        raise LengthMismatch(
            f"target has {len(target)} observations, config.length is {config.length}"
        )
    dtarget = difference(target, 1)
    if np.ptp(target.values) == 0 or np.ptp(dtarget.values) == 0:
        raise DegenerateSeries("target must vary in levels and in changes")

    n = config.n_series
    if workers <= 1 or n < 2 * workers:
        pairs = _evaluate_chunk((target, dtarget, config.family, config.seed, 0, n))
    else:
        bounds = np.linspace(0, n, workers * 4 + 1).astype(int)
        jobs = [(target, dtarget, config.family, config.seed, int(lo), int(hi))
                for lo, hi in zip(bounds[:-1], bounds[1:]) if hi > lo]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            pairs = [p for chunk in pool.map(_evaluate_chunk, jobs) for p in chunk]
    pairs.sort(key=lambda p: p[0])

    records = [rec for _, rec in pairs if rec is not None]
    skipped = [i for i, rec in pairs if rec is None]
    level_p = np.array([r.level_p for r in records])
    change_p = np.array([r.change_p for r in records])
    used = len(records)
    if used:
        level_rate = float(np.count_nonzero(level_p < config.alpha)) / used
        change_rate = float(np.count_nonzero(change_p < config.alpha)) / used
        trend = float(np.median([r.trend_rho for r in records]))
    else:
        level_rate = change_rate = trend = math.nan
    level_hist = np.histogram(level_p, bins=BIN_EDGES)[0]
    change_hist = np.histogram(change_p, bins=BIN_EDGES)[0]
    return McResult(
        config=config,
        records=records,
        n_skipped=len(skipped),
        level_sig_rate=level_rate,
        change_sig_rate=change_rate,
        level_hist=level_hist,
        change_hist=change_hist,
        trend_summary=trend,
        skipped=skipped,
    )
