"""Annual time-series container and the transforms used by every model.

A :class:`Series` is a run of consecutive integer years with finite values.
Gaps and non-finite values are rejected at construction, so downstream code
can assume complete, unit-step data.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import stats
from .errors import (
    DegenerateSeries,
    InsufficientObservations,
    InvalidSeries,
    LagTooLarge,
    NoOverlap,
    OrderTooLarge,
)

__all__ = [
    "Series",
    "AlignedFrame",
    "difference",
    "lag",
    "align",
    "trend_correlation",
]


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Series:
    """Consecutive annual observations.

    Parameters
    ----------
    times : sequence of int
        Strictly increasing years with step 1.
    values : sequence of float
        Observations, one per year, all finite.
    """

    times: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        times = np.asarray(self.times)
        values = np.array(self.values, dtype=float)
        if times.ndim != 1 or values.ndim != 1:
            raise InvalidSeries("times and values must be one-dimensional")
        if times.shape != values.shape:
            raise InvalidSeries(
                f"{times.size} times but {values.size} values"
            )
        if times.size < 2:
            raise InvalidSeries("a series needs at least 2 observations")
        if times.dtype.kind == "f":
            if not np.all(np.isfinite(times)) or np.any(times != np.round(times)):
                raise InvalidSeries("time index must be integer years")
        elif times.dtype.kind not in "iu":
            raise InvalidSeries("time index must be integer years")
        times = times.astype(np.int64)
        if np.any(np.diff(times) != 1):
            raise InvalidSeries(
                "time index must increase in steps of exactly 1"
            )
        if not np.all(np.isfinite(values)):
            raise InvalidSeries("values contain NaN or infinite entries")
        object.__setattr__(self, "times", _frozen(times))
        object.__setattr__(self, "values", _frozen(values))

    @classmethod
    def from_values(cls, values: Iterable[float], start: int = 1) -> "Series":
        values = np.asarray(list(values), dtype=float)
        return cls(np.arange(start, start + values.size), values)

    @property
    def start(self) -> int:
        return int(self.times[0])

    @property
    def end(self) -> int:
        return int(self.times[-1])

    def __len__(self) -> int:
        return int(self.values.size)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Series):
            return NotImplemented
        return (np.array_equal(self.times, other.times)
                and np.array_equal(self.values, other.values))

    def __repr__(self) -> str:
        return f"Series({self.start}..{self.end}, n={len(self)})"

    def restrict(self, start: int, end: int) -> "Series":
        """Sub-series over the inclusive year range ``[start, end]``."""
        lo = start - self.start
        hi = end - self.start + 1
        if lo < 0 or hi > len(self) or hi - lo < 2:
            raise InsufficientObservations(
                f"cannot restrict {self!r} to {start}..{end}"
            )
        return Series(self.times[lo:hi], self.values[lo:hi])


@dataclass(frozen=True)
class AlignedFrame:
    """An outcome and named predictors sharing one time index."""

    outcome: Series
    predictors: tuple[tuple[str, Series], ...] = field(default=())

    def __post_init__(self):
        preds = tuple((str(name), s) for name, s in self.predictors)
        object.__setattr__(self, "predictors", preds)
        if not preds:
            raise InsufficientObservations("at least one predictor is required")
        names = [name for name, _ in preds]
        if len(set(names)) != len(names):
            raise InvalidSeries(f"duplicate predictor names: {names}")
        for name, s in preds:
            if not np.array_equal(s.times, self.outcome.times):
                raise InvalidSeries(
                    f"predictor {name!r} is not aligned with the outcome"
                )
        if self.n < len(preds) + 2:
            raise InsufficientObservations(
                f"{self.n} observations for {len(preds)} predictors; "
                f"need at least {len(preds) + 2}"
            )

    @property
    def n(self) -> int:
        return len(self.outcome)

    @property
    def times(self) -> np.ndarray:
        return self.outcome.times

    @property
    def names(self) -> list[str]:
        return [name for name, _ in self.predictors]

    def predictor(self, name: str) -> Series:
        for key, s in self.predictors:
            if key == name:
                return s
        raise KeyError(name)

    def matrix(self) -> np.ndarray:
        """Predictor values as an ``(n, k)`` array, columns in frame order."""
        return np.column_stack([s.values for _, s in self.predictors])


def difference(s: Series, order: int = 1) -> Series:
    """Apply the first-difference operator ``order`` times.

    The result starts at the ``(order + 1)``-th original year.
    """
    order = int(order)
    if order < 1:
        raise OrderTooLarge(f"difference order must be >= 1, got {order}")
    # the result must itself be a Series, so at least 2 values must remain
    if order > len(s) - 2:
        raise OrderTooLarge(
            f"difference order {order} leaves fewer than 2 of {len(s)} observations"
        )
    values = s.values
    for _ in range(order):
        values = values[1:] - values[:-1]
    return Series(s.times[order:], values)


def lag(s: Series, k: int = 1) -> tuple[Series, Series]:
    """Return ``(lagged, current)`` with ``lagged_t = s_{t-k}``.

    Both series carry the shortened index ``s.times[k:]``.
    """
    k = int(k)
    if k < 1:
        raise LagTooLarge(f"lag must be >= 1, got {k}")
    if k >= len(s) - 1:
        raise LagTooLarge(f"lag {k} leaves fewer than 2 of {len(s)} observations")
    times = s.times[k:]
    return Series(times, s.values[:-k]), Series(times, s.values[k:])


def align(outcome: Series, predictors: Sequence[tuple[str, Series]]) -> AlignedFrame:
    """Restrict the outcome and every predictor to their common years."""
    predictors = list(predictors)
    if not predictors:
        raise InsufficientObservations("at least one predictor is required")
    start = max([outcome.start] + [s.start for _, s in predictors])
    end = min([outcome.end] + [s.end for _, s in predictors])
    if end < start:
        raise NoOverlap(
            "outcome and predictors share no years "
            f"(latest start {start}, earliest end {end})"
        )
    if end - start + 1 < len(predictors) + 2:
        raise InsufficientObservations(
            f"common index {start}..{end} is too short for "
            f"{len(predictors)} predictors"
        )
    return AlignedFrame(
        outcome.restrict(start, end),
        tuple((name, s.restrict(start, end)) for name, s in predictors),
    )


def trend_correlation(s: Series) -> float:
    """Spearman correlation between a series and its time index."""
    if len(s) < 3:
        raise InsufficientObservations("trend correlation needs at least 3 values")
    if np.ptp(s.values) == 0:
        raise DegenerateSeries("constant series has no trend correlation")
    return stats.spearman(s.times.astype(float), s.values).r
