"""Series CSV reading and writing.

Grammar: an optional header line ``year,value`` followed by one
``year,value`` record per line, LF or CRLF line endings, no quoting.
Whitespace around fields is ignored and blank lines are skipped. Rows may
appear in any order; they are sorted by year before validation.
"""
from __future__ import annotations

import csv
import io
import math
import os

import numpy as np

from .core import Series
from .errors import DuplicateYear, EmptyFile, GapInYears, InvalidSeries, MalformedRow

__all__ = ["parse_series_csv", "format_series_csv", "read_series", "write_series"]

HEADER = ("year", "value")


def parse_series_csv(text: str) -> Series:
    if text.startswith("\ufeff"):
        text = text[1:]
    rows = []
    for lineno, row in enumerate(csv.reader(io.StringIO(text)), start=1):
        fields = [f.strip() for f in row]
        if not fields or fields == [""]:
            continue
        if not rows and lineno == 1 and tuple(f.lower() for f in fields) == HEADER:
            continue
        if len(fields) != 2:
            raise MalformedRow(f"line {lineno}: expected 2 fields, got {len(fields)}")
        try:
            year = int(fields[0])
            value = float(fields[1])
        except ValueError:
            raise MalformedRow(f"line {lineno}: cannot parse {','.join(row)!r}") from None
        if not math.isfinite(value):
            raise MalformedRow(f"line {lineno}: non-finite value {fields[1]!r}")
        rows.append((year, value))
    if not rows:
        raise EmptyFile("no data rows")
    rows.sort(key=lambda r: r[0])
    years = np.array([r[0] for r in rows], dtype=np.int64)
    steps = np.diff(years)
    if np.any(steps == 0):
        dup = int(years[1:][steps == 0][0])
        raise DuplicateYear(f"year {dup} appears more than once")
    if np.any(steps != 1):
        i = int(np.flatnonzero(steps != 1)[0])
        raise GapInYears(f"no observations between {years[i]} and {years[i + 1]}")
    if years.size < 2:
        raise InvalidSeries("a series needs at least 2 years of data")
    return Series(years, np.array([r[1] for r in rows]))


def format_series_csv(s: Series) -> str:
    """CSV text with a header and values at 17 significant digits (exact)."""
    lines = ["year,value"]
    lines += [f"{int(t)},{v:.17g}" for t, v in zip(s.times, s.values)]
    return "\n".join(lines) + "\n"


def read_series(path: str | os.PathLike) -> Series:
    with open(path, encoding="utf-8", newline="") as fh:
        return parse_series_csv(fh.read())


def write_series(s: Series, path: str | os.PathLike) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(format_series_csv(s))
