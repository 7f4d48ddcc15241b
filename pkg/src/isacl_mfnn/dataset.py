"""Daily cumulative-count series: loading, chronological splits and scaling."""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass, field
from datetime import date, timedelta
from pathlib import Path

import numpy as np

from .errors import GapError, InvalidArgumentError, ParseError

HEADER = ("date", "cumulative_cases")
DEFAULT_HORIZON = 12


@dataclass(frozen=True)
class SeriesDataset:
    dates: tuple[date, ...]
    day_index: np.ndarray
    cumulative: np.ndarray
    warnings: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        day_index = np.asarray(self.day_index, dtype=int)
        cumulative = np.asarray(self.cumulative, dtype=float)
        if not (len(self.dates) == day_index.size == cumulative.size):
            raise InvalidArgumentError("dates, day_index and cumulative must have equal length")
        object.__setattr__(self, "dates", tuple(self.dates))
        object.__setattr__(self, "day_index", day_index)
        object.__setattr__(self, "cumulative", cumulative)

    def __len__(self):
        return len(self.dates)

    def __eq__(self, other):
        if not isinstance(other, SeriesDataset):
            return NotImplemented
        return (self.dates == other.dates and np.array_equal(self.day_index, other.day_index)
                and np.array_equal(self.cumulative, other.cumulative))

    __hash__ = None

    @property
    def start(self) -> date:
        return self.dates[0]

    @property
    def end(self) -> date:
        return self.dates[-1]

    def date_of(self, day: int) -> date:
        """Calendar date of a (possibly future) day index."""
        return self.dates[0] + timedelta(days=int(day) - int(self.day_index[0]))

    def subset(self, sl: slice) -> SeriesDataset:
        return SeriesDataset(self.dates[sl], self.day_index[sl], self.cumulative[sl], self.warnings)

    @classmethod
    def from_counts(cls, start: date, counts) -> SeriesDataset:
        counts = np.asarray(counts, dtype=float)
        dates = tuple(start + timedelta(days=i) for i in range(counts.size))
        return cls(dates, np.arange(1, counts.size + 1), counts)


def _monotonicity_warnings(dates, counts) -> list[str]:
    out = []
    for i in range(1, len(counts)):
        if counts[i] < counts[i - 1]:
            out.append(f"cumulative count decreases on {dates[i].isoformat()} "
                       f"({counts[i - 1]:g} -> {counts[i]:g})")
    return out


def load_series(path) -> SeriesDataset:
    """Read a ``date,cumulative_cases`` CSV into a daily series with day index 1..T."""
    rows: list[tuple[date, float, int]] = []
    with Path(path).open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise ParseError("file is empty", line=1)
        if tuple(h.strip().lstrip("﻿") for h in header) != HEADER:
            raise ParseError(f"expected header {','.join(HEADER)!r}, got {','.join(header)!r}", line=1)
        for row in reader:
            line = reader.line_num
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != 2:
                raise ParseError(f"expected 2 fields, got {len(row)}", line=line)
            try:
                day = date.fromisoformat(row[0].strip())
            except ValueError:
                raise ParseError(f"bad ISO date {row[0]!r}", line=line) from None
            text = row[1].strip()
            if not text.isdigit():
                raise ParseError(f"count must be a non-negative integer, got {row[1]!r}", line=line)
            rows.append((day, float(int(text)), line))
    if not rows:
        raise ParseError("file has no data rows", line=2)

    rows.sort(key=lambda r: r[0])
    for (d0, _, _), (d1, _, line) in zip(rows, rows[1:]):
        if d0 == d1:
            raise ParseError(f"duplicated date {d1.isoformat()}", line=line)
    dates = [r[0] for r in rows]
    missing = []
    for d0, d1 in zip(dates, dates[1:]):
        missing.extend(d0 + timedelta(days=k) for k in range(1, (d1 - d0).days))
    if missing:
        raise GapError(missing)

    counts = np.array([r[1] for r in rows])
    notes = _monotonicity_warnings(dates, counts)
    for note in notes:
        warnings.warn(note, stacklevel=2)
    return SeriesDataset(tuple(dates), np.arange(1, len(dates) + 1), counts, tuple(notes))


def write_series(path, ds: SeriesDataset) -> None:
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(HEADER)
        for d, c in zip(ds.dates, ds.cumulative):
            writer.writerow([d.isoformat(), int(round(c))])


def split(ds: SeriesDataset, ratio: float | None = None,
          split_date: date | None = None) -> tuple[SeriesDataset, SeriesDataset]:
    """Chronological split.

    ``split_date`` is the last training day.  ``ratio`` keeps the first
    ``floor(ratio * T)`` days for training.
    """
    if (ratio is None) == (split_date is None):
        raise InvalidArgumentError("give exactly one of ratio or split_date")
    if ratio is not None:
        if not 0.0 < ratio < 1.0:
            raise InvalidArgumentError(f"ratio must lie in (0, 1), got {ratio}")
        n_train = math.floor(ratio * len(ds))
    else:
        if isinstance(split_date, str):
            split_date = date.fromisoformat(split_date)
        n_train = sum(1 for d in ds.dates if d <= split_date)
    if n_train < 1 or n_train >= len(ds):
        raise InvalidArgumentError(f"split leaves an empty side ({n_train} of {len(ds)} days in train)")
    return ds.subset(slice(0, n_train)), ds.subset(slice(n_train, None))


@dataclass(frozen=True)
class Scaler:
    """``day / input_max`` for inputs and ``count / target_max`` for targets."""

    input_max: float
    target_max: float

    def __post_init__(self):
        if not self.input_max > 0:
            raise InvalidArgumentError("input_max must be positive")
        if not self.target_max > 0:
            raise InvalidArgumentError("target scale is zero: training counts are all zero")

    def scale_input(self, day):
        return np.asarray(day, dtype=float) / self.input_max

    def unscale_input(self, x):
        return np.asarray(x, dtype=float) * self.input_max

    def scale_target(self, count):
        return np.asarray(count, dtype=float) / self.target_max

    def unscale_target(self, y):
        return np.asarray(y, dtype=float) * self.target_max

    def apply(self, ds: SeriesDataset) -> tuple[np.ndarray, np.ndarray]:
        return self.scale_input(ds.day_index), self.scale_target(ds.cumulative)


def fit_scaler(train: SeriesDataset, horizon_days: int = DEFAULT_HORIZON,
               series_days: int | None = None) -> Scaler:
    """Fit the scaler on training targets only.

    The input range covers day 1 through ``series_days + horizon_days``;
    ``series_days`` defaults to the last training day.  Day indices are
    calendar information, so using the full series length leaks nothing about
    test counts.
    """
    if len(train) == 0:
        raise InvalidArgumentError("training series is empty")
    if horizon_days < 0:
        raise InvalidArgumentError("horizon_days must be non-negative")
    last = int(train.day_index[-1]) if series_days is None else int(series_days)
    return Scaler(float(last + horizon_days), float(np.max(train.cumulative)))
