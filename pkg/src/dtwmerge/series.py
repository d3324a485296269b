"""Univariate series containers, z-normalization and length equalization."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator, Sequence

import numpy as np

from .errors import InvalidDataset, InvalidSeries

# A series is a 1-d float64 array; ``as_series`` enforces that.
TimeSeries = np.ndarray


class Split(str, Enum):
    TRAIN = "train"
    TEST = "test"


def as_series(values) -> TimeSeries:
    """Validate ``values`` and return them as a 1-d float64 array."""
    try:
        arr = np.asarray(values, dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise InvalidSeries(f"not a numeric sequence: {exc}") from exc
    if arr.ndim != 1:
        raise InvalidSeries(f"expected a 1-d series, got shape {arr.shape}")
    if arr.size == 0:
        raise InvalidSeries("empty series")
    if not np.all(np.isfinite(arr)):
        raise InvalidSeries("series contains NaN or inf")
    return arr


@dataclass
class LabeledDataset:
    """Ordered (series, label) pairs of one split.

    Labels are opaque strings; two labels are the same class iff the strings
    are equal.
    """

    name: str
    series: list[TimeSeries]
    labels: list[str]
    split: Split = Split.TRAIN
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if len(self.series) != len(self.labels):
            raise InvalidDataset(
                f"{len(self.series)} series but {len(self.labels)} labels"
            )
        if not self.series:
            raise InvalidDataset(f"dataset {self.name!r} has no items")
        self.series = [as_series(s) for s in self.series]
        self.labels = [str(label) for label in self.labels]
        self.split = Split(self.split)

    def __len__(self) -> int:
        return len(self.series)

    def __iter__(self) -> Iterator[tuple[TimeSeries, str]]:
        return iter(zip(self.series, self.labels))

    @property
    def items(self) -> list[tuple[TimeSeries, str]]:
        return list(zip(self.series, self.labels))

    @property
    def lengths(self) -> list[int]:
        return [len(s) for s in self.series]

    @property
    def classes(self) -> list[str]:
        """Distinct labels in order of first appearance."""
        return list(dict.fromkeys(self.labels))

    def class_counts(self) -> Counter:
        return Counter(self.labels)

    def is_equal_length(self) -> bool:
        return len(set(self.lengths)) == 1

    def replace(self, series: Sequence, labels: Sequence | None = None, **kw):
        return LabeledDataset(
            name=kw.pop("name", self.name),
            series=list(series),
            labels=list(self.labels if labels is None else labels),
            split=kw.pop("split", self.split),
            meta=kw.pop("meta", dict(self.meta)),
        )


def z_normalize(series) -> TimeSeries:
    """Zero mean, unit population standard deviation.

    A constant series maps to all zeros.
    """
    x = as_series(series)
    sd = x.std()
    if sd == 0.0:
        return np.zeros_like(x)
    return (x - x.mean()) / sd


def is_z_normalized(series, tol: float = 1e-6, ddof: int = 0) -> bool:
    """True iff ``|mean| <= tol`` and ``|std - 1| <= tol``.

    ``ddof=1`` checks against the sample standard deviation instead, which is
    how the 2018 archive files were normalized.
    """
    x = np.asarray(series, dtype=np.float64)
    if x.size == 0:
        raise InvalidSeries("empty series")
    if x.size <= ddof:
        return False
    return bool(abs(x.mean()) <= tol and abs(x.std(ddof=ddof) - 1.0) <= tol)


def mean_length(dataset: LabeledDataset) -> int:
    """Mean series length, rounded half up."""
    lengths = dataset.lengths
    total, n = sum(lengths), len(lengths)
    # floor(total / n + 1/2) in exact integer arithmetic
    return max(1, (2 * total + n) // (2 * n))


def drop_step(values: TimeSeries, index: int) -> TimeSeries:
    return np.delete(values, index)


def insert_median(values: TimeSeries, index: int) -> TimeSeries:
    """Insert the median of ``values[index]`` and ``values[index + 1]`` between them.

    For a length-1 series the single value is duplicated.
    """
    if len(values) == 1:
        return np.concatenate([values, values])
    mid = (values[index] + values[index + 1]) / 2.0
    return np.insert(values, index + 1, mid)


def fit_length(values: TimeSeries, target: int, rng: np.random.Generator) -> TimeSeries:
    """Drop or insert one random step at a time until ``len == target``."""
    out = values
    while len(out) > target:
        out = drop_step(out, int(rng.integers(len(out))))
    while len(out) < target:
        pair = int(rng.integers(len(out) - 1)) if len(out) > 1 else 0
        out = insert_median(out, pair)
    return out


def equalize_lengths(dataset: LabeledDataset, rng: np.random.Generator) -> LabeledDataset:
    """Bring every series to ``mean_length(dataset)``.

    Series already at the target length are returned untouched and consume no
    random draws.
    """
    target = mean_length(dataset)
    series = [s if len(s) == target else fit_length(s, target, rng) for s in dataset.series]
    meta = dict(dataset.meta, equalized_length=target)
    return dataset.replace(series, meta=meta)
