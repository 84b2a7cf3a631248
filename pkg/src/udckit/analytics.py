"""Class distributions and string-length distributions over record streams.

Two counting methods attribute records to the ten main classes: ``leading``
ticks only the class of the first class-bearing number in a string, ``all``
ticks every class-bearing number (before and after auxiliary signs).  The
length distribution maps string length to occurrence count, the shape that
plots directly on log-log axes.

All accumulators merge by addition, so chunked/parallel folds must agree
with sequential ones.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, NamedTuple

from .ingest import WEIGHT_MODES, UdcRecord
from .notation import LENGTH_METRICS, all_classes, leading_class, string_length

CLASS_COUNT = 10
COUNTING_METHODS = ("leading", "all")


@dataclass
class ClassDistribution:
    """Tick counts per main class 0-9 under one counting method.

    ``unclassed`` counts records that produced no tick at all (auxiliary-only
    headings); they are reported, never silently dropped.
    """

    method: str
    counts: list[int] = field(default_factory=lambda: [0] * CLASS_COUNT)
    unclassed: int = 0

    def total_ticks(self) -> int:
        return sum(self.counts)

    def merge(self, other: "ClassDistribution") -> "ClassDistribution":
        if other.method != self.method:
            raise ValueError("cannot merge distributions of different methods")
        return ClassDistribution(
            self.method,
            [a + b for a, b in zip(self.counts, other.counts)],
            self.unclassed + other.unclassed,
        )


@dataclass
class LengthDistribution:
    """Occurrence count per string length; zero-count bins are never stored."""

    metric: str
    bins: dict[int, int] = field(default_factory=dict)

    def total(self) -> int:
        return sum(self.bins.values())

    def merge(self, other: "LengthDistribution") -> "LengthDistribution":
        if other.metric != self.metric:
            raise ValueError("cannot merge distributions of different metrics")
        bins = dict(self.bins)
        for length, count in other.bins.items():
            bins[length] = bins.get(length, 0) + count
        return LengthDistribution(self.metric, bins)


def class_distribution(
    records: Iterable[UdcRecord],
    method: str = "leading",
    weight_mode: str = "unique",
) -> ClassDistribution:
    """Aggregate class ticks over the accepted records of a stream."""
    if method not in COUNTING_METHODS:
        raise ValueError(f"unknown counting method: {method!r}")
    if weight_mode not in WEIGHT_MODES:
        raise ValueError(f"unknown weight mode: {weight_mode!r}")
    dist = ClassDistribution(method)
    for record in records:
        if record.expression is None:
            continue
        weight = record.frequency if weight_mode == "frequency" else 1
        if method == "leading":
            cls = leading_class(record.expression)
            if cls is None:
                dist.unclassed += weight
            else:
                dist.counts[cls] += weight
        else:
            classes = all_classes(record.expression)
            if not classes:
                dist.unclassed += weight
            else:
                for cls in classes:
                    dist.counts[cls] += weight
    return dist


def length_distribution(
    records: Iterable[UdcRecord], metric: str = "chars"
) -> LengthDistribution:
    """Bin accepted records by string length (one tick per record)."""
    if metric not in LENGTH_METRICS:
        raise ValueError(f"unknown length metric: {metric!r}")
    dist = LengthDistribution(metric)
    for record in records:
        if record.expression is None:
            continue
        length = string_length(record.raw_udc, metric)
        dist.bins[length] = dist.bins.get(length, 0) + 1
    return dist


class DistributionSummary(NamedTuple):
    min: int
    max: int
    mode: int
    total: int


def distribution_summary(dist: LengthDistribution) -> DistributionSummary:
    """Smallest/largest binned length, modal length and record total.

    Ties on the modal count go to the smallest length, so summaries are
    deterministic.  Raises ``ValueError`` on an empty distribution.
    """
    if not dist.bins:
        raise ValueError("empty-distribution")
    lengths = sorted(dist.bins)
    mode = max(lengths, key=lambda length: (dist.bins[length], -length))
    return DistributionSummary(lengths[0], lengths[-1], mode, dist.total())
