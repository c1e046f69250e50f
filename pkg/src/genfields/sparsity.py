"""Statistics over control signals: histograms, top-k sets, and reuse rates.

Control-signal magnitudes vary in range and scale between editing tests, so
each signal is first reduced to normalized absolute values in [0, 1]
(:func:`normalize_abs`).  From there the module builds mean histograms with
error bars across tests, the per-test sets of the k largest-magnitude
dimensions, and reuse rates measuring how often each dimension appears in
those sets across a batch of tests.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "SparsityReport",
    "TopKSet",
    "ReuseTable",
    "normalize_abs",
    "histogram_counts",
    "mean_histogram",
    "topk_set",
    "reuse_rates",
]

DEFAULT_BINS = 20
HIGH_FUNCTIONAL_THRESHOLD = 0.6
DEFAULT_TOP_K = 50


@dataclass(frozen=True, eq=False)
class SparsityReport:
    """Mean histogram over tests, with per-bin population standard deviations.

    ``high_functional_count`` is the mean number of normalized entries
    strictly above 0.6 per test; entries exactly at the threshold do not
    count.
    """

    bins_mean: np.ndarray
    bins_std: np.ndarray
    high_functional_count: float
    tests: int


@dataclass(frozen=True)
class TopKSet:
    """Dimensions holding the k largest absolute control values of one test."""

    k: int
    dims: frozenset[int]


@dataclass(frozen=True, eq=False)
class ReuseTable:
    """Union of top-k dimensions across tests, with per-dimension reuse rates.

    ``membership[t, j]`` is 1 when test t's top-k set contains
    ``union_dims[j]``; ``rates`` maps each union dimension to the fraction of
    tests containing it, always in (0, 1].
    """

    union_dims: tuple[int, ...]
    rates: dict[int, float]
    membership: np.ndarray


def _as_signal(delta) -> np.ndarray:
    arr = np.asarray(delta, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError(f"control signal must be a non-empty 1-D vector, got shape {arr.shape}")
    return arr


def normalize_abs(delta) -> np.ndarray:
    """Absolute values scaled by the maximum magnitude, into [0, 1].

    An all-zero signal has no scale and normalizes to all zeros.
    """
    arr = np.abs(_as_signal(delta))
    peak = arr.max()
    if peak == 0.0:
        return arr
    return arr / peak


def histogram_counts(values, bins: int = DEFAULT_BINS) -> np.ndarray:
    """Integer counts of normalized values over equal-width bins of [0, 1].

    Bin membership is floor(v * bins) with the top boundary clamped into the
    last bin, so a value exactly on an interior boundary goes up (0.6 with 20
    bins lands in bin 12).  Counts always sum to the vector dimension.
    """
    arr = _as_signal(values)
    if bins < 1:
        raise ValueError(f"bins must be >= 1, got {bins}")
    if arr.min() < 0.0 or arr.max() > 1.0:
        raise ValueError("histogram input must lie in [0, 1]; normalize first")
    idx = np.minimum((arr * bins).astype(int), bins - 1)
    return np.bincount(idx, minlength=bins)


def mean_histogram(
    tests,
    bins: int = DEFAULT_BINS,
    high_threshold: float = HIGH_FUNCTIONAL_THRESHOLD,
) -> SparsityReport:
    """Normalize each test's signal, histogram it, and average across tests.

    Standard deviations are population (not sample) values; they are
    descriptive error bars, not inferential statistics.
    """
    signals = [_as_signal(t) for t in tests]
    if not signals:
        raise ValueError("mean_histogram requires at least one test")
    dim = signals[0].size
    for i, s in enumerate(signals):
        if s.size != dim:
            raise ValueError(f"test {i} has dimension {s.size}, expected {dim}")
    histograms = []
    high_counts = []
    for s in signals:
        v = normalize_abs(s)
        h = histogram_counts(v, bins)
        if int(h.sum()) != dim:
            raise AssertionError("histogram counts must sum to the vector dimension")
        histograms.append(h)
        high_counts.append(int(np.count_nonzero(v > high_threshold)))
    stacked = np.array(histograms, dtype=float)
    return SparsityReport(
        bins_mean=stacked.mean(axis=0),
        bins_std=stacked.std(axis=0),
        high_functional_count=float(np.mean(high_counts)),
        tests=len(signals),
    )


def topk_set(delta, k: int = DEFAULT_TOP_K) -> TopKSet:
    """Dimensions of the k largest absolute values, ties broken toward smaller index.

    Rank 1 is the highest absolute value; requesting more dimensions than the
    signal has returns the full index set.
    """
    arr = _as_signal(delta)
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    take = min(k, arr.size)
    order = np.argsort(-np.abs(arr), kind="stable")
    return TopKSet(k=k, dims=frozenset(int(d) for d in order[:take]))


def reuse_rates(sets) -> ReuseTable:
    """Union the top-k sets of a batch of tests and rate each dimension.

    The reuse rate of a dimension is the fraction of tests whose set contains
    it; dimensions outside every set never enter the union, so all rates lie
    in [1/N, 1].
    """
    sets = list(sets)
    if not sets:
        raise ValueError("reuse_rates requires at least one top-k set")
    n = len(sets)
    union = sorted(set().union(*(s.dims for s in sets)))
    membership = np.zeros((n, len(union)), dtype=int)
    for t, s in enumerate(sets):
        for j, d in enumerate(union):
            if d in s.dims:
                membership[t, j] = 1
    counts = membership.sum(axis=0)
    rates = {d: float(c) / n for d, c in zip(union, counts)}
    return ReuseTable(union_dims=tuple(union), rates=rates, membership=membership)
