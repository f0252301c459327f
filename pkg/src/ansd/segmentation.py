"""Amplitude-threshold peak collection and peak-to-peak beat segmentation."""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from .signal import DataError, PeakSet, Segment, SeriesLike, as_array


@dataclass(frozen=True)
class PeakConfig:
    """Peak threshold ``height`` and consolidation gap ``min_gap``.

    ``min_gap=0`` returns every sample at or above ``height``. ``None`` picks
    half the median spacing between above-threshold runs.
    """

    height: float
    min_gap: Optional[int] = None

    def __post_init__(self):
        if self.min_gap is not None and self.min_gap < 0:
            raise ValueError(f"min_gap must be >= 0, got {self.min_gap}")


def default_peak_height(t: SeriesLike, fraction: float = 0.9) -> float:
    """Convenience threshold: ``fraction`` of the global maximum."""
    x = as_array(t)
    if x.shape[0] == 0:
        raise DataError("cannot derive a peak height from an empty series")
    return float(fraction * x.max())


def _runs(idx: np.ndarray, gap: int) -> List[np.ndarray]:
    if idx.size == 0:
        return []
    breaks = np.flatnonzero(np.diff(idx) >= gap) + 1
    return np.split(idx, breaks)


def _default_gap(x: np.ndarray, idx: np.ndarray) -> int:
    runs = _runs(idx, 2)
    if len(runs) < 2:
        return 1
    tops = np.array([r[np.argmax(x[r])] for r in runs])
    return max(1, int(np.median(np.diff(tops)) // 2))


def collect_peaks(t: SeriesLike, cfg: PeakConfig) -> PeakSet:
    x = as_array(t)
    if x.shape[0] == 0:
        raise DataError("cannot collect peaks from an empty series")
    idx = np.flatnonzero(x >= cfg.height)
    gap = _default_gap(x, idx) if cfg.min_gap is None else cfg.min_gap
    if gap > 0:
        # np.argmax returns the first maximum, i.e. the earliest index on ties
        idx = np.array([r[np.argmax(x[r])] for r in _runs(idx, gap)], dtype=np.int64)
    return PeakSet(tuple(int(i) + 1 for i in idx), series_length=x.shape[0])


def segments_from_peaks(t: SeriesLike, peaks: PeakSet) -> List[Segment]:
    """One segment per pair of consecutive peaks, ``[P(i), P(i+1) - 1]``.

    Samples before the first and after the last peak are not covered.
    """
    n = as_array(t).shape[0]
    locs = peaks.locations
    if len(locs) < 2:
        raise DataError(f"need at least 2 peaks to segment, got {len(locs)}")
    if locs[-1] > n:
        raise DataError(f"peak location {locs[-1]} exceeds series length {n}")
    return [Segment(p, q - p) for p, q in zip(locs, locs[1:])]
