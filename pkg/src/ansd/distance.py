"""Pointwise distance, DTW with path recovery, modified DTW and resampling.

The local cost between two samples is configurable (``cost="absolute"`` or
``cost="squared"``); the absolute difference is the default everywhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import _kernels
from .signal import DataError, SeriesLike, TimeSeries, as_array

_COSTS = {"absolute": _kernels.ABSOLUTE, "squared": _kernels.SQUARED}


def _cost_code(cost: str) -> int:
    try:
        return _COSTS[cost]
    except KeyError:
        raise ValueError(f"unknown local cost {cost!r}; expected one of {sorted(_COSTS)}")


def _nonempty(x: SeriesLike, name: str) -> np.ndarray:
    arr = as_array(x)
    if arr.shape[0] == 0:
        raise DataError(f"{name} is empty")
    return arr


@dataclass(frozen=True)
class WarpingPath:
    """Alignment as two parallel 0-based index arrays.

    ``pairs`` gives the same path as 1-based ``(i, j)`` tuples.
    """

    ia: np.ndarray
    jb: np.ndarray
    len_a: int
    len_b: int

    def __post_init__(self):
        ia = np.asarray(self.ia, dtype=np.int64)
        jb = np.asarray(self.jb, dtype=np.int64)
        if ia.shape != jb.shape or ia.ndim != 1 or ia.size == 0:
            raise ValueError("path index arrays must be non-empty and parallel")
        if (ia[0], jb[0]) != (0, 0) or (ia[-1], jb[-1]) != (self.len_a - 1, self.len_b - 1):
            raise ValueError("path must start at (1, 1) and end at (len(a), len(b))")
        di, dj = np.diff(ia), np.diff(jb)
        if not np.all(((di == 0) | (di == 1)) & ((dj == 0) | (dj == 1)) & ((di + dj) > 0)):
            raise ValueError("path steps must be (1,0), (0,1) or (1,1)")
        ia.flags.writeable = False
        jb.flags.writeable = False
        object.__setattr__(self, "ia", ia)
        object.__setattr__(self, "jb", jb)

    def __len__(self) -> int:
        return self.ia.shape[0]

    @property
    def pairs(self) -> list:
        return [(int(i) + 1, int(j) + 1) for i, j in zip(self.ia, self.jb)]

    def swapped(self) -> "WarpingPath":
        return WarpingPath(self.jb, self.ia, self.len_b, self.len_a)

    def __eq__(self, other) -> bool:
        if not isinstance(other, WarpingPath):
            return NotImplemented
        return (
            self.len_a == other.len_a
            and self.len_b == other.len_b
            and np.array_equal(self.ia, other.ia)
            and np.array_equal(self.jb, other.jb)
        )


@dataclass(frozen=True)
class DistanceResult:
    value: float
    path: Optional[WarpingPath] = None


def pointwise_distance(a: SeriesLike, b: SeriesLike, cost: str = "absolute") -> float:
    """Sum of local costs between same-index samples. Lengths must match."""
    x = _nonempty(a, "a")
    y = _nonempty(b, "b")
    if x.shape != y.shape:
        raise DataError(f"length mismatch: {x.shape[0]} vs {y.shape[0]}")
    d = x - y
    if _cost_code(cost) == _kernels.SQUARED:
        return float(np.sum(d * d))
    return float(np.sum(np.abs(d)))


def dtw(a: SeriesLike, b: SeriesLike, cost: str = "absolute") -> DistanceResult:
    """Unconstrained DTW. Returns the distance and one optimal warping path.

    Backtracking breaks ties by preferring the diagonal step, then the step
    back in ``a``, then the step back in ``b``.
    """
    x = _nonempty(a, "a")
    y = _nonempty(b, "b")
    D = _kernels.accumulated_cost(x, y, _cost_code(cost))
    ia, jb = _kernels.backtrack(D)
    return DistanceResult(float(D[-1, -1]), WarpingPath(ia, jb, x.shape[0], y.shape[0]))


def dtw_distance(a: SeriesLike, b: SeriesLike, cost: str = "absolute") -> float:
    """DTW value only, computed in O(len(b)) memory."""
    x = _nonempty(a, "a")
    y = _nonempty(b, "b")
    return float(_kernels.dtw_value(x, y, _cost_code(cost)))


def _drift_terms(x: np.ndarray, y: np.ndarray, ia: np.ndarray, jb: np.ndarray):
    l = ia.shape[0]
    la, lb = x.shape[0], y.shape[0]
    extra_a = math.fsum(x[ia]) - math.fsum(x)
    extra_b = math.fsum(y[jb]) - math.fsum(y)
    return ((l - la) / la) * extra_a, ((l - lb) / lb) * extra_b


def mdtw_distance(a: SeriesLike, b: SeriesLike, cost: str = "absolute") -> float:
    """DTW distance plus the timeline-drift penalty.

    With ``l`` the optimal path length and ``Anew``/``Bnew`` the series read
    along the path::

        d + (l - la)/la * (sum(Anew) - sum(A)) + (l - lb)/lb * (sum(Bnew) - sum(B))

    The penalty terms are signed; series with negative samples can yield a
    negative result.
    """
    x = _nonempty(a, "a")
    y = _nonempty(b, "b")
    D = _kernels.accumulated_cost(x, y, _cost_code(cost))
    ia, jb = _kernels.backtrack(D)
    term_a, term_b = _drift_terms(x, y, ia, jb)
    return float(D[-1, -1]) + term_a + term_b


def resample(a: SeriesLike, target_len: int) -> TimeSeries:
    """Linear interpolation onto ``target_len`` evenly spaced points.

    The first and last input samples are kept exactly.
    """
    x = as_array(a)
    if x.shape[0] < 2:
        raise DataError(f"resample needs at least 2 samples, got {x.shape[0]}")
    if target_len < 2:
        raise ValueError(f"target length must be >= 2, got {target_len}")
    n = x.shape[0]
    if target_len == n:
        return a if isinstance(a, TimeSeries) else TimeSeries(x)
    # integer numerator keeps the last grid point exactly at n - 1
    grid = (np.arange(target_len) * (n - 1)) / (target_len - 1)
    return TimeSeries(np.interp(grid, np.arange(n, dtype=np.float64), x))
