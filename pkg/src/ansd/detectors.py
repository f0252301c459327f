"""Discord detectors: brute force (BFDD), adaptive window (AWDD) and the
average non-self match distance detector (ANSD), plus threshold training.

BFDD scores every sliding window by its nearest non-self match. AWDD and
ANSD score peak-delimited beats against every other beat, using the minimum
(AWDD, pointwise distance after resampling) or the mean (ANSD, modified DTW).
A candidate is anomalous when its score is strictly greater than the
threshold.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Tuple, Union

import numpy as np

from . import _kernels
from .distance import mdtw_distance, pointwise_distance, resample
from .segmentation import segments_from_peaks
from .signal import DataError, PeakSet, Segment, SeriesLike, as_array, is_non_self_match

Metric = Union[str, Callable[[np.ndarray, np.ndarray], float]]

METHODS = ("bfdd", "awdd", "ansd")


class ThresholdOverlapError(DataError):
    """Normal and anomalous training scores overlap; no separating midpoint."""

    def __init__(self, max_normal: float, min_anomalous: float):
        self.max_normal = max_normal
        self.min_anomalous = min_anomalous
        super().__init__(
            f"training classes overlap: max normal score {max_normal!r} >= "
            f"min anomalous score {min_anomalous!r}"
        )


@dataclass(frozen=True)
class DistanceProfile:
    scores: tuple
    candidate_starts: tuple
    kind: str = "nearest"

    def __post_init__(self):
        object.__setattr__(self, "scores", tuple(float(s) for s in self.scores))
        object.__setattr__(self, "candidate_starts", tuple(int(s) for s in self.candidate_starts))
        if len(self.scores) != len(self.candidate_starts):
            raise ValueError("scores and candidate_starts must have equal length")
        if self.kind not in ("nearest", "average"):
            raise ValueError(f"unknown profile kind {self.kind!r}")

    def __len__(self) -> int:
        return len(self.scores)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.scores)


@dataclass(frozen=True)
class Anomaly:
    start: int
    length: int
    score: float
    ordinal: int


@dataclass(frozen=True)
class DetectionReport:
    method: str
    threshold: Optional[float]
    profile: DistanceProfile
    anomalies: tuple
    top_discord: Tuple[int, float]
    elapsed: float = 0.0
    parameters: dict = field(default_factory=dict)

    @property
    def anomaly_starts(self) -> List[int]:
        return [a.start for a in self.anomalies]


@dataclass(frozen=True)
class TrainedThreshold:
    value: float
    max_normal: float
    min_anomalous: float


def _resolve_metric(metric: Metric):
    if metric == "pointwise":
        return None
    if isinstance(metric, str):
        raise ValueError(f"unknown metric {metric!r}")
    return metric


def _check_window(n: int, m: int) -> None:
    if m < 1:
        raise ValueError(f"window length must be positive, got {m}")
    if n < 2 * m:
        raise DataError(f"series length {n} < 2 x window length {m}: no non-self match exists")


def nearest_nonself_distance(
    t: SeriesLike, candidate_start: int, m: int, metric: Metric = "pointwise"
) -> Tuple[float, int]:
    """Minimum distance from one window to all of its non-self matches.

    Returns ``(distance, q)`` with ``q`` the 1-based start of the nearest
    match; the smallest such ``q`` wins ties.
    """
    x = as_array(t)
    n = x.shape[0]
    _check_window(n, m)
    k = n - m + 1
    if not 1 <= candidate_start <= k:
        raise DataError(f"candidate start {candidate_start} outside [1, {k}]")
    p = candidate_start - 1
    fn = _resolve_metric(metric)
    if fn is None:
        best, arg = _kernels.nearest_nonself(x, p, m, _kernels.ABSOLUTE)
    else:
        best, arg = math.inf, -1
        cand = x[p : p + m]
        for q in range(k):
            if is_non_self_match(p + 1, q + 1, m):
                d = float(fn(cand, x[q : q + m]))
                if d < best:
                    best, arg = d, q
    if arg < 0:
        raise DataError(
            f"window at {candidate_start} has no non-self match (n={n}, m={m})"
        )
    return float(best), int(arg) + 1


def _windows(k: int, m: int) -> List[Segment]:
    return [Segment(s, m) for s in range(1, k + 1)]


def bfdd(
    t: SeriesLike,
    m: int,
    metric: Metric = "pointwise",
    threshold: Optional[float] = None,
) -> DetectionReport:
    """Brute force discord discovery over every window of length ``m``.

    Every window must have at least one non-self match, which requires
    ``n >= 3m - 1``.
    """
    x = as_array(t)
    n = x.shape[0]
    _check_window(n, m)
    if n < 3 * m - 1:
        raise DataError(
            f"series length {n} < 3 x window length - 1 = {3 * m - 1}: "
            "some windows would have no non-self match"
        )
    started = time.perf_counter()
    k = n - m + 1
    fn = _resolve_metric(metric)
    if fn is None:
        scores, _ = _kernels.nearest_nonself_profile(x, m, _kernels.ABSOLUTE)
    else:
        scores = np.array([nearest_nonself_distance(x, p, m, fn)[0] for p in range(1, k + 1)])
    profile = DistanceProfile(scores, range(1, k + 1), "nearest")
    elapsed = time.perf_counter() - started
    return detect(
        profile, threshold, _windows(k, m), method="bfdd", elapsed=elapsed,
        parameters={"window": m},
    )


def _awdd_pair(a: np.ndarray, b: np.ndarray) -> float:
    # the longer beat is compressed to the shorter one's length
    if a.shape[0] > b.shape[0]:
        a = resample(a, b.shape[0]).samples
    elif b.shape[0] > a.shape[0]:
        b = resample(b, a.shape[0]).samples
    return pointwise_distance(a, b)


def _canonical(a: np.ndarray, b: np.ndarray):
    # content-determined argument order: equal beat pairs give bit-equal distances
    ka = (a.shape[0], a.tobytes())
    kb = (b.shape[0], b.tobytes())
    return (a, b) if ka <= kb else (b, a)


def pairwise_matrix(beats: Sequence[np.ndarray], metric: Callable) -> np.ndarray:
    """Symmetric matrix of ``metric`` over all unordered beat pairs."""
    k = len(beats)
    out = np.zeros((k, k))
    for i in range(k):
        for j in range(i + 1, k):
            out[i, j] = out[j, i] = metric(*_canonical(beats[i], beats[j]))
    return out


def _beats(x: np.ndarray, segments: Sequence[Segment]) -> List[np.ndarray]:
    for s in segments:
        s.check_bounds(x.shape[0])
    return [x[s.start - 1 : s.stop] for s in segments]


def awdd_profile(t: SeriesLike, segments: Sequence[Segment]) -> DistanceProfile:
    x = as_array(t)
    if len(segments) < 2:
        raise DataError(f"AWDD needs at least 2 segments, got {len(segments)}")
    dist = pairwise_matrix(_beats(x, segments), _awdd_pair)
    np.fill_diagonal(dist, np.inf)
    return DistanceProfile(dist.min(axis=1), [s.start for s in segments], "nearest")


def awdd(t: SeriesLike, peaks: PeakSet, threshold: Optional[float]) -> DetectionReport:
    """Adaptive window discord discovery on peak-delimited beats."""
    if len(peaks) < 3:
        raise DataError(f"AWDD needs at least 3 peaks (2 segments), got {len(peaks)}")
    started = time.perf_counter()
    segments = segments_from_peaks(t, peaks)
    profile = awdd_profile(t, segments)
    return detect(
        profile, threshold, segments, method="awdd",
        elapsed=time.perf_counter() - started,
    )


def ansd_profile(
    t: SeriesLike, segments: Sequence[Segment], metric: Callable = mdtw_distance
) -> DistanceProfile:
    """Mean ``metric`` distance from each segment to every other segment."""
    x = as_array(t)
    k = len(segments)
    if k < 2:
        raise DataError(f"ANSD needs at least 2 segments, got {k}")
    dist = pairwise_matrix(_beats(x, segments), metric)
    # fsum is order independent, so rows holding the same values average identically
    scores = [math.fsum(np.delete(dist[i], i)) / (k - 1) for i in range(k)]
    return DistanceProfile(scores, [s.start for s in segments], "average")


def ansd(t: SeriesLike, peaks: PeakSet, threshold: Optional[float]) -> DetectionReport:
    if len(peaks) < 3:
        raise DataError(f"ANSD needs at least 3 peaks (2 segments), got {len(peaks)}")
    started = time.perf_counter()
    segments = segments_from_peaks(t, peaks)
    profile = ansd_profile(t, segments)
    return detect(
        profile, threshold, segments, method="ansd",
        elapsed=time.perf_counter() - started,
    )


def detect(
    profile: DistanceProfile,
    threshold: Optional[float],
    segments: Sequence[Segment],
    method: str = "ansd",
    elapsed: float = 0.0,
    parameters: Optional[dict] = None,
) -> DetectionReport:
    """Flag candidates scoring strictly above ``threshold``.

    Without a threshold only the top discord is reported.
    """
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}")
    if len(segments) != len(profile):
        raise ValueError(
            f"profile has {len(profile)} candidates but {len(segments)} segments given"
        )
    if not len(profile):
        raise DataError("empty profile")
    scores = profile.as_array()
    top = int(np.argmax(scores))
    anomalies = ()
    if threshold is not None:
        anomalies = tuple(
            Anomaly(segments[i].start, segments[i].length, float(scores[i]), i + 1)
            for i in np.flatnonzero(scores > threshold).tolist()
        )
    return DetectionReport(
        method=method,
        threshold=None if threshold is None else float(threshold),
        profile=profile,
        anomalies=anomalies,
        top_discord=(profile.candidate_starts[top], float(scores[top])),
        elapsed=elapsed,
        parameters=dict(parameters or {}),
    )


def locate(report: DetectionReport) -> List[Tuple[int, float]]:
    """Collapse flagged candidates to ``(location, score)`` detections.

    Segment methods report each flagged segment's start. For BFDD, runs of
    adjacent flagged windows are merged and the highest-scoring window of each
    run is reported by its centre sample.
    """
    if report.method != "bfdd":
        return [(a.start, a.score) for a in report.anomalies]
    out = []
    run: List[Anomaly] = []
    for a in report.anomalies:
        if run and a.start != run[-1].start + 1:
            out.append(run)
            run = []
        run.append(a)
    if run:
        out.append(run)
    best = [max(r, key=lambda a: (a.score, -a.start)) for r in out]
    return [(a.start + (a.length - 1) // 2, a.score) for a in best]


def train_threshold(
    normal_scores: Sequence[float], anomalous_scores: Sequence[float]
) -> TrainedThreshold:
    """Midpoint between the largest normal and smallest anomalous score."""
    if len(normal_scores) == 0 or len(anomalous_scores) == 0:
        raise DataError("threshold training needs at least one score per class")
    hi = float(max(normal_scores))
    lo = float(min(anomalous_scores))
    if hi >= lo:
        raise ThresholdOverlapError(hi, lo)
    return TrainedThreshold((hi + lo) / 2, hi, lo)


def signal_statistic(report: DetectionReport) -> float:
    """Per-signal training statistic: the largest candidate score."""
    return max(report.profile.scores)
