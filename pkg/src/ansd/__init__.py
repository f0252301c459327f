"""Time-series discord discovery with modified DTW and average non-self match distance."""

__version__ = "0.1.0"

from .signal import DataError, PeakSet, Segment, TimeSeries, is_non_self_match, subsequence
from .distance import (
    DistanceResult,
    WarpingPath,
    dtw,
    dtw_distance,
    mdtw_distance,
    pointwise_distance,
    resample,
)
from .segmentation import PeakConfig, collect_peaks, default_peak_height, segments_from_peaks
from .detectors import (
    DetectionReport,
    DistanceProfile,
    ThresholdOverlapError,
    TrainedThreshold,
    ansd,
    ansd_profile,
    awdd,
    bfdd,
    detect,
    locate,
    nearest_nonself_distance,
    train_threshold,
)
from .synth import SynthSpec, duplicate, generate

__all__ = [
    "DataError",
    "DetectionReport",
    "DistanceProfile",
    "DistanceResult",
    "PeakConfig",
    "PeakSet",
    "Segment",
    "SynthSpec",
    "ThresholdOverlapError",
    "TimeSeries",
    "TrainedThreshold",
    "WarpingPath",
    "ansd",
    "ansd_profile",
    "awdd",
    "bfdd",
    "collect_peaks",
    "default_peak_height",
    "detect",
    "dtw",
    "dtw_distance",
    "duplicate",
    "generate",
    "is_non_self_match",
    "locate",
    "mdtw_distance",
    "nearest_nonself_distance",
    "pointwise_distance",
    "resample",
    "segments_from_peaks",
    "subsequence",
    "train_threshold",
]
