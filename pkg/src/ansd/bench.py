"""Accuracy and runtime comparison of BFDD, AWDD and ANSD on synthetic suites.

The suite has four test classes: signals with no anomaly, one anomaly, two
anomalies of different kinds, and a one-anomaly signal duplicated end to end
(two identical anomalies). Thresholds are trained per method on separate
normal and one-anomaly training signals. A test signal counts as correct only
when the set of beats a detector flags equals the ground-truth set exactly.
"""

from __future__ import annotations

import json
import time
from dataclasses import asdict, dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from .detectors import (
    METHODS,
    DetectionReport,
    ThresholdOverlapError,
    ansd,
    awdd,
    bfdd,
    locate,
    signal_statistic,
    train_threshold,
)
from .segmentation import PeakConfig, collect_peaks, default_peak_height
from .signal import TimeSeries
from .synth import KINDS, SynthSpec, duplicate, generate

CLASSES = ("duplicated", "two_different", "one", "none")
CLASS_TITLES = {
    "duplicated": "2 same",
    "two_different": "2 different",
    "one": "1 anomaly",
    "none": "normal",
}


@dataclass(frozen=True)
class ClassSpec:
    name: str
    count: int
    seed: int

    def __post_init__(self):
        if self.name not in CLASSES:
            raise ValueError(f"unknown signal class {self.name!r}; expected one of {CLASSES}")
        if self.count < 1:
            raise ValueError(f"class {self.name}: count must be >= 1")


@dataclass(frozen=True)
class SuiteSpec:
    classes: Tuple[ClassSpec, ...] = (
        ClassSpec("duplicated", 5, 401),
        ClassSpec("two_different", 5, 301),
        ClassSpec("one", 5, 201),
        ClassSpec("none", 5, 101),
    )
    beats: int = 20
    period: int = 260
    period_jitter: int = 4
    noise: float = 0.02
    window: int = 300
    train_normal: int = 5
    train_anomalous: int = 5
    train_seed: int = 17
    methods: Tuple[str, ...] = METHODS

    def __post_init__(self):
        object.__setattr__(
            self,
            "classes",
            tuple(c if isinstance(c, ClassSpec) else ClassSpec(**c) for c in self.classes),
        )
        object.__setattr__(self, "methods", tuple(self.methods))
        names = [c.name for c in self.classes]
        if sorted(names) != sorted(CLASSES):
            raise ValueError(f"suite must list each class exactly once: {CLASSES}")
        if self.beats < 8:
            raise ValueError("suite signals need at least 8 beats")
        if self.period_jitter < 0 or self.period - self.period_jitter < 8:
            raise ValueError("period jitter leaves periods below 8 samples")
        if self.train_normal < 1 or self.train_anomalous < 1:
            raise ValueError("training needs at least one signal per class")
        for m in self.methods:
            if m not in METHODS:
                raise ValueError(f"unknown method {m!r}")

    @classmethod
    def from_dict(cls, d: dict) -> "SuiteSpec":
        d = dict(d)
        if "classes" in d:
            d["classes"] = tuple(ClassSpec(**c) for c in d["classes"])
        if "methods" in d:
            d["methods"] = tuple(d["methods"])
        return cls(**d)


@dataclass
class Case:
    name: str
    signal: TimeSeries
    period: int
    truth: List[int]


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def _one_anomaly(suite: SuiteSpec, seed: int, kind: str) -> Tuple[SynthSpec, int]:
    rng = _rng(seed)
    period = int(rng.integers(suite.period - suite.period_jitter, suite.period + suite.period_jitter + 1))
    # the last beat has no closing peak, so anomalies stay off the edges
    beat = int(rng.integers(3, suite.beats - 1))
    return SynthSpec(suite.beats, period, 1.0, suite.noise, seed, ((beat, kind),)), period


def make_case(suite: SuiteSpec, cls: str, index: int, seed: int) -> Case:
    sig_seed = seed * 1000 + index
    rng = _rng(sig_seed)
    kind = KINDS[index % len(KINDS)]
    if cls in ("one", "duplicated"):
        spec, period = _one_anomaly(suite, sig_seed, kind)
        t, truth = generate(spec)
        if cls == "duplicated":
            t = duplicate(t)
            truth = truth + [k + suite.beats for k in truth]
        return Case(f"{cls}-{index + 1}", t, period, truth)
    period = int(rng.integers(suite.period - suite.period_jitter, suite.period + suite.period_jitter + 1))
    anomalies: tuple = ()
    if cls == "two_different":
        first = int(rng.integers(2, suite.beats // 2 - 1))
        second = int(rng.integers(first + 4, suite.beats - 1))
        other = KINDS[(index + 1 + int(rng.integers(0, len(KINDS) - 1))) % len(KINDS)]
        if other == kind:
            other = KINDS[(KINDS.index(kind) + 1) % len(KINDS)]
        anomalies = ((first, kind), (second, other))
    spec = SynthSpec(suite.beats, period, 1.0, suite.noise, sig_seed, anomalies)
    t, truth = generate(spec)
    return Case(f"{cls}-{index + 1}", t, period, truth)


def training_cases(suite: SuiteSpec) -> Tuple[List[Case], List[Case]]:
    normal = [make_case(suite, "none", i, suite.train_seed) for i in range(suite.train_normal)]
    anomalous = [
        make_case(suite, "one", i, suite.train_seed + 1) for i in range(suite.train_anomalous)
    ]
    return normal, anomalous


def run_method(
    t: TimeSeries, method: str, window: int, threshold: Optional[float] = None
) -> DetectionReport:
    if method == "bfdd":
        return bfdd(t, window, threshold=threshold)
    peaks = collect_peaks(t, PeakConfig(default_peak_height(t)))
    fn = awdd if method == "awdd" else ansd
    return fn(t, peaks, threshold)


def flagged_beats(report: DetectionReport, period: int) -> List[int]:
    return sorted({(loc - 1) // period + 1 for loc, _ in locate(report)})


@dataclass
class BenchResult:
    thresholds: Dict[str, Optional[float]] = field(default_factory=dict)
    training_errors: Dict[str, str] = field(default_factory=dict)
    accuracy: Dict[str, Dict[str, float]] = field(default_factory=dict)
    mean_seconds: Dict[str, float] = field(default_factory=dict)
    cases: List[dict] = field(default_factory=list)

    def to_dict(self) -> dict:
        return asdict(self)

    def deterministic_view(self) -> dict:
        """Everything except timing."""
        d = self.to_dict()
        d.pop("mean_seconds")
        for c in d["cases"]:
            c.pop("seconds", None)
        return d


def train(suite: SuiteSpec, method: str, normal: List[Case], anomalous: List[Case]):
    ns = [signal_statistic(run_method(c.signal, method, suite.window)) for c in normal]
    an = [signal_statistic(run_method(c.signal, method, suite.window)) for c in anomalous]
    return train_threshold(ns, an)


def run_suite(suite: SuiteSpec = SuiteSpec(), progress=None) -> BenchResult:
    res = BenchResult()
    normal, anomalous = training_cases(suite)
    tests = [
        make_case(suite, c.name, i, c.seed) for c in suite.classes for i in range(c.count)
    ]
    for method in suite.methods:
        try:
            th = train(suite, method, normal, anomalous).value
        except ThresholdOverlapError as exc:
            res.training_errors[method] = str(exc)
            th = None
        res.thresholds[method] = th
        correct: Dict[str, List[bool]] = {c: [] for c in CLASSES}
        times = []
        for case in tests:
            started = time.perf_counter()
            report = run_method(case.signal, method, suite.window, th)
            seconds = time.perf_counter() - started
            times.append(seconds)
            found = flagged_beats(report, case.period) if th is not None else []
            cls = case.name.rsplit("-", 1)[0]
            ok = found == case.truth
            correct[cls].append(ok)
            res.cases.append(
                {
                    "method": method,
                    "case": case.name,
                    "length": len(case.signal),
                    "truth": case.truth,
                    "flagged": found,
                    "max_score": report.top_discord[1],
                    "correct": ok,
                    "seconds": seconds,
                }
            )
            if progress:
                progress(method, case.name, ok)
        res.accuracy[method] = {
            c: 100.0 * sum(v) / len(v) for c, v in correct.items() if v
        }
        res.mean_seconds[method] = float(np.mean(times))
    return res


def format_table(res: BenchResult) -> str:
    head = f"{'method':<8}" + "".join(f"{CLASS_TITLES[c]:>13}" for c in CLASSES)
    head += f"{'threshold':>14}{'mean s':>10}"
    lines = [head, "-" * len(head)]
    for m, acc in res.accuracy.items():
        th = res.thresholds.get(m)
        row = f"{m:<8}" + "".join(f"{acc.get(c, float('nan')):>12.0f}%" for c in CLASSES)
        row += f"{th:>14.4f}" if th is not None else f"{'overlap':>14}"
        row += f"{res.mean_seconds[m]:>10.3f}"
        lines.append(row)
    return "\n".join(lines)


def dumps_result(res: BenchResult) -> str:
    return json.dumps(res.to_dict(), indent=1) + "\n"
