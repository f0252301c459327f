"""Synthetic periodic beat signals with injected anomalies.

Each beat is ``period`` samples on a zero baseline: a dominant raised-cosine
R pulse at 20% of the beat and a smaller T bump at 55%. Anomalies only alter
the beat after its R peak, so an anomalous beat ``k`` falls entirely inside
the peak-to-peak segment that starts at beat ``k``'s peak.

Noise is uniform on ``[0, noise_amplitude)`` so every sample stays >= 0. It
is drawn from numpy's PCG64 bit generator seeded with ``seed``
(``Generator(PCG64(seed)).random(n)``: 53-bit doubles from the top bits of
each 64-bit output), which makes fixtures reproducible from (PCG64, seed).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from .signal import SeriesLike, TimeSeries, as_array

KINDS = ("widened", "flattened", "inverted", "shifted")


@dataclass(frozen=True)
class SynthSpec:
    beats: int
    period: int = 260
    peak_amplitude: float = 1.0
    noise_amplitude: float = 0.0
    seed: int = 0
    anomalies: tuple = ()

    def __post_init__(self):
        object.__setattr__(
            self, "anomalies", tuple((int(k), str(kind)) for k, kind in self.anomalies)
        )
        if self.beats < 1:
            raise ValueError(f"beats must be >= 1, got {self.beats}")
        if self.period < 8:
            raise ValueError(f"period must be >= 8 samples, got {self.period}")
        if not self.peak_amplitude > 0:
            raise ValueError(f"peak_amplitude must be > 0, got {self.peak_amplitude}")
        if self.noise_amplitude < 0:
            raise ValueError(f"noise_amplitude must be >= 0, got {self.noise_amplitude}")
        if not 0 <= self.seed < 2**64:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        seen = set()
        for k, kind in self.anomalies:
            if not 1 <= k <= self.beats:
                raise ValueError(f"anomaly beat {k} outside [1, {self.beats}]")
            if kind not in KINDS:
                raise ValueError(f"unknown anomaly kind {kind!r}; expected one of {KINDS}")
            if k in seen:
                raise ValueError(f"beat {k} listed twice")
            seen.add(k)


def _bump(s: np.ndarray, center: float, left: float, right: float) -> np.ndarray:
    """Raised cosine peaking at ``center`` with separate half-widths."""
    out = np.zeros(s.shape)
    lo = (s <= center) & (s > center - left)
    hi = (s > center) & (s < center + right)
    out[lo] = 0.5 * (1 + np.cos(np.pi * (s[lo] - center) / left))
    out[hi] = 0.5 * (1 + np.cos(np.pi * (s[hi] - center) / right))
    return out


def _plateau(s: np.ndarray, start: float, stop: float, taper: float) -> np.ndarray:
    out = np.zeros(s.shape)
    inside = (s >= start) & (s <= stop)
    out[inside] = 1.0
    up = (s > start - taper) & (s < start)
    down = (s > stop) & (s < stop + taper)
    out[up] = 0.5 * (1 - np.cos(np.pi * (s[up] - start + taper) / taper))
    out[down] = 0.5 * (1 + np.cos(np.pi * (s[down] - stop) / taper))
    return out


def beat_template(period: int, amplitude: float = 1.0, kind: str = None) -> np.ndarray:
    """One beat of ``period`` samples, normal or distorted by ``kind``."""
    s = np.arange(period, dtype=np.float64)
    rc = float(round(0.2 * period))
    rw = max(2.0, round(0.04 * period))
    fall = rw
    tc, tw, ta = 0.55 * period, 0.12 * period, 0.3
    if kind == "widened":
        fall = 3 * rw
        tc, tw, ta = 0.62 * period, 0.2 * period, 0.4
    elif kind == "flattened":
        ta = 0.0
    beat = _bump(s, rc, rw, fall)
    t_wave = _bump(s, tc, tw, tw)
    if kind == "inverted":
        t_wave = np.where(np.abs(s - tc) < tw, 1.0 - t_wave, 0.0)
    beat += ta * t_wave
    if kind == "shifted":
        taper = max(1.0, round(0.05 * period))
        beat += 0.25 * _plateau(s, rc + fall + taper, period - 2 * taper, taper)
    return amplitude * beat


def generate(spec: SynthSpec) -> Tuple[TimeSeries, List[int]]:
    """Render ``spec``; returns the signal and the sorted anomalous beat ordinals."""
    normal = beat_template(spec.period, spec.peak_amplitude)
    kinds = dict(spec.anomalies)
    beats = [
        beat_template(spec.period, spec.peak_amplitude, kinds[k]) if k in kinds else normal
        for k in range(1, spec.beats + 1)
    ]
    x = np.concatenate(beats)
    if spec.noise_amplitude > 0:
        rng = np.random.Generator(np.random.PCG64(spec.seed))
        x = x + spec.noise_amplitude * rng.random(x.shape[0])
    return TimeSeries(x), sorted(kinds)


def beat_range(spec: SynthSpec, k: int) -> Tuple[int, int]:
    """1-based inclusive sample range of beat ``k``."""
    return (k - 1) * spec.period + 1, k * spec.period


def duplicate(t: SeriesLike) -> TimeSeries:
    """``t`` followed by an exact copy of itself."""
    x = as_array(t)
    rate = t.sample_rate if isinstance(t, TimeSeries) else None
    return TimeSeries(np.concatenate([x, x]), sample_rate=rate)
