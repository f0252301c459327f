"""Signal files, JSON reports and atomic writes.

Signal files are UTF-8 text with one decimal sample per line; blank lines
and lines starting with ``#`` are ignored. Reports and threshold files are
JSON. Floats are written with ``repr`` so they round-trip exactly.
"""

from __future__ import annotations

import json
import math
import os
import tempfile
from pathlib import Path
from typing import Iterable, Optional, Union

from . import __version__
from .detectors import Anomaly, DetectionReport, DistanceProfile, TrainedThreshold
from .signal import DataError, TimeSeries

PathLike = Union[str, os.PathLike]


class SignalFormatError(DataError):
    pass


def atomic_write(path: PathLike, text: str) -> None:
    """Write ``text`` to a temp file beside ``path`` then rename over it."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def parse_signal(text: str, source: str = "<string>") -> TimeSeries:
    values = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            v = float(line)
        except ValueError:
            raise SignalFormatError(f"{source}:{lineno}: not a number: {line!r}") from None
        if not math.isfinite(v):
            raise SignalFormatError(f"{source}:{lineno}: non-finite sample {line!r}")
        values.append(v)
    return TimeSeries(values)


def read_signal(path: PathLike) -> TimeSeries:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise SignalFormatError(f"cannot read {path}: {exc}") from exc
    return parse_signal(text, str(path))


def format_signal(t: Iterable[float], header: Optional[str] = None) -> str:
    lines = []
    if header:
        lines.extend(f"# {h}" for h in header.splitlines())
    lines.extend(repr(float(v)) for v in t)
    return "\n".join(lines) + "\n"


def write_signal(path: PathLike, t: Iterable[float], header: Optional[str] = None) -> None:
    atomic_write(path, format_signal(t, header))


def report_to_dict(r: DetectionReport) -> dict:
    return {
        "method": r.method,
        "parameters": r.parameters,
        "threshold": r.threshold,
        "profile": {
            "kind": r.profile.kind,
            "candidates": [
                {"start": s, "score": v}
                for s, v in zip(r.profile.candidate_starts, r.profile.scores)
            ],
        },
        "anomalies": [
            {"start": a.start, "length": a.length, "score": a.score, "ordinal": a.ordinal}
            for a in r.anomalies
        ],
        "top_discord": {"start": r.top_discord[0], "score": r.top_discord[1]},
        "elapsed_seconds": r.elapsed,
        "tool_version": __version__,
    }


def report_from_dict(d: dict) -> DetectionReport:
    try:
        cands = d["profile"]["candidates"]
        profile = DistanceProfile(
            [c["score"] for c in cands], [c["start"] for c in cands], d["profile"]["kind"]
        )
        anomalies = tuple(
            Anomaly(int(a["start"]), int(a["length"]), float(a["score"]), int(a["ordinal"]))
            for a in d["anomalies"]
        )
        thr = d["threshold"]
        return DetectionReport(
            method=d["method"],
            threshold=None if thr is None else float(thr),
            profile=profile,
            anomalies=anomalies,
            top_discord=(int(d["top_discord"]["start"]), float(d["top_discord"]["score"])),
            elapsed=float(d["elapsed_seconds"]),
            parameters=dict(d.get("parameters", {})),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise DataError(f"malformed report: {exc}") from exc


def dumps_report(r: DetectionReport) -> str:
    return json.dumps(report_to_dict(r), indent=1) + "\n"


def loads_report(text: str) -> DetectionReport:
    try:
        return report_from_dict(json.loads(text))
    except json.JSONDecodeError as exc:
        raise DataError(f"malformed report: {exc}") from exc


def write_report(path: PathLike, r: DetectionReport) -> None:
    atomic_write(path, dumps_report(r))


def read_report(path: PathLike) -> DetectionReport:
    return loads_report(Path(path).read_text(encoding="utf-8"))


def write_threshold(path: PathLike, th: TrainedThreshold, **extra) -> None:
    payload = {
        "value": th.value,
        "max_normal": th.max_normal,
        "min_anomalous": th.min_anomalous,
        **extra,
        "tool_version": __version__,
    }
    atomic_write(path, json.dumps(payload, indent=1) + "\n")


def read_threshold(path: PathLike) -> TrainedThreshold:
    d = json.loads(Path(path).read_text(encoding="utf-8"))
    return TrainedThreshold(float(d["value"]), float(d["max_normal"]), float(d["min_anomalous"]))
