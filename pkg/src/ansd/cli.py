"""Command-line front end.

Exit codes: 0 success, 1 usage or validation error, 2 data error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path
from typing import List, Optional

from . import __version__
from .bench import SuiteSpec, dumps_result, format_table, run_suite
from .detectors import (
    METHODS,
    ThresholdOverlapError,
    ansd,
    awdd,
    bfdd,
    locate,
    signal_statistic,
    train_threshold,
)
from .distance import dtw, mdtw_distance, pointwise_distance
from .io import (
    atomic_write,
    read_signal,
    read_threshold,
    write_report,
    write_signal,
    write_threshold,
)
from .segmentation import PeakConfig, collect_peaks, default_peak_height
from .signal import DataError
from .synth import SynthSpec, beat_range, duplicate, generate

EXIT_USAGE = 1
EXIT_DATA = 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _peak_config(t, height: Optional[str], min_gap: Optional[int]) -> PeakConfig:
    if height is None:
        raise UsageError("--peak-height is required for awdd/ansd (a number or 'auto')")
    if height == "auto":
        h = default_peak_height(t)
    else:
        try:
            h = float(height)
        except ValueError:
            raise UsageError(f"--peak-height must be a number or 'auto', got {height!r}")
    return PeakConfig(h, min_gap)


def _run(t, method, window, height, min_gap, threshold):
    if method == "bfdd":
        if window is None:
            raise UsageError("--window is required for bfdd")
        return bfdd(t, window, threshold=threshold)
    cfg = _peak_config(t, height, min_gap)
    peaks = collect_peaks(t, cfg)
    report = (awdd if method == "awdd" else ansd)(t, peaks, threshold)
    return replace(
        report,
        parameters={"peak_height": cfg.height, "min_gap": cfg.min_gap, "peaks": len(peaks)},
    )


def _threshold(value: Optional[str]) -> Optional[float]:
    if value is None:
        return None
    try:
        return float(value)
    except ValueError:
        pass
    if not Path(value).exists():
        raise UsageError(f"--threshold must be a number or a threshold file, got {value!r}")
    return read_threshold(value).value


def cmd_distance(args) -> int:
    a, b = read_signal(args.file_a), read_signal(args.file_b)
    if args.method == "pointwise":
        value = pointwise_distance(a, b, cost=args.cost)
    elif args.method == "dtw":
        res = dtw(a, b, cost=args.cost)
        value = res.value
        if args.path:
            for i, j in res.path.pairs:
                print(f"{i}\t{j}")
    else:
        value = mdtw_distance(a, b, cost=args.cost)
    print(format(value, ".6g"))
    return 0


def cmd_peaks(args) -> int:
    t = read_signal(args.file)
    peaks = collect_peaks(t, _peak_config(t, args.peak_height, args.min_gap))
    print(f"# {len(peaks)} peaks")
    for p in peaks:
        print(p)
    return 0


def cmd_detect(args) -> int:
    t = read_signal(args.file)
    report = _run(t, args.method, args.window, args.peak_height, args.min_gap, _threshold(args.threshold))
    if args.output:
        write_report(args.output, report)
    locs = ", ".join(str(loc) for loc, _ in locate(report)) or "NA"
    print(
        f"{report.method}: {len(report.anomalies)} anomalous candidates "
        f"(locations: {locs}); top discord at {report.top_discord[0]} "
        f"score {report.top_discord[1]:.12g}; {report.elapsed:.3f}s"
    )
    return 0


def _scores_from_file(path) -> List[float]:
    return list(read_signal(path))


def cmd_train(args) -> int:
    def stats(files):
        out = []
        for f in files:
            if args.inputs == "scores":
                out.extend(_scores_from_file(f))
            else:
                t = read_signal(f)
                out.append(signal_statistic(_run(t, args.method, args.window, args.peak_height, args.min_gap, None)))
        return out

    normal, anomalous = stats(args.normal), stats(args.anomalous)
    try:
        th = train_threshold(normal, anomalous)
    except ThresholdOverlapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        print(f"max_normal {exc.max_normal:.12g}", file=sys.stderr)
        print(f"min_anomalous {exc.min_anomalous:.12g}", file=sys.stderr)
        return EXIT_DATA
    print(f"threshold {th.value:.12g}")
    print(f"max_normal {th.max_normal:.12g}")
    print(f"min_anomalous {th.min_anomalous:.12g}")
    if args.output:
        write_threshold(args.output, th, method=args.method)
    return 0


def _anomaly_flag(text: str):
    try:
        k, kind = text.split(":", 1)
        return int(k), kind
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected BEAT:KIND, got {text!r}")


def cmd_synth(args) -> int:
    try:
        spec = SynthSpec(
            beats=args.beats,
            period=args.period,
            peak_amplitude=args.peak_amplitude,
            noise_amplitude=args.noise,
            seed=args.seed,
            anomalies=tuple(args.anomaly or ()),
        )
    except ValueError as exc:
        raise UsageError(str(exc))
    t, truth = generate(spec)
    rows = [(k, *beat_range(spec, k)) for k in truth]
    if args.duplicate:
        t = duplicate(t)
        n = spec.beats * spec.period
        rows += [(k + spec.beats, a + n, b + n) for k, a, b in rows]
    header = (
        f"synthetic signal: beats={spec.beats} period={spec.period} "
        f"noise={spec.noise_amplitude} seed={spec.seed} duplicated={args.duplicate}"
    )
    write_signal(args.output, t, header=header)
    sidecar = {
        "signal": Path(args.output).name,
        "period": spec.period,
        "beats": spec.beats * (2 if args.duplicate else 1),
        "anomalies": [{"beat": k, "start": a, "stop": b} for k, a, b in rows],
        "tool_version": __version__,
    }
    atomic_write(str(args.output) + ".truth.json", json.dumps(sidecar, indent=1) + "\n")
    print(f"wrote {len(t)} samples to {args.output}; anomalous beats: {[r[0] for r in rows]}")
    return 0


def cmd_bench(args) -> int:
    if args.suite:
        try:
            suite = SuiteSpec.from_dict(json.loads(Path(args.suite).read_text()))
        except (TypeError, ValueError) as exc:
            raise UsageError(f"invalid suite spec: {exc}")
    else:
        suite = SuiteSpec()
    res = run_suite(suite)
    print(format_table(res))
    for m, err in res.training_errors.items():
        print(f"{m}: training failed: {err}")
    if args.output:
        atomic_write(args.output, dumps_result(res))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="ansd", description="Discord discovery with BFDD, AWDD and ANSD.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def detector_flags(sp):
        sp.add_argument("--method", choices=METHODS, required=True)
        sp.add_argument("--window", type=int, help="window length for bfdd")
        sp.add_argument("--peak-height", help="peak threshold for awdd/ansd, or 'auto' (0.9 x max)")
        sp.add_argument("--min-gap", type=int, help="peak consolidation gap in samples (0 disables)")

    sp = sub.add_parser("distance", help="distance between two signal files")
    sp.add_argument("file_a")
    sp.add_argument("file_b")
    sp.add_argument("--method", choices=("pointwise", "dtw", "mdtw"), default="mdtw")
    sp.add_argument("--cost", choices=("absolute", "squared"), default="absolute")
    sp.add_argument("--path", action="store_true", help="also print the dtw warping path")
    sp.set_defaults(func=cmd_distance)

    sp = sub.add_parser("peaks", help="collect peak locations")
    sp.add_argument("file")
    sp.add_argument("--peak-height", required=True)
    sp.add_argument("--min-gap", type=int)
    sp.set_defaults(func=cmd_peaks)

    sp = sub.add_parser("detect", help="run a detector and write a report")
    sp.add_argument("file")
    detector_flags(sp)
    sp.add_argument("--threshold", help="number or threshold file from 'train'")
    sp.add_argument("--output", help="report path (JSON)")
    sp.set_defaults(func=cmd_detect)

    sp = sub.add_parser("train", help="train a threshold from labelled signals")
    sp.add_argument("--normal", nargs="+", required=True)
    sp.add_argument("--anomalous", nargs="+", required=True)
    detector_flags(sp)
    sp.add_argument(
        "--inputs", choices=("signals", "scores"), default="signals",
        help="'scores': files hold precomputed per-signal statistics, one per line",
    )
    sp.add_argument("--output", help="threshold file path (JSON)")
    sp.set_defaults(func=cmd_train)

    sp = sub.add_parser("synth", help="generate a synthetic signal and ground truth")
    sp.add_argument("--beats", type=int, required=True)
    sp.add_argument("--period", type=int, default=260)
    sp.add_argument("--peak-amplitude", type=float, default=1.0)
    sp.add_argument("--noise", type=float, default=0.0)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--anomaly", type=_anomaly_flag, action="append", metavar="BEAT:KIND")
    sp.add_argument("--duplicate", action="store_true")
    sp.add_argument("--output", required=True)
    sp.set_defaults(func=cmd_synth)

    sp = sub.add_parser("bench", help="accuracy and runtime comparison on a synthetic suite")
    sp.add_argument("--suite", help="suite spec (JSON); default suite otherwise")
    sp.add_argument("--output", help="results path (JSON)")
    sp.set_defaults(func=cmd_bench)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"ansd {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DataError, OSError) as exc:
        print(f"ansd {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ValueError as exc:
        print(f"ansd {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
