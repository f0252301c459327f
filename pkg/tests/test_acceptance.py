"""Acceptance criteria, one test (or small group) per criterion.

Each test records a PASS/FAIL line that is printed in the terminal summary.
Run alone with ``pytest tests/test_acceptance.py -v``.
"""

import contextlib
import time
from pathlib import Path

import numpy as np
import pytest
from hypothesis import HealthCheck, given, settings, strategies as st

from ansd.bench import SuiteSpec, run_suite, train, training_cases
from ansd.detectors import (
    DistanceProfile,
    ansd,
    awdd,
    bfdd,
    detect,
    train_threshold,
)
from ansd.distance import dtw, dtw_distance, mdtw_distance, pointwise_distance, resample
from ansd.io import dumps_report, loads_report, read_signal
from ansd.segmentation import PeakConfig, collect_peaks, default_peak_height, segments_from_peaks
from ansd.signal import PeakSet, Segment, is_non_self_match
from ansd.synth import KINDS, SynthSpec, duplicate, generate

from oracles import brute_dtw, exhaustive_nearest

FIX = Path(__file__).parent / "fixtures"


@contextlib.contextmanager
def criterion(record, label):
    """Record PASS when the block finishes, FAIL (and re-raise) otherwise."""
    notes = []
    try:
        yield notes
    except BaseException as exc:
        record(label, False, f"{type(exc).__name__}: {str(exc).splitlines()[0] if str(exc) else ''}")
        raise
    record(label, True, "; ".join(notes))


def _peaks(t):
    return collect_peaks(t, PeakConfig(default_peak_height(t)))


def test_c1_worked_example(acceptance_line):
    with criterion(acceptance_line, "C1 worked example") as notes:
        a, b = read_signal(FIX / "template_a.txt"), read_signal(FIX / "template_b.txt")
        for fn in (pointwise_distance, dtw_distance, mdtw_distance):
            fn(a, b)  # warm the compiled kernels
        started = time.perf_counter()
        pw, d, md = pointwise_distance(a, b), dtw_distance(a, b), mdtw_distance(a, b)
        secs = time.perf_counter() - started
        assert pw == 7
        assert d == 0
        assert abs(md - 4.9333) <= 1e-3
        assert secs < 0.05
        notes.append(f"pointwise={pw:g} dtw={d:g} mdtw={md:.6f} in {secs * 1e3:.2f} ms")


def test_c2_threshold_arithmetic(acceptance_line):
    with criterion(acceptance_line, "C2 threshold arithmetic") as notes:
        out = {}
        for name in ("bfdd", "ansd"):
            normal = read_signal(FIX / f"{name}_train_normal.txt")
            anomalous = read_signal(FIX / f"{name}_train_anomalous.txt")
            out[name] = train_threshold(list(normal), list(anomalous)).value
        assert out["bfdd"] == 9601
        assert out["ansd"] == 18055
        notes.append(f"bfdd={out['bfdd']:g} ansd={out['ansd']:g}")


def test_c3_non_self_match(acceptance_line):
    with criterion(acceptance_line, "C3 non-self match"):
        assert is_non_self_match(1, 19, 3) is True
        assert is_non_self_match(17, 19, 3) is False


# --- criterion 4: duplicated anomalies -------------------------------------


def _check_duplicated(spec, m):
    t, truth = generate(spec)
    d = duplicate(t)
    prof = bfdd(d, m).profile.as_array()
    assert np.all(prof == 0.0), f"max BFDD score {prof.max()!r}"
    peaks = _peaks(d)
    aw = awdd(d, peaks, threshold=0.0)
    assert aw.anomalies == ()
    an = ansd(d, peaks, threshold=None).profile.scores
    # segment k starts at beat k's peak, the copy sits spec.beats segments later
    copies = {k - 1 for k in truth} | {k - 1 + spec.beats for k in truth}
    vals = {an[i] for i in copies}
    assert len(vals) == 1, f"copy scores differ: {sorted(vals)}"
    normal = [s for i, s in enumerate(an) if i not in copies]
    assert min(vals) > max(normal)
    return d, prof, an


@settings(max_examples=25, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(
    period=st.integers(20, 48),
    beats=st.integers(5, 8),
    where=st.floats(0, 1),
    kind=st.sampled_from(KINDS),
    amplitude=st.sampled_from([0.5, 1.0, 3.0]),
    frac=st.floats(0.6, 1.4),
)
def test_c4_duplication_property(period, beats, where, kind, amplitude, frac):
    beat = 2 + int(where * (beats - 3.0001))  # beats 2 .. beats-1
    spec = SynthSpec(beats, period, amplitude, anomalies=((beat, kind),))
    m = max(2, int(period * frac))
    _check_duplicated(spec, m)


def test_c4_duplication_n5400(acceptance_line):
    with criterion(acceptance_line, "C4 duplication (noise-free, n=5400, m=300)") as notes:
        spec = SynthSpec(10, 270, anomalies=((5, "widened"),))
        _check_duplicated(SynthSpec(6, 40, anomalies=((3, "widened"),)), 40)  # warm-up
        started = time.perf_counter()
        d, prof, an = _check_duplicated(spec, 300)
        secs = time.perf_counter() - started
        assert len(d) == 5400
        assert secs < 10
        notes.append(f"BFDD max 0, AWDD 0 anomalies, ANSD copies equal and top; {secs:.2f} s")


@pytest.fixture(scope="module")
def noisy_duplicated():
    spec = SynthSpec(10, 270, noise_amplitude=0.02, seed=5, anomalies=((5, "widened"),))
    t, _ = generate(spec)
    d = duplicate(t)
    suite = SuiteSpec(beats=10, period=270, period_jitter=0, noise=0.02, window=300)
    normal, anomalous = training_cases(suite)
    th = {m: train(suite, m, normal, anomalous).value for m in ("bfdd", "awdd")}
    return spec, d, th


def test_c4_duplication_noisy(acceptance_line, noisy_duplicated):
    with criterion(acceptance_line, "C4 duplication (noisy, trained thresholds)") as notes:
        spec, d, th = noisy_duplicated
        n, m = len(d) // 2, 300
        rep = bfdd(d, m, threshold=th["bfdd"])
        prof = rep.profile.as_array()
        # windows entirely inside one copy have an exact twin in the other
        inside = np.r_[0 : n - m + 1, n : 2 * n - m + 1]
        assert np.all(prof[inside] == 0.0)
        assert rep.anomalies == ()
        aw = awdd(d, _peaks(d), threshold=th["awdd"])
        assert aw.anomalies == ()
        an = ansd(d, _peaks(d), threshold=None).profile.scores
        k = spec.anomalies[0][0]
        assert an[k - 1] == an[k - 1 + spec.beats] > max(
            s for i, s in enumerate(an) if i not in (k - 1, k - 1 + spec.beats)
        )
        straddle = np.delete(prof, inside)
        notes.append(
            f"in-copy windows exactly 0; junction windows max {straddle.max():.4g} "
            f"< threshold {th['bfdd']:.4g}; BFDD and AWDD flag nothing"
        )


@pytest.mark.xfail(
    strict=True,
    reason="with noise, windows straddling the copy junction have no exact twin, "
    "so their nearest non-self distance is noise-level rather than 0",
)
def test_c4_duplication_noisy_literal(acceptance_line, noisy_duplicated):
    _, d, _ = noisy_duplicated
    prof = bfdd(d, 300).profile.as_array()
    ok = bool(np.all(prof == 0.0))
    acceptance_line(
        "C4 literal 'every BFDD score exactly 0' on noisy signals (expected failure)",
        ok,
        f"max score {prof.max():.4g}",
    )
    assert ok


# --- criterion 5: default suite ---------------------------------------------


@pytest.fixture(scope="module")
def default_suite():
    started = time.perf_counter()
    res = run_suite(SuiteSpec())
    return res, time.perf_counter() - started


def test_c5_suite_accuracy(acceptance_line, default_suite):
    res, secs = default_suite
    acc = res.accuracy
    summary = " ".join(
        f"{m}=" + "/".join(f"{acc[m][c]:.0f}" for c in ("duplicated", "two_different", "one", "none"))
        for m in acc
    )
    with criterion(acceptance_line, "C5 default suite accuracy") as notes:
        assert not res.training_errors
        assert acc["ansd"] == {"duplicated": 100, "two_different": 100, "one": 100, "none": 100}
        assert acc["awdd"] == {"duplicated": 0, "two_different": 100, "one": 100, "none": 100}
        assert acc["bfdd"]["duplicated"] == 0
        assert acc["bfdd"]["one"] == 100 and acc["bfdd"]["none"] == 100
        assert secs < 300
        notes.append(f"{summary} (bfdd two_different reported only); {secs:.1f} s")


def test_c5_suite_deterministic(acceptance_line, default_suite):
    with criterion(acceptance_line, "C5 default suite deterministic") as notes:
        res, _ = default_suite
        again = run_suite(SuiteSpec())
        assert again.deterministic_view() == res.deterministic_view()
        notes.append("second run identical apart from timings")


# --- criteria 6 and 7: oracle equivalence -------------------------------------


def test_c6_dtw_oracle(acceptance_line):
    with criterion(acceptance_line, "C6 DTW vs brute force") as notes:
        rng = np.random.default_rng(6)
        pairs = 1200
        for _ in range(pairs):
            la, lb = rng.integers(1, 7, size=2)
            a = rng.integers(-3, 4, size=la).astype(float)
            b = rng.integers(-3, 4, size=lb).astype(float)
            got = dtw(a, b).value
            assert got == brute_dtw(a.tolist(), b.tolist()), (a, b)
        notes.append(f"{pairs} pairs equal exactly")


def test_c7_bfdd_oracle(acceptance_line):
    with criterion(acceptance_line, "C7 BFDD vs exhaustive scan") as notes:
        rng = np.random.default_rng(7)
        series = 250
        for _ in range(series):
            m = int(rng.integers(1, 6))
            n = int(rng.integers(3 * m - 1, 41)) if 3 * m - 1 <= 40 else 40
            n = max(n, 2)
            t = rng.integers(-5, 6, size=n).astype(float) + rng.random(n).round(2)
            got = bfdd(t, m).profile.scores
            assert list(got) == exhaustive_nearest(t.tolist(), m), (t, m)
        notes.append(f"{series} series equal exactly")


# --- criterion 8: runtime ordering --------------------------------------------


def test_c8_runtime_ordering(acceptance_line):
    with criterion(acceptance_line, "C8 runtime BFDD >= 10x AWDD") as notes:
        t, _ = generate(SynthSpec(20, 270, noise_amplitude=0.02, seed=8, anomalies=((9, "inverted"),)))
        assert len(t) == 5400
        peaks = _peaks(t)
        bfdd(t[:700], 100)
        awdd(t, peaks, None)  # warm-up

        def mean_time(fn, reps):
            times = []
            for _ in range(reps):
                started = time.perf_counter()
                fn()
                times.append(time.perf_counter() - started)
            return float(np.mean(times))

        tb = mean_time(lambda: bfdd(t, 300), 3)
        ta = mean_time(lambda: awdd(t, _peaks(t), None), 5)
        assert tb >= 10 * ta
        notes.append(f"BFDD {tb:.3f} s, AWDD {ta:.4f} s, ratio {tb / ta:.0f}x")


# --- criterion 9: invariants --------------------------------------------------

series = st.lists(st.floats(-50, 50, allow_nan=False), min_size=1, max_size=12)
positive = st.lists(st.floats(0, 50, allow_nan=False), min_size=1, max_size=12)


@settings(max_examples=200, deadline=None)
@given(series, series)
def _prop_path(a, b):
    p = dtw(a, b).path
    pairs = p.pairs
    assert pairs[0] == (1, 1) and pairs[-1] == (len(a), len(b))
    steps = {(i2 - i1, j2 - j1) for (i1, j1), (i2, j2) in zip(pairs, pairs[1:])}
    assert steps <= {(1, 0), (0, 1), (1, 1)}
    assert max(len(a), len(b)) <= len(p) <= len(a) + len(b) - 1


@settings(max_examples=200, deadline=None)
@given(series, positive, positive)
def _prop_mdtw(x, a, b):
    assert mdtw_distance(x, x) == 0
    assert mdtw_distance(a, b) >= 0


@settings(max_examples=200, deadline=None)
@given(st.lists(st.floats(-50, 50, allow_nan=False), min_size=2, max_size=30), st.integers(2, 40))
def _prop_resample(a, k):
    r = resample(a, k).samples
    assert r[0] == a[0] and r[-1] == a[-1]
    assert np.all(np.diff(resample(sorted(a), k).samples) >= 0)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(1, 200), min_size=2, max_size=15, unique=True))
def _prop_segments(points):
    segs = segments_from_peaks(np.zeros(200), PeakSet(tuple(sorted(points)), 200))
    for s1, s2 in zip(segs, segs[1:]):
        assert s1.stop + 1 == s2.start


@settings(max_examples=200, deadline=None)
@given(st.lists(st.floats(0, 100, allow_nan=False), min_size=1, max_size=20), st.integers(-6, 6))
def _prop_detect(scores, e):
    segs = [Segment(i + 1, 1) for i in range(len(scores))]
    prof = DistanceProfile(scores, range(1, len(scores) + 1), "average")
    th = scores[0]
    flagged = detect(prof, th, segs).anomaly_starts
    assert flagged == [i + 1 for i, s in enumerate(scores) if s > th]
    c = 2.0 ** e
    scaled = DistanceProfile([s * c for s in scores], prof.candidate_starts, "average")
    assert detect(scaled, th * c, segs).anomaly_starts == flagged


def _round_trip():
    t, _ = generate(SynthSpec(8, 60, noise_amplitude=0.05, seed=3, anomalies=((4, "shifted"),)))
    for r in (bfdd(t, 50, threshold=1.0), awdd(t, _peaks(t), 0.5), ansd(t, _peaks(t), None)):
        assert loads_report(dumps_report(r)) == r


@pytest.mark.parametrize(
    "label, check",
    [
        ("warping path boundary/monotonicity/step", _prop_path),
        ("mdtw(x,x)=0 and non-negativity", _prop_mdtw),
        ("resample endpoints and monotonicity", _prop_resample),
        ("segment disjointness", _prop_segments),
        ("detect strictness and rescaling", _prop_detect),
        ("report round-trip", _round_trip),
    ],
)
def test_c9_invariants(acceptance_line, label, check):
    with criterion(acceptance_line, f"C9 {label}"):
        check()
