"""Harness determinism, calibration self-consistency, scoring arithmetic."""

import json
import math

import numpy as np
import pytest

from focus_detect.detectors import Focus0
from focus_detect.harness import (
    ARL_COLUMNS,
    DELAY_COLUMNS,
    RunSummary,
    StreamSpec,
    average_run_length,
    calibrate_threshold,
    detection_delay,
    evaluate_windowed,
    generate_stream,
    harmonic_candidate_mean,
    loglog_slope,
    mosum_windows_for_grid,
    quadratic_count_profile,
    timing_profile,
    write_arl_csv,
    write_delay_csv,
    write_metadata,
)


def focus0_factory():
    return Focus0(math.inf)


class TestGenerateStream:
    def test_reproducible_bit_for_bit(self):
        spec = StreamSpec(n=500, tau_star=100, delta=1.5, seed=42)
        np.testing.assert_array_equal(generate_stream(spec), generate_stream(spec))

    def test_no_change_is_pure_noise(self):
        spec = StreamSpec(n=10_000, seed=1)
        x = generate_stream(spec)
        assert abs(x.mean()) < 4.0 / math.sqrt(10_000)

    def test_change_applies_after_tau_star(self):
        spec = StreamSpec(n=20_000, tau_star=10_000, delta=5.0, seed=2)
        x = generate_stream(spec)
        assert abs(x[:10_000].mean()) < 4.0 / math.sqrt(10_000)
        assert abs(x[10_000:].mean() - 5.0) < 4.0 / math.sqrt(10_000)

    def test_spec_validation(self):
        with pytest.raises(ValueError):
            StreamSpec(n=10, tau_star=10)
        with pytest.raises(ValueError):
            StreamSpec(n=0)
        with pytest.raises(ValueError):
            StreamSpec(n=10, sigma=0.0)


class TestAverageRunLength:
    def test_zero_threshold_gives_run_length_one(self):
        summary = average_run_length(focus0_factory, 0.0, replicates=10, horizon=100)
        assert summary.censored == 0
        assert summary.mean == 1.0

    def test_infinite_threshold_censors_everything(self):
        summary = average_run_length(focus0_factory, math.inf, replicates=10, horizon=200)
        assert summary.censored == 10
        assert summary.count == 0
        assert math.isnan(summary.mean)

    def test_censoring_accounting(self):
        summary = average_run_length(focus0_factory, 8.0, replicates=30, horizon=500)
        assert summary.count + summary.censored == summary.replicates == 30

    def test_arl_curve_monotone_in_threshold(self):
        # Same seeds across thresholds, so first-crossing times are
        # pointwise monotone and the curve rises with the threshold.
        means = []
        for lam in (2.0, 4.0, 6.0):
            s = average_run_length(focus0_factory, lam, replicates=25, horizon=5000, base_seed=12)
            means.append(math.fsum(s.values) + s.censored * 5000)
        assert means == sorted(means)


class TestCalibration:
    def test_self_consistency_at_target_1000(self):
        lam = calibrate_threshold(focus0_factory, 1000.0, replicates=60, horizon=10_000, base_seed=3)
        re_estimate = average_run_length(
            focus0_factory, lam, replicates=60, horizon=20_000, base_seed=900
        )
        arl = (
            math.fsum(re_estimate.values) + re_estimate.censored * 20_000
        ) / re_estimate.replicates
        assert 900.0 <= arl <= 1100.0

    def test_monotone_in_target(self):
        lam1 = calibrate_threshold(focus0_factory, 200.0, replicates=40, horizon=4000, base_seed=4)
        lam2 = calibrate_threshold(focus0_factory, 400.0, replicates=40, horizon=4000, base_seed=4)
        assert lam2 >= lam1

    def test_deterministic(self):
        a = calibrate_threshold(focus0_factory, 150.0, replicates=20, horizon=2000, base_seed=5)
        b = calibrate_threshold(focus0_factory, 150.0, replicates=20, horizon=2000, base_seed=5)
        assert a == b

    def test_unreachable_target_raises(self):
        with pytest.raises(ValueError):
            calibrate_threshold(focus0_factory, 5000.0, replicates=5, horizon=1000)

    def test_target_one_gives_near_zero_threshold(self):
        lam = calibrate_threshold(focus0_factory, 1.0, replicates=20, horizon=100, base_seed=13)
        assert 0.0 <= lam < 0.05


class TestDetectionDelay:
    def test_large_change_detected_within_two_steps(self):
        spec = StreamSpec(n=600, tau_star=500, delta=8.0, seed=6)
        out = detection_delay(focus0_factory, 10.0, [spec], replicates=40)
        summary = out[8.0]
        assert summary.false_alarms + summary.count + summary.censored == 40
        assert summary.mean <= 2.0

    def test_null_grid_produces_only_false_alarms_or_censoring(self):
        spec = StreamSpec(n=400, tau_star=399, delta=0.0, seed=7)
        out = detection_delay(focus0_factory, 5.0, [spec], replicates=20)
        summary = out[0.0]
        assert summary.count + summary.censored + summary.false_alarms == 20
        assert summary.count <= 1  # crossing the last observation is rare

    def test_common_random_numbers_across_methods(self):
        spec = StreamSpec(n=300, tau_star=200, delta=2.0, seed=8)
        a = detection_delay(focus0_factory, 9.0, [spec], replicates=10)[2.0]
        b = detection_delay(focus0_factory, 9.0, [spec], replicates=10)[2.0]
        np.testing.assert_array_equal(a.values, b.values)


class TestQuadraticCountProfile:
    def test_counts_near_harmonic_reference(self):
        rows = quadratic_count_profile([256], replicates=60, base_seed=9)
        focus_row = next(r for r in rows if r["variant"] == "focus")
        focus0_row = next(r for r in rows if r["variant"] == "focus0")
        ref = harmonic_candidate_mean(256)
        assert abs(focus_row["mean_per_side"] - ref) < 5 * focus_row["se"]
        assert focus0_row["mean_per_side"] < focus_row["mean_per_side"]

    def test_change_rows_report_bound(self):
        rows = quadratic_count_profile([128], replicates=30, with_change=True, base_seed=10)
        for row in rows:
            assert row["change"] is True
            assert row["single_change_bound"] == pytest.approx(2 * (1 + math.log(64.0)))


class TestTimingProfile:
    def test_rows_and_slope(self):
        runners = {"focus0": lambda data: Focus0(math.inf).run(data)}
        rows = timing_profile(runners, [2000, 8000], repeats=2, base_seed=11)
        assert {r["n"] for r in rows} == {2000, 8000}
        assert all(r["seconds"] > 0 for r in rows)
        slope = loglog_slope(rows, "focus0")
        assert math.isfinite(slope)
        with pytest.raises(ValueError):
            loglog_slope(rows, "missing")


class TestEvaluateWindowed:
    def test_exact_detections(self):
        p, r = evaluate_windowed([500], [500], n=1000)
        assert (p, r) == (1.0, 1.0)

    def test_window_boundary_arithmetic(self):
        p, r = evaluate_windowed([500], [549], n=1000)
        assert (p, r) == (1.0, 1.0)
        p, r = evaluate_windowed([500], [551], n=1000)
        assert (p, r) == (0.0, 0.0)

    def test_no_detections_conventions(self):
        p, r = evaluate_windowed([500], [], n=1000)
        assert (p, r) == (1.0, 0.0)

    def test_multiple_detections_in_window_count_once(self):
        p, r = evaluate_windowed([500], [460, 480, 510, 540], n=1000)
        assert (p, r) == (1.0, 1.0)

    def test_probation_prefix_ignored(self):
        p, r = evaluate_windowed([500, 100], [90, 520], n=1000, probation=150)
        assert r == 0.5  # the anomaly at 100 can only be hit inside probation
        assert p == 1.0

    def test_mixed_hits_and_misses(self):
        p, r = evaluate_windowed([300, 700], [310, 500], n=1000)
        assert p == 0.5
        assert r == 0.5

    def test_window_frac_validation(self):
        with pytest.raises(ValueError):
            evaluate_windowed([1], [1], n=10, window_frac=0.5)


class TestOutputs:
    def test_fixed_csv_columns(self, tmp_path):
        arl_rows = [
            {"method": "focus0", "n": 100, "threshold": 5.0, "arl": 42.0, "se": 1.0, "censored": 0}
        ]
        path = tmp_path / "arl.csv"
        write_arl_csv(path, arl_rows)
        header = path.read_text().splitlines()[0]
        assert header == ",".join(ARL_COLUMNS)
        delay_rows = [
            {
                "method": "focus0",
                "delta": 1.0,
                "threshold": 5.0,
                "delay": 3.0,
                "se": 0.5,
                "false_alarms": 2,
            }
        ]
        path = tmp_path / "delay.csv"
        write_delay_csv(path, delay_rows)
        assert path.read_text().splitlines()[0] == ",".join(DELAY_COLUMNS)

    def test_metadata_records_rng(self, tmp_path):
        path = tmp_path / "meta.json"
        write_metadata(path, {"study": "x"})
        meta = json.loads(path.read_text())
        assert meta["rng"] == "philox"
        assert meta["study"] == "x"


class TestMosumWindows:
    def test_windows_shrink_with_magnitude(self):
        ws = mosum_windows_for_grid([0.5, 1.0, 2.0], scale=8.0)
        assert ws == sorted(ws)
        assert ws == [2, 8, 32]


class TestRunSummary:
    def test_mean_and_se(self):
        s = RunSummary(np.array([1.0, 3.0, 5.0]), replicates=3)
        assert s.mean == 3.0
        assert s.se == pytest.approx(2.0 / math.sqrt(3.0))
        assert math.isnan(RunSummary(np.array([])).mean)
