import numpy as np
import pytest

from qasa import QubitParams, build_report, fit_log_trend, orientation_split, summarize, sweep_point
from qasa.analysis import AnalysisError, AnnealSweepPoint, spatial_report
from qasa.estimator import FitResult
from qasa.topology import ChimeraSpec


def fake_result(beta=10.54, b=0.0025, eta=0.0367, gamma=0.0176):
    return FitResult(
        params=QubitParams(beta, b, eta, gamma),
        log_likelihood=0.0,
        converged=True,
        start_index=0,
        n_points=81,
        total_samples=81 * 1000,
    )


class TestSummarize:
    def test_degenerate_chip(self):
        results = {q: fake_result() for q in range(2032)}
        s = summarize(results, "beta")
        assert s.median == 10.54
        assert s.std == pytest.approx(0.0, abs=1e-12)
        assert s.count == 2032
        assert sum(s.bin_counts) == 2032

    def test_midpoint_median(self):
        results = {q: fake_result(beta=v) for q, v in enumerate([1.0, 2.0, 3.0])}
        assert summarize(results, "beta").median == 2.0
        results[3] = fake_result(beta=4.0)
        assert summarize(results, "beta").median == 2.5

    def test_permutation_invariance(self):
        rng = np.random.default_rng(0)
        vals = rng.normal(10.5, 0.5, 100)
        a = summarize({q: fake_result(beta=v) for q, v in enumerate(vals)}, "beta")
        b = summarize({99 - q: fake_result(beta=v) for q, v in enumerate(vals)}, "beta")
        assert a.median == b.median
        assert a.mean == b.mean

    def test_monte_carlo_eta_median(self):
        rng = np.random.default_rng(1)
        hits = 0
        for _ in range(20):
            vals = np.abs(rng.normal(0.0367, 0.01, 2032))
            results = {q: fake_result(eta=v) for q, v in enumerate(vals)}
            hits += int(abs(summarize(results, "eta").median - 0.0367) <= 0.002)
        assert hits >= 19

    def test_outliers_beyond_3_iqr(self):
        vals = list(np.linspace(10, 11, 40)) + [50.0]
        results = {q: fake_result(beta=v) for q, v in enumerate(vals)}
        assert summarize(results, "beta").outlier_ids == (40,)

    def test_empty_and_unknown(self):
        with pytest.raises(AnalysisError):
            summarize({}, "beta")
        with pytest.raises(AnalysisError):
            summarize({0: fake_result()}, "delta")


class TestOrientationSplit:
    def test_identical_params(self):
        spec = ChimeraSpec(grid=2)
        results = {q: fake_result() for q in spec.operational}
        h_sum, v_sum = orientation_split(results, spec, "gamma")
        assert h_sum.median == v_sum.median == 0.0176
        assert h_sum.count == v_sum.count == 16

    def test_split_recovery(self):
        from qasa.topology import site_of

        spec = ChimeraSpec(grid=4)
        rng = np.random.default_rng(2)
        results = {}
        for q in spec.operational:
            target = 0.0187 if site_of(q, spec).orientation == "horizontal" else 0.0165
            results[q] = fake_result(gamma=max(target + rng.normal(0, 0.002), 0.0))
        h_sum, v_sum = orientation_split(results, spec, "gamma")
        assert abs(h_sum.median - 0.0187) <= 0.001
        assert abs(v_sum.median - 0.0165) <= 0.001

    def test_id_not_on_chip(self):
        spec = ChimeraSpec(grid=1)
        with pytest.raises(AnalysisError):
            orientation_split({99: fake_result()}, spec, "beta")


class TestSpatialReport:
    def test_single_qubit(self):
        spec = ChimeraSpec(grid=1)
        records = spatial_report({0: fake_result(beta=12.0)}, spec, "beta")
        assert records[0]["value"] == 12.0
        assert all(r["value"] is None for r in records[1:])

    def test_striped_truth_visible(self):
        from qasa.topology import site_of

        spec = ChimeraSpec(grid=2)
        results = {
            q: fake_result(
                gamma=0.03 if site_of(q, spec).orientation == "horizontal" else 0.01
            )
            for q in spec.operational
        }
        records = spatial_report(results, spec, "gamma")
        horiz = [r["value"] for r in records if r["orientation"] == "horizontal"]
        vert = [r["value"] for r in records if r["orientation"] == "vertical"]
        assert min(horiz) > max(vert)

    def test_missing_qubits_marked(self):
        operational = frozenset(range(32)) - {3, 7}
        spec = ChimeraSpec(grid=2, operational=operational)
        results = {q: fake_result() for q in operational}
        records = spatial_report(results, spec, "beta")
        assert [r["id"] for r in records if not r["present"]] == [3, 7]


class TestTrendFit:
    def test_exact_interpolation(self):
        times = [1.0, 5.0, 25.0, 125.0]
        points = [
            AnnealSweepPoint(t, {"beta": 10.5 + 1.2 * np.log(t)}, {"beta": 0.0}) for t in times
        ]
        fit = fit_log_trend(points, "beta")
        assert fit.c1 == pytest.approx(1.2, abs=1e-10)
        assert fit.c0 == pytest.approx(10.5, abs=1e-10)
        assert fit.residual_rms <= 1e-10

    def test_two_point_slope(self):
        points = [
            AnnealSweepPoint(1.0, {"beta": 10.5}, {"beta": 0.0}),
            AnnealSweepPoint(125.0, {"beta": 15.7}, {"beta": 0.0}),
        ]
        fit = fit_log_trend(points, "beta")
        assert fit.c1 == pytest.approx(5.2 / np.log(125.0), abs=1e-12)

    def test_flat_parameter(self):
        rng = np.random.default_rng(3)
        points = [
            AnnealSweepPoint(t, {"b": 0.0025 + rng.normal(0, 1e-5)}, {"b": 0.0})
            for t in (1.0, 5.0, 25.0, 125.0)
        ]
        fit = fit_log_trend(points, "b")
        assert abs(fit.c1) <= 1e-4

    def test_scale_equivariance(self):
        points = [
            AnnealSweepPoint(t, {"beta": 10.5 + 1.2 * np.log(t) + 0.01 * (-1) ** i}, {"beta": 0.0})
            for i, t in enumerate((1.0, 5.0, 25.0, 125.0))
        ]
        scaled = [
            AnnealSweepPoint(pt.anneal_time_us, {"beta": 7.0 * pt.means["beta"]}, pt.stds)
            for pt in points
        ]
        a = fit_log_trend(points, "beta")
        b = fit_log_trend(scaled, "beta")
        assert b.c0 == pytest.approx(7.0 * a.c0, rel=1e-12)
        assert b.c1 == pytest.approx(7.0 * a.c1, rel=1e-12)

    def test_needs_two_times(self):
        points = [AnnealSweepPoint(1.0, {"beta": 10.5}, {"beta": 0.0})] * 2
        with pytest.raises(AnalysisError):
            fit_log_trend(points, "beta")
        with pytest.raises(AnalysisError):
            AnnealSweepPoint(0.0, {}, {})


class TestReport:
    def test_full_report_shape(self):
        spec = ChimeraSpec(grid=2)
        results = {q: fake_result() for q in spec.operational}
        report = build_report(results, spec)
        assert report["schema_version"] == 1
        assert set(report["summaries"]) == {"beta", "b", "eta", "gamma"}
        assert set(report["orientation_splits"]["gamma"]) == {"horizontal", "vertical"}
        assert len(report["heatmaps"]["beta"]) == 32

    def test_sweep_point_aggregates(self):
        results = {q: fake_result(beta=10.0 + q) for q in range(3)}
        pt = sweep_point(5.0, results)
        assert pt.means["beta"] == pytest.approx(11.0)
        assert pt.stds["beta"] == pytest.approx(np.std([10.0, 11.0, 12.0]))
