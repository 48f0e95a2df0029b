import numpy as np
import pytest

from nusamp.sampling import (
    PiecewiseConstant,
    bennett_mse,
    empirical_mse,
    optimal_samples,
    panter_dite_mse,
)
from nusamp.segmentation import (
    optimal_density,
    segment_by_threshold,
    uniform_segmentation,
)
from nusamp.signals import AnalyticSignalSpec, UniformSignal, derivative, generate


def closed_form_optimal_mse(alpha, n):
    """Exact high-resolution optimum for the exponential test signal."""
    return 9.0 / (32.0 * alpha * n * n) * (np.exp(2.0 * alpha / 3.0) - 1.0) ** 3


def closed_form_uniform_mse(alpha, n):
    return alpha / (24.0 * n * n) * (np.exp(2.0 * alpha) - 1.0)


class TestOptimalSamples:
    def test_constant_signal(self):
        sig = UniformSignal.from_values(np.full(64, 2.5))
        pc = optimal_samples(sig, uniform_segmentation(64, 4))
        assert np.array_equal(pc.samples, np.full(4, 2.5))

    def test_linear_halves(self):
        sig = generate(AnalyticSignalSpec("linear", slope=1.0), 2048)
        pc = optimal_samples(sig, uniform_segmentation(2048, 2))
        half_cell = sig.cell_width / 2
        assert np.allclose(pc.samples, [0.25, 0.75], atol=half_cell + 1e-12)

    def test_samples_near_segment_centers(self, exp_signal):
        seg = segment_by_threshold(derivative(exp_signal), 50).segmentation
        pc = optimal_samples(exp_signal, seg)
        times = seg.times()
        mids = (times[:-1] + times[1:]) / 2
        widths = np.diff(times)
        curvature = 9.0 * np.exp(3.0 * times[1:])  # max second derivative per segment
        slope = 3.0 * np.exp(3.0 * mids)
        # interval-mean vs center-value gap, plus the one-sided grid bias
        bound = curvature / 24.0 * widths**2 + 0.5 * slope * exp_signal.cell_width + 1e-12
        assert np.all(np.abs(pc.samples - np.exp(3.0 * mids)) <= bound)

    def test_grid_mismatch_rejected(self, exp_signal):
        with pytest.raises(ValueError):
            optimal_samples(exp_signal, uniform_segmentation(1024, 4))


class TestEmpiricalMse:
    def test_full_resolution_is_lossless(self):
        sig = generate(AnalyticSignalSpec("chirp", alpha=2.0), 256)
        pc = optimal_samples(sig, uniform_segmentation(256, 256))
        assert empirical_mse(sig, pc) == 0.0

    def test_matching_constant_is_lossless(self):
        sig = UniformSignal.from_values(np.full(128, -1.5))
        pc = PiecewiseConstant(uniform_segmentation(128, 8), np.full(8, -1.5))
        assert empirical_mse(sig, pc) == 0.0

    def test_exponential_matches_closed_form(self, exp_signal):
        seg = segment_by_threshold(derivative(exp_signal), 50).segmentation
        mse = empirical_mse(exp_signal, optimal_samples(exp_signal, seg))
        assert mse == pytest.approx(closed_form_optimal_mse(3.0, 50), rel=2e-2)

    def test_optimal_samples_are_optimal(self, exp_signal):
        seg = segment_by_threshold(derivative(exp_signal), 20).segmentation
        pc = optimal_samples(exp_signal, seg)
        best = empirical_mse(exp_signal, pc)
        rng = np.random.default_rng(11)
        for _ in range(5):
            jitter = pc.samples + rng.normal(0, 0.05, pc.samples.size)
            assert empirical_mse(exp_signal, PiecewiseConstant(seg, jitter)) >= best


class TestBennettMse:
    def test_unit_slope_uniform_density(self):
        assert bennett_mse(np.ones(1024), np.ones(1024), 8) == pytest.approx(
            1.0 / (12.0 * 64.0), rel=1e-12
        )

    def test_optimal_density_attains_panter_dite(self, exp_signal):
        d = derivative(exp_signal)
        at_optimum = bennett_mse(d, optimal_density(d), 50)
        assert at_optimum == pytest.approx(panter_dite_mse(d, 50), rel=1e-9)

    def test_uniform_density_matches_closed_form(self, exp_signal):
        d = derivative(exp_signal)
        mse = bennett_mse(d, np.ones(d.size), 50)
        assert mse == pytest.approx(closed_form_uniform_mse(3.0, 50), rel=2e-3)

    def test_zero_density_over_active_cell_rejected(self):
        dens = np.ones(64)
        dens[10] = 0.0
        with pytest.raises(ZeroDivisionError):
            bennett_mse(np.ones(64), dens, 4)

    def test_zero_density_over_flat_cell_ignored(self):
        d = np.ones(64)
        d[10] = 0.0
        dens = np.ones(64)
        dens[10] = 0.0
        assert np.isfinite(bennett_mse(d, dens, 4))


class TestPanterDiteMse:
    def test_unit_slope(self):
        assert panter_dite_mse(np.ones(512), 10) == pytest.approx(1.0 / 1200.0, rel=1e-12)

    def test_exponential_closed_form(self, exp_signal):
        mse = panter_dite_mse(derivative(exp_signal), 50)
        assert mse == pytest.approx(closed_form_optimal_mse(3.0, 50), rel=1e-4)

    def test_flat_derivative_is_free(self):
        assert panter_dite_mse(np.zeros(128), 16) == 0.0


class TestOptimalityProperties:
    def test_random_densities_never_beat_the_optimum(self, exp_signal):
        d = derivative(exp_signal)
        floor = panter_dite_mse(d, 50)
        base = optimal_density(d)
        rng = np.random.default_rng(3)
        for _ in range(50):
            dens = base * (1.0 + 0.5 * rng.uniform(-1.0, 1.0, base.size))
            dens /= dens.sum() / dens.size
            assert bennett_mse(d, dens, 50) >= floor - 1e-9

    def test_empirical_gap_shrinks_with_resolution(self):
        gaps = []
        for n_grid in (2**13, 2**16):
            sig = generate(AnalyticSignalSpec("exponential", alpha=3.0), n_grid)
            d = derivative(sig)
            seg = segment_by_threshold(d, 50).segmentation
            emp = empirical_mse(sig, optimal_samples(sig, seg))
            gaps.append(abs(emp / panter_dite_mse(d, 50) - 1.0))
        assert gaps[0] <= 0.02
        assert gaps[1] <= gaps[0]

    def test_segment_error_deviation_shrinks_as_budget_doubles(self, exp_signal):
        # per-segment gap between the exact interval MSE and its local
        # slope-squared prediction, relative to the squared width; evaluated
        # with closed forms so grid-sampling variance cannot mask the decay
        alpha = 3.0
        d = derivative(exp_signal)
        worst = []
        for n in (25, 50, 100, 200):
            times = segment_by_threshold(d, n).segmentation.times()
            lo, hi = times[:-1], times[1:]
            widths = hi - lo
            mean = (np.exp(alpha * hi) - np.exp(alpha * lo)) / (alpha * widths)
            mean_sq = (np.exp(2 * alpha * hi) - np.exp(2 * alpha * lo)) / (2 * alpha * widths)
            exact_mse = mean_sq - mean**2
            slope = alpha * np.exp(alpha * (lo + hi) / 2)
            deviation = exact_mse - slope**2 * widths**2 / 12.0
            worst.append(np.max(np.abs(deviation) / widths**2))
        for coarse, fine in zip(worst, worst[1:]):
            assert fine <= 1.1 * coarse
