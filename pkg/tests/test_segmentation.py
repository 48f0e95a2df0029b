import numpy as np
import pytest
from hypothesis import given, strategies as st

from nusamp.errors import DegenerateSignalError, ResolutionError
from nusamp.segmentation import (
    Segmentation,
    compressor,
    cube_root_mass,
    optimal_density,
    segment_by_expander,
    segment_by_threshold,
    uniform_segmentation,
)
from nusamp.signals import AnalyticSignalSpec, derivative, generate


def exp_derivative(n_grid=2**16, alpha=3.0):
    return derivative(generate(AnalyticSignalSpec("exponential", alpha=alpha), n_grid))


class TestOptimalDensity:
    def test_constant_slope_gives_flat_density(self):
        sig = generate(AnalyticSignalSpec("linear", slope=1.0), 1024)
        dens = optimal_density(derivative(sig))
        assert np.array_equal(dens, np.ones(1024))

    def test_flat_signal_floors_to_uniform(self):
        dens = optimal_density(np.zeros(512))
        assert np.array_equal(dens, np.ones(512))

    def test_exponential_matches_closed_form(self):
        n = 2**16
        dens = optimal_density(exp_derivative(n))
        t = np.arange(n) / n
        # cube-root-optimal density of exp(3t) is 2 exp(2t) / (e^2 - 1)
        expected = 2.0 * np.exp(2.0 * t) / (np.e**2 - 1.0)
        assert abs(dens[0] - 2.0 / (np.e**2 - 1.0)) < 1e-4
        assert np.max(np.abs(dens - expected)) < 1e-3

    def test_integrates_to_one(self):
        dens = optimal_density(exp_derivative(4096))
        assert abs(dens.sum() / dens.size - 1.0) < 1e-12

    def test_amplitude_scale_invariance(self):
        d = exp_derivative(4096)
        assert np.allclose(optimal_density(3.7 * d), optimal_density(d), rtol=1e-13, atol=0)

    def test_requires_positive_floor(self):
        with pytest.raises(ValueError):
            optimal_density(np.ones(16), eps=0.0)


class TestCompressor:
    def test_uniform_density_is_identity(self):
        curve = compressor(np.ones(1024))
        assert np.allclose(curve, np.arange(1025) / 1024, rtol=0, atol=1e-12)

    def test_exponential_midpoint(self):
        n = 2**16
        curve = compressor(optimal_density(exp_derivative(n)))
        expected = (np.e - 1.0) / (np.e**2 - 1.0)  # 0.26894...
        assert abs(curve[n // 2] - expected) < 1e-4

    def test_endpoints_pinned(self):
        curve = compressor(optimal_density(exp_derivative(4096)))
        assert curve[0] == 0.0
        assert curve[-1] == 1.0

    @given(st.lists(st.floats(0.01, 10.0), min_size=4, max_size=200))
    def test_non_decreasing_for_any_density(self, raw):
        dens = np.asarray(raw)
        dens = dens / (dens.sum() / dens.size)
        curve = compressor(dens)
        assert np.all(np.diff(curve) >= 0)


class TestSegmentByExpander:
    def test_identity_compressor_uniform_cuts(self):
        seg = segment_by_expander(np.arange(1001) / 1000, 4)
        assert np.array_equal(seg.boundaries, [0, 250, 500, 750, 1000])

    def test_exponential_two_segments(self):
        n = 2**16
        seg = segment_by_expander(compressor(optimal_density(exp_derivative(n))), 2)
        # closed-form cut point log((e^2 - 1)/2 + 1) / 2
        expected = 0.5 * np.log((np.e**2 - 1.0) / 2.0 + 1.0)
        assert abs(seg.boundaries[1] - expected * n) <= 2

    def test_single_segment(self):
        seg = segment_by_expander(np.arange(101) / 100, 1)
        assert np.array_equal(seg.boundaries, [0, 100])

    def test_too_many_segments_rejected(self):
        with pytest.raises(ResolutionError):
            segment_by_expander(np.arange(11) / 10, 11)


class TestSegmentByThreshold:
    def test_constant_slope_uniform_cuts(self):
        # power-of-two grid: every cell mass is an exact dyadic, cuts are exact
        sig = generate(AnalyticSignalSpec("linear", slope=1.0), 1024)
        result = segment_by_threshold(derivative(sig), 4)
        assert np.array_equal(result.segmentation.boundaries, [0, 256, 512, 768, 1024])

    def test_constant_slope_near_uniform_on_any_grid(self):
        # off a dyadic grid the running sums carry rounding, so cuts may
        # land one cell off the ideal positions
        sig = generate(AnalyticSignalSpec("linear", slope=1.0), 1000)
        result = segment_by_threshold(derivative(sig), 5)
        ideal = np.array([0, 200, 400, 600, 800, 1000])
        assert np.max(np.abs(result.segmentation.boundaries - ideal)) <= 1

    def test_cosine_segments_widest_at_flat_spots(self, cosine_signal):
        result = segment_by_threshold(derivative(cosine_signal), 100)
        widths = result.segmentation.lengths()
        mids = (result.segmentation.boundaries[:-1] + result.segmentation.boundaries[1:]) / 2
        n = cosine_signal.n_grid
        # segments straddling the zero-derivative points t = k/10 are the widest
        near_flat = np.min(np.abs(mids[:, None] / n - np.arange(10)[None, :] / 10), axis=1) < 0.01
        assert widths[near_flat].mean() > 2.0 * widths[~near_flat].mean()

    def test_masses_within_one_cell_of_quota(self, exp_signal):
        d = derivative(exp_signal)
        mass = cube_root_mass(d)
        result = segment_by_threshold(d, 100)
        per_segment = np.add.reduceat(mass, result.segmentation.boundaries[:-1])
        assert np.max(np.abs(per_segment - result.segment_mass)) <= mass.max() + 1e-12

    def test_agrees_with_expander_on_monotone_signal(self, exp_signal):
        d = derivative(exp_signal)
        thresh = segment_by_threshold(d, 50).segmentation
        expand = segment_by_expander(compressor(optimal_density(d)), 50)
        assert thresh.n_segments == expand.n_segments == 50
        assert np.max(np.abs(thresh.boundaries - expand.boundaries)) <= 1

    def test_flat_signal_rejected(self):
        with pytest.raises(DegenerateSignalError):
            segment_by_threshold(np.zeros(256), 4)

    def test_quota_positive(self, exp_signal):
        assert segment_by_threshold(derivative(exp_signal), 10).segment_mass > 0


class TestUniformSegmentation:
    def test_even_split(self):
        assert np.array_equal(uniform_segmentation(1000, 4).boundaries, [0, 250, 500, 750, 1000])

    def test_full_resolution(self):
        assert np.array_equal(uniform_segmentation(16, 16).boundaries, np.arange(17))

    def test_rounding_rule(self):
        assert np.array_equal(uniform_segmentation(10, 3).boundaries, [0, 3, 7, 10])

    def test_over_resolution_rejected(self):
        with pytest.raises(ResolutionError):
            uniform_segmentation(8, 9)


class TestSegmentationType:
    def test_rejects_unsorted(self):
        with pytest.raises(ValueError):
            Segmentation(np.array([0, 5, 5, 10]))

    def test_rejects_missing_origin(self):
        with pytest.raises(ValueError):
            Segmentation(np.array([1, 10]))

    def test_lengths_and_times(self):
        seg = Segmentation(np.array([0, 2, 10]))
        assert np.array_equal(seg.lengths(), [2, 8])
        assert np.allclose(seg.times(), [0.0, 0.2, 1.0])
