import math

import numpy as np
import pytest
from scipy.stats import norm

from hopfield_qr import (
    BinaryImage,
    NoiseSpec,
    ParameterError,
    RectRegion,
    corner_region,
    expected_gaussian_flip_fraction,
    gaussian_noise,
    region_fill,
    region_salt_pepper,
    salt_pepper,
)
from hopfield_qr.noise import flip_count
from hopfield_qr.persistence import synth_pattern

BIG = synth_pattern(400, 400, 0.5, seed=1)  # 160,000 pixels, balanced


def flip_fraction(a, b):
    return flip_count(a, b) / a.pixels.size


class TestGaussian:
    def test_tiny_variance_is_identity(self):
        img = synth_pattern(57, 57, seed=2)
        assert gaussian_noise(img, 1e-6, seed=0) == img

    def test_flip_fraction_matches_normal_tail(self):
        oracle = norm.sf(0.5 / math.sqrt(0.3))
        assert oracle == pytest.approx(0.1807, abs=1e-4)
        assert abs(flip_fraction(BIG, gaussian_noise(BIG, 0.3, seed=4)) - oracle) <= 0.02

    def test_flip_conditions_by_pixel_value(self):
        ones = BinaryImage(np.ones((300, 300)))
        zeros = BinaryImage(np.zeros((300, 300)))
        oracle = norm.sf(0.5 / math.sqrt(0.3))
        assert abs(flip_fraction(ones, gaussian_noise(ones, 0.3, seed=1)) - oracle) <= 0.02
        assert abs(flip_fraction(zeros, gaussian_noise(zeros, 0.3, seed=1)) - oracle) <= 0.02

    def test_seeded(self):
        img = synth_pattern(30, 30, seed=3)
        assert gaussian_noise(img, 0.3, seed=9) == gaussian_noise(img, 0.3, seed=9)

    def test_bad_variance(self):
        with pytest.raises(ParameterError):
            gaussian_noise(BIG, 0.0)


class TestExpectedFlipFraction:
    def test_table_value(self):
        assert expected_gaussian_flip_fraction(0.25) == pytest.approx(0.15865525393145707, abs=1e-7)

    def test_reference_variance(self):
        assert expected_gaussian_flip_fraction(0.3) == pytest.approx(0.18065521426308934, abs=1e-7)

    def test_against_scipy(self):
        for v in (0.01, 0.1, 0.3, 1.0, 4.0, 100.0):
            assert expected_gaussian_flip_fraction(v) == pytest.approx(norm.sf(0.5 / math.sqrt(v)), abs=1e-7)

    def test_large_variance_limit(self):
        assert expected_gaussian_flip_fraction(1e12) == pytest.approx(0.5, abs=1e-6)

    def test_bad_variance(self):
        with pytest.raises(ParameterError):
            expected_gaussian_flip_fraction(-1)


class TestSaltPepper:
    def test_zero_is_identity(self):
        assert salt_pepper(BIG, 0.0, seed=1) == BIG

    def test_full_fill_is_balanced(self):
        out = salt_pepper(BinaryImage(np.ones((400, 400))), 1.0, seed=2)
        assert abs(out.pixels.mean() - 0.5) <= 0.02

    def test_flip_fraction_half_of_d(self):
        assert abs(flip_fraction(BIG, salt_pepper(BIG, 0.4, seed=3)) - 0.2) <= 0.02

    def test_bad_fraction(self):
        with pytest.raises(ParameterError):
            salt_pepper(BIG, 1.5)

    def test_seeds_decorrelate(self):
        a = salt_pepper(BIG, 0.4, seed=1).pixels != BIG.pixels
        b = salt_pepper(BIG, 0.4, seed=2).pixels != BIG.pixels
        both = np.mean(a & b)
        assert both == pytest.approx(0.2 * 0.2, abs=0.01)


class TestRegions:
    def test_default_corner(self):
        r = corner_region(57, 57)
        assert (r.row0, r.col0, r.rows, r.cols) == (0, 0, 35, 35)
        assert r.size == 1225
        assert corner_region(21, 21).size / 441 == pytest.approx(0.37, abs=0.02)

    def test_empty_region(self):
        img = synth_pattern(20, 20, seed=4)
        assert region_salt_pepper(img, RectRegion(3, 3, 0, 5), 1.0, seed=0) == img

    def test_whole_image_equals_global(self):
        img = synth_pattern(25, 25, seed=4)
        assert region_salt_pepper(img, RectRegion(0, 0, 25, 25), 0.7, seed=5) == salt_pepper(img, 0.7, seed=5)

    def test_corner_sp_only_inside(self):
        img = synth_pattern(57, 57, seed=5)
        region = corner_region(57, 57)
        out = region_salt_pepper(img, region, 1.0, seed=6)
        changed = out.pixels != img.pixels
        assert not changed[35:, :].any() and not changed[:, 35:].any()
        assert changed[:35, :35].any()

    def test_corner_fill(self):
        img = BinaryImage(np.zeros((57, 57)))
        out = region_fill(img, corner_region(57, 57), 1)
        assert int(out.pixels.sum()) == 1225
        assert out.pixels[:35, :35].all()

    def test_fill_last_write_wins(self):
        img = synth_pattern(21, 21, seed=7)
        r = RectRegion(2, 3, 5, 6)
        assert region_fill(region_fill(img, r, 0), r, 1) == region_fill(img, r, 1)

    def test_fill_with_same_value(self):
        img = BinaryImage(np.ones((9, 9)))
        assert region_fill(img, RectRegion(1, 1, 4, 4), 1) == img

    def test_out_of_bounds(self):
        img = synth_pattern(10, 10, seed=0)
        with pytest.raises(ParameterError):
            region_fill(img, RectRegion(5, 5, 6, 2), 1)
        with pytest.raises(ParameterError):
            region_salt_pepper(img, RectRegion(0, 0, 11, 1), 0.5)
        with pytest.raises(ParameterError):
            region_fill(img, RectRegion(0, 0, 1, 1), 2)


class TestNoiseSpec:
    @pytest.mark.parametrize("text", ["gaussian:0.3", "saltpepper:0.4", "corner-sp:1", "corner-fill:0", "corner-fill:1"])
    def test_parse_and_preserve_geometry(self, text):
        img = synth_pattern(21, 21, seed=1)
        out = NoiseSpec.parse(text).apply(img, seed=3)
        assert out.shape == img.shape
        assert set(np.unique(out.pixels)) <= {0, 1}

    @pytest.mark.parametrize("text", ["gaussian:0", "saltpepper:2", "corner-fill:0.5", "blur:1", "gaussian", "gaussian:x"])
    def test_rejects(self, text):
        with pytest.raises(ParameterError):
            NoiseSpec.parse(text)

    def test_corner_fill_zero_region(self):
        img = BinaryImage(np.ones((21, 21)))
        out = NoiseSpec.parse("corner-fill:0").apply(img)
        r = corner_region(21, 21)
        assert flip_count(img, out) == r.size
        assert not out.pixels[r.slices].any()
