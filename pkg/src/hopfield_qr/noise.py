"""Seeded corruption models for binary images.

Three families: additive Gaussian noise followed by re-binarization,
imnoise-style salt & pepper, and heavy damage confined to a rectangle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import BinaryImage
from .errors import ParameterError


@dataclass(frozen=True)
class RectRegion:
    row0: int
    col0: int
    rows: int
    cols: int

    def check(self, img: BinaryImage) -> "RectRegion":
        if min(self.row0, self.col0, self.rows, self.cols) < 0:
            raise ParameterError(f"region {self} has negative coordinates")
        if self.row0 + self.rows > img.rows or self.col0 + self.cols > img.cols:
            raise ParameterError(f"region {self} does not fit inside a {img.rows}x{img.cols} image")
        return self

    @property
    def slices(self):
        return (slice(self.row0, self.row0 + self.rows), slice(self.col0, self.col0 + self.cols))

    @property
    def size(self) -> int:
        return self.rows * self.cols


def corner_region(rows: int, cols: int) -> RectRegion:
    """Top-left block covering about 37% of the image.

    Scaled from a 35x35 block on a 57x57 code (1225 pixels).
    """
    return RectRegion(0, 0, round(rows * 35 / 57), round(cols * 35 / 57))


def expected_gaussian_flip_fraction(sigma2: float, threshold: float = 0.5) -> float:
    """Probability that N(0, sigma2) noise pushes a pixel across ``threshold``.

    Equals ``1 - Phi(threshold / sqrt(sigma2))`` for both pixel values.
    """
    if not sigma2 > 0:
        raise ParameterError("variance must be positive")
    z = threshold / math.sqrt(sigma2)
    return 0.5 * math.erfc(z / math.sqrt(2.0))


def gaussian_noise(img: BinaryImage, sigma2: float, seed=None, threshold: float = 0.5) -> BinaryImage:
    """Add independent N(0, sigma2) noise per pixel, then binarize at ``threshold``."""
    if not sigma2 > 0:
        raise ParameterError("variance must be positive")
    rng = np.random.default_rng(seed)
    noisy = img.pixels + rng.normal(0.0, math.sqrt(sigma2), size=img.shape)
    return BinaryImage((noisy >= threshold).astype(np.uint8))


def _salt_pepper_block(block: np.ndarray, d: float, rng) -> np.ndarray:
    hit = rng.random(block.shape) < d
    value = (rng.random(block.shape) < 0.5).astype(np.uint8)
    return np.where(hit, value, block)


def _check_fraction(d):
    if not 0.0 <= d <= 1.0:
        raise ParameterError(f"fraction d must lie in [0, 1], got {d}")


def salt_pepper(img: BinaryImage, d: float, seed=None) -> BinaryImage:
    """Each pixel is hit with probability ``d``; a hit pixel becomes 0 or 1 at random.

    A hit only changes the pixel half the time, so the expected flipped
    fraction is ``d / 2``.
    """
    _check_fraction(d)
    return BinaryImage(_salt_pepper_block(img.pixels, d, np.random.default_rng(seed)))


def region_salt_pepper(img: BinaryImage, region: RectRegion, d: float, seed=None) -> BinaryImage:
    _check_fraction(d)
    region.check(img)
    out = img.pixels.copy()
    out[region.slices] = _salt_pepper_block(out[region.slices], d, np.random.default_rng(seed))
    return BinaryImage(out)


def region_fill(img: BinaryImage, region: RectRegion, value: int) -> BinaryImage:
    if value not in (0, 1):
        raise ParameterError(f"fill value must be 0 or 1, got {value}")
    region.check(img)
    out = img.pixels.copy()
    out[region.slices] = value
    return BinaryImage(out)


NOISE_KINDS = ("gaussian", "saltpepper", "corner-sp", "corner-fill")


@dataclass(frozen=True)
class NoiseSpec:
    """A parsed ``kind:param`` string such as ``gaussian:0.3`` or ``corner-fill:1``."""

    kind: str
    param: float

    @classmethod
    def parse(cls, text: str) -> "NoiseSpec":
        kind, sep, value = text.strip().partition(":")
        if not sep or kind not in NOISE_KINDS:
            raise ParameterError(f"bad noise spec {text!r}; expected one of {', '.join(k + ':<x>' for k in NOISE_KINDS)}")
        try:
            param = float(value)
        except ValueError:
            raise ParameterError(f"bad noise parameter {value!r} in {text!r}") from None
        spec = cls(kind, param)
        spec.validate()
        return spec

    def validate(self):
        if self.kind == "gaussian" and not self.param > 0:
            raise ParameterError("gaussian variance must be positive")
        if self.kind in ("saltpepper", "corner-sp"):
            _check_fraction(self.param)
        if self.kind == "corner-fill" and self.param not in (0.0, 1.0):
            raise ParameterError("corner-fill value must be 0 or 1")

    def __str__(self):
        if self.kind == "corner-fill":
            return f"{self.kind}:{int(self.param)}"
        return f"{self.kind}:{self.param:g}"

    def apply(self, img: BinaryImage, seed=None) -> BinaryImage:
        if self.kind == "gaussian":
            return gaussian_noise(img, self.param, seed)
        if self.kind == "saltpepper":
            return salt_pepper(img, self.param, seed)
        region = corner_region(img.rows, img.cols)
        if self.kind == "corner-sp":
            return region_salt_pepper(img, region, self.param, seed)
        return region_fill(img, region, int(self.param))


def flip_count(a: BinaryImage, b: BinaryImage) -> int:
    return int(np.count_nonzero(a.pixels != b.pixels))
