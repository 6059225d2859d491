"""Shared value types and the binary/bipolar/vector conversions.

Pixel value 1 is a dark module and 0 a light one. Images are flattened in
row-major order everywhere, persistence included.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .errors import DimensionError, DomainError, InputError

# Relative tolerance used when checking weight-matrix symmetry.
SYMMETRY_RTOL = 1e-9


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class BinaryImage:
    """A rows x cols grid of {0, 1} pixels."""

    pixels: np.ndarray

    def __post_init__(self):
        px = np.asarray(self.pixels)
        if px.ndim != 2 or px.shape[0] < 1 or px.shape[1] < 1:
            raise DimensionError(f"image must be a non-empty 2-D grid, got shape {px.shape}")
        if not np.all((px == 0) | (px == 1)):
            raise DomainError("image pixels must be 0 or 1")
        object.__setattr__(self, "pixels", _frozen(px.astype(np.uint8)))

    @classmethod
    def from_rows(cls, rows) -> "BinaryImage":
        return cls(np.asarray(rows))

    @property
    def rows(self) -> int:
        return self.pixels.shape[0]

    @property
    def cols(self) -> int:
        return self.pixels.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.pixels.shape

    def __eq__(self, other):
        if not isinstance(other, BinaryImage):
            return NotImplemented
        return self.shape == other.shape and np.array_equal(self.pixels, other.pixels)

    def __hash__(self):
        return hash((self.shape, self.pixels.tobytes()))

    def __repr__(self):
        return f"BinaryImage({self.rows}x{self.cols}, dark={int(self.pixels.sum())})"


def vectorize(img: BinaryImage) -> np.ndarray:
    """Flatten an image row-major: ``out[r * cols + c] == pixels[r, c]``."""
    return img.pixels.reshape(-1).copy()


def devectorize(v, rows: int, cols: int) -> BinaryImage:
    v = np.asarray(v)
    if v.ndim != 1 or v.size != rows * cols:
        raise DimensionError(f"vector of length {v.size} cannot form a {rows}x{cols} image")
    return BinaryImage(v.reshape(rows, cols))


def to_bipolar(v) -> np.ndarray:
    """Map a {0, 1} vector to {-1, +1} via ``2v - 1``."""
    v = np.asarray(v)
    if not np.all((v == 0) | (v == 1)):
        raise DomainError("binary vector entries must be 0 or 1")
    return (2 * v.astype(np.int8) - 1).astype(np.int8)


def to_binary(s) -> np.ndarray:
    s = np.asarray(s)
    if not np.all((s == 1) | (s == -1)):
        raise DomainError("bipolar state entries must be +1 or -1")
    return ((s.astype(np.int8) + 1) // 2).astype(np.uint8)


def check_bipolar(s, n: int | None = None) -> np.ndarray:
    s = np.asarray(s)
    if s.ndim != 1:
        raise DimensionError(f"state must be a vector, got shape {s.shape}")
    if n is not None and s.size != n:
        raise DimensionError(f"state has length {s.size}, network has {n} nodes")
    if not np.all((s == 1) | (s == -1)):
        raise DomainError("bipolar state entries must be +1 or -1")
    return s.astype(np.int8)


def check_weights(w) -> np.ndarray:
    """Validate a weight matrix: square, finite, symmetric, zero diagonal."""
    w = np.asarray(w, dtype=np.float64)
    if w.ndim != 2 or w.shape[0] != w.shape[1]:
        raise DimensionError(f"weight matrix must be square, got shape {w.shape}")
    if not np.all(np.isfinite(w)):
        raise DomainError("weight matrix has non-finite entries")
    if np.any(np.diag(w) != 0):
        raise DomainError("weight matrix diagonal must be exactly zero")
    if not np.all(np.abs(w - w.T) <= SYMMETRY_RTOL * np.maximum(1.0, np.abs(w))):
        raise DomainError("weight matrix is not symmetric")
    return w


@dataclass(frozen=True, eq=False)
class NetworkBank:
    """K independently trained networks sharing one image geometry.

    ``assignment`` maps each stored pattern id to the index of the single
    network holding it.
    """

    rows: int
    cols: int
    weights: tuple
    assignment: Mapping[str, int] = field(default_factory=dict)

    def __post_init__(self):
        if not self.weights:
            raise InputError("a bank needs at least one network")
        n = self.rows * self.cols
        ws = []
        for w in self.weights:
            w = np.asarray(w, dtype=np.float64)
            if w.shape != (n, n):
                raise DimensionError(f"network of shape {w.shape} does not match geometry {self.rows}x{self.cols}")
            ws.append(_frozen(w))
        object.__setattr__(self, "weights", tuple(ws))
        k = len(ws)
        for pid, idx in self.assignment.items():
            if not 0 <= idx < k:
                raise InputError(f"pattern {pid!r} assigned to network {idx}, bank has {k}")
        object.__setattr__(self, "assignment", dict(self.assignment))

    @property
    def k(self) -> int:
        return len(self.weights)

    @property
    def n(self) -> int:
        return self.rows * self.cols

    @property
    def nbytes(self) -> int:
        return sum(w.nbytes for w in self.weights)

    def members(self, index: int) -> list[str]:
        return [pid for pid, k in self.assignment.items() if k == index]

    def loads(self) -> list[int]:
        counts = [0] * self.k
        for idx in self.assignment.values():
            counts[idx] += 1
        return counts

    def __eq__(self, other):
        if not isinstance(other, NetworkBank):
            return NotImplemented
        return (
            (self.rows, self.cols, self.k) == (other.rows, other.cols, other.k)
            and self.assignment == other.assignment
            and all(a.tobytes() == b.tobytes() for a, b in zip(self.weights, other.weights))
        )

    __hash__ = None
