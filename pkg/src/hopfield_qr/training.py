"""Weight construction for single networks and partitioning across a bank."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import NetworkBank, check_bipolar
from .errors import CapacityError, DimensionError, InputError, ParameterError, TrainingError

RULES = ("paper-pseudoinverse", "projection", "hebbian")


@dataclass(frozen=True)
class TrainingSet:
    """Bipolar patterns (one per row) with a parallel tuple of unique ids."""

    patterns: np.ndarray
    ids: tuple

    def __post_init__(self):
        x = np.asarray(self.patterns)
        if x.ndim != 2:
            raise DimensionError(f"patterns must be a 2-D (p, n) array, got shape {x.shape}")
        x = np.stack([check_bipolar(row) for row in x]) if len(x) else x.astype(np.int8)
        ids = tuple(self.ids)
        if len(ids) != len(x):
            raise DimensionError(f"{len(ids)} ids for {len(x)} patterns")
        if len(set(ids)) != len(ids):
            raise InputError("pattern ids must be unique")
        x.setflags(write=False)
        object.__setattr__(self, "patterns", x)
        object.__setattr__(self, "ids", ids)

    @classmethod
    def from_patterns(cls, patterns: Sequence, ids: Sequence | None = None) -> "TrainingSet":
        lengths = {len(p) for p in patterns}
        if len(lengths) > 1:
            raise DimensionError(f"patterns have differing lengths {sorted(lengths)}")
        if ids is None:
            ids = [f"p{i:04d}" for i in range(len(patterns))]
        return cls(np.asarray(patterns), tuple(ids))

    def __len__(self):
        return len(self.ids)

    @property
    def n(self) -> int:
        return self.patterns.shape[1]

    def subset(self, indices) -> "TrainingSet":
        indices = list(indices)
        return TrainingSet(self.patterns[indices], tuple(self.ids[i] for i in indices))

    def as_dict(self) -> dict:
        return {pid: self.patterns[i] for i, pid in enumerate(self.ids)}


def _nonempty(ts: TrainingSet) -> np.ndarray:
    if len(ts) == 0:
        raise InputError("training set is empty")
    return ts.patterns.astype(np.float64)


def zero_diagonal(w) -> np.ndarray:
    w = np.array(w, dtype=np.float64)
    if w.ndim != 2 or w.shape[0] != w.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {w.shape}")
    np.fill_diagonal(w, 0.0)
    return w


def hebbian_weights(ts: TrainingSet) -> np.ndarray:
    """Unnormalized outer-product sum of the stored patterns, diagonal zeroed."""
    x = _nonempty(ts)
    return zero_diagonal(x.T @ x)


def moore_penrose_pinv(m, rtol: float = 1e-10) -> np.ndarray:
    """Pseudo-inverse via SVD.

    Singular values at or below ``rtol * sigma_max`` are treated as zero.
    """
    m = np.asarray(m, dtype=np.float64)
    if m.ndim != 2:
        raise DimensionError(f"expected a matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise InputError("matrix has non-finite entries")
    if rtol <= 0:
        raise ParameterError("rtol must be positive")
    u, sigma, vt = np.linalg.svd(m, full_matrices=False)
    if sigma.size == 0 or sigma[0] == 0:
        return np.zeros(m.T.shape)
    keep = sigma > rtol * sigma[0]
    return (vt[keep].T / sigma[keep]) @ u[:, keep].T


def _check_load(ts: TrainingSet):
    if len(ts) > ts.n:
        raise CapacityError(f"capacity exceeded: {len(ts)} patterns for one {ts.n}-node network")


def pseudoinverse_rule_weights(ts: TrainingSet, rtol: float = 1e-10) -> np.ndarray:
    """Zero-diagonal Hebbian matrix, pseudo-inverted, diagonal zeroed again."""
    _nonempty(ts)
    _check_load(ts)
    hebb = hebbian_weights(ts)
    if not np.any(hebb):
        raise TrainingError("Hebbian matrix is all zero; nothing to invert")
    w = zero_diagonal(moore_penrose_pinv(hebb, rtol))
    # SVD round-off leaves ~1e-16 asymmetry
    return (w + w.T) / 2


def projection_rule_weights(ts: TrainingSet, zero_diag: bool = True) -> np.ndarray:
    """Projection onto the pattern span, ``X (X^T X)^-1 X^T``.

    Not the three-step rule above; kept as a comparator. With
    ``zero_diag=False`` the raw projector is returned, for which every
    stored pattern is an exact eigenvector with eigenvalue 1.
    """
    x = _nonempty(ts).T
    _check_load(ts)
    if np.linalg.matrix_rank(x) < x.shape[1]:
        raise TrainingError("stored patterns are linearly dependent")
    w = x @ np.linalg.solve(x.T @ x, x.T)
    w = (w + w.T) / 2
    return zero_diagonal(w) if zero_diag else w


_TRAINERS = {
    "paper-pseudoinverse": pseudoinverse_rule_weights,
    "projection": projection_rule_weights,
    "hebbian": hebbian_weights,
}


def partition(p: int, k: int, seed) -> list[np.ndarray]:
    """Shuffle ``range(p)`` and deal it into ``k`` sets whose sizes differ by at most 1."""
    if k < 1:
        raise ParameterError("k must be at least 1")
    order = np.random.default_rng(seed).permutation(p)
    return [np.sort(part) for part in np.array_split(order, k)]


def train_bank(ts: TrainingSet, k: int, rule: str = "paper-pseudoinverse", seed=0,
               rows: int | None = None, cols: int | None = None, workers: int = 1) -> NetworkBank:
    """Randomly split ``ts`` into ``k`` disjoint sets and train one network per set.

    ``rows``/``cols`` default to a square geometry when ``n`` is a perfect square.
    """
    if rule not in _TRAINERS:
        raise ParameterError(f"unknown rule {rule!r}; choose from {', '.join(RULES)}")
    _nonempty(ts)
    if k < 1:
        raise ParameterError("k must be at least 1")
    per_net = -(-len(ts) // k)
    if per_net > ts.n:
        raise CapacityError(f"capacity exceeded: {len(ts)} patterns over {k} networks puts {per_net} "
                            f"in one; limit is n = {ts.n}")
    if rows is None or cols is None:
        side = int(round(ts.n ** 0.5))
        if side * side != ts.n:
            raise DimensionError("geometry must be given when n is not a perfect square")
        rows, cols = side, side
    if rows * cols != ts.n:
        raise DimensionError(f"geometry {rows}x{cols} does not match n = {ts.n}")

    parts = partition(len(ts), k, seed)
    for part in parts:
        if len(part) == 0:
            raise CapacityError(f"k = {k} exceeds the {len(ts)} available patterns")
    subsets = [ts.subset(part) for part in parts]
    trainer = _TRAINERS[rule]
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            weights = list(pool.map(trainer, subsets))
    else:
        weights = [trainer(sub) for sub in subsets]
    assignment = {pid: idx for idx, sub in enumerate(subsets) for pid in sub.ids}
    return NetworkBank(rows, cols, tuple(weights), assignment)
