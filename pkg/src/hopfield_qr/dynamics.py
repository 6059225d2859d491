"""Energy and asynchronous sign-update dynamics for one network.

One "iteration" here is a single-node update. Nodes are visited in sweeps,
each sweep a fresh seeded permutation of all ``n`` nodes, so any full sweep
touches every node exactly once. A node whose local field is exactly zero
keeps its current value.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import check_bipolar
from .errors import DimensionError, ParameterError

DEFAULT_MAX_UPDATES = 30_000
ENERGY_SLACK = 1e-9


@dataclass(frozen=True)
class RunStats:
    node_updates: int
    flips: int
    initial_energy: float
    final_energy: float
    converged: bool
    # one multiply-add per weight read: n per node update
    multiply_adds: int = 0


def _weights(w) -> np.ndarray:
    w = np.asarray(w, dtype=np.float64)
    if w.ndim != 2 or w.shape[0] != w.shape[1]:
        raise DimensionError(f"weight matrix must be square, got shape {w.shape}")
    return w


def energy(w, s) -> float:
    """``-1/2 * sum_ij w[i, j] s[i] s[j]``."""
    w = _weights(w)
    s = check_bipolar(s, w.shape[0]).astype(np.float64)
    return float(-0.5 * (s @ w @ s))


def local_field(w, s, i: int) -> float:
    return float(np.asarray(w)[i] @ np.asarray(s, dtype=np.float64))


def update_node(w, s, i: int):
    """Set node ``i`` to the sign of its local field; returns ``(s', flipped)``."""
    w = _weights(w)
    s = check_bipolar(s, w.shape[0])
    n = w.shape[0]
    if not 0 <= i < n:
        raise DimensionError(f"node index {i} out of range for {n} nodes")
    h = local_field(w, s, i)
    out = s.copy()
    if h > 0:
        out[i] = 1
    elif h < 0:
        out[i] = -1
    return out, bool(out[i] != s[i])


class _Sweeper:
    """Runs updates in seeded permutation sweeps over a private float state."""

    def __init__(self, w, s0, seed, check_energy=False):
        self.w = _weights(w)
        self.n = self.w.shape[0]
        self.s = check_bipolar(s0, self.n).astype(np.float64)
        self.rng = np.random.default_rng(seed)
        self.check_energy = check_energy
        self.initial_energy = float(-0.5 * (self.s @ self.w @ self.s))
        self._energy = self.initial_energy
        self.updates = 0
        self.flips = 0

    def _check(self):
        e = float(-0.5 * (self.s @ self.w @ self.s))
        if e > self._energy + ENERGY_SLACK:
            raise AssertionError(f"energy rose from {self._energy!r} to {e!r}")
        self._energy = e

    def sweep(self, budget: int) -> tuple[int, int]:
        """Update up to ``budget`` nodes of one fresh permutation; returns (updates, flips)."""
        w, s = self.w, self.s
        order = self.rng.permutation(self.n)[:budget]
        flips = 0
        for i in order:
            h = w[i] @ s
            if h > 0.0:
                if s[i] < 0:
                    s[i] = 1.0
                    flips += 1
            elif h < 0.0:
                if s[i] > 0:
                    s[i] = -1.0
                    flips += 1
            if self.check_energy:
                self._check()
        self.updates += len(order)
        self.flips += flips
        return len(order), flips

    def result(self, converged: bool):
        state = self.s.astype(np.int8)
        stats = RunStats(
            node_updates=self.updates,
            flips=self.flips,
            initial_energy=self.initial_energy,
            final_energy=float(-0.5 * (self.s @ self.w @ self.s)),
            converged=converged,
            multiply_adds=self.updates * self.n,
        )
        return state, stats


def run_iterations(w, s0, t: int, seed=None, check_energy: bool = False):
    """Perform exactly ``t`` asynchronous single-node updates.

    Returns ``(state, RunStats)``. ``converged`` reports whether the last
    complete sweep, if any, flipped nothing.
    """
    if t < 0:
        raise ParameterError("t must be non-negative")
    run = _Sweeper(w, s0, seed, check_energy)
    converged = False
    remaining = t
    while remaining > 0:
        done, flips = run.sweep(remaining)
        remaining -= done
        if done == run.n:
            converged = flips == 0
    return run.result(converged)


def run_to_convergence(w, s0, max_updates: int = DEFAULT_MAX_UPDATES, seed=None,
                       check_energy: bool = False):
    """Sweep until a full sweep flips nothing or ``max_updates`` is spent."""
    run = _Sweeper(w, s0, seed, check_energy)
    if max_updates < run.n:
        raise ParameterError(f"max_updates ({max_updates}) must cover at least one sweep of {run.n} nodes")
    remaining = max_updates
    while remaining > 0:
        done, flips = run.sweep(remaining)
        remaining -= done
        if done == run.n and flips == 0:
            return run.result(True)
    return run.result(False)
