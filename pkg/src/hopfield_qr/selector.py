"""Pick the network that owns a noisy input, then finish recall on it.

Every network in the bank is probed with the same input for a short run,
and one statistic of the probe picks the winner:

``"delta"`` (default)
    largest energy drop ``E_k - E'_k`` over the probe.
``"energy"``
    lowest energy ``E'_k`` reached by the probe.

The energy drop is bounded by how far above its nearest minimum a network
starts. The owning network starts close to its stored pattern, so on
random-pattern banks the drop often favours the wrong network, while the
energy level itself separates owner from non-owners cleanly. Both are
exposed; ``bench`` measures them side by side.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .core import BinaryImage, NetworkBank, check_bipolar, devectorize, to_binary, to_bipolar, vectorize
from .dynamics import DEFAULT_MAX_UPDATES, RunStats, energy, run_iterations, run_to_convergence
from .errors import DimensionError, InputError, ParameterError

DEFAULT_PROBE_UPDATES = 100
CRITERIA = ("delta", "energy")


@dataclass(frozen=True)
class ProbeRecord:
    index: int
    energy_before: float
    energy_after: float

    @property
    def delta(self) -> float:
        return self.energy_before - self.energy_after


@dataclass(frozen=True)
class SelectionReport:
    records: tuple
    winner: int
    probe_updates: int
    tie_broken: bool
    criterion: str = "delta"
    # set only when a rejection threshold was given and max delta fell below it
    rejected: bool = False

    @property
    def deltas(self) -> np.ndarray:
        return np.array([r.delta for r in self.records])


@dataclass(frozen=True)
class DenoiseReport:
    selection: SelectionReport
    final_stats: RunStats
    output: BinaryImage
    matched_stored_id: str | None = None

    @property
    def winner(self) -> int:
        return self.selection.winner

    @property
    def total_updates(self) -> int:
        return self.selection.probe_updates * len(self.selection.records) + self.final_stats.node_updates


def probe_seed(seed: int, k: int) -> np.random.SeedSequence:
    return np.random.SeedSequence(seed, spawn_key=(0, k))


def final_seed(seed: int) -> np.random.SeedSequence:
    return np.random.SeedSequence(seed, spawn_key=(1,))


def _probe(bank: NetworkBank, s, probe_updates: int, seed: int, workers: int):
    if bank.k == 0:
        raise InputError("bank is empty")
    if probe_updates < 1:
        raise ParameterError("probe_updates must be at least 1")
    s = check_bipolar(s)
    if s.size != bank.n:
        raise DimensionError(f"input has {s.size} entries, bank networks have {bank.n} nodes")

    def one(k):
        w = bank.weights[k]
        state, stats = run_iterations(w, s, probe_updates, probe_seed(seed, k))
        return ProbeRecord(k, energy(w, s), stats.final_energy), state

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            results = list(pool.map(one, range(bank.k)))
    else:
        results = [one(k) for k in range(bank.k)]
    return [r for r, _ in results], [st for _, st in results]


def _choose(records, probe_updates, criterion, reject_below):
    if criterion not in CRITERIA:
        raise ParameterError(f"unknown selection criterion {criterion!r}; choose from {', '.join(CRITERIA)}")
    deltas = np.array([r.delta for r in records])
    if criterion == "delta":
        score = deltas
    else:
        score = -np.array([r.energy_after for r in records])
    top = np.flatnonzero(score == score.max())
    rejected = reject_below is not None and deltas.max() < reject_below
    return SelectionReport(tuple(records), int(top[0]), probe_updates, len(top) > 1, criterion, rejected)


def select_network(bank: NetworkBank, s, probe_updates: int = DEFAULT_PROBE_UPDATES, seed: int = 0,
                   criterion: str = "delta", reject_below: float | None = None,
                   workers: int = 1) -> SelectionReport:
    """Probe every network from state ``s`` and pick the winner by ``criterion``.

    Ties go to the lowest index and set ``tie_broken``.
    """
    records, _ = _probe(bank, s, probe_updates, seed, workers)
    return _choose(records, probe_updates, criterion, reject_below)


def _as_bipolar(pattern) -> np.ndarray:
    if isinstance(pattern, BinaryImage):
        return to_bipolar(vectorize(pattern))
    return check_bipolar(pattern)


def denoise(bank: NetworkBank, img: BinaryImage, probe_updates: int = DEFAULT_PROBE_UPDATES,
            max_updates: int = DEFAULT_MAX_UPDATES, seed: int = 0,
            stored: Mapping | None = None, criterion: str = "delta",
            reject_below: float | None = None, workers: int = 1) -> DenoiseReport:
    """Full recall: select the owning network, then run it to a fixed point.

    The winner continues from its probed state. ``stored`` optionally maps
    pattern ids to their clean images (or bipolar vectors); when given, the
    output is matched against the winner's stored patterns.
    """
    if (img.rows, img.cols) != (bank.rows, bank.cols):
        raise DimensionError(f"image is {img.rows}x{img.cols}, bank expects {bank.rows}x{bank.cols}")
    s = to_bipolar(vectorize(img))
    records, states = _probe(bank, s, probe_updates, seed, workers)
    selection = _choose(records, probe_updates, criterion, reject_below)
    w = bank.weights[selection.winner]
    final, stats = run_to_convergence(w, states[selection.winner], max_updates, final_seed(seed))
    output = devectorize(to_binary(final), bank.rows, bank.cols)

    matched = None
    if stored is not None:
        for pid in bank.members(selection.winner):
            if pid in stored and np.array_equal(_as_bipolar(stored[pid]), final):
                matched = pid
                break
    return DenoiseReport(selection, stats, output, matched)
