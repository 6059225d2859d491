"""Seeded recall experiments over synthetic pattern banks.

A config file holds ``key = value`` lines. A comma-separated value turns the
key into a sweep axis; the cartesian product of all axes gives one
experiment per combination. Everything in the CSV except the optional timing
columns is a pure function of the config.
"""

from __future__ import annotations

import csv
import io
import itertools
import time
from dataclasses import dataclass, fields

import numpy as np

from .core import NetworkBank, to_bipolar, vectorize
from .dynamics import DEFAULT_MAX_UPDATES
from .errors import ConfigError, HopfieldError
from .noise import NoiseSpec, flip_count
from .persistence import synth_patterns
from .selector import CRITERIA, DEFAULT_PROBE_UPDATES, denoise
from .training import RULES, TrainingSet, train_bank

RULE_ALIASES = {"paper": "paper-pseudoinverse", "paper-pseudoinverse": "paper-pseudoinverse",
                "projection": "projection", "hebbian": "hebbian"}


@dataclass(frozen=True)
class ExperimentConfig:
    rows: int
    cols: int
    k: int
    patterns_per_network: int
    noise: NoiseSpec
    trials: int
    seed: int
    rule: str = "paper-pseudoinverse"
    probe_updates: int = DEFAULT_PROBE_UPDATES
    max_updates: int = DEFAULT_MAX_UPDATES
    density: float = 0.5
    finder_corners: bool = False
    criterion: str = "delta"

    def __post_init__(self):
        for name in ("rows", "cols", "k", "patterns_per_network", "probe_updates", "max_updates"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be positive")
        if self.trials < 0:
            raise ConfigError("trials must be non-negative")
        if self.rule not in RULES:
            raise ConfigError(f"unknown rule {self.rule!r}")
        if self.criterion not in CRITERIA:
            raise ConfigError(f"unknown selection criterion {self.criterion!r}")
        if not 0.0 <= self.density <= 1.0:
            raise ConfigError("density must lie in [0, 1]")
        self.noise.validate()

    @property
    def n(self) -> int:
        return self.rows * self.cols


REQUIRED_KEYS = ("rows", "cols", "k", "patterns_per_network", "noise", "trials", "seed")
_FIELD_TYPES = {f.name: f.type for f in fields(ExperimentConfig)}


def _convert(key: str, raw: str):
    if key == "noise":
        return NoiseSpec.parse(raw)
    if key == "rule":
        if raw not in RULE_ALIASES:
            raise ValueError(f"unknown rule {raw!r}")
        return RULE_ALIASES[raw]
    if key == "finder_corners":
        if raw.lower() not in ("0", "1", "true", "false", "yes", "no"):
            raise ValueError(f"expected a boolean, got {raw!r}")
        return raw.lower() in ("1", "true", "yes")
    if key == "criterion":
        return raw
    if key == "density":
        return float(raw)
    return int(raw)


def parse_config(text: str) -> list[ExperimentConfig]:
    """Parse a config into the list of experiments it describes."""
    axes: dict[str, list] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        key, sep, value = stripped.partition("=")
        key = key.strip()
        if not sep or not key:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {line.strip()!r}")
        if key not in _FIELD_TYPES:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in axes:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        try:
            axes[key] = [_convert(key, item.strip()) for item in value.split(",")]
        except (ValueError, HopfieldError) as exc:
            raise ConfigError(f"line {lineno}: bad value for {key!r}: {exc}") from None
    for key in REQUIRED_KEYS:
        if key not in axes:
            raise ConfigError(f"missing required key {key!r}")
    names = list(axes)
    configs = []
    for combo in itertools.product(*(axes[name] for name in names)):
        try:
            configs.append(ExperimentConfig(**dict(zip(names, combo))))
        except HopfieldError as exc:
            raise ConfigError(str(exc)) from None
    return configs


@dataclass(frozen=True)
class TrialRecord:
    trial: int
    pattern_id: str
    true_network: int
    selected_network: int
    exact_match: bool
    hamming: int
    noise_flips: int
    node_updates: int
    converged: bool
    wall_time: float

    @property
    def selection_correct(self) -> bool:
        return self.true_network == self.selected_network


@dataclass(frozen=True)
class BenchReport:
    config: ExperimentConfig
    records: tuple
    bank_memory_bytes: int

    @property
    def single_network_memory_bytes(self) -> int:
        """Weight storage of one network holding the same patterns: ``(k n)^2`` doubles."""
        return (self.config.k * self.config.n) ** 2 * 8

    @property
    def memory_ratio(self) -> float:
        return self.single_network_memory_bytes / self.bank_memory_bytes

    def aggregates(self) -> dict:
        """Summary statistics; rates are None when there are no trials."""
        recs = self.records
        out = {
            "trials": len(recs),
            "selection_accuracy": None,
            "exact_recovery_rate": None,
            "mean_hamming": None,
            "mean_node_updates": None,
            "p50_latency_s": None,
            "p95_latency_s": None,
            "bank_memory_bytes": self.bank_memory_bytes,
            "single_network_memory_bytes": self.single_network_memory_bytes,
        }
        if recs:
            times = np.array([r.wall_time for r in recs])
            out.update(
                selection_accuracy=float(np.mean([r.selection_correct for r in recs])),
                exact_recovery_rate=float(np.mean([r.exact_match for r in recs])),
                mean_hamming=float(np.mean([r.hamming for r in recs])),
                mean_node_updates=float(np.mean([r.node_updates for r in recs])),
                p50_latency_s=float(np.percentile(times, 50)),
                p95_latency_s=float(np.percentile(times, 95)),
            )
        return out


def experiment_bank(cfg: ExperimentConfig):
    """Synthesize the stored patterns of ``cfg`` and train its bank."""
    count = cfg.k * cfg.patterns_per_network
    images = synth_patterns(count, cfg.rows, cfg.cols, cfg.density, cfg.finder_corners,
                            seed=np.random.SeedSequence(cfg.seed, spawn_key=(0,)))
    ts = TrainingSet.from_patterns([to_bipolar(vectorize(img)) for img in images])
    bank = train_bank(ts, cfg.k, cfg.rule, seed=np.random.SeedSequence(cfg.seed, spawn_key=(1,)),
                      rows=cfg.rows, cols=cfg.cols)
    return bank, dict(zip(ts.ids, images))


def run_trial(cfg: ExperimentConfig, bank: NetworkBank, images: dict, trial: int) -> TrialRecord:
    ids = sorted(images)
    rng = np.random.default_rng(np.random.SeedSequence(cfg.seed, spawn_key=(2, trial)))
    pid = ids[rng.integers(len(ids))]
    noise_seed, run_seed = (int(x) for x in rng.integers(0, 2**63, size=2))
    clean = images[pid]
    noisy = cfg.noise.apply(clean, noise_seed)
    start = time.perf_counter()
    rep = denoise(bank, noisy, cfg.probe_updates, cfg.max_updates, run_seed, criterion=cfg.criterion)
    elapsed = time.perf_counter() - start
    hamming = flip_count(rep.output, clean)
    return TrialRecord(
        trial=trial,
        pattern_id=pid,
        true_network=bank.assignment[pid],
        selected_network=rep.winner,
        exact_match=hamming == 0,
        hamming=hamming,
        noise_flips=flip_count(noisy, clean),
        node_updates=rep.total_updates,
        converged=rep.final_stats.converged,
        wall_time=elapsed,
    )


def run_experiment(cfg: ExperimentConfig) -> BenchReport:
    bank, images = experiment_bank(cfg)
    records = tuple(run_trial(cfg, bank, images, t) for t in range(cfg.trials))
    return BenchReport(cfg, records, bank.nbytes)


TRIAL_COLUMNS = ["config", "trial", "pattern_id", "true_network", "selected_network", "selection_correct",
                 "exact_match", "hamming", "noise_flips", "node_updates", "converged"]
AGGREGATE_COLUMNS = ["block", "config", "rows", "cols", "k", "patterns_per_network", "rule", "criterion", "noise",
                     "probe_updates", "max_updates", "trials", "selection_accuracy", "exact_recovery_rate",
                     "mean_hamming", "mean_node_updates", "bank_memory_bytes", "single_network_memory_bytes"]
TIMING_COLUMNS = ["p50_latency_s", "p95_latency_s"]


def _fmt(value):
    if value is None:
        return "NA"
    if isinstance(value, bool):
        return int(value)
    if isinstance(value, float):
        return f"{value:.6g}"
    return value


def format_csv(reports, timing: bool = False) -> str:
    """Trial rows for every report, then one ``aggregate`` row per report.

    Wall-clock columns are only written when ``timing`` is set.
    """
    buf = io.StringIO()
    out = csv.writer(buf, lineterminator="\n")
    out.writerow(TRIAL_COLUMNS + (["wall_time_s"] if timing else []))
    for ci, rep in enumerate(reports):
        for r in rep.records:
            row = [ci, r.trial, r.pattern_id, r.true_network, r.selected_network, r.selection_correct,
                   r.exact_match, r.hamming, r.noise_flips, r.node_updates, r.converged]
            if timing:
                row.append(r.wall_time)
            out.writerow([_fmt(v) for v in row])
    out.writerow([])
    out.writerow(AGGREGATE_COLUMNS + (TIMING_COLUMNS if timing else []))
    for ci, rep in enumerate(reports):
        cfg, agg = rep.config, rep.aggregates()
        row = ["aggregate", ci, cfg.rows, cfg.cols, cfg.k, cfg.patterns_per_network, cfg.rule, cfg.criterion, str(cfg.noise),
               cfg.probe_updates, cfg.max_updates, agg["trials"], agg["selection_accuracy"],
               agg["exact_recovery_rate"], agg["mean_hamming"], agg["mean_node_updates"],
               agg["bank_memory_bytes"], agg["single_network_memory_bytes"]]
        if timing:
            row += [agg[c] for c in TIMING_COLUMNS]
        out.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def merged_network(bank: NetworkBank) -> np.ndarray:
    """Block-diagonal ``k n``-node network equivalent in content to ``bank``.

    Only useful for cost comparisons; it needs ``k^2`` times the bank's memory.
    """
    n, k = bank.n, bank.k
    out = np.zeros((k * n, k * n))
    for i, w in enumerate(bank.weights):
        out[i * n:(i + 1) * n, i * n:(i + 1) * n] = w
    return out

