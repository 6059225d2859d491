"""Probe every network in a bank and compare the two winner statistics.

Run: python3 demos/02_network_selection.py

The owning network starts the probe near its own minimum, so its energy
drops little. The drop picks the owner about as often as chance; the probed
energy level picks it nearly always.
"""

import numpy as np

from hopfield_qr import NoiseSpec, select_network, to_bipolar, vectorize
from hopfield_qr.bench import ExperimentConfig, experiment_bank

cfg = ExperimentConfig(21, 21, 4, 30, NoiseSpec.parse("gaussian:0.3"), 0, 2024)
bank, images = experiment_bank(cfg)
ids = sorted(images)

pid = ids[17]
noisy = cfg.noise.apply(images[pid], seed=5)
rep = select_network(bank, to_bipolar(vectorize(noisy)), seed=1)
print(f"input {pid}, owned by network {bank.assignment[pid]}")
print(f"{'net':>3} {'E_k':>10} {'E_k probed':>11} {'drop':>8}")
for r in rep.records:
    print(f"{r.index:>3} {r.energy_before:10.2f} {r.energy_after:11.2f} {r.delta:8.2f}")

hits = {"delta": 0, "energy": 0}
trials = 100
rng = np.random.default_rng(9)
for t in range(trials):
    pid = ids[rng.integers(len(ids))]
    s = to_bipolar(vectorize(cfg.noise.apply(images[pid], seed=t)))
    for crit in hits:
        hits[crit] += select_network(bank, s, seed=t, criterion=crit).winner == bank.assignment[pid]
for crit, h in hits.items():
    print(f"{crit:>6}: owner picked {h}/{trials}")
