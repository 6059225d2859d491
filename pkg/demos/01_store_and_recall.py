"""Store a handful of patterns in one network and pull them back out of noise.

Run: python3 demos/01_store_and_recall.py
"""

import numpy as np

from hopfield_qr import TrainingSet, pseudoinverse_rule_weights, run_to_convergence, to_bipolar, vectorize
from hopfield_qr.dynamics import energy
from hopfield_qr.persistence import synth_patterns

rows = cols = 21
images = synth_patterns(20, rows, cols, seed=3)
ts = TrainingSet.from_patterns([to_bipolar(vectorize(img)) for img in images])
w = pseudoinverse_rule_weights(ts)
print(f"{len(ts)} patterns in a {ts.n}-node network")

rng = np.random.default_rng(0)
for i in range(3):
    clean = ts.patterns[i]
    noisy = clean.copy()
    idx = rng.choice(ts.n, size=60, replace=False)
    noisy[idx] *= -1
    out, stats = run_to_convergence(w, noisy, seed=i)
    print(f"pattern {i}: 60 flips, E {energy(w, noisy):9.2f} -> {stats.final_energy:9.2f}, "
          f"{stats.node_updates} updates, recovered={np.array_equal(out, clean)}")
