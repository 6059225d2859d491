"""Train a bank, save it, load it back and check the bytes.

Run: python3 demos/04_bank_files.py
"""

import tempfile
from pathlib import Path

from hopfield_qr import TrainingSet, load_bank, save_bank, to_bipolar, train_bank, vectorize
from hopfield_qr.persistence import bank_file_size, synth_patterns

images = synth_patterns(90, 21, 21, seed=4)
ts = TrainingSet.from_patterns([to_bipolar(vectorize(img)) for img in images])
bank = train_bank(ts, k=3, seed=4)
print(f"loads per network: {bank.loads()}")

with tempfile.TemporaryDirectory() as tmp:
    path = Path(tmp) / "bank.hpbk"
    save_bank(bank, path)
    size = path.stat().st_size
    print(f"{path.name}: {size} bytes (predicted {bank_file_size(bank)}), weights {bank.nbytes}")
    print(f"round trip equal: {load_bank(path) == bank}")
    raw = bytearray(path.read_bytes())
    raw[100] ^= 1
    path.write_bytes(raw)
    try:
        load_bank(path)
    except Exception as exc:  # demo: show the error type
        print(f"after flipping one bit: {type(exc).__name__}: {exc}")
