"""Show what each noise model does to a synthetic code image.

Run: python3 demos/03_noise_models.py [outdir]
Writes one PBM per model so the images can be opened in any viewer.
"""

import sys
from pathlib import Path

from hopfield_qr import NoiseSpec
from hopfield_qr.noise import expected_gaussian_flip_fraction, flip_count
from hopfield_qr.persistence import synth_pattern, write_pbm

out = Path(sys.argv[1] if len(sys.argv) > 1 else "noise_demo")
out.mkdir(exist_ok=True)
img = synth_pattern(57, 57, finder_corners=True, seed=1)
write_pbm(img, out / "clean.pbm", "P1")

for text in ("gaussian:0.3", "saltpepper:0.4", "corner-sp:1", "corner-fill:0", "corner-fill:1"):
    spec = NoiseSpec.parse(text)
    noisy = spec.apply(img, seed=2)
    write_pbm(noisy, out / f"{text.replace(':', '_')}.pbm", "P1")
    print(f"{text:>15}: {flip_count(img, noisy) / img.pixels.size:.3f} of pixels flipped")
print(f"gaussian:0.3 expectation {expected_gaussian_flip_fraction(0.3):.4f}")
print(f"images in {out}/")
