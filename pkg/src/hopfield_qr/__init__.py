"""Parallel Hopfield-network associative memory for denoising binary codes.

Patterns are split across K independent networks. A noisy input is probed
briefly in every network, the network with the largest energy drop is
selected, and only that one is run to convergence.
"""

from .core import BinaryImage, NetworkBank, devectorize, to_binary, to_bipolar, vectorize
from .dynamics import RunStats, energy, run_iterations, run_to_convergence, update_node
from .errors import (
    CapacityError,
    ConfigError,
    CorruptionError,
    DimensionError,
    DomainError,
    FormatError,
    HopfieldError,
    InputError,
    ParameterError,
    ParseError,
    TrainingError,
)
from .noise import (
    NoiseSpec,
    RectRegion,
    corner_region,
    expected_gaussian_flip_fraction,
    gaussian_noise,
    region_fill,
    region_salt_pepper,
    salt_pepper,
)
from .persistence import load_bank, read_pbm, save_bank, synth_pattern, synth_patterns, write_pbm
from .selector import DenoiseReport, SelectionReport, denoise, select_network
from .training import (
    TrainingSet,
    hebbian_weights,
    moore_penrose_pinv,
    projection_rule_weights,
    pseudoinverse_rule_weights,
    train_bank,
    zero_diagonal,
)

__version__ = "0.1.0"
