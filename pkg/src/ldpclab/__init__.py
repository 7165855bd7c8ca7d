"""Thermal stability of classical and quantum LDPC memories.

Exact GF(2) and partition-function tooling, Metropolis dynamics with a
compiled sweep kernel, syndrome decoders, and measurement-free update
circuit costings, plus an experiment harness tying them together.
"""

from . import codes, decoders, dynamics, f2, harness, hgp, mfqec, rng, thermo
from .errors import BudgetError, ConfigError

__version__ = "0.1.0"

__all__ = [
    "codes", "decoders", "dynamics", "f2", "harness", "hgp", "mfqec",
    "rng", "thermo", "BudgetError", "ConfigError", "__version__",
]
