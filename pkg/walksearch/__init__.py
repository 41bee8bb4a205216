"""
Staggered-fermion quantum walk search on hypercubic lattices
"""

from .lattice import LatticeConfig, Parity
from .evolve import MarkedSet, StopRule, WalkParams, run_search

__version__ = "1.0.0"

__all__ = [
    "LatticeConfig",
    "Parity",
    "MarkedSet",
    "StopRule",
    "WalkParams",
    "run_search",
    "__version__",
]
