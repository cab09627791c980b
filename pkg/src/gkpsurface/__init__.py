"""Circuit-level Monte Carlo simulator for the surface-GKP code."""

from .engine import NoiseParams, NoiseState, RoundRecord, run_cycle
from .layout import CodeLayout, build_layout, logical_representatives, validate_layout

__version__ = "0.1.0"

__all__ = [
    "CodeLayout",
    "NoiseParams",
    "NoiseState",
    "RoundRecord",
    "build_layout",
    "logical_representatives",
    "run_cycle",
    "validate_layout",
    "__version__",
]
