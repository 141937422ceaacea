"""Single bosonic mode coupled to an emitter and a collector reservoir.

Closed-form current, steady state, transport factor, Fokker-Planck
distributions and entropic force, plus numerical oracles that check them.
"""

from .errors import ConvergenceError, DomainError, StabilityError, TruncationError
from .params import SystemParams, ThermalSummary, summarize, thermal_occupation

__version__ = "0.1.0"

__all__ = [
    "ConvergenceError",
    "DomainError",
    "StabilityError",
    "SystemParams",
    "ThermalSummary",
    "TruncationError",
    "summarize",
    "thermal_occupation",
]
