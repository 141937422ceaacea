"""Physical parameters of a single bosonic mode between two thermal reservoirs.

Natural units (hbar = k_B = m = omega_s = 1) are the defaults, but every
formula keeps the constants explicit so SI inputs work unchanged.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import math
import numbers
from dataclasses import dataclass
from typing import Any, Mapping

import numpy as np

from .errors import DomainError

# exp(x) overflows a double just above x = 709.78
_EXP_CUTOFF = 700.0


@dataclass(frozen=True)
class SystemParams:
    """Immutable, validated inputs shared by every module.

    The damping rates and the frequency shift are taken as given; they are
    never derived from reservoir spectral densities here.
    """

    omega_s: float = 1.0
    delta: float = 0.0
    gamma_e: float = 1.0
    gamma_c: float = 1.0
    temp_e: float = 2.0
    temp_c: float = 1.0
    mass: float = 1.0
    hbar: float = 1.0
    k_b: float = 1.0

    def __post_init__(self):
        for name in ("omega_s", "gamma_e", "gamma_c", "temp_e", "temp_c", "mass", "hbar", "k_b"):
            value = getattr(self, name)
            if not (isinstance(value, numbers.Real) and math.isfinite(value) and value > 0):
                raise DomainError(f"{name} must be a finite positive number, got {value!r}")
        if not math.isfinite(self.delta):
            raise DomainError(f"delta must be finite, got {self.delta!r}")

    @property
    def omega(self) -> float:
        """Shifted frequency entering the coherent part of the dynamics."""
        return self.omega_s + self.delta

    @property
    def gamma(self) -> float:
        return self.gamma_e + self.gamma_c

    def replace(self, **changes) -> "SystemParams":
        return dataclasses.replace(self, **changes)

    def scaled_temperatures(self, factor: float) -> "SystemParams":
        """Both reservoir temperatures multiplied by ``factor``."""
        return self.replace(temp_e=self.temp_e * factor, temp_c=self.temp_c * factor)

    def to_dict(self) -> dict[str, float]:
        return dataclasses.asdict(self)

    @classmethod
    def from_mapping(cls, data: Mapping[str, Any]) -> "SystemParams":
        """Build from a flat key/value mapping; unknown keys are rejected."""
        names = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - names
        if unknown:
            raise DomainError(f"unknown parameter(s): {', '.join(sorted(unknown))}")
        try:
            values = {k: float(v) for k, v in data.items()}
        except (TypeError, ValueError) as exc:
            raise DomainError(f"parameter values must be numeric: {exc}") from None
        return cls(**values)

    def digest(self) -> str:
        """Short stable hash used to tag exported data."""
        blob = json.dumps(self.to_dict(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:12]


@dataclass(frozen=True)
class ThermalSummary:
    n_e: float
    n_c: float
    n_s: float
    temp_sys: float
    gamma_total: float


def thermal_occupation(omega, temp, hbar: float = 1.0, k_b: float = 1.0):
    """Bose-Einstein occupation ``1 / (exp(hbar*omega / (k_b*temp)) - 1)``.

    Accepts scalars or arrays; returns a float for scalar input. Arguments
    so cold that the exponent overflows give exactly 0.
    """
    omega_arr = np.asarray(omega, dtype=float)
    temp_arr = np.asarray(temp, dtype=float)
    if np.any(~(omega_arr > 0)) or np.any(~(temp_arr > 0)):
        raise DomainError("thermal_occupation needs omega > 0 and temp > 0")
    x = hbar * omega_arr / (k_b * temp_arr)
    with np.errstate(over="ignore"):
        occ = np.where(x > _EXP_CUTOFF, 0.0, 1.0 / np.expm1(np.minimum(x, _EXP_CUTOFF)))
    if occ.ndim == 0:
        return float(occ)
    return occ


def summarize(params: SystemParams) -> ThermalSummary:
    n_e = thermal_occupation(params.omega_s, params.temp_e, params.hbar, params.k_b)
    n_c = thermal_occupation(params.omega_s, params.temp_c, params.hbar, params.k_b)
    g = params.gamma
    n_s = (params.gamma_e * n_e + params.gamma_c * n_c) / g
    # rounding can push a weighted mean one ulp outside its endpoints
    n_s = min(max(n_s, min(n_e, n_c)), max(n_e, n_c))
    temp_sys = (params.gamma_e * params.temp_e + params.gamma_c * params.temp_c) / g
    return ThermalSummary(n_e=n_e, n_c=n_c, n_s=n_s, temp_sys=temp_sys, gamma_total=g)
