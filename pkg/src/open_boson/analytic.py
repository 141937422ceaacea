"""Closed-form dynamics and transport for the two-reservoir bosonic mode.

All time-dependent functions accept a scalar or an array of times and
return a matching float or array.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .errors import DomainError
from .params import SystemParams, summarize, thermal_occupation


def _times(t):
    arr = np.asarray(t, dtype=float)
    if np.any(~(arr >= 0)):
        raise DomainError("time must be non-negative")
    return arr


def _out(value):
    value = np.asarray(value)
    return float(value) if value.ndim == 0 else value


def mean_number(params: SystemParams, n0: float, t):
    """Mean occupation <n>(t) relaxing from ``n0`` toward the steady value."""
    if n0 < 0:
        raise DomainError("initial occupation must be non-negative")
    t = _times(t)
    n_s = summarize(params).n_s
    return _out(n_s + (n0 - n_s) * np.exp(-params.gamma * t))


def mean_number_rate(params: SystemParams, n_now):
    """d<n>/dt = -gamma (n - n_s)."""
    n_now = np.asarray(n_now, dtype=float)
    if np.any(n_now < 0):
        raise DomainError("occupation must be non-negative")
    return _out(-params.gamma * (n_now - summarize(params).n_s))


def steady_current(params: SystemParams) -> float:
    s = summarize(params)
    return params.gamma_e * params.gamma_c / params.gamma * (s.n_e - s.n_c)


def current_from_number(params: SystemParams, n_now):
    """Half the sum of emitter inflow and collector outflow imbalances."""
    s = summarize(params)
    n_now = np.asarray(n_now, dtype=float)
    return _out(0.5 * (params.gamma_e * (s.n_e - n_now) + params.gamma_c * (n_now - s.n_c)))


def initial_current(params: SystemParams, n0: float) -> float:
    return current_from_number(params, n0)


def current(params: SystemParams, n0: float, t):
    return current_from_number(params, mean_number(params, n0, t))


def current_rate(params: SystemParams, i_now):
    return _out(-params.gamma * (np.asarray(i_now, dtype=float) - steady_current(params)))


def flux_balance_residual(params: SystemParams) -> float:
    """Emitter influx minus collector outflux at steady state; zero identically."""
    s = summarize(params)
    return params.gamma_e * (s.n_e - s.n_s) - params.gamma_c * (s.n_s - s.n_c)


def geometric_diagonal(n_bar: float, n):
    """Populations of a thermal state with mean ``n_bar``."""
    n = np.asarray(n)
    if np.any(n < 0) or not np.all(np.equal(np.mod(n, 1), 0)):
        raise DomainError("Fock index must be a non-negative integer")
    if n_bar < 0:
        raise DomainError("mean occupation must be non-negative")
    ratio = n_bar / (n_bar + 1.0)
    return _out(ratio ** n / (n_bar + 1.0))


def steady_diagonal(params: SystemParams, n):
    return geometric_diagonal(summarize(params).n_s, n)


def transport_factor_steady(params: SystemParams) -> float:
    s = summarize(params)
    if s.n_e <= 0:
        raise DomainError("emitter occupation vanishes; transport factor undefined")
    return 1.0 - s.n_c / s.n_e


def transport_factor_t(params: SystemParams, n0: float, t):
    """Time-dependent transport factor, relaxing to the steady value."""
    t = _times(t)
    s = summarize(params)
    eta_s = transport_factor_steady(params)
    coupling = params.gamma_e * params.gamma_c / params.gamma
    transient = initial_current(params, n0) / (coupling * s.n_e) - eta_s
    return _out(eta_s + transient * np.exp(-params.gamma * t))


def carnot_factor(params: SystemParams) -> float:
    return 1.0 - params.temp_c / params.temp_e


class Expansion(NamedTuple):
    value: float
    in_regime: bool


def quantum_correction(params: SystemParams) -> float:
    """Leading high-temperature correction to the Carnot form."""
    eta_c = carnot_factor(params)
    u_c = params.hbar * params.omega_s / (params.k_b * params.temp_c)
    return 0.5 * u_c * eta_c * (1.0 - eta_c)


def transport_expansion(params: SystemParams, order: int = 2) -> Expansion:
    """High-temperature series of the steady transport factor.

    ``in_regime`` is False when either reservoir has hbar*omega_s >= k_B*T,
    where the truncated series is not expected to be accurate.
    """
    if order not in (1, 2):
        raise DomainError("expansion is available to order 1 or 2 only")
    quantum = params.hbar * params.omega_s / params.k_b
    in_regime = quantum / params.temp_c < 1 and quantum / params.temp_e < 1
    value = carnot_factor(params)
    if order == 2:
        value += quantum_correction(params)
    return Expansion(value, in_regime)


@dataclass(frozen=True)
class TransportReport:
    i_0: float
    i_s: float
    eta_s: float
    eta_c: float
    correction: float
    energy_loss: float


def transport_report(params: SystemParams, n0: float = 0.0) -> TransportReport:
    i_s = steady_current(params)
    return TransportReport(
        i_0=initial_current(params, n0),
        i_s=i_s,
        eta_s=transport_factor_steady(params),
        eta_c=carnot_factor(params),
        correction=quantum_correction(params),
        energy_loss=params.hbar * params.omega_s * i_s,
    )


def steady_factor_curve(params: SystemParams, temps_c) -> np.ndarray:
    """Steady transport factor over collector temperatures at fixed emitter temperature."""
    n_e = thermal_occupation(params.omega_s, params.temp_e, params.hbar, params.k_b)
    n_c = thermal_occupation(params.omega_s, np.asarray(temps_c, dtype=float), params.hbar, params.k_b)
    if n_e <= 0:
        raise DomainError("emitter occupation vanishes; transport factor undefined")
    return 1.0 - np.asarray(n_c) / n_e


class LocusPoint(NamedTuple):
    temp_e: float
    temp_c: float | None


def _bisect_decreasing(f, lo: float, hi: float, rel_tol: float) -> float:
    # f(lo) > 0 > f(hi) is assumed by the caller
    while hi - lo > rel_tol * hi:
        mid = 0.5 * (lo + hi)
        if f(mid) > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def half_factor_locus(
    params_base: SystemParams,
    temps_e: Sequence[float],
    target_fraction: float = 0.5,
    rel_tol: float = 1e-10,
) -> list[LocusPoint]:
    """Collector temperature at which the steady factor drops to a fraction of its maximum.

    For each emitter temperature the maximum is the ``T_c -> 0+`` limit of
    the steady factor. Entries without a root in ``(0, T_e)`` have
    ``temp_c=None``.
    """
    if not 0 < target_fraction < 1:
        raise DomainError("target_fraction must lie in (0, 1)")
    points = []
    for temp_e in temps_e:
        if not temp_e > 0:
            raise DomainError("emitter temperatures must be positive")
        p = params_base.replace(temp_e=float(temp_e))
        eps = 1e-9 * temp_e
        lo, hi = eps, temp_e - eps

        def eta(tc):
            return float(steady_factor_curve(p, tc))

        target = target_fraction * eta(lo)

        def f(tc):
            return eta(tc) - target

        if not (f(lo) > 0 and f(hi) < 0):
            points.append(LocusPoint(float(temp_e), None))
            continue
        points.append(LocusPoint(float(temp_e), _bisect_decreasing(f, lo, hi, rel_tol)))
    return points


__all__ = [
    "Expansion",
    "LocusPoint",
    "TransportReport",
    "carnot_factor",
    "current",
    "current_from_number",
    "current_rate",
    "flux_balance_residual",
    "geometric_diagonal",
    "half_factor_locus",
    "initial_current",
    "mean_number",
    "mean_number_rate",
    "quantum_correction",
    "steady_current",
    "steady_diagonal",
    "steady_factor_curve",
    "transport_expansion",
    "transport_factor_steady",
    "transport_factor_t",
    "transport_report",
]
