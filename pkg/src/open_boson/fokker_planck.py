"""Phase-space picture: Gaussian solutions of the Fokker-Planck equation, a
finite-difference solver for the 1-D equation, the steady P-distribution and
the entropic force.

In the dimensionless quadrature x = Re(alpha) the equation reads

    dX/dt = (gamma/2) d/dx (x X) + D d^2X/dx^2,   D = (gamma_e n_e + gamma_c n_c)/4,

whose propagator from a point x0 is a Gaussian with mean x0 exp(-gamma t/2)
and variance n_s (1 - exp(-gamma t)) / 2.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numpy as np

from .csvio import write_csv
from .errors import DomainError, StabilityError
from .params import SystemParams, summarize

CFL_LIMIT = 0.4
MASS_TOL = 1e-6
NARROW_FRACTION = 1e-3
HALF_WIDTH_SIGMAS = 8.0


def _positive_time(t):
    t = np.asarray(t, dtype=float)
    if np.any(~(t > 0)):
        raise DomainError("analytic distributions need t > 0 (t = 0 is a delta function)")
    return t


def _out(value):
    value = np.asarray(value)
    return float(value) if value.ndim == 0 else value


def _gauss(x, center, variance):
    return np.exp(-((x - center) ** 2) / (2.0 * variance)) / np.sqrt(2.0 * np.pi * variance)


@dataclass(frozen=True)
class GaussianState:
    center: float
    variance_param: float
    norm_check: float


def propagated_moments(params: SystemParams, x0: float, t, initial_variance: float = 0.0):
    """Mean and variance at time ``t`` of a Gaussian started at ``x0``."""
    n_s = summarize(params).n_s
    decay = np.exp(-params.gamma * np.asarray(t, dtype=float))
    center = x0 * np.sqrt(decay)
    variance = initial_variance * decay + 0.5 * n_s * (1.0 - decay)
    return center, variance


def gaussian_state(params: SystemParams, x0: float, t: float) -> GaussianState:
    t = float(_positive_time(t))
    center, variance = propagated_moments(params, x0, t)
    sigma = math.sqrt(variance)
    xs = np.linspace(center - 12 * sigma, center + 12 * sigma, 4001)
    norm = float(np.trapezoid(_gauss(xs, center, variance), xs))
    return GaussianState(float(center), float(variance), norm)


def gaussian_x(params: SystemParams, x0: float, x, t):
    """Point-source solution X(x, t | x0, 0)."""
    t = _positive_time(t)
    n_s = summarize(params).n_s
    if n_s <= 0:
        raise DomainError("steady occupation vanishes; distribution is a delta function")
    spread = n_s * (1.0 - np.exp(-params.gamma * t))
    center = x0 * np.exp(-0.5 * params.gamma * t)
    x = np.asarray(x, dtype=float)
    return _out(np.exp(-((x - center) ** 2) / spread) / np.sqrt(np.pi * spread))


# the imaginary quadrature obeys the identical equation
gaussian_y = gaussian_x


def gaussian_from(params: SystemParams, x0: float, x, t, initial_variance: float):
    """Exact solution started from a Gaussian of variance ``initial_variance`` at ``x0``."""
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise DomainError("time must be non-negative")
    if initial_variance <= 0:
        return gaussian_x(params, x0, x, t)
    center, variance = propagated_moments(params, x0, t, initial_variance)
    return _out(_gauss(np.asarray(x, dtype=float), center, variance))


def p_position(params: SystemParams, q0: float, q, t):
    """Position density, normalized over q.

    Uses q = x * sqrt(2 hbar / (m omega_s)); the Jacobian of that map sets
    the prefactor.
    """
    t = _positive_time(t)
    scale = math.sqrt(2.0 * params.hbar / (params.mass * params.omega_s))
    return _out(gaussian_x(params, q0 / scale, np.asarray(q, dtype=float) / scale, t) / scale)


def p_momentum(params: SystemParams, p0: float, p, t):
    t = _positive_time(t)
    scale = math.sqrt(2.0 * params.hbar * params.mass * params.omega_s)
    return _out(gaussian_x(params, p0 / scale, np.asarray(p, dtype=float) / scale, t) / scale)


def steady_p(params: SystemParams, alpha_sq):
    """Steady Glauber-Sudarshan P-distribution as a function of |alpha|^2."""
    n_s = summarize(params).n_s
    if n_s <= 0:
        raise DomainError("steady occupation vanishes; P-distribution is a delta function")
    alpha_sq = np.asarray(alpha_sq, dtype=float)
    if np.any(alpha_sq < 0):
        raise DomainError("|alpha|^2 must be non-negative")
    return _out(np.exp(-alpha_sq / n_s) / (math.pi * n_s))


def entropic_force(params: SystemParams, q, q0: float, t):
    """k_B T d ln P(q, t)/dq, with T the damping-weighted reservoir temperature."""
    t = _positive_time(t)
    s = summarize(params)
    stiffness = params.mass * params.omega_s * params.k_b * s.temp_sys / (params.hbar * s.n_s)
    decay = np.exp(-params.gamma * t)
    return _out(-stiffness * (np.asarray(q, dtype=float) - q0 * np.sqrt(decay)) / (1.0 - decay))


def steady_force_constant(params: SystemParams) -> float:
    s = summarize(params)
    return params.mass * params.omega_s * params.k_b * s.temp_sys / (params.hbar * s.n_s)


def high_temperature(params: SystemParams) -> bool:
    """True when k_B T >> hbar omega_s holds for both reservoirs (ratio > 10)."""
    quantum = params.hbar * params.omega_s / params.k_b
    return min(params.temp_e, params.temp_c) > 10.0 * quantum


def hooke_limit_check(params: SystemParams, scales) -> list[float]:
    """Relative deviation of the steady force constant from m omega_s^2 per temperature scale."""
    target = params.mass * params.omega_s ** 2
    out = []
    for lam in scales:
        if lam < 1:
            raise DomainError("temperature scale factors must be >= 1")
        out.append(abs(steady_force_constant(params.scaled_temperatures(lam)) - target) / target)
    return out


@dataclass
class GridDistribution:
    x_min: float
    x_max: float
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.ndim != 1 or self.values.size < 3:
            raise DomainError("grid needs at least 3 points")
        if not self.x_max > self.x_min:
            raise DomainError("grid bounds must satisfy x_min < x_max")

    @property
    def n_points(self) -> int:
        return self.values.size

    @property
    def x(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.n_points)

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / (self.n_points - 1)

    def mass(self) -> float:
        return float(np.trapezoid(self.values, dx=self.dx))

    def l1_distance(self, other) -> float:
        """Trapezoid L1 distance to another array of grid values."""
        return float(np.trapezoid(np.abs(self.values - np.asarray(other)), dx=self.dx))

    def to_csv(self, path: str | os.PathLike, t: float, params: SystemParams) -> None:
        rows = zip(self.x, np.maximum(self.values, 0.0))
        write_csv(path, ("x", "value"), rows, comments=(f"t={t:.17g}", f"params={params.digest()}"))


def auto_grid(params: SystemParams, x0: float, n_points: int) -> tuple[float, float]:
    half = abs(x0) + HALF_WIDTH_SIGMAS * math.sqrt(0.5 * summarize(params).n_s)
    return -half, half


def narrow_initial(params: SystemParams, x0: float, n_points: int = 2048,
                   variance: float | None = None) -> GridDistribution:
    """Grid stand-in for a point source at ``x0``: a Gaussian of variance 1e-3 n_s."""
    if variance is None:
        variance = NARROW_FRACTION * summarize(params).n_s
    lo, hi = auto_grid(params, x0, n_points)
    if (hi - lo) / (n_points - 1) > 0.5 * math.sqrt(variance):
        raise DomainError(f"{n_points} points cannot resolve an initial width of {math.sqrt(variance):.3g}; "
                          "use a finer grid")
    x = np.linspace(lo, hi, n_points)
    return GridDistribution(lo, hi, _gauss(x, x0, variance))


def diffusion_coefficient(params: SystemParams) -> float:
    s = summarize(params)
    return (params.gamma_e * s.n_e + params.gamma_c * s.n_c) / 4.0


def max_stable_dt(params: SystemParams, dx: float) -> float:
    return CFL_LIMIT * dx * dx / diffusion_coefficient(params)


def solve_fp(params: SystemParams, initial: GridDistribution, t_end: float,
             dt: float | None = None) -> GridDistribution:
    """Explicit conservative finite-difference solution of the 1-D equation.

    Drift uses the centred flux difference of ``x X``, diffusion the
    three-point Laplacian; both ends are held at zero. ``dt`` defaults to
    the CFL limit and is shortened so that whole steps land on ``t_end``.
    """
    if t_end < 0:
        raise DomainError("t_end must be non-negative")
    dx = initial.dx
    diff = diffusion_coefficient(params)
    limit = max_stable_dt(params, dx)
    if dt is None:
        dt = limit
    if not dt > 0:
        raise DomainError("dt must be positive")
    if diff * dt / dx ** 2 > CFL_LIMIT * (1 + 1e-12):
        raise StabilityError(f"D*dt/dx^2 = {diff * dt / dx ** 2:.3g} exceeds {CFL_LIMIT}", limit)
    if abs(initial.mass() - 1.0) > MASS_TOL:
        raise DomainError(f"initial distribution has mass {initial.mass():.9f}, expected 1")

    n_steps = math.ceil(t_end / dt - 1e-9) if t_end > 0 else 0
    x = initial.x
    X = initial.values.copy()
    X[0] = X[-1] = 0.0
    if n_steps:
        dt = t_end / n_steps
        drift = 0.5 * params.gamma * dt / (2.0 * dx)
        diffuse = diff * dt / dx ** 2
        for _ in range(n_steps):
            flux = x * X
            X[1:-1] += drift * (flux[2:] - flux[:-2]) + diffuse * (X[2:] - 2.0 * X[1:-1] + X[:-2])
    return GridDistribution(initial.x_min, initial.x_max, X)
