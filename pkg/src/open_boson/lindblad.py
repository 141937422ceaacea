"""Numerical oracle: integrate the thermal master equation in a truncated Fock space.

The generator is

    d rho/dt = -i w [a^+a, rho] + gamma (n_th + 1) D[a] rho + gamma n_th D[a^+] rho,

with D[L] rho = L rho L^+ - {L^+ L, rho}/2, gamma = gamma_e + gamma_c and
gamma n_th = gamma_e n_e + gamma_c n_c. Expanding D[a^+] reproduces the
two-reservoir equation term for term in infinite dimensions; the symmetric
anticommutator keeps the truncated generator hermiticity preserving.
"""

from __future__ import annotations

import math
import os
import warnings
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from . import analytic
from .csvio import write_csv
from .errors import ConvergenceError, DomainError, StabilityError, TruncationError
from .fock import TAIL_TOLERANCE, DensityMatrix, LadderOps, build_ops, required_dim, tail_mass
from .params import SystemParams, summarize

# RK4 is stable on the closed left half-disc of radius 2.5; keep a margin
_RK4_RADIUS = 2.0


class TruncationWarning(UserWarning):
    pass


def _pump_rate(params: SystemParams) -> float:
    s = summarize(params)
    return params.gamma_e * s.n_e + params.gamma_c * s.n_c


def _matrix(rho) -> np.ndarray:
    return rho.rho if isinstance(rho, DensityMatrix) else np.asarray(rho)


def rhs(params: SystemParams, ops: LadderOps, rho) -> np.ndarray:
    """Generator applied to ``rho``, written with explicit operator products."""
    r = _matrix(rho)
    if r.shape != ops.annihilate.shape:
        raise DomainError(f"state shape {r.shape} does not match operators {ops.annihilate.shape}")
    a, ad, num = ops.annihilate, ops.create, ops.number
    aad = a @ ad
    pump = _pump_rate(params)
    a_rho_ad = a @ r @ ad
    ad_rho_a = ad @ r @ a
    out = -1j * params.omega * (num @ r - r @ num)
    out -= 0.5 * params.gamma * (num @ r + r @ num - 2.0 * a_rho_ad)
    out += pump * (a_rho_ad + ad_rho_a - 0.5 * (r @ aad + aad @ r) - 0.5 * (num @ r + r @ num))
    return out


class Generator:
    """Elementwise form of :func:`rhs`, O(dim^2) per call.

    Because ``a`` has a single superdiagonal, ``a rho a^+`` and ``a^+ rho a``
    are diagonal shifts of ``rho`` weighted by sqrt(i) sqrt(j).
    """

    def __init__(self, params: SystemParams, dim: int):
        self.dim = dim
        self.pump = _pump_rate(params)
        g, w, pump = params.gamma, params.omega, self.pump
        n = np.arange(dim, dtype=float)
        m = n + 1.0
        m[-1] = 0.0  # (a a^+) on the top level of the truncated basis
        self.diag = (-1j * w * (n[:, None] - n[None, :])
                     - 0.5 * (g + pump) * (n[:, None] + n[None, :])
                     - 0.5 * pump * (m[:, None] + m[None, :]))
        s = np.sqrt(n)
        # (a rho a^+)[i, j] = s[i+1] s[j+1] rho[i+1, j+1]
        self.lower_w = (g + pump) * np.outer(s[1:], s[1:])
        # (a^+ rho a)[i, j] = s[i] s[j] rho[i-1, j-1]
        self.raise_w = pump * np.outer(s[1:], s[1:])
        self.bound = abs(w) * (dim - 1) + 2.0 * (g + 2.0 * pump) * dim

    def __call__(self, r: np.ndarray) -> np.ndarray:
        out = self.diag * r
        out[:-1, :-1] += self.lower_w * r[1:, 1:]
        out[1:, 1:] += self.raise_w * r[:-1, :-1]
        return out


def default_dt(params: SystemParams) -> float:
    return 0.01 / max(params.gamma, abs(params.omega))


def _check_dt(params: SystemParams, dt: float) -> None:
    if not dt > 0:
        raise DomainError("dt must be positive")
    if dt * params.gamma >= 0.1 or dt * abs(params.omega) >= 0.1:
        raise StabilityError(f"dt={dt:g} too coarse for gamma={params.gamma:g}, omega={params.omega:g}",
                             default_dt(params))


def substeps_for(gen: Generator, dt: float) -> int:
    """RK4 substeps per ``dt`` keeping the truncated spectrum inside the stability region."""
    return max(1, math.ceil(dt * gen.bound / _RK4_RADIUS))


def _rk4(gen: Generator, r: np.ndarray, h: float) -> np.ndarray:
    k1 = gen(r)
    k2 = gen(r + 0.5 * h * k1)
    k3 = gen(r + 0.5 * h * k2)
    k4 = gen(r + h * k3)
    return r + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


@dataclass
class Trajectory:
    times: list[float]
    mean_n: list[float]
    current: list[float]
    trace_defect: list[float]
    min_eig: list[float]
    hermiticity: list[float] = field(default_factory=list)
    dim: int = 0
    dt: float = 0.0
    substeps: int = 1
    final: DensityMatrix | None = None

    CSV_HEADER = ("t", "mean_n", "current", "trace_defect", "min_eig")

    def rows(self):
        return zip(self.times, self.mean_n, self.current, self.trace_defect, self.min_eig)

    def to_csv(self, path: str | os.PathLike) -> None:
        write_csv(path, self.CSV_HEADER, self.rows())


def evolve(
    params: SystemParams,
    rho0: DensityMatrix,
    t_end: float,
    dt: float | None = None,
    sample_every: int = 1,
) -> Trajectory:
    """Fixed-step RK4 integration from ``rho0`` up to ``t_end``.

    ``dt`` is the nominal step (default ``0.01 / max(gamma, omega)``) and must
    satisfy ``dt*gamma < 0.1`` and ``dt*omega < 0.1``. Each step is split into
    equal RK4 substeps when the truncated generator is stiffer than ``dt``
    allows. If ``t_end`` is not a multiple of ``dt`` the step is shortened
    slightly. Samples are taken every ``sample_every`` steps and at the end.
    """
    dt = default_dt(params) if dt is None else float(dt)
    _check_dt(params, dt)
    if t_end < 0:
        raise DomainError("t_end must be non-negative")
    if sample_every < 1:
        raise DomainError("sample_every must be >= 1")
    r = np.array(rho0.rho, dtype=complex)
    dim = r.shape[0]
    s = summarize(params)
    in_play = max(s.n_s, float(np.real(np.trace(np.diag(np.arange(dim)) @ r))))
    if tail_mass(in_play, dim) >= TAIL_TOLERANCE:
        warnings.warn(f"dim {dim} leaves thermal tail {tail_mass(in_play, dim):.1e} at occupation "
                      f"{in_play:.3g}; rule of thumb asks for dim {required_dim(in_play)}",
                      TruncationWarning, stacklevel=2)

    n_steps = max(1, math.ceil(t_end / dt - 1e-9)) if t_end > 0 else 0
    if n_steps:
        dt = t_end / n_steps
    gen = Generator(params, dim)
    n_sub = substeps_for(gen, dt)
    h = dt / n_sub
    levels = np.arange(dim, dtype=float)
    traj = Trajectory([], [], [], [], [], dim=dim, dt=dt, substeps=n_sub)

    def record(t):
        state = DensityMatrix(r, check=False)
        mean = float(np.real(np.diag(r)) @ levels)
        traj.times.append(t)
        traj.mean_n.append(mean)
        traj.current.append(analytic.current_from_number(params, mean))
        traj.trace_defect.append(state.trace_defect())
        traj.min_eig.append(state.min_eigenvalue())
        traj.hermiticity.append(state.hermiticity_defect())

    record(0.0)
    for k in range(1, n_steps + 1):
        for _ in range(n_sub):
            r = _rk4(gen, r, h)
        if k % sample_every == 0 or k == n_steps:
            record(k * dt)
    traj.final = DensityMatrix(r, check=False)
    return traj


def steady_state(
    params: SystemParams,
    ops: LadderOps | None = None,
    dt: float | None = None,
    tol: float = 1e-10,
    max_steps: int = 2_000_000,
    check_every: int = 50,
) -> DensityMatrix:
    """Long-time limit of the evolution from the vacuum.

    Integration stops once the largest entry of the generator applied to
    the state falls below ``tol``.
    """
    s = summarize(params)
    if ops is None:
        ops = build_ops(required_dim(s.n_s))
    dim = ops.dim
    if tail_mass(s.n_s, dim) >= TAIL_TOLERANCE:
        raise TruncationError(f"dim {dim} too small for steady occupation {s.n_s:.4g}", required_dim(s.n_s))
    dt = default_dt(params) if dt is None else float(dt)
    _check_dt(params, dt)
    gen = Generator(params, dim)
    n_sub = substeps_for(gen, dt)
    h = dt / n_sub
    r = np.zeros((dim, dim), dtype=complex)
    r[0, 0] = 1.0
    residual = float(np.max(np.abs(gen(r))))
    steps = 0
    while residual >= tol:
        if steps >= max_steps:
            raise ConvergenceError(f"no steady state after {steps} steps", residual)
        for _ in range(check_every * n_sub):
            r = _rk4(gen, r, h)
        steps += check_every
        residual = float(np.max(np.abs(gen(r))))
    return DensityMatrix(r, check=False)


class MonteCarloEstimate(NamedTuple):
    mean: float
    stderr: float


def p_sampling_mean(params: SystemParams, n_samples: int, seed: int) -> MonteCarloEstimate:
    """Estimate <a^+a> by averaging |alpha|^2 over the steady P-distribution.

    The steady P-distribution is a circular complex Gaussian with
    <|alpha|^2> = n_s. Uses numpy's PCG64 stream seeded with ``seed``.
    """
    if n_samples < 10_000:
        raise DomainError("p_sampling_mean needs at least 10^4 samples")
    n_s = summarize(params).n_s
    rng = np.random.default_rng(seed)
    xy = rng.standard_normal((2, int(n_samples))) * math.sqrt(0.5 * n_s)
    samples = xy[0] ** 2 + xy[1] ** 2
    return MonteCarloEstimate(float(samples.mean()), float(samples.std(ddof=1) / math.sqrt(n_samples)))
