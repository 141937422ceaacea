"""Oracle-equivalence checks: closed forms against the Lindblad integrator,
the finite-difference Fokker-Planck solver and Monte-Carlo sampling."""

from __future__ import annotations

import math
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import analytic, fokker_planck as fp, lindblad
from .fock import DensityMatrix, build_ops, required_dim
from .params import SystemParams, summarize

MAX_DIM = 80


@dataclass
class Check:
    name: str
    measured: float
    tolerance: float
    passed: bool
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        text = f"{status}  {self.name}: measured {self.measured:.3e}, tolerance {self.tolerance:.1e}"
        return f"{text}  [{self.detail}]" if self.detail else text


@dataclass
class Report:
    checks: list[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def text(self) -> str:
        lines = [c.line() for c in self.checks]
        lines.append(f"{sum(c.passed for c in self.checks)}/{len(self.checks)} checks passed")
        return "\n".join(lines)


def random_draw(rng: np.random.Generator, base: SystemParams = SystemParams()) -> SystemParams:
    """Emitter occupation up to 5, temperature ratio in [1, 5], damping ratio in [0.2, 5]."""
    quantum = base.hbar * base.omega_s / base.k_b
    n_e = rng.uniform(0.2, 5.0)
    temp_e = quantum / math.log1p(1.0 / n_e)
    temp_c = temp_e / rng.uniform(1.0, 5.0)
    gamma_c = rng.uniform(0.5, 2.0)
    gamma_e = gamma_c * math.exp(rng.uniform(math.log(0.2), math.log(5.0)))
    return base.replace(temp_e=temp_e, temp_c=temp_c, gamma_e=gamma_e, gamma_c=gamma_c)


def occupancy_run(params: SystemParams, n_times: int = 10, max_dim: int = MAX_DIM, dt: float | None = None):
    """Evolve from the vacuum over [0, 5/gamma] and compare <n>(t) with the closed form.

    Returns (max scaled error, trajectory).
    """
    n_s = summarize(params).n_s
    dim = min(max_dim, required_dim(n_s))
    dt = lindblad.default_dt(params) if dt is None else dt
    steps = n_times * math.ceil(math.ceil(5.0 / params.gamma / dt) / n_times)
    with warnings.catch_warnings():
        # capping the basis at max_dim is deliberate; accuracy is what gets checked
        warnings.simplefilter("ignore", lindblad.TruncationWarning)
        traj = lindblad.evolve(params, DensityMatrix.fock(dim, 0), steps * dt, dt,
                               sample_every=steps // n_times)
    times = np.array(traj.times[1:])
    exact = analytic.mean_number(params, 0.0, times)
    err = np.max(np.abs(np.array(traj.mean_n[1:]) - exact)) / max(n_s, 1.0)
    return float(err), traj


def worker_count() -> int | None:
    """Pool size from OPEN_BOSON_THREADS; None lets the executor decide."""
    raw = os.environ.get("OPEN_BOSON_THREADS")
    if not raw:
        return None
    try:
        return max(1, int(raw))
    except ValueError:
        return None


def check_occupancy(draws: int = 20, seed: int = 7, tol: float = 1e-5) -> list[Check]:
    rng = np.random.default_rng(seed)
    draws_params = [random_draw(rng) for _ in range(draws)]
    with ThreadPoolExecutor(max_workers=worker_count()) as pool:
        results = list(pool.map(occupancy_run, draws_params))
    worst = max(err for err, _ in results)
    dims = sorted({t.dim for _, t in results})
    contracts = max(max(t.trace_defect) for _, t in results)
    herm = max(max(t.hermiticity) for _, t in results)
    min_eig = min(min(t.min_eig) for _, t in results)
    detail = f"{draws} draws, dim in {dims[0]}..{dims[-1]}, dt=0.01/max(gamma,omega)"
    return [
        Check("lindblad <n>(t) vs closed form", worst, tol, worst < tol, detail),
        Check("trace preservation", contracts, 1e-8, contracts < 1e-8, detail),
        Check("hermiticity", herm, 1e-9, herm < 1e-9, detail),
        Check("positivity (-min eigenvalue)", 0.0 - min_eig, 1e-8, min_eig > -1e-8, detail),
    ]


def delta_gap(params: SystemParams, delta: float) -> tuple[float, list]:
    """Largest <n>(t) difference between detuning 0 and ``delta`` on a shared time grid."""
    shifted = params.replace(delta=delta)
    dt = min(lindblad.default_dt(params.replace(delta=0.0)), lindblad.default_dt(shifted))
    _, a = occupancy_run(params.replace(delta=0.0), dt=dt)
    _, b = occupancy_run(shifted, dt=dt)
    return float(np.max(np.abs(np.array(a.mean_n) - np.array(b.mean_n)))), [a, b]


def check_delta_independence(params: SystemParams, tol: float = 1e-9) -> Check:
    diff, (a, _) = delta_gap(params, 0.7)
    return Check("populations independent of delta", diff, tol, diff < tol, f"dim={a.dim}, dt={a.dt:.3g}")


def check_steady_state(params: SystemParams, tol: float = 1e-6, off_tol: float = 1e-9) -> list[Check]:
    n_s = summarize(params).n_s
    dim = required_dim(n_s)
    ops = build_ops(dim)
    rho = lindblad.steady_state(params, ops).rho
    diag_err = float(np.max(np.abs(np.real(np.diag(rho)) - analytic.geometric_diagonal(n_s, np.arange(dim)))))
    off = float(np.max(np.abs(rho - np.diag(np.diag(rho)))))
    detail = f"dim={dim}, dt={lindblad.default_dt(params):.3g}"
    return [
        Check("steady diagonal vs geometric", diag_err, tol, diag_err < tol, detail),
        Check("steady off-diagonals", off, off_tol, off < off_tol, detail),
    ]


def fp_error(params: SystemParams, x0: float, t: float, n_points: int, against_delta: bool = True) -> float:
    init = fp.narrow_initial(params, x0, n_points)
    out = fp.solve_fp(params, init, t)
    if against_delta:
        ref = fp.gaussian_x(params, x0, out.x, t)
    else:
        ref = fp.gaussian_from(params, x0, out.x, t, fp.NARROW_FRACTION * summarize(params).n_s)
    return out.l1_distance(ref)


def check_fokker_planck(params: SystemParams, x0: float = 1.0, n_points: int = 2048,
                        tol: float = 1e-3) -> list[Check]:
    g = params.gamma
    checks = []
    for t in (1.0 / g, 5.0 / g):
        err = fp_error(params, x0, t, n_points)
        checks.append(Check(f"fokker-planck L1 at t={t:.3g}", err, tol, err < tol, f"{n_points} points"))
    coarse = fp_error(params, x0, 1.0 / g, n_points // 2, against_delta=False)
    fine = fp_error(params, x0, 1.0 / g, n_points, against_delta=False)
    ratio = coarse / fine
    checks.append(Check("fokker-planck refinement ratio", ratio, 4.0, 3.2 <= ratio <= 4.8,
                        f"{n_points // 2} -> {n_points} points, accepted [3.2, 4.8]"))
    return checks


def check_monte_carlo(params: SystemParams, n_samples: int = 1_000_000, seed: int = 2024) -> Check:
    est = lindblad.p_sampling_mean(params, n_samples, seed)
    n_s = summarize(params).n_s
    z = abs(est.mean - n_s) / est.stderr
    return Check("P-distribution <|alpha|^2> (standard errors)", z, 4.0, z < 4.0,
                 f"{n_samples} samples, seed {seed}")


def run_suite(params: SystemParams, draws: int = 20, seed: int = 7, tolerance_scale: float = 1.0) -> Report:
    """All checks; ``tolerance_scale`` shrinks every tolerance (used to exercise the failure path)."""
    report = Report()
    report.checks += check_occupancy(draws, seed, tol=1e-5 * tolerance_scale)
    report.checks.append(check_delta_independence(params, tol=1e-9 * tolerance_scale))
    report.checks += check_steady_state(params, tol=1e-6 * tolerance_scale, off_tol=1e-9 * tolerance_scale)
    report.checks += check_fokker_planck(params, tol=1e-3 * tolerance_scale)
    report.checks.append(check_monte_carlo(params, seed=seed))
    return report
