"""Command-line front end.

Parameter precedence, lowest to highest: built-in defaults, the JSON file
given by --config, explicit flags. Exit codes: 0 success, 1 validation
failure, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np

from . import analytic, fokker_planck as fp, lindblad, validation
from .csvio import render
from .errors import DomainError
from .fock import required_dim, thermal_density
from .params import SystemParams, summarize

PARAM_NAMES = tuple(f.name for f in fields(SystemParams))
RUN_KEYS = ("n0", "t_end", "dt", "dim", "seed")


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class Sweep:
    name: str
    lo: float
    hi: float
    count: int

    @classmethod
    def parse(cls, text: str) -> "Sweep":
        try:
            name, lo, hi, count = text.split(":")
            sweep = cls(name.replace("-", "_"), float(lo), float(hi), int(count))
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected name:min:max:count, got {text!r}") from None
        if sweep.count < 2:
            raise argparse.ArgumentTypeError("sweep count must be >= 2")
        if sweep.name not in PARAM_NAMES:
            raise argparse.ArgumentTypeError(f"cannot sweep {sweep.name!r}; choose one of {', '.join(PARAM_NAMES)}")
        return sweep

    def values(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.count)


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    params: SystemParams
    output_path: Path | None = None
    sweep: Sweep | None = None
    n0: float = 0.0
    t_end: float | None = None
    dt: float | None = None
    dim: int | None = None
    seed: int = 7


def worker_count() -> int | None:
    return validation.worker_count()


def _float_list(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("parameters (override --config values)")
    g.add_argument("--config", type=Path, help="flat JSON file of parameter and run keys")
    for name in PARAM_NAMES:
        g.add_argument(f"--{name.replace('_', '-')}", dest=name, type=float, default=None)
    g.add_argument("--n0", type=float, default=None, help="initial mean occupation")
    g.add_argument("--t-end", dest="t_end", type=float, default=None)
    g.add_argument("--dt", type=float, default=None)
    g.add_argument("--dim", type=int, default=None, help="Fock truncation dimension")
    g.add_argument("--seed", type=int, default=None)
    g.add_argument("--sweep", type=Sweep.parse, default=None, metavar="NAME:MIN:MAX:COUNT")
    g.add_argument("--out", type=Path, default=None, help="output CSV path (stdout if omitted)")

    parser = argparse.ArgumentParser(
        prog="open-boson",
        description="Bosonic mode between two thermal reservoirs: closed forms and numerical checks.",
        epilog="Precedence: defaults < --config file < flags. Exit codes: 0 ok, 1 validation failure, "
               "2 usage error. OPEN_BOSON_THREADS caps the worker pool.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)
    sub.add_parser("steady", parents=[common], help="steady occupations, current and transport factor")
    p = sub.add_parser("evolve", parents=[common], help="Lindblad trajectory from a thermal initial state")
    p.add_argument("--sample-every", type=int, default=10)
    p = sub.add_parser("transport", parents=[common], help="closed-form <n>(t), I(t) and eta(t)")
    p.add_argument("--samples", type=int, default=101)
    p = sub.add_parser("fig1", parents=[common], help="steady transport factor against collector temperature")
    p.add_argument("--temps-e", type=_float_list, default=[1.0, 2.0, 5.0, 10.0])
    p.add_argument("--points", type=int, default=100)
    p = sub.add_parser("fig2", parents=[common], help="collector temperature where the factor is halved")
    p.add_argument("--fraction", type=float, default=0.5)
    p = sub.add_parser("fp", parents=[common], help="finite-difference Fokker-Planck snapshots")
    p.add_argument("--x0", type=float, default=1.0)
    p.add_argument("--points", type=int, default=2048)
    p.add_argument("--times", type=_float_list, default=[0.1, 0.5, 1.0, 2.0, 5.0])
    p = sub.add_parser("validate", parents=[common], help="run the oracle-equivalence suite")
    p.add_argument("--draws", type=int, default=20)
    p.add_argument("--corrupt-tolerance", action="store_true",
                   help="shrink every tolerance by 1e-30 to exercise the failure path")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    merged: dict = {}
    if args.config is not None:
        try:
            data = json.loads(args.config.read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}") from None
        if not isinstance(data, dict):
            raise UsageError("config file must hold a flat JSON object")
        merged.update(data)
    for key in PARAM_NAMES + RUN_KEYS:
        value = getattr(args, key, None)
        if value is not None:
            merged[key] = value
    run = {k: merged.pop(k) for k in RUN_KEYS if k in merged}
    params = SystemParams.from_mapping(merged)
    if "dim" in run:
        run["dim"] = int(run["dim"])
    if "seed" in run:
        run["seed"] = int(run["seed"])
    return RunConfig(args.subcommand, params, args.out, args.sweep, **run)


def _sweep_points(config: RunConfig) -> list[SystemParams]:
    if config.sweep is None:
        return [config.params]
    return [config.params.replace(**{config.sweep.name: float(v)}) for v in config.sweep.values()]


def _pool_map(fn, items):
    with ThreadPoolExecutor(max_workers=worker_count()) as pool:
        return list(pool.map(fn, items))


def cmd_steady(config: RunConfig, args=None) -> str:
    header = ["n_e", "n_c", "n_s", "T_sys", "I_s", "eta_s", "eta_c", "E_s"]

    def row(p: SystemParams):
        s = summarize(p)
        rep = analytic.transport_report(p, config.n0)
        return [s.n_e, s.n_c, s.n_s, s.temp_sys, rep.i_s, rep.eta_s, rep.eta_c, rep.energy_loss]

    points = _sweep_points(config)
    rows = _pool_map(row, points)
    if config.sweep is not None:
        header.insert(0, config.sweep.name)
        rows = [[getattr(p, config.sweep.name)] + r for p, r in zip(points, rows)]
    return render(header, rows)


def cmd_evolve(config: RunConfig, args) -> str:
    p = config.params
    n_s = summarize(p).n_s
    dim = config.dim or required_dim(max(n_s, config.n0))
    t_end = config.t_end if config.t_end is not None else 5.0 / p.gamma
    traj = lindblad.evolve(p, thermal_density(dim, config.n0), t_end, config.dt, args.sample_every)
    comments = [f"dim={traj.dim}", f"dt={traj.dt:.17g}", f"substeps={traj.substeps}", f"params={p.digest()}"]
    return render(lindblad.Trajectory.CSV_HEADER, traj.rows(), comments)


def cmd_transport(config: RunConfig, args) -> str:
    p = config.params
    t_end = config.t_end if config.t_end is not None else 5.0 / p.gamma
    t = np.linspace(0.0, t_end, args.samples)
    rows = zip(t, analytic.mean_number(p, config.n0, t), analytic.current(p, config.n0, t),
               analytic.transport_factor_t(p, config.n0, t))
    return render(["t", "mean_n", "current", "eta"], rows)


def cmd_fig1(config: RunConfig, args) -> str:
    if config.sweep is not None:
        if config.sweep.name != "temp_c":
            raise UsageError("fig1 sweeps temp_c only")
        if config.sweep.lo <= 0:
            raise UsageError("collector temperatures must be positive")
        if config.sweep.hi > min(args.temps_e):
            raise UsageError(f"sweep upper bound {config.sweep.hi} exceeds emitter temperature {min(args.temps_e)}")

    def curve(temp_e: float):
        if config.sweep is not None:
            grid = config.sweep.values()
        else:
            grid = np.linspace(temp_e / args.points, temp_e, args.points)
        p = config.params.replace(temp_e=temp_e)
        eta = analytic.steady_factor_curve(p, grid)
        return [[temp_e, tc, e, 1.0 - tc / temp_e] for tc, e in zip(grid, eta)]

    rows = [r for block in _pool_map(curve, args.temps_e) for r in block]
    return render(["T_e", "T_c", "eta_s", "eta_c"], rows)


def cmd_fig2(config: RunConfig, args) -> str:
    if config.sweep is None:
        grid = np.linspace(0.5, 20.0, 40)
    elif config.sweep.name != "temp_e":
        raise UsageError("fig2 sweeps temp_e only")
    else:
        grid = config.sweep.values()
    locus = analytic.half_factor_locus(config.params, grid, args.fraction)
    rows = [[pt.temp_e, pt.temp_c, pt.temp_c is not None] for pt in locus]
    return render(["T_e", "T_c_half", "found"], rows)


def cmd_fp(config: RunConfig, args) -> list[tuple[Path | None, str]]:
    p = config.params
    times = sorted(args.times)
    if not times or times[0] <= 0:
        raise UsageError("--times must be positive")
    state = fp.narrow_initial(p, args.x0, args.points)
    regime = "high_temperature=" + ("yes" if fp.high_temperature(p) else "no (force constant outside its validity range)")
    force = f"force_constant={fp.steady_force_constant(p):.17g}"
    outputs = []
    now = 0.0
    for k, t in enumerate(times):
        state = fp.solve_fp(p, state, t - now, config.dt)
        now = t
        rows = zip(state.x, np.maximum(state.values, 0.0))
        text = render(["x", "value"], rows, comments=(f"t={t:.17g}", f"params={p.digest()}", force, regime))
        path = None
        if config.output_path is not None:
            out = config.output_path
            path = out if len(times) == 1 else out.with_name(f"{out.stem}_{k:03d}{out.suffix or '.csv'}")
        outputs.append((path, text))
    return outputs


def cmd_validate(config: RunConfig, args) -> tuple[str, bool]:
    scale = 1e-30 if args.corrupt_tolerance else 1.0
    report = validation.run_suite(config.params, draws=args.draws, seed=config.seed, tolerance_scale=scale)
    header = f"validation suite (params={config.params.digest()}, seed={config.seed})"
    return header + "\n" + report.text(), report.passed


COMMANDS = {
    "steady": cmd_steady,
    "evolve": cmd_evolve,
    "transport": cmd_transport,
    "fig1": cmd_fig1,
    "fig2": cmd_fig2,
}


def _emit(path: Path | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    path.write_text(text)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = config_from_args(args)
        if config.subcommand == "validate":
            text, ok = cmd_validate(config, args)
            _emit(config.output_path, text + "\n")
            return 0 if ok else 1
        if config.subcommand == "fp":
            for path, text in cmd_fp(config, args):
                _emit(path, text)
            return 0
        _emit(config.output_path, COMMANDS[config.subcommand](config, args))
        return 0
    except (UsageError, DomainError) as exc:
        print(f"open-boson: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"open-boson: I/O error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
