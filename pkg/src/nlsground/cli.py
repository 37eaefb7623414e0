"""Command-line front end: config parsing, run orchestration, persistence.

Config format: flat ``section.key = value`` lines with ``#`` comments.
Sections/keys (all optional; defaults shown by ``RunConfig().to_text()``):

    grid.dim, grid.half_width, grid.nodes_per_axis
    params.sigma1, params.sigma2, params.omega, params.lambda, params.p
    solver.init_kind, solver.center, solver.width, solver.amp_u,
    solver.amp_v, solver.rng_seed, solver.step0, solver.armijo_shrink,
    solver.armijo_slope, solver.min_step, solver.max_iters, solver.grad_tol,
    solver.energy_tol, solver.restarts, solver.projection_tol
    evolve.dt, evolve.steps, evolve.sample_every
    output.directory, output.formats
    sweep.lambdas            (comma-separated, required by the sweep command)

Subcommands: solve, verify, evolve, sweep.  Exit codes: 0 success/converged,
1 usage or config error, 2 non-convergence, 3 invariant violation.

Outputs: ``solution.csv`` (header ``x[,y],u,v``, 17 significant digits, node
order), ``report.json`` (one JSON object: config echo plus the reports of
the subcommand that ran), ``trace.csv`` (one ``iter,I,grad_norm,t0,step``
line per accepted iteration).  Reports are byte-identical across runs with
the same config and seed; wall-clock time is therefore kept out of them.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .energy import PhysParams, StatePair
from .evolve import ComplexField, evolve_split_step
from .grid import Field, GridSpec
from .minimize import SolveConfig, SolveReport, lambda_sweep, solve_ground_state
from .verify import run_verification

__all__ = ["ConfigError", "RunConfig", "parse_config", "run", "main"]

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NOT_CONVERGED = 2
EXIT_VIOLATION = 3

MASS_DRIFT_LIMIT = 1e-10


class ConfigError(ValueError):
    """Malformed or constraint-violating run configuration."""


@dataclass(frozen=True)
class EvolveSettings:
    dt: float = 1e-3
    steps: int = 1000
    sample_every: int = 10

    def __post_init__(self):
        if not (self.dt > 0):
            raise ValueError(f"dt must be positive, got {self.dt}")
        if self.steps < 0:
            raise ValueError(f"steps must be >= 0, got {self.steps}")
        if self.sample_every < 1:
            raise ValueError(f"sample_every must be >= 1, got {self.sample_every}")


@dataclass(frozen=True)
class OutputSettings:
    directory: str = "out"
    formats: tuple = ("csv", "json")

    def __post_init__(self):
        for fmt in self.formats:
            if fmt not in ("csv", "json"):
                raise ValueError(f"unknown output format {fmt!r}")


@dataclass(frozen=True)
class RunConfig:
    grid: GridSpec = GridSpec(dim=1, half_width=10.0, nodes_per_axis=257)
    params: PhysParams = PhysParams(sigma1=1.0, sigma2=1.0, omega=1.0, lam=1.0, p=3.0)
    solver: SolveConfig = SolveConfig()
    evolve: EvolveSettings = EvolveSettings()
    output: OutputSettings = OutputSettings()
    sweep_lambdas: tuple = ()

    def to_text(self) -> str:
        """Canonical config text; parse_config round-trips it."""
        lines = [
            f"grid.dim = {self.grid.dim}",
            f"grid.half_width = {self.grid.half_width!r}",
            f"grid.nodes_per_axis = {self.grid.nodes_per_axis}",
            f"params.sigma1 = {self.params.sigma1!r}",
            f"params.sigma2 = {self.params.sigma2!r}",
            f"params.omega = {self.params.omega!r}",
            f"params.lambda = {self.params.lam!r}",
            f"params.p = {self.params.p!r}",
            f"solver.init_kind = {self.solver.init_kind}",
            f"solver.center = {self.solver.center!r}",
            f"solver.width = {self.solver.width!r}",
            f"solver.amp_u = {self.solver.amp_u!r}",
            f"solver.amp_v = {self.solver.amp_v!r}",
            f"solver.rng_seed = {self.solver.rng_seed}",
            f"solver.step0 = {self.solver.step0!r}",
            f"solver.armijo_shrink = {self.solver.armijo_shrink!r}",
            f"solver.armijo_slope = {self.solver.armijo_slope!r}",
            f"solver.min_step = {self.solver.min_step!r}",
            f"solver.max_iters = {self.solver.max_iters}",
            f"solver.grad_tol = {self.solver.grad_tol!r}",
            f"solver.energy_tol = {self.solver.energy_tol!r}",
            f"solver.restarts = {self.solver.restarts}",
            f"solver.projection_tol = {self.solver.projection_tol!r}",
            f"evolve.dt = {self.evolve.dt!r}",
            f"evolve.steps = {self.evolve.steps}",
            f"evolve.sample_every = {self.evolve.sample_every}",
            f"output.directory = {self.output.directory}",
            f"output.formats = {','.join(self.output.formats)}",
        ]
        if self.sweep_lambdas:
            lines.append(
                "sweep.lambdas = " + ",".join(repr(x) for x in self.sweep_lambdas)
            )
        return "\n".join(lines) + "\n"


def _parse_float(key, raw):
    try:
        return float(raw)
    except ValueError:
        raise ConfigError(f"{key}: malformed number {raw!r}") from None


def _parse_int(key, raw):
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"{key}: malformed integer {raw!r}") from None


def _parse_float_list(key, raw):
    parts = [p.strip() for p in raw.split(",") if p.strip()]
    if not parts:
        raise ConfigError(f"{key}: empty list")
    return tuple(_parse_float(key, p) for p in parts)


_KEY_PARSERS = {
    "grid.dim": _parse_int,
    "grid.half_width": _parse_float,
    "grid.nodes_per_axis": _parse_int,
    "params.sigma1": _parse_float,
    "params.sigma2": _parse_float,
    "params.omega": _parse_float,
    "params.lambda": _parse_float,
    "params.p": _parse_float,
    "solver.init_kind": lambda key, raw: raw,
    "solver.center": _parse_float,
    "solver.width": _parse_float,
    "solver.amp_u": _parse_float,
    "solver.amp_v": _parse_float,
    "solver.rng_seed": _parse_int,
    "solver.step0": _parse_float,
    "solver.armijo_shrink": _parse_float,
    "solver.armijo_slope": _parse_float,
    "solver.min_step": _parse_float,
    "solver.max_iters": _parse_int,
    "solver.grad_tol": _parse_float,
    "solver.energy_tol": _parse_float,
    "solver.restarts": _parse_int,
    "solver.projection_tol": _parse_float,
    "evolve.dt": _parse_float,
    "evolve.steps": _parse_int,
    "evolve.sample_every": _parse_int,
    "output.directory": lambda key, raw: raw,
    "output.formats": lambda key, raw: tuple(
        p.strip() for p in raw.split(",") if p.strip()
    ),
    "sweep.lambdas": _parse_float_list,
}


def parse_config(text: str) -> RunConfig:
    """Parse and validate config text; raises ConfigError naming the key."""
    values = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {lineno}: expected 'section.key = value'")
        key, raw = (part.strip() for part in stripped.split("=", 1))
        if key not in _KEY_PARSERS:
            raise ConfigError(f"unknown key {key!r}")
        if key in values:
            raise ConfigError(f"duplicate key {key!r}")
        values[key] = _KEY_PARSERS[key](key, raw)

    def section(name, cls, mapping, defaults=None):
        kwargs = dict(defaults or {})
        kwargs.update(
            {field: values[key] for key, field in mapping.items() if key in values}
        )
        try:
            return cls(**kwargs)
        except (ValueError, TypeError) as exc:
            raise ConfigError(f"{name}: {exc}") from None

    grid = section(
        "grid",
        GridSpec,
        {"grid.dim": "dim", "grid.half_width": "half_width", "grid.nodes_per_axis": "nodes_per_axis"},
        defaults={"dim": 1, "half_width": 10.0, "nodes_per_axis": 257},
    )
    params = section(
        "params",
        PhysParams,
        {
            "params.sigma1": "sigma1",
            "params.sigma2": "sigma2",
            "params.omega": "omega",
            "params.lambda": "lam",
            "params.p": "p",
        },
        defaults={"sigma1": 1.0, "sigma2": 1.0, "omega": 1.0, "lam": 1.0, "p": 3.0},
    )
    solver = section(
        "solver",
        SolveConfig,
        {f"solver.{f}": f for f in (
            "init_kind", "center", "width", "amp_u", "amp_v", "rng_seed", "step0",
            "armijo_shrink", "armijo_slope", "min_step", "max_iters", "grad_tol",
            "energy_tol", "restarts", "projection_tol",
        )},
    )
    evolve = section(
        "evolve",
        EvolveSettings,
        {"evolve.dt": "dt", "evolve.steps": "steps", "evolve.sample_every": "sample_every"},
    )
    output = section(
        "output",
        OutputSettings,
        {"output.directory": "directory", "output.formats": "formats"},
    )
    return RunConfig(
        grid=grid,
        params=params,
        solver=solver,
        evolve=evolve,
        output=output,
        sweep_lambdas=values.get("sweep.lambdas", ()),
    )


# ---------------------------------------------------------------------------
# persistence


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def write_solution_csv(path: Path, state: StatePair) -> None:
    grid = state.grid
    coords = grid.meshgrid()
    with open(path, "w", newline="\n") as fh:
        if grid.dim == 1:
            fh.write("x,u,v\n")
            for x, u, v in zip(coords[0].reshape(-1), state.u.values, state.v.values):
                fh.write(f"{_fmt(x)},{_fmt(u)},{_fmt(v)}\n")
        else:
            fh.write("x,y,u,v\n")
            xs = coords[0].reshape(-1)
            ys = coords[1].reshape(-1)
            for x, y, u, v in zip(xs, ys, state.u.values, state.v.values):
                fh.write(f"{_fmt(x)},{_fmt(y)},{_fmt(u)},{_fmt(v)}\n")


def read_solution_csv(path: Path, grid: GridSpec) -> StatePair:
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    if data.shape[0] != grid.num_nodes or data.shape[1] != grid.dim + 2:
        raise ConfigError(
            f"{path}: solution shape {data.shape} does not match the configured grid"
        )
    return StatePair(Field(grid, data[:, grid.dim]), Field(grid, data[:, grid.dim + 1]))


def write_trace_csv(path: Path, report: SolveReport) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write("iter,I,grad_norm,t0,step\n")
        for it, energy, gnorm, t0, step in report.trace:
            fh.write(f"{it},{_fmt(energy)},{_fmt(gnorm)},{_fmt(t0)},{_fmt(step)}\n")


def _report_dict(report: SolveReport) -> dict:
    # wall_time and the per-iteration trace are deliberately left out:
    # report.json must be byte-identical across runs (trace goes to trace.csv)
    return {
        "converged": report.converged,
        "iterations": report.iterations,
        "I0_estimate": report.I0_estimate,
        "grad_norm": report.grad_norm,
        "nehari_residual": report.nehari_residual,
        "pde_residual_max": report.pde_residual_max,
        "t0_history_first": list(report.t0_history[:10]),
        "t0_history_last": list(report.t0_history[-10:]),
        "stop_reason": report.stop_reason,
        "descent_monotone": report.descent_monotone,
        "positivity_ok": report.positivity_ok,
        "max_manifold_residual_rel": report.max_manifold_residual_rel,
        "restart_index": report.restart_index,
    }


def _summary_dict(summary) -> dict:
    mass_u = summary.mass_u
    mass_v = summary.mass_v
    return {
        "steps": summary.steps,
        "dt": summary.dt,
        "sample_every": summary.sample_every,
        "mass_u_initial": mass_u[0],
        "mass_u_final": mass_u[-1],
        "mass_v_initial": mass_v[0],
        "mass_v_final": mass_v[-1],
        "mass_drift_rel": _mass_drift(summary),
        "max_modulus_drift": summary.max_modulus_drift,
    }


def _mass_drift(summary) -> float:
    drift = 0.0
    for series in (summary.mass_u, summary.mass_v):
        if series[0] > 0:
            drift = max(drift, max(abs(m / series[0] - 1.0) for m in series))
    return drift


def write_report_json(path: Path, cfg: RunConfig, sections: dict) -> None:
    payload = {"config": cfg.to_text().splitlines()}
    payload.update(sections)
    with open(path, "w", newline="\n") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


# ---------------------------------------------------------------------------
# subcommands


def _solve_and_write(cfg: RunConfig, out_dir: Path):
    state, report = solve_ground_state(cfg.grid, cfg.params, cfg.solver)
    if "csv" in cfg.output.formats:
        write_solution_csv(out_dir / "solution.csv", state)
        write_trace_csv(out_dir / "trace.csv", report)
    return state, report


def cmd_solve(cfg: RunConfig, out_dir: Path) -> int:
    try:
        state, report = _solve_and_write(cfg, out_dir)
    except (ValueError, ArithmeticError) as exc:
        write_report_json(out_dir / "report.json", cfg, {"error": str(exc)})
        print(f"solve failed: {exc}", file=sys.stderr)
        return EXIT_NOT_CONVERGED
    write_report_json(out_dir / "report.json", cfg, {"solve": _report_dict(report)})
    print(
        f"solve: converged={report.converged} iterations={report.iterations} "
        f"I0={report.I0_estimate:.12g} grad_norm={report.grad_norm:.3e}"
    )
    return EXIT_OK if report.converged else EXIT_NOT_CONVERGED


def cmd_verify(cfg: RunConfig, out_dir: Path) -> int:
    passed, checks = run_verification(
        cfg.grid, cfg.params, cfg.solver, seed=cfg.solver.rng_seed
    )
    for name, ok, detail in checks:
        print(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
    write_report_json(
        out_dir / "report.json",
        cfg,
        {"verify": [{"name": n, "passed": bool(ok), "detail": d} for n, ok, d in checks]},
    )
    return EXIT_OK if passed else EXIT_VIOLATION


def cmd_evolve(cfg: RunConfig, out_dir: Path) -> int:
    sections = {}
    solution_path = out_dir / "solution.csv"
    if solution_path.exists():
        state = read_solution_csv(solution_path, cfg.grid)
    else:
        try:
            state, report = _solve_and_write(cfg, out_dir)
        except (ValueError, ArithmeticError) as exc:
            write_report_json(out_dir / "report.json", cfg, {"error": str(exc)})
            print(f"solve failed: {exc}", file=sys.stderr)
            return EXIT_NOT_CONVERGED
        sections["solve"] = _report_dict(report)

    summary = evolve_split_step(
        (ComplexField.from_real(state.u), ComplexField.from_real(state.v)),
        cfg.params,
        dt=cfg.evolve.dt,
        steps=cfg.evolve.steps,
        sample_every=cfg.evolve.sample_every,
    )
    sections["evolve"] = _summary_dict(summary)
    write_report_json(out_dir / "report.json", cfg, sections)
    drift = _mass_drift(summary)
    print(
        f"evolve: steps={summary.steps} mass_drift={drift:.3e} "
        f"modulus_drift={summary.max_modulus_drift:.3e}"
    )
    return EXIT_OK if drift <= MASS_DRIFT_LIMIT else EXIT_VIOLATION


def cmd_sweep(cfg: RunConfig, out_dir: Path) -> int:
    if not cfg.sweep_lambdas:
        print("sweep requires sweep.lambdas in the config", file=sys.stderr)
        return EXIT_USAGE
    results = lambda_sweep(cfg.grid, cfg.params, cfg.sweep_lambdas, cfg.solver)
    entries = []
    all_converged = True
    for lam, res in results:
        if isinstance(res, SolveReport):
            entries.append({"lambda": lam, "report": _report_dict(res)})
            all_converged = all_converged and res.converged
            print(f"sweep lambda={lam:g}: I0={res.I0_estimate:.12g} converged={res.converged}")
        else:
            entries.append({"lambda": lam, "error": str(res)})
            all_converged = False
            print(f"sweep lambda={lam:g}: failed ({res})", file=sys.stderr)
    write_report_json(out_dir / "report.json", cfg, {"sweep": entries})
    return EXIT_OK if all_converged else EXIT_NOT_CONVERGED


_COMMANDS = {
    "solve": cmd_solve,
    "verify": cmd_verify,
    "evolve": cmd_evolve,
    "sweep": cmd_sweep,
}


def run(cmd: str, cfg: RunConfig, out_dir=None) -> int:
    """Execute one subcommand against a parsed config; returns the exit code."""
    if cmd not in _COMMANDS:
        print(f"unknown command {cmd!r}", file=sys.stderr)
        return EXIT_USAGE
    directory = Path(out_dir) if out_dir is not None else Path(cfg.output.directory)
    directory.mkdir(parents=True, exist_ok=True)
    return _COMMANDS[cmd](cfg, directory)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="nlsground",
        description="Ground states of the coupled cubic-superlinear Schrodinger system",
    )
    parser.add_argument("command", choices=sorted(_COMMANDS))
    parser.add_argument("--config", required=True, help="path to the run config file")
    parser.add_argument("--out", default=None, help="output directory (default: from config)")
    parser.add_argument("--seed", type=int, default=None, help="override solver.rng_seed")
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK

    try:
        text = Path(args.config).read_text()
    except OSError as exc:
        print(f"cannot read config: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        cfg = parse_config(text)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    if args.seed is not None:
        cfg = replace(cfg, solver=dataclasses.replace(cfg.solver, rng_seed=args.seed))

    return run(args.command, cfg, out_dir=args.out)


if __name__ == "__main__":
    sys.exit(main())
