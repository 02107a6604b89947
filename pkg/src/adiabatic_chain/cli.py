"""Command-line front end.

Subcommands: evolve (trajectory + JSON sidecar), gap (minimum-gap JSON on
stdout), figure (harnesses for the gap/fidelity/disorder studies), sweep
(custom one-parameter fidelity sweeps).  Times are in units of 1/J and
energies in units of J throughout; the pulse width is configured as the
dimensionless product alpha*tau.

Exit codes: 0 success, 2 configuration/validation error, 3 I/O error.
"""

import argparse
import json
import sys
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path

from . import experiments
from .experiments import (
    DEFAULT_SEED,
    SweepResult,
    disorder_ensemble,
    fidelity_grid,
    fidelity_vs_alpha,
    gap_profile,
    gap_vs_alpha,
    gap_vs_n,
    min_time_for_fidelity,
    population_trace,
    sweep_steps,
    thread_budget,
)
from .model import ChainSpec, DisorderSpec, PulseSchedule, sample_disordered_couplings
from .propagator import default_step_count
from .reporting import (
    sweep_csv_bytes,
    sweep_json_bytes,
    trajectory_csv_bytes,
    trajectory_json_bytes,
    write_json_sidecar,
)

FIGURE_IDS = ("2b", "3a", "3b", "4c", "5", "6", "7")
SWEEP_PARAMS = ("alpha_over_tau", "tau", "mu_a_max", "mu_b_max", "n_sites", "delta")
# per-figure defaults that differ from the base configuration
FIGURE_DEFAULTS = {"6": {"tau": 1000.0}}


class ConfigError(Exception):
    pass


@dataclass
class RunConfig:
    """Flat run configuration; defaults reproduce the tau=500 benchmark run
    (N=5, J=1, peaks 20, alpha*tau=5)."""

    n_sites: int = 5
    coupling: float = 1.0
    mu_a_max: float = 20.0
    mu_b_max: float = 20.0
    alpha_over_tau: float = 5.0
    tau: float = 500.0
    n_steps: int | None = None
    seed: int = DEFAULT_SEED
    delta: float = 0.0
    n_samples: int = 20
    out: str | None = None
    format: str = "csv"

    def chain_spec(self) -> ChainSpec:
        try:
            return ChainSpec(self.n_sites, self.coupling)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    def schedule(self) -> PulseSchedule:
        try:
            return PulseSchedule.from_alpha_tau(
                self.mu_a_max, self.mu_b_max, self.alpha_over_tau, self.tau)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    def validate(self) -> None:
        self.chain_spec()
        self.schedule()
        if self.n_steps is not None and self.n_steps < 1:
            raise ConfigError(f"n_steps must be >= 1, got {self.n_steps}")
        if not 0.0 <= self.delta < 1.0:
            raise ConfigError(f"delta must lie in [0, 1), got {self.delta}")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed must be a 64-bit unsigned integer")
        if self.n_samples < 1:
            raise ConfigError(f"n_samples must be >= 1, got {self.n_samples}")
        if self.format not in ("csv", "json"):
            raise ConfigError(f"format must be csv or json, got {self.format}")

    def parameters(self) -> dict:
        params = asdict(self)
        params.pop("out")
        return params


_INT_FIELDS = {"n_sites", "n_steps", "seed", "n_samples"}
_FLOAT_FIELDS = {"coupling", "mu_a_max", "mu_b_max", "alpha_over_tau", "tau", "delta"}


def _coerce(name: str, value):
    if value is None:
        return None
    if name in _INT_FIELDS:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"{name} must be an integer, got {value!r}")
        return value
    if name in _FLOAT_FIELDS:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"{name} must be a number, got {value!r}")
        return float(value)
    if not isinstance(value, str):
        raise ConfigError(f"{name} must be a string, got {value!r}")
    return value


def load_config(path: str | None, overrides: dict, figure_id: str | None = None) -> RunConfig:
    """Defaults, then per-figure defaults, then the JSON file, then CLI flags."""
    config = RunConfig()
    if figure_id and figure_id in FIGURE_DEFAULTS:
        config = replace(config, **FIGURE_DEFAULTS[figure_id])
    if path is not None:
        try:
            raw = json.loads(Path(path).read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file {path}: invalid JSON ({exc})") from exc
        if not isinstance(raw, dict):
            raise ConfigError(f"config file {path}: expected a JSON object")
        known = {f.name for f in fields(RunConfig)}
        unknown = sorted(set(raw) - known)
        if unknown:
            raise ConfigError(f"config file {path}: unknown keys {', '.join(unknown)}")
        config = replace(config, **{k: _coerce(k, v) for k, v in raw.items()})
    cli = {k: _coerce(k, v) for k, v in overrides.items() if v is not None}
    config = replace(config, **cli)
    config.validate()
    return config


def _config_overrides(args: argparse.Namespace) -> dict:
    names = [f.name for f in fields(RunConfig)]
    return {name: getattr(args, name, None) for name in names}


def _bonds_for(config: RunConfig, spec: ChainSpec):
    if config.delta == 0.0:
        return spec
    disorder = DisorderSpec(delta=config.delta, seed=config.seed, n_samples=1)
    return spec.with_bonds(sample_disordered_couplings(spec, disorder, 0))


def _write_output(data: bytes, path: Path) -> None:
    path.write_bytes(data)
    print(f"wrote {path}")


def cmd_evolve(args: argparse.Namespace, config: RunConfig) -> int:
    spec = _bonds_for(config, config.chain_spec())
    schedule = config.schedule()
    n_steps = config.n_steps if config.n_steps is not None else default_step_count(schedule)
    traj = population_trace(spec, schedule, n_steps=n_steps)
    out = Path(config.out or "trajectory.csv")
    if config.format == "json":
        _write_output(trajectory_json_bytes(traj, config.parameters()), out)
    else:
        _write_output(trajectory_csv_bytes(traj), out)
        sidecar = out.with_suffix(".json")
        if sidecar == out:
            raise ConfigError(f"output path {out} collides with its JSON sidecar")
        write_json_sidecar(sidecar, {
            "fidelity": traj.fidelity,
            "parameters": config.parameters(),
            "seed": config.seed,
            "n_steps": n_steps,
        })
        print(f"wrote {sidecar}")
    if args.plot:
        from .plots import render_trajectory
        render_trajectory(traj, out.with_suffix(".png"))
        print(f"wrote {out.with_suffix('.png')}")
    print(f"fidelity = {traj.fidelity:.6f}")
    return 0


def cmd_gap(args: argparse.Namespace, config: RunConfig) -> int:
    from .spectral import min_gap

    spec = _bonds_for(config, config.chain_spec())
    n_grid = args.n_grid if args.n_grid is not None else 2001
    t_star, delta_min = min_gap(spec, config.schedule(), n_grid=n_grid)
    print(json.dumps({"t_star": t_star, "delta_min": delta_min}))
    return 0


def _figure_result(args: argparse.Namespace, config: RunConfig) -> SweepResult:
    fid = args.figure_id
    spec = config.chain_spec()
    if fid == "2b":
        n_grid = args.n_grid if args.n_grid is not None else 1001
        return gap_profile(spec, config.schedule(), n_grid=n_grid)
    if fid == "3a":
        return gap_vs_n(alpha_tau=config.alpha_over_tau, tau=config.tau,
                        coupling=config.coupling)
    if fid == "3b":
        return gap_vs_alpha(spec, mu0=config.mu_a_max, tau=config.tau)
    if fid == "4c":
        return fidelity_vs_alpha(spec, mu0=config.mu_a_max, tau=config.tau,
                                 n_steps=config.n_steps)
    if fid == "5":
        result, _ = min_time_for_fidelity(mu0=config.mu_a_max,
                                          alpha_tau=config.alpha_over_tau,
                                          coupling=config.coupling)
        return result
    if fid == "6":
        return fidelity_grid(n_sites=config.n_sites, tau=config.tau,
                             alpha_tau=config.alpha_over_tau,
                             coupling=config.coupling, n_steps=config.n_steps)
    if fid == "7":
        return disorder_ensemble(spec, config.schedule(),
                                 n_samples=config.n_samples, seed=config.seed,
                                 n_steps=config.n_steps)
    raise ConfigError(f"unknown figure id {fid!r}; expected one of {', '.join(FIGURE_IDS)}")


def cmd_figure(args: argparse.Namespace, config: RunConfig) -> int:
    result = _figure_result(args, config)
    suffix = "json" if config.format == "json" else "csv"
    out = Path(config.out or f"fig{args.figure_id}.{suffix}")
    data = sweep_json_bytes(result) if config.format == "json" else sweep_csv_bytes(result)
    _write_output(data, out)
    if args.plot:
        from .plots import FIGURE_RENDERERS
        FIGURE_RENDERERS[args.figure_id](result, out.with_suffix(".png"))
        print(f"wrote {out.with_suffix('.png')}")
    return 0


def cmd_sweep(args: argparse.Namespace, config: RunConfig) -> int:
    param = args.param
    try:
        values = [float(v) for v in args.values.split(",") if v.strip()]
    except ValueError as exc:
        raise ConfigError(f"--values must be a comma-separated number list: {exc}") from exc
    if not values:
        raise ConfigError("--values is empty")

    cells = []
    layout = []
    for value in values:
        v = int(value) if param == "n_sites" else value
        cfg = replace(config, **{param: v})
        cfg.validate()
        spec = cfg.chain_spec()
        schedule = cfg.schedule()
        n_steps = cfg.n_steps if cfg.n_steps is not None else sweep_steps(cfg.tau)
        if cfg.delta > 0.0:
            disorder = DisorderSpec(delta=cfg.delta, seed=cfg.seed, n_samples=cfg.n_samples)
            for i in range(cfg.n_samples):
                bonds = sample_disordered_couplings(spec, disorder, i)
                cells.append((spec.with_bonds(bonds), schedule, n_steps))
                layout.append((float(value), float(i)))
        else:
            cells.append((spec, schedule, n_steps))
            layout.append((float(value), 0.0))
    fids = experiments._parallel_fidelities(cells)

    disordered = any(s != 0.0 for _, s in layout) or config.delta > 0.0 or param == "delta"
    if disordered:
        columns = (param, "sample_index", "fidelity")
        rows = tuple((v, s, f) for (v, s), f in zip(layout, fids))
    else:
        columns = (param, "fidelity")
        rows = tuple((v, f) for (v, _), f in zip(layout, fids))
    meta = {"swept_param": param, "values": tuple(values), **config.parameters()}
    result = SweepResult(columns, rows, meta, experiments._now())

    suffix = "json" if config.format == "json" else "csv"
    out = Path(config.out or f"sweep_{param}.{suffix}")
    data = sweep_json_bytes(result) if config.format == "json" else sweep_csv_bytes(result)
    _write_output(data, out)
    if args.plot:
        from .plots import render_fidelity_sweep
        render_fidelity_sweep(result, out.with_suffix(".png"), xlabel=param)
        print(f"wrote {out.with_suffix('.png')}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config file (flags override it)")
    common.add_argument("--n-sites", dest="n_sites", type=int)
    common.add_argument("--coupling", type=float, help="nominal coupling J (energy unit)")
    common.add_argument("--mu-a-max", dest="mu_a_max", type=float)
    common.add_argument("--mu-b-max", dest="mu_b_max", type=float)
    common.add_argument("--alpha-over-tau", dest="alpha_over_tau", type=float,
                        help="dimensionless pulse width alpha*tau")
    common.add_argument("--tau", type=float, help="total evolution time (units of 1/J)")
    common.add_argument("--n-steps", dest="n_steps", type=int)
    common.add_argument("--seed", type=int)
    common.add_argument("--delta", type=float, help="max fractional bond disorder")
    common.add_argument("--n-samples", dest="n_samples", type=int)
    common.add_argument("--out", help="output path")
    common.add_argument("--format", choices=("csv", "json"))
    common.add_argument("--plot", action=argparse.BooleanOptionalAction, default=True,
                        help="render a PNG next to the output file")

    parser = argparse.ArgumentParser(
        prog="adiabatic-chain",
        description="Adiabatic state transfer through a gate-driven tight-binding "
                    "chain: trajectories, gap studies, fidelity sweeps. "
                    "Times in units of 1/J, energies in units of J.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    p_evolve = sub.add_parser("evolve", parents=[common],
                              help="integrate the pulse schedule and write the trajectory")
    p_evolve.set_defaults(handler=cmd_evolve)
    p_gap = sub.add_parser("gap", parents=[common],
                           help="print the minimum instantaneous gap as JSON")
    p_gap.add_argument("--n-grid", dest="n_grid", type=int)
    p_gap.set_defaults(handler=cmd_gap)
    p_fig = sub.add_parser("figure", parents=[common],
                           help="run a predefined study and write its sweep file")
    p_fig.add_argument("figure_id", choices=FIGURE_IDS, metavar="figure_id",
                       help=f"one of {', '.join(FIGURE_IDS)}")
    p_fig.add_argument("--n-grid", dest="n_grid", type=int)
    p_fig.set_defaults(handler=cmd_figure)
    p_sweep = sub.add_parser("sweep", parents=[common],
                             help="sweep one parameter and record transfer fidelities")
    p_sweep.add_argument("--param", required=True, choices=SWEEP_PARAMS)
    p_sweep.add_argument("--values", required=True,
                         help="comma-separated list of parameter values")
    p_sweep.set_defaults(handler=cmd_sweep)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        thread_budget()
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        figure_id = getattr(args, "figure_id", None)
        config = load_config(args.config, _config_overrides(args), figure_id)
        return args.handler(args, config)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
