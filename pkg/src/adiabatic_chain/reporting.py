"""Serialization of sweeps and trajectories: CSV with metadata header, JSON.

All files are UTF-8 with LF line endings.  Numeric fields carry 17
significant digits, so every double round-trips exactly and rerunning with
identical parameters and seed reproduces output files byte for byte (the
in-memory creation timestamp is deliberately never serialized).
"""

import json
from pathlib import Path

from .experiments import SweepResult
from .propagator import Trajectory


def format_float(x: float) -> str:
    return f"{float(x):.17g}"


def _format_value(v) -> str:
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        return format_float(v)
    if isinstance(v, (tuple, list)):
        return ",".join(_format_value(x) for x in v)
    return str(v)


def sweep_csv_bytes(result: SweepResult) -> bytes:
    lines = [f"# {key} = {_format_value(value)}" for key, value in result.metadata.items()]
    lines.append(",".join(result.columns))
    for row in result.rows:
        lines.append(",".join(format_float(x) for x in row))
    return ("\n".join(lines) + "\n").encode("utf-8")


def write_sweep_csv(result: SweepResult, path) -> None:
    Path(path).write_bytes(sweep_csv_bytes(result))


def sweep_json_bytes(result: SweepResult) -> bytes:
    payload = {
        "metadata": {k: list(v) if isinstance(v, tuple) else v
                     for k, v in result.metadata.items()},
        "columns": list(result.columns),
        "rows": [list(row) for row in result.rows],
    }
    return (json.dumps(payload, indent=2) + "\n").encode("utf-8")


def write_sweep_json(result: SweepResult, path) -> None:
    Path(path).write_bytes(sweep_json_bytes(result))


def trajectory_csv_bytes(traj: Trajectory) -> bytes:
    n = traj.populations.shape[1]
    lines = ["t," + ",".join(f"p{j + 1}" for j in range(n))]
    for t, row in zip(traj.times, traj.populations):
        lines.append(format_float(t) + "," + ",".join(format_float(p) for p in row))
    return ("\n".join(lines) + "\n").encode("utf-8")


def write_trajectory_csv(traj: Trajectory, path) -> None:
    Path(path).write_bytes(trajectory_csv_bytes(traj))


def trajectory_json_bytes(traj: Trajectory, params: dict | None = None) -> bytes:
    payload = {
        "fidelity": traj.fidelity,
        "times": traj.times.tolist(),
        "populations": traj.populations.tolist(),
        "final_state_re": traj.final_state.real.tolist(),
        "final_state_im": traj.final_state.imag.tolist(),
    }
    if params:
        payload["parameters"] = params
    return (json.dumps(payload, indent=2) + "\n").encode("utf-8")


def write_json_sidecar(path, payload: dict) -> None:
    Path(path).write_bytes((json.dumps(payload, indent=2) + "\n").encode("utf-8"))
