"""Deterministic JSON, CSV and plot-data output for library results.

Floats are written with 17 significant digits, which round-trips every
binary64 value; JSON objects have sorted keys.  The same input therefore
always produces byte-identical output.
"""
from __future__ import annotations

import json
import math
from dataclasses import fields, is_dataclass
from pathlib import Path

import numpy as np

from .critical_ode import CriticalTrajectory
from .errors import CurveError
from .geometry import HalfPlanePoint, ProfileCurve
from .maximizer import MaximizerReport
from .shooting import EndpointRecord
from .spectral import SpectralResult

TRAJECTORY_COLUMNS = ("t", "v", "vp", "theta", "F", "G")


def format_float(x: float) -> str:
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    s = format(x, ".17g")
    if not any(ch in s for ch in ".en"):
        s += ".0"
    return s


def _dump(obj, out: list):
    if obj is None:
        out.append("null")
    elif isinstance(obj, (bool, np.bool_)):
        out.append("true" if obj else "false")
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        out.append(format_float(float(obj)))
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    elif isinstance(obj, dict):
        out.append("{")
        for k, key in enumerate(sorted(obj)):
            if k:
                out.append(", ")
            out.append(json.dumps(str(key)))
            out.append(": ")
            _dump(obj[key], out)
        out.append("}")
    elif isinstance(obj, (list, tuple, np.ndarray)):
        out.append("[")
        for k, item in enumerate(obj):
            if k:
                out.append(", ")
            _dump(item, out)
        out.append("]")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj) -> str:
    """JSON text with sorted keys and 17-digit floats, newline terminated."""
    out: list[str] = []
    _dump(to_plain(obj), out)
    return "".join(out) + "\n"


# ----------------------------------------------------------------- plain forms

def curve_to_dict(curve: ProfileCurve) -> dict:
    return {"p": list(curve.p), "q": list(curve.q), "n": curve.n,
            "samples": curve.samples.tolist()}


def curve_from_dict(data: dict) -> ProfileCurve:
    try:
        samples = np.asarray(data["samples"], dtype=float)
        p = tuple(map(float, data.get("p", samples[0])))
        q = tuple(map(float, data.get("q", samples[-1])))
    except (KeyError, TypeError, ValueError) as exc:
        raise CurveError(f"malformed curve data: {exc}") from exc
    if samples.ndim != 2 or samples.shape[1] != 2:
        raise CurveError("samples must be a list of [F, G] pairs")
    if "n" in data and int(data["n"]) != samples.shape[0] - 1:
        raise CurveError(f"n={data['n']} does not match {samples.shape[0]} samples")
    return ProfileCurve(samples, p, q)


def trajectory_to_dict(traj: CriticalTrajectory) -> dict:
    from .critical_ode import berger_residual, guard_report
    cols = trajectory_columns(traj)
    return {"theta0": traj.theta0, "lambda": traj.lam, "p": list(traj.p), "L": traj.L,
            "endpoint": list(traj.endpoint), "steps": traj.nsteps,
            "berger_residual": berger_residual(traj), "guards": guard_report(traj),
            **{k: v.tolist() for k, v in cols.items()}}


def trajectory_columns(traj: CriticalTrajectory) -> dict:
    return {"t": traj.grid, "v": traj.states[:, 0], "vp": traj.states[:, 1],
            "theta": traj.states[:, 2], "F": traj.states[:, 3], "G": traj.states[:, 4]}


def to_plain(obj):
    """Library result -> nested dicts/lists of builtins."""
    if isinstance(obj, ProfileCurve):
        return curve_to_dict(obj)
    if isinstance(obj, HalfPlanePoint):
        return [obj.x, obj.y]
    if isinstance(obj, SpectralResult):
        return {"lambda1": obj.lambda1, "lambda2": obj.lambda2, "phi": obj.phi.tolist(),
                "normalization": obj.normalization, "mesh_size": obj.mesh_size}
    if isinstance(obj, CriticalTrajectory):
        return trajectory_to_dict(obj)
    if isinstance(obj, EndpointRecord):
        return {"theta0": obj.theta0, "lambda": obj.lam, "endpoint": [obj.endpoint.x, obj.endpoint.y],
                "iterations": obj.iterations, "L": obj.trajectory.L, "xy": list(obj.xy)}
    if isinstance(obj, MaximizerReport):
        match = None
        if obj.shooting_match is not None:
            theta, lam, dist = obj.shooting_match
            match = {"theta0": theta, "lambda": lam, "hausdorff": dist,
                     "relative_gap": obj.lambda1 / lam - 1.0}
        return {"curve": curve_to_dict(obj.curve), "lambda1": obj.lambda1,
                "Lambda_baseline": obj.Lambda_baseline, "el_residual": obj.el_residual,
                "shooting_match": match, "converged": obj.converged,
                "iterations": obj.iterations, "grad_norm": obj.grad_norm,
                "moves_accepted": obj.moves_accepted, "notes": list(obj.notes)}
    if isinstance(obj, dict):
        return {str(k): to_plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if is_dataclass(obj):
        return {f.name: to_plain(getattr(obj, f.name)) for f in fields(obj)}
    return obj


# ----------------------------------------------------------------- files

def read_curve(path) -> ProfileCurve:
    with open(path, encoding="utf-8") as fh:
        return curve_from_dict(json.load(fh))


def write_text(path, text: str):
    Path(path).write_text(text, encoding="utf-8")


def csv_text(columns: dict) -> str:
    """Header row plus one row per sample; all columns must have equal length."""
    names = list(columns)
    data = [np.asarray(columns[k], dtype=float) for k in names]
    rows = [",".join(names)]
    for i in range(len(data[0])):
        rows.append(",".join(format_float(col[i]) for col in data))
    return "\n".join(rows) + "\n"


def curve_csv(curve: ProfileCurve) -> str:
    return csv_text({"t": curve.t, "F": curve.F, "G": curve.G})


def trajectory_csv(traj: CriticalTrajectory) -> str:
    return csv_text(trajectory_columns(traj))


def write_plot_data(prefix, t, fields_: dict) -> list[Path]:
    """One two-column ``t value`` file per field, named ``<prefix>_<field>.dat``."""
    written = []
    t = np.asarray(t, dtype=float)
    for name, values in fields_.items():
        values = np.asarray(values, dtype=float)
        path = Path(f"{prefix}_{name}.dat")
        lines = [f"# t {name}"]
        lines += [f"{format_float(a)} {format_float(b)}" for a, b in zip(t, values)]
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        written.append(path)
    return written
