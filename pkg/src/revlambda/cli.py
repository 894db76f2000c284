"""Command-line interface.

Exit codes: 0 success, 1 runtime or guard error, 2 usage error.
"""
from __future__ import annotations

import argparse
import math
import re
import sys
from dataclasses import dataclass, field

from . import serialize
from .critical_ode import DEFAULT_TOL, endpoint_map, integrate_critical, decode
from .errors import RevLambdaError
from .geometry import CircleSpec, HalfPlanePoint, resample
from .maximizer import (ChordReplace, Inversion, OptimizerConfig, Reparametrize,
                        disc_type_bound, improvement_move_audit, log_extrapolate, optimize)
from .reference_spectra import annulus_lambda1, disc_lambda1
from .shooting import scan_runs, solve_boundary, uniqueness_scan
from .spectral import lambda1


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    params: dict = field(default_factory=dict)
    output: str | None = None
    format: str = "json"
    plot: str | None = None
    curve_out: str | None = None


def _positive(name):
    def conv(text):
        try:
            val = float(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{name} must be a number") from None
        if not val > 0:
            raise argparse.ArgumentTypeError(f"{name} must be > 0")
        return val
    return conv


def _mesh(text):
    try:
        val = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("n must be an integer") from None
    if val < 2:
        raise argparse.ArgumentTypeError("n ≥ 2")
    return val


class _Parser(argparse.ArgumentParser):
    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        # accept values such as -1.5e-08 as numbers, not as option names
        self._negative_number_matcher = re.compile(r"^-(\d+\.?\d*|\.\d+)([eE][-+]?\d+)?$")

    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("-o", "--output", help="write the main result here instead of stdout")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--plot", metavar="PREFIX", help="write two-column plot data files PREFIX_<field>.dat")

    ap = _Parser(prog="revlambda", description="First Dirichlet eigenvalues of surfaces of revolution.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    ref = sub.add_parser("refspec", help="closed-form disc and annulus eigenvalues")
    kind = ref.add_subparsers(dest="kind", required=True, parser_class=_Parser)
    d = kind.add_parser("disc", parents=[common])
    d.add_argument("--R", type=_positive("R"), required=True)
    a = kind.add_parser("annulus", parents=[common])
    a.add_argument("--a", type=_positive("a"), required=True)
    a.add_argument("--b", type=_positive("b"), required=True)

    e = sub.add_parser("eig", help="eigenvalues of a profile curve", parents=[common])
    e.add_argument("--curve", required=True, help="curve JSON file")
    e.add_argument("--n", type=_mesh, help="resample to n elements (default: as in the file)")
    e.add_argument("--rtol", type=_positive("rtol"), default=1e-12)

    s = sub.add_parser("shoot", help="integrate the critical initial value problem", parents=[common])
    s.add_argument("--theta", type=float, required=True)
    s.add_argument("--lambda", dest="lam", type=_positive("lambda"), required=True)
    s.add_argument("--p1", type=_positive("p1"), required=True)
    s.add_argument("--p2", type=float, required=True)
    s.add_argument("--tol", type=_positive("tol"), default=DEFAULT_TOL)

    m = sub.add_parser("phimap", help="endpoint map at encoded parameters (x, y)", parents=[common])
    m.add_argument("--x", type=float, required=True)
    m.add_argument("--y", type=float, required=True)
    m.add_argument("--p1", type=_positive("p1"), required=True)
    m.add_argument("--p2", type=float, required=True)
    m.add_argument("--B", type=_positive("B"))
    m.add_argument("--tol", type=_positive("tol"), default=DEFAULT_TOL)

    for name, text in (("invert", "critical curve from p to q by shooting"),
                       ("scan", "shooting from several initial angles")):
        c = sub.add_parser(name, help=text, parents=[common])
        c.add_argument("--p1", type=_positive("p1"), required=True)
        c.add_argument("--p2", type=float, required=True)
        c.add_argument("--qx", type=_positive("qx"), required=True)
        c.add_argument("--qy", type=float, required=True)
        c.add_argument("--B", type=_positive("B"))
        c.add_argument("--tol", type=_positive("tol"), default=DEFAULT_TOL)
        if name == "scan":
            c.add_argument("--m", type=int, default=8)
            c.add_argument("--class-tol", type=_positive("class-tol"), default=1e-6)

    x = sub.add_parser("maximize", help="maximize the eigenvalue between p and q", parents=[common])
    x.add_argument("--p1", type=_positive("p1"), required=True)
    x.add_argument("--p2", type=float, required=True)
    x.add_argument("--qx", type=_positive("qx"), required=True)
    x.add_argument("--qy", type=float, required=True)
    x.add_argument("--n", type=_mesh, required=True)
    x.add_argument("--gtol", type=_positive("gtol"), default=OptimizerConfig.gtol)
    x.add_argument("--rtol", type=_positive("rtol"), default=OptimizerConfig.rtol)
    x.add_argument("--maxiter", type=int, default=OptimizerConfig.maxiter)
    x.add_argument("--init", choices=("chord", "outward", "inward"), default="chord")
    x.add_argument("--modes", type=int, default=OptimizerConfig.modes)
    x.add_argument("--no-shooting", action="store_true", help="skip the comparison with shooting")
    x.add_argument("--curve-out", help="CSV dump t,F,G of the optimized curve")

    u = sub.add_parser("audit", help="improvement moves and the disc-type family")
    what = u.add_subparsers(dest="kind", required=True, parser_class=_Parser)
    mv = what.add_parser("move", parents=[common])
    mv.add_argument("--curve", required=True)
    mv.add_argument("--move", choices=("reparam", "invert", "chord"), required=True)
    mv.add_argument("--i1", type=int)
    mv.add_argument("--i2", type=int)
    mv.add_argument("--cx", type=_positive("cx"))
    mv.add_argument("--cy", type=float)
    mv.add_argument("--r", type=_positive("r"))
    dc = what.add_parser("disc", parents=[common])
    dc.add_argument("--R", type=_positive("R"), required=True)
    dc.add_argument("--d", type=_positive("d"), nargs="+", required=True)
    dc.add_argument("--n", type=_mesh, default=2048)
    return ap


def parse_args(argv) -> RunConfig:
    """Validated :class:`RunConfig`; raises :class:`UsageError` on bad input."""
    ns = build_parser().parse_args(argv)
    params = {k: v for k, v in vars(ns).items()
              if k not in ("command", "output", "format", "plot", "curve_out")}
    cfg = RunConfig(ns.command, params, ns.output, ns.format, ns.plot, getattr(ns, "curve_out", None))
    _validate(cfg)
    return cfg


def _validate(cfg: RunConfig):
    p = cfg.params
    if cfg.command == "scan" and p["m"] < 1:
        raise UsageError("m ≥ 1")
    if cfg.command == "maximize":
        if p["n"] < 32:
            raise UsageError("maximize needs n ≥ 32")
        if p["maxiter"] < 0 or p["modes"] < 1:
            raise UsageError("maxiter ≥ 0 and modes ≥ 1")
    if cfg.command == "audit" and p["kind"] == "move":
        if p["move"] in ("invert", "chord") and (p["i1"] is None or p["i2"] is None):
            raise UsageError(f"--move {p['move']} needs --i1 and --i2")
        if p["move"] == "invert" and None in (p["cx"], p["cy"], p["r"]):
            raise UsageError("--move invert needs --cx, --cy and --r")
    if cfg.command == "audit" and p["kind"] == "disc":
        if any(d >= p["R"] for d in p["d"]):
            raise UsageError("every d must be below R")


# ----------------------------------------------------------------- commands

def _point(x, y):
    return HalfPlanePoint(x, y)


def run(cfg: RunConfig):
    """Execute the command; returns ``(result, csv_columns, plot_t, plot_fields)``."""
    p = cfg.params
    cmd = cfg.command
    if cmd == "refspec":
        if p["kind"] == "disc":
            return {"R": p["R"], "lambda1": disc_lambda1(p["R"])}, None, None, None
        if not p["a"] < p["b"]:
            raise UsageError("need a < b")
        return {"a": p["a"], "b": p["b"], "lambda1": annulus_lambda1((p["a"], p["b"]))}, None, None, None
    if cmd == "eig":
        curve = serialize.read_curve(p["curve"])
        if p["n"] is not None and p["n"] != curve.n:
            curve = resample(curve, p["n"])
        spec = lambda1(curve, p["rtol"])
        cols = {"t": curve.t, "F": curve.F, "G": curve.G, "phi": spec.phi}
        return spec, cols, curve.t, {"phi": spec.phi}
    if cmd == "shoot":
        traj = integrate_critical(p["theta"], p["lam"], _point(p["p1"], p["p2"]), p["tol"])
        cols = serialize.trajectory_columns(traj)
        return traj, cols, traj.grid, {k: v for k, v in cols.items() if k != "t"}
    if cmd == "phimap":
        end = endpoint_map(p["x"], p["y"], _point(p["p1"], p["p2"]), p["B"], p["tol"])
        sigma, theta0 = decode(p["x"], p["y"])
        lam = math.inf if sigma == 0 else 1.0 / sigma ** 2
        return {"x": p["x"], "y": p["y"], "theta0": theta0, "lambda": lam,
                "endpoint": [end.x, end.y]}, None, None, None
    if cmd == "invert":
        rec = solve_boundary(_point(p["p1"], p["p2"]), _point(p["qx"], p["qy"]), p["B"], tol=p["tol"])
        cols = serialize.trajectory_columns(rec.trajectory)
        return rec, cols, rec.trajectory.grid, {k: v for k, v in cols.items() if k != "t"}
    if cmd == "scan":
        P, Q = _point(p["p1"], p["p2"]), _point(p["qx"], p["qy"])
        runs = scan_runs(P, Q, p["B"], p["m"], p["tol"])
        classes = uniqueness_scan(P, Q, p["B"], p["m"], p["class_tol"], p["tol"])
        failures = [str(r) for r in runs if isinstance(r, Exception)]
        cols = {"theta0": [c.theta0 for c in classes], "lambda": [c.lam for c in classes]}
        return {"m": p["m"], "classes": classes, "failures": failures}, cols, None, None
    if cmd == "maximize":
        config = OptimizerConfig(gtol=p["gtol"], rtol=p["rtol"], maxiter=p["maxiter"],
                                 modes=p["modes"], init=p["init"],
                                 match_shooting=not p["no_shooting"])
        rep = optimize(_point(p["p1"], p["p2"]), _point(p["qx"], p["qy"]), p["n"], config)
        curve = rep.curve
        return rep, {"t": curve.t, "F": curve.F, "G": curve.G}, curve.t, {"F": curve.F, "G": curve.G}
    if cmd == "audit":
        if p["kind"] == "disc":
            vals = disc_type_bound(p["R"], p["d"], p["n"])
            out = {"R": p["R"], "d": p["d"], "lambda1": vals, "disc_lambda1": disc_lambda1(p["R"])}
            if len(vals) >= 3:
                out["extrapolated"] = log_extrapolate(p["d"], vals)
            return out, {"d": p["d"], "lambda1": vals}, None, None
        curve = serialize.read_curve(p["curve"])
        if p["move"] == "reparam":
            move = Reparametrize()
        elif p["move"] == "chord":
            move = ChordReplace(p["i1"], p["i2"])
        else:
            move = Inversion(CircleSpec(_point(p["cx"], p["cy"]), p["r"]), p["i1"], p["i2"])
        before, after = improvement_move_audit(curve, move)
        return {"move": p["move"], "lambda_before": before, "lambda_after": after}, None, None, None
    raise UsageError(f"unknown command {cmd}")


def emit(result, cfg: RunConfig, cols=None, plot_t=None, plot_fields=None, stream=None):
    """Serialize ``result`` per ``cfg`` to its output path or ``stream``."""
    stream = sys.stdout if stream is None else stream
    if cfg.format == "csv":
        if cols is None:
            raise UsageError(f"{cfg.command} has no CSV form")
        text = serialize.csv_text(cols)
    else:
        text = serialize.dumps(result)
    if cfg.output:
        serialize.write_text(cfg.output, text)
    else:
        stream.write(text)
    if cfg.curve_out and isinstance(result, serialize.MaximizerReport):
        serialize.write_text(cfg.curve_out, serialize.curve_csv(result.curve))
    if cfg.plot:
        if plot_t is None:
            raise UsageError(f"{cfg.command} has no plot data")
        serialize.write_plot_data(cfg.plot, plot_t, plot_fields)


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        cfg = parse_args(argv)
        result, cols, plot_t, plot_fields = run(cfg)
        emit(result, cfg, cols, plot_t, plot_fields)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return 2
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    except (RevLambdaError, OSError, ValueError) as exc:
        print(f"revlambda: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
