"""Command-line front-end: solve, continue, minimize, rate-study, check-multiplier.

Exit codes: 0 success, 1 configuration or validation error, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import copy
import datetime as _dt
import json
import sys
from pathlib import Path

from .errors import CavitationError, ConfigurationError, NumericalFailure, PenaltyDomainError
from .io import write_json, write_profile_csv, write_table
from .kdv import alpha0
from .minimizer import MinimizerOptions, minimize
from .multipliers import MultiplierSpec, check_admissible
from .newton import SolverOptions, auto_period, continue_in_speed, solve_wave
from .operators import PhysicalParams
from .schemas import CSV_HEADERS
from .spectral import Grid
from .study import rate_study

DEFAULTS = {
    "gamma": 0.0,
    "delta": 1.0,
    "h0": None,
    "multiplier": "id",
    "grid": {"P": "auto", "N": 512},
    "solver": {"tolerance": None, "max_iterations": 25, "damping": 0.5, "jacobian_step": 1e-6},
    "solve": {"c": 1.05, "guess": "auto"},
    "continue": {"c_start": 1.01, "c_end": 1.05, "steps": 9},
    "minimize": {"q": 0.01, "R": None, "nu": 1.0, "tolerance": 1e-8, "max_iterations": 100000},
    "rate_study": {"speeds": [1.002, 1.005, 1.01, 1.02, 1.04]},
    "check_multiplier": {"kind": "imp", "depth": 1.0, "theta": 0.5, "csv": None,
                         "k_max": 1e4, "samples": 10000},
    "seed": 0,
}


def _merge(base, extra):
    for k, v in extra.items():
        if isinstance(v, dict) and isinstance(base.get(k), dict):
            _merge(base[k], v)
        else:
            base[k] = v
    return base


def _parse_value(text):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def apply_override(cfg, item: str):
    if "=" not in item:
        raise ConfigurationError(f"--set expects key=value, got {item!r}")
    key, value = item.split("=", 1)
    node = cfg
    parts = key.strip().split(".")
    for part in parts[:-1]:
        node = node.setdefault(part, {})
        if not isinstance(node, dict):
            raise ConfigurationError(f"--set {key}: {part} is not a section")
    node[parts[-1]] = _parse_value(value)


def load_config(path=None, overrides=()) -> dict:
    cfg = copy.deepcopy(DEFAULTS)
    if path:
        try:
            with open(path) as fh:
                _merge(cfg, json.load(fh))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigurationError(f"cannot read config {path}: {exc}") from exc
    for item in overrides:
        apply_override(cfg, item)
    return cfg


def _layer_spec(name, depth, theta=None):
    if isinstance(name, dict):
        kind = name.get("kind", "id")
        if kind in ("custom", "table"):
            return MultiplierSpec.from_csv(name["csv"], theta=float(name.get("theta", 0.0)),
                                           c_minus=name.get("c_minus"), c_plus=name.get("c_plus"))
        return _layer_spec(kind, depth, name.get("theta"))
    if name in ("id", "identity"):
        return MultiplierSpec.identity()
    if name in ("imp", "improved"):
        return MultiplierSpec.improved(depth, 0.5 if theta is None else float(theta))
    raise ConfigurationError(f"unknown multiplier {name!r} (use 'id', 'imp' or a custom table)")


def build_model(cfg):
    """Validated (params, F1, F2, multiplier description) from a config."""
    try:
        p = PhysicalParams(float(cfg["gamma"]), float(cfg["delta"]),
                           None if cfg.get("h0") is None else float(cfg["h0"]))
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ConfigurationError):
            raise
        raise ConfigurationError(f"invalid physical parameters: {exc}") from exc
    m = cfg["multiplier"]
    if isinstance(m, dict) and ("layer1" in m or "layer2" in m):
        m1, m2 = m.get("layer1", "id"), m.get("layer2", "id")
    else:
        m1 = m2 = m
    F1 = _layer_spec(m1, 1.0)
    F2 = _layer_spec(m2, 1.0 / p.delta)
    desc = {"layer1": F1.describe(), "layer2": F2.describe()}
    return p, F1, F2, desc


def _solver_options(cfg, verbose):
    s = cfg["solver"]
    return SolverOptions(tolerance=s.get("tolerance"), max_iterations=int(s["max_iterations"]),
                         damping=float(s["damping"]), jacobian_step=float(s["jacobian_step"]),
                         verbose=verbose)


def _grid_for(cfg, c, p):
    g = cfg["grid"]
    N = int(g["N"])
    auto = g.get("P", "auto") == "auto"
    P = auto_period(c, p, N) if auto else float(g["P"])
    return Grid(P, N), auto


def _header(cfg, p, desc, args):
    out = {"gamma": p.gamma, "delta": p.delta, "h0": p.h0, "multiplier": desc}
    if not args.no_timestamp:
        out["timestamp"] = _dt.datetime.now(_dt.timezone.utc).isoformat()
    return out


def cmd_solve(cfg, args, out: Path):
    p, F1, F2, desc = build_model(cfg)
    c = float(cfg["solve"]["c"])
    if not c > 1:
        raise ConfigurationError(f"solitary waves need c > 1, got c={c}")
    grid, auto = _grid_for(cfg, c, p)
    w = solve_wave(c, p, F1, F2, N=grid.N, P=grid.P, opts=_solver_options(cfg, args.verbose),
                   guess=cfg["solve"].get("guess", "auto"))
    write_profile_csv(out / "profile.csv", w.profile)
    summary = _header(cfg, p, desc, args)
    summary.update(w.summary())
    summary["P_auto"] = auto
    write_json(out / "summary.json", summary)
    return 0


def cmd_continue(cfg, args, out: Path):
    p, F1, F2, desc = build_model(cfg)
    cc = cfg["continue"]
    c0, c1, steps = float(cc["c_start"]), float(cc["c_end"]), int(cc["steps"])
    if not c0 > 1:
        raise ConfigurationError(f"continuation must start at c > 1, got {c0}")
    grid, _ = _grid_for(cfg, c0, p)
    rows = []

    def flush(w):
        name = f"wave_{len(rows):03d}.csv"
        write_profile_csv(out / name, w.profile)
        rows.append({"c": w.c, "q": w.q, "alpha": w.alpha, "amplitude": w.amplitude,
                     "residual_norm": w.residual_norm, "file": name})
        write_table(out / "family.csv", CSV_HEADERS["family"],
                    [[r[k] for k in CSV_HEADERS["family"]] for r in rows])

    branch = continue_in_speed(c0, c1, steps, p, F1, F2, _solver_options(cfg, args.verbose),
                               grid=grid, on_wave=flush)
    summary = _header(cfg, p, desc, args)
    summary.update({"count": len(rows), "stopped": branch.stopped, "stop_report": branch.stop_report,
                    "waves": rows, "N": grid.N, "P": grid.P})
    write_json(out / "summary.json", summary)
    if branch.stopped:
        print(f"branch stopped near c={branch.stop_report['c_last']:.10g}: "
              f"{branch.stop_report['last_error']}", file=sys.stderr)
    return 0


def cmd_minimize(cfg, args, out: Path):
    p, F1, F2, desc = build_model(cfg)
    mc = cfg["minimize"]
    q = float(mc["q"])
    if not q > 0:
        raise ConfigurationError(f"mass q must be positive, got {q}")
    g = cfg["grid"]
    N = int(g["N"])
    if g.get("P", "auto") == "auto":
        c_est = (1.0 - alpha0(p) * q ** (2.0 / 3.0)) ** -0.5
        P = auto_period(c_est, p, N)
    else:
        P = float(g["P"])
    opts = MinimizerOptions(tolerance=float(mc["tolerance"]), max_iterations=int(mc["max_iterations"]))
    try:
        res = minimize(P, N, q, p, F1, F2, R=mc.get("R"), nu=float(mc["nu"]), opts=opts)
    except NumericalFailure as exc:
        trace = getattr(exc, "trace", [])
        write_table(out / "trace.csv", CSV_HEADERS["trace"],
                    [[t[k] for k in CSV_HEADERS["trace"]] for t in trace])
        raise
    write_profile_csv(out / "profile.csv", res.profile)
    write_table(out / "trace.csv", CSV_HEADERS["trace"],
                [[t[k] for k in CSV_HEADERS["trace"]] for t in res.trace])
    summary = _header(cfg, p, desc, args)
    summary.update(res.summary())
    write_json(out / "result.json", summary)
    return 0


def cmd_rate_study(cfg, args, out: Path):
    p, F1, F2, desc = build_model(cfg)
    speeds = [float(c) for c in cfg["rate_study"]["speeds"]]
    if len(speeds) < 4 or min(speeds) <= 1:
        raise ConfigurationError("rate study needs at least 4 speeds, all > 1")
    study = rate_study(speeds, p, F1, F2, N=int(cfg["grid"]["N"]),
                       opts=_solver_options(cfg, args.verbose))
    write_table(out / "rates.csv", CSV_HEADERS["rates"],
                [[getattr(r, k) for k in CSV_HEADERS["rates"]] for r in study.rows])
    summary = _header(cfg, p, desc, args)
    summary.update(study.summary())
    write_json(out / "rates.json", summary)
    return 0


def cmd_check_multiplier(cfg, args, out: Path):
    m = cfg["check_multiplier"]
    kind = m.get("kind", "imp")
    theta = float(m.get("theta", 0.0 if kind in ("id", "identity") else 0.5))
    if kind in ("custom", "table"):
        if not m.get("csv"):
            raise ConfigurationError("custom multiplier needs check_multiplier.csv")
        spec = MultiplierSpec.from_csv(m["csv"], theta=theta, c_minus=m.get("c_minus"),
                                       c_plus=m.get("c_plus"))
    elif kind in ("id", "identity"):
        spec = MultiplierSpec("identity", theta=theta)
    elif kind in ("imp", "improved"):
        spec = MultiplierSpec.improved(float(m.get("depth", 1.0)), theta)
    else:
        raise ConfigurationError(f"unknown multiplier kind {kind!r}")
    report = check_admissible(spec, float(m.get("k_max", 1e4)), int(m.get("samples", 10000)))
    doc = report.to_dict()
    if not args.no_timestamp:
        doc["timestamp"] = _dt.datetime.now(_dt.timezone.utc).isoformat()
    write_json(out / "admissibility.json", doc)
    return 0


COMMANDS = {
    "solve": cmd_solve,
    "continue": cmd_continue,
    "minimize": cmd_minimize,
    "rate-study": cmd_rate_study,
    "check-multiplier": cmd_check_multiplier,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="gnwaves", description=__doc__.splitlines()[0])
    ap.add_argument("command", choices=sorted(COMMANDS))
    ap.add_argument("--config", help="JSON run configuration")
    ap.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                    help="override a config entry, dotted keys for sections (repeatable)")
    ap.add_argument("--out-dir", default=".", help="directory for CSV/JSON output")
    ap.add_argument("--verbose", action="store_true", help="JSON-lines solver trace on stderr")
    ap.add_argument("--no-timestamp", action="store_true", help="omit the timestamp field")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config, args.set)
        return COMMANDS[args.command](cfg, args, Path(args.out_dir))
    except ConfigurationError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 1
    except (NumericalFailure, CavitationError, PenaltyDomainError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
