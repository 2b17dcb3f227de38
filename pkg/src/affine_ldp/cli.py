"""Command-line front end: parse model parameters, run an analysis, write CSV or JSON."""

from __future__ import annotations

import argparse
import csv
import enum
import io
import json
import math
import sys
from dataclasses import dataclass
from typing import Any, Sequence

import numpy as np

from .asymptotics import OptionKind, implied_var_infinity, option_asymptote
from .limit import boundary_limits, rate
from .mgf import critical_moments, domain_t, explosion_time, lambda_t
from .montecarlo import SimConfig, mgf_estimate, simulate_terminal
from .params import AdmissibilityError, ModelParams

COMMANDS = ("domain", "rate", "smile", "price-asymptote", "mc-check", "selftest")

COLUMNS = {
    "rate": ["x", "lambda_star", "u_star", "region"],
    "smile": ["x", "var_inf", "vol_inf", "selector", "region", "svi_var"],
    "domain": ["class", "u_minus", "u_plus", "lower_t", "upper_t"],
    "price-asymptote": ["x", "put", "call", "covered_call", "put_regime", "call_regime"],
    "mc-check": ["t", "x_or_u", "estimate", "std_err", "target"],
    "selftest": ["check", "status", "detail"],
}

_MODEL_KEYS = ("a", "b", "alpha", "beta", "rho", "v0")
_DEFAULTS: dict[str, Any] = {
    "a": 0.0, "b": 0.0, "alpha": 1.0, "beta": 0.0, "rho": 0.0, "v0": 1.0,
    "x-min": -0.5, "x-max": 0.5, "n": 201, "t": 10.0,
    "out": None, "format": "csv", "seed": 0, "paths": 20_000, "dt": 2.0 ** -6,
}


@dataclass(frozen=True)
class RunConfig:
    params: ModelParams
    command: str
    x_min: float = -0.5
    x_max: float = 0.5
    n_points: int = 201
    t: float | None = 10.0
    output_path: str | None = None
    format: str = "csv"
    seed: int = 0
    n_paths: int = 20_000
    dt: float = 2.0 ** -6

    def __post_init__(self) -> None:
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command {self.command!r}")
        if not self.x_min < self.x_max:
            raise ValueError("x-min must be less than x-max")
        if self.n_points < 2:
            raise ValueError("n must be at least 2")
        if self.t is not None and not self.t > 0:
            raise ValueError("t must be positive")
        if self.format not in ("csv", "json"):
            raise ValueError("format must be csv or json")
        if self.n_paths < 2:
            raise ValueError("paths must be at least 2")
        if not self.dt > 0:
            raise ValueError("dt must be positive")

    def grid(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.n_points)


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="affine-ldp",
        description="Large-maturity asymptotics of affine stochastic volatility models.")
    ap.add_argument("command", choices=COMMANDS)
    for key in _MODEL_KEYS:
        ap.add_argument(f"--{key}", type=float, default=None)
    ap.add_argument("--x-min", type=float, default=None)
    ap.add_argument("--x-max", type=float, default=None)
    ap.add_argument("--n", type=int, default=None, help="number of grid points")
    ap.add_argument("--t", type=float, default=None, help="maturity for domain and mc-check")
    ap.add_argument("--out", default=None, help="output file (default: stdout)")
    ap.add_argument("--format", choices=("csv", "json"), default=None)
    ap.add_argument("--config", default=None, help="JSON file with the same keys as the flags")
    ap.add_argument("--seed", type=int, default=None)
    ap.add_argument("--paths", type=int, default=None, help="Monte Carlo paths")
    ap.add_argument("--dt", type=float, default=None, help="Monte Carlo time step")
    return ap


def _load_config_file(path: str, ap: argparse.ArgumentParser) -> dict[str, Any]:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        ap.error(f"cannot read config {path}: {exc}")
    if not isinstance(doc, dict):
        ap.error("config must be a JSON object")
    out = {}
    for key, value in doc.items():
        norm = key.replace("_", "-")
        if norm not in _DEFAULTS:
            ap.error(f"unknown config key {key!r}")
        out[norm] = value
    return out


def parse_config(argv: Sequence[str]) -> RunConfig:
    """Parse argv into a RunConfig; usage errors exit with status 2.

    Precedence is command line, then ``--config`` file, then defaults.
    """
    ap = _build_parser()
    ns = ap.parse_args(list(argv))
    merged = dict(_DEFAULTS)
    if ns.config:
        merged.update(_load_config_file(ns.config, ap))
    for key in _DEFAULTS:
        value = getattr(ns, key.replace("-", "_"))
        if value is not None:
            merged[key] = value
    try:
        params = ModelParams(**{k: merged[k] for k in _MODEL_KEYS})
        return RunConfig(
            params=params, command=ns.command,
            x_min=float(merged["x-min"]), x_max=float(merged["x-max"]),
            n_points=int(merged["n"]), t=float(merged["t"]),
            output_path=merged["out"], format=merged["format"],
            seed=int(merged["seed"]), n_paths=int(merged["paths"]), dt=float(merged["dt"]),
        )
    except (AdmissibilityError, ValueError, TypeError) as exc:
        ap.error(str(exc))
    raise AssertionError("unreachable")


def _rows_rate(cfg: RunConfig) -> list[dict]:
    L = boundary_limits(cfg.params)
    rows = []
    for x in cfg.grid():
        ev = rate(float(x), L)
        rows.append({"x": float(x), "lambda_star": ev.value, "u_star": ev.u_star,
                     "region": ev.region})
    return rows


def _rows_smile(cfg: RunConfig) -> list[dict]:
    L = boundary_limits(cfg.params)
    rows = []
    for x in cfg.grid():
        sp = implied_var_infinity(float(x), L)
        rows.append({"x": sp.x, "var_inf": sp.var_inf, "vol_inf": sp.vol_inf,
                     "selector": sp.selector, "region": sp.region, "svi_var": sp.svi_var})
    return rows


def _rows_domain(cfg: RunConfig) -> list[dict]:
    p = cfg.params
    cm = critical_moments(p)
    dom = domain_t(cfg.t, p)
    return [{"class": dom.domain_class, "u_minus": cm.u_minus, "u_plus": cm.u_plus,
             "lower_t": dom.exact_lower, "upper_t": dom.exact_upper}]


def _rows_price(cfg: RunConfig) -> list[dict]:
    L = boundary_limits(cfg.params)
    rows = []
    for x in cfg.grid():
        x = float(x)
        put = option_asymptote(x, L, OptionKind.PUT)
        call = option_asymptote(x, L, OptionKind.CALL)
        cc = None
        if L.dlam0_plus <= x <= L.dlam1_minus:
            cc = option_asymptote(x, L, OptionKind.COVERED_CALL).exponent
        rows.append({"x": x, "put": put.exponent, "call": call.exponent, "covered_call": cc,
                     "put_regime": put.regime, "call_regime": call.regime})
    return rows


def _rows_mc(cfg: RunConfig) -> list[dict]:
    """Monte Carlo log-MGF at time t for u on the grid, against the closed form."""
    p, t = cfg.params, cfg.t
    sim = SimConfig(n_paths=cfg.n_paths, dt=min(cfg.dt, t), t_final=t, seed=cfg.seed)
    x, _ = simulate_terminal(p, sim)
    logret = x - p.x0
    rows = []
    for u in cfg.grid():
        u = float(u)
        if explosion_time(u, p) <= t:
            rows.append({"t": t, "x_or_u": u, "estimate": None, "std_err": None,
                         "target": math.inf})
            continue
        est = mgf_estimate(u, logret)
        rows.append({"t": t, "x_or_u": u, "estimate": est.value, "std_err": est.std_error,
                     "target": lambda_t(u, t, p)})
    return rows


def build_rows(cfg: RunConfig) -> list[dict]:
    if cfg.command == "selftest":
        from .selftest import run_checks
        return [{"check": r.name, "status": "PASS" if r.passed else "FAIL", "detail": r.detail}
                for r in run_checks()]
    return {
        "rate": _rows_rate, "smile": _rows_smile, "domain": _rows_domain,
        "price-asymptote": _rows_price, "mc-check": _rows_mc,
    }[cfg.command](cfg)


def _csv_cell(v: Any) -> str:
    if v is None:
        return ""
    if isinstance(v, enum.Enum):
        return str(v.value)
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        return "%.17g" % v
    return str(v)


def _json_cell(v: Any) -> Any:
    if isinstance(v, enum.Enum):
        return v.value
    if isinstance(v, float):
        if not math.isfinite(v):
            return "nan" if math.isnan(v) else ("inf" if v > 0 else "-inf")
        # round-trips like the 17-digit CSV text
        return float("%.17g" % v)
    return v


def format_report(rows: list[dict], cfg: RunConfig) -> str:
    cols = COLUMNS[cfg.command]
    if cfg.format == "json":
        doc = [{c: _json_cell(r.get(c)) for c in cols} for r in rows]
        return json.dumps(doc, indent=1) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols)
    for r in rows:
        w.writerow([_csv_cell(r.get(c)) for c in cols])
    return buf.getvalue()


def emit_report(rows: list[dict], cfg: RunConfig) -> int:
    """Write rows to cfg.output_path (stdout when None); returns the exit status."""
    text = format_report(rows, cfg)
    if cfg.output_path is None or cfg.output_path == "-":
        sys.stdout.write(text)
        return 0
    try:
        with open(cfg.output_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        print(f"affine-ldp: cannot write {cfg.output_path}: {exc}", file=sys.stderr)
        return 1
    return 0


def main(argv: Sequence[str] | None = None) -> int:
    cfg = parse_config(sys.argv[1:] if argv is None else argv)
    try:
        rows = build_rows(cfg)
    except (ValueError, ArithmeticError) as exc:
        print(f"affine-ldp: {exc}", file=sys.stderr)
        return 1
    status = emit_report(rows, cfg)
    if cfg.command == "selftest" and status == 0:
        return 0 if all(r["status"] == "PASS" for r in rows) else 1
    return status


__all__ = ["COLUMNS", "RunConfig", "build_rows", "emit_report", "format_report",
           "main", "parse_config"]
