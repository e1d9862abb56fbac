"""Configuration files, snapshot CSVs, wave reports and run manifests."""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
from pathlib import Path

import numpy as np

from .core import FlowState, SimulationConfig
from .diagnostics import WaveReport
from .errors import ConfigError

# key -> (SimulationConfig attribute, parser)
_FLOAT = float


def _int(text):
    value = float(text)
    if value != int(value):
        raise ValueError(f"expected an integer, got {text}")
    return int(value)


def _optional_float(text):
    return None if text.lower() in ("none", "auto") else float(text)


KEYS = {
    "model": str,
    "x_left": _FLOAT,
    "x_right": _FLOAT,
    "n_cells": _int,
    "dt": _FLOAT,
    "t_end": _FLOAT,
    "P_th": _FLOAT,
    "lambda": _FLOAT,
    "yF0": _FLOAT,
    "yO0": _FLOAT,
    "yN0": _FLOAT,
    "yP0": _FLOAT,
    "theta0": _FLOAT,
    "ignition_cells": _int,
    "ignition_theta": _FLOAT,
    "u_f": _FLOAT,
    "delta": _FLOAT,
    "rho_u": _optional_float,
    "arrhenius_A": _FLOAT,
    "arrhenius_Ta": _FLOAT,
    "arrhenius_theta_cut": _optional_float,
    "snapshot_every": _int,
    "out_dir": str,
}

REQUIRED = ("model", "x_right", "n_cells", "dt", "t_end", "yF0", "yO0", "yN0", "yP0", "theta0")

# Keys whose value must be strictly positive / non-negative, checked at parse time
# so the error carries the offending line.
_POSITIVE = {"n_cells", "dt", "P_th", "theta0", "ignition_theta", "delta", "snapshot_every"}
_NON_NEGATIVE = {"t_end", "lambda", "u_f", "arrhenius_A", "ignition_cells",
                 "yF0", "yO0", "yN0", "yP0"}

PRESETS = {
    "paper-sec4": {
        "model": "primitive",
        "x_left": 0.0,
        "x_right": 0.1,
        "n_cells": 2048,
        "dt": 2.0e-4,
        "t_end": 1.0,
        "P_th": 101325.0,
        "lambda": 0.005,
        "yF0": 0.4,
        "yO0": 0.4,
        "yN0": 0.2,
        "yP0": 0.0,
        "theta0": 300.0,
        "ignition_cells": 2,
        "ignition_theta": 1500.0,
        "u_f": 0.0,
        "delta": 1.0e-4,
        "rho_u": None,
        "arrhenius_A": 1.0e4,
        "arrhenius_Ta": 900.0,
        "arrhenius_theta_cut": 400.0,
        "snapshot_every": 100,
        "out_dir": "out",
    },
}


def _config_from_values(values: dict) -> SimulationConfig:
    kw = {k: v for k, v in values.items() if k not in ("lambda", "yF0", "yO0", "yN0", "yP0")}
    if "lambda" in values:
        kw["lam"] = values["lambda"]
    kw["y0"] = (values["yF0"], values["yO0"], values["yP0"], values["yN0"])
    return SimulationConfig(**kw)


def preset_config(name: str, **overrides) -> SimulationConfig:
    """A named preset, optionally with some keys replaced (config-file key names)."""
    if name not in PRESETS:
        raise ConfigError(f"unknown preset {name!r}")
    values = dict(PRESETS[name])
    unknown = set(overrides) - set(KEYS)
    if unknown:
        raise ConfigError(f"unknown keys {sorted(unknown)}")
    values.update(overrides)
    return _config_from_values(values)


def parse_config(text: str) -> SimulationConfig:
    """Build a validated configuration from ``key = value`` lines.

    ``#`` starts a comment.  ``preset = <name>`` loads defaults that later keys
    override; without a preset the keys in :data:`REQUIRED` must be given.
    """
    values: dict = {}
    lines: dict = {}
    preset = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {raw.strip()!r}", lineno)
        key, _, value = (part.strip() for part in line.partition("="))
        if key in lines or (key == "preset" and preset is not None):
            raise ConfigError(f"duplicate key {key!r}", lineno)
        if key == "preset":
            if value not in PRESETS:
                raise ConfigError(f"unknown preset {value!r}", lineno)
            preset = value
            lines[key] = lineno
            continue
        if key not in KEYS:
            raise ConfigError(f"unknown key {key!r}", lineno)
        try:
            parsed = KEYS[key](value)
        except ValueError as exc:
            raise ConfigError(f"bad value for {key}: {exc}", lineno) from exc
        if isinstance(parsed, float) and not math.isfinite(parsed):
            raise ConfigError(f"{key} must be finite", lineno)
        if key in _POSITIVE and not parsed > 0:
            raise ConfigError(f"{key} must be positive, got {value}", lineno)
        if key in _NON_NEGATIVE and parsed < 0:
            raise ConfigError(f"{key} must be non-negative, got {value}", lineno)
        values[key] = parsed
        lines[key] = lineno

    if preset is None:
        if "model" not in values:
            raise ConfigError("model selector required")
        missing = [k for k in REQUIRED if k not in values]
        if missing:
            raise ConfigError(f"missing required keys {missing}")
        merged = values
    else:
        merged = dict(PRESETS[preset])
        merged.update(values)
    try:
        return _config_from_values(merged)
    except ConfigError as exc:
        raise ConfigError(str(exc), _guess_line(str(exc), lines)) from exc


def _guess_line(message, lines):
    hits = [ln for key, ln in lines.items() if key in message]
    return min(hits) if hits else None


def read_config(path) -> SimulationConfig:
    return parse_config(Path(path).read_text(encoding="utf-8"))


def _fmt(value) -> str:
    if value is None:
        return "none"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def format_config(cfg: SimulationConfig) -> str:
    """Fully resolved config text; ``parse_config`` of it reproduces ``cfg``."""
    values = {
        "model": cfg.model,
        "x_left": cfg.x_left,
        "x_right": cfg.x_right,
        "n_cells": cfg.n_cells,
        "dt": cfg.dt,
        "t_end": cfg.t_end,
        "P_th": cfg.P_th,
        "lambda": cfg.lam,
        "yF0": cfg.y0[0],
        "yO0": cfg.y0[1],
        "yN0": cfg.y0[3],
        "yP0": cfg.y0[2],
        "theta0": cfg.theta0,
        "ignition_cells": cfg.ignition_cells,
        "ignition_theta": cfg.ignition_theta,
        "u_f": cfg.u_f,
        "delta": cfg.delta,
        "rho_u": cfg.rho_u,
        "arrhenius_A": cfg.arrhenius_A,
        "arrhenius_Ta": cfg.arrhenius_Ta,
        "arrhenius_theta_cut": cfg.arrhenius_theta_cut,
        "snapshot_every": cfg.snapshot_every,
        "out_dir": cfg.out_dir,
    }
    return "".join(f"{k} = {_fmt(float(v) if isinstance(v, float) else v)}\n" for k, v in values.items())


# -- snapshots ----------------------------------------------------------------

def _g17(v: float) -> str:
    return format(float(v), ".17g")


def snapshot_columns(has_G: bool) -> list[str]:
    cols = ["x", "rho", "u", "yF", "yO", "yP", "yN", "z", "theta"]
    if has_G:
        cols.append("G")
    cols.append("rho_prev")
    return cols


def format_snapshot(state: FlowState, x) -> str:
    """CSV text of one state, lossless at 17 significant digits.

    ``u`` holds the velocity on each cell's right face; the left boundary face
    velocity goes in the ``u_left`` header line.
    """
    out = io.StringIO()
    out.write(f"# t = {_g17(state.t)}\n# step = {state.step}\n# u_left = {_g17(state.u[0])}\n")
    has_G = state.G is not None
    out.write(",".join(snapshot_columns(has_G)) + "\n")
    cols = [x, state.rho, state.u[1:], *state.y, state.z, state.theta]
    if has_G:
        cols.append(state.G)
    cols.append(state.rho_prev)
    for row in zip(*cols):
        out.write(",".join(_g17(v) for v in row) + "\n")
    return out.getvalue()


def parse_snapshot(text: str) -> tuple[FlowState, np.ndarray]:
    """Inverse of :func:`format_snapshot`; returns ``(state, cell_centres)``."""
    meta = {}
    body = []
    for line in text.splitlines():
        if line.startswith("#"):
            key, _, value = line[1:].partition("=")
            meta[key.strip()] = value.strip()
        elif line.strip():
            body.append(line)
    reader = csv.reader(body)
    header = next(reader)
    data = np.array([[float(v) for v in row] for row in reader])
    col = {name: data[:, i] for i, name in enumerate(header)}
    u = np.concatenate(([float(meta["u_left"])], col["u"]))
    state = FlowState(
        t=float(meta["t"]),
        rho=col["rho"].copy(),
        rho_prev=col["rho_prev"].copy(),
        y=np.vstack((col["yF"], col["yO"], col["yP"], col["yN"])),
        z=col["z"].copy(),
        theta=col["theta"].copy(),
        u=u,
        G=col["G"].copy() if "G" in col else None,
        step=int(meta["step"]),
    )
    return state, col["x"].copy()


def write_snapshot(path, state: FlowState, x) -> Path:
    path = Path(path)
    path.write_text(format_snapshot(state, x), encoding="utf-8")
    return path


def read_snapshot(path) -> tuple[FlowState, np.ndarray]:
    return parse_snapshot(Path(path).read_text(encoding="utf-8"))


# -- reports ------------------------------------------------------------------

def format_report(report: WaveReport) -> str:
    return "".join(f"{k} = {_fmt(v)}\n" for k, v in report.summary().items())


def report_csv(report: WaveReport) -> str:
    summary = report.summary()
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(summary.keys())
    writer.writerow(_fmt(v) for v in summary.values())
    return out.getvalue()


def parse_report(text: str) -> dict:
    """Key-value report back into a dict of floats, bools and strings."""
    out = {}
    for line in text.splitlines():
        if "=" not in line:
            continue
        key, _, value = (p.strip() for p in line.partition("="))
        if value in ("True", "False"):
            out[key] = value == "True"
            continue
        try:
            out[key] = float(value)
        except ValueError:
            out[key] = value
    return out


def sha256(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def write_manifest(out_dir, cfg: SimulationConfig, files, snapshot_steps, extra=None) -> Path:
    """Record every produced file with its checksum."""
    out_dir = Path(out_dir)
    manifest = {
        "config": format_config(cfg),
        "out_dir": str(out_dir),
        "snapshot_steps": list(snapshot_steps),
        "files": [
            {"name": Path(f).name, "sha256": sha256(f), "bytes": Path(f).stat().st_size}
            for f in files
        ],
    }
    if extra:
        manifest.update(extra)
    path = out_dir / "manifest.json"
    path.write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")
    return path
