"""Run orchestration: single simulations, cross-run comparison and delta sweeps."""

from __future__ import annotations

import dataclasses
import logging
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import NamedTuple

import numpy as np

from .core import IF, FlowState, Mesh1D, SimulationConfig, initial_state
from .diagnostics import (
    WaveReport,
    combustion_zone_thickness,
    compare_profiles,
    crossings,
    flame_velocity_from_jump,
    plateau_states,
    steady_profile_gap,
    wave_speed,
)
from .errors import CFLError, FrontNotEstablished, SolverError, WaveNotSteady
from .gfield import advance_gfield
from .io import (
    format_config,
    format_report,
    parse_report,
    read_config,
    read_snapshot,
    report_csv,
    write_manifest,
    write_snapshot,
)
from .primitive import StepContext, advance_primitive
from .thermo import MixtureSample, adiabatic_flame_temperature

log = logging.getLogger(__name__)

STEADY_TOL = 1e-3
FIT_R2_MIN = 0.999
MAX_DT_HALVINGS = 6


@dataclass(frozen=True)
class ReportWindows:
    """Where plateaus and the steadiness check look, as fractions of the domain length.

    The fresh plateau starts ``fresh_margin`` ahead of the front and runs to
    the outlet.  The burnt plateau is ``burnt_width`` wide and ends
    ``burnt_margin`` behind the front; the primitive model's burnt side still
    reacts slowly (its density still drifts by a few tenths of a percent
    over centimetres), so it needs a generous margin and ``flat_tol`` is 1 %.
    Steadiness compares ``y_F`` within ``steady_window`` of the front.
    """

    fresh_margin: float = 0.05
    burnt_margin: float = 0.3
    burnt_width: float = 0.15
    steady_window: float = 0.25
    flat_tol: float = 1e-2


class RunResult(NamedTuple):
    state: FlowState
    report: WaveReport
    files: list
    cfg: SimulationConfig


def tracking_level(cfg: SimulationConfig) -> float:
    """Temperature halfway between the fresh gas and its adiabatic burnt state."""
    _, theta_ad = adiabatic_flame_temperature(MixtureSample(cfg.y0, cfg.theta0), cfg.species)
    return 0.5 * (cfg.theta0 + theta_ad)


def _single_crossing(x, f, level):
    xs = crossings(x, f, level)
    return float(xs[0]) if len(xs) == 1 else None


def _clear_outputs(out_dir: Path):
    for pattern in ("snap_*.csv", "report.txt", "report.csv", "front.csv", "config.txt", "manifest.json"):
        for p in out_dir.glob(pattern):
            p.unlink()


def _stepper(model):
    return advance_primitive if model == "primitive" else advance_gfield


def _integrate(cfg: SimulationConfig, out_dir: Path | None, level: float, observe=None):
    ctx = StepContext.from_config(cfg)
    mesh = ctx.mesh
    x = mesh.centers
    advance = _stepper(cfg.model)
    n_steps = cfg.n_steps
    early_step = n_steps - max(1, round(0.1 * n_steps))

    state = initial_state(cfg, ctx.species, mesh)
    snapshots = []
    times, positions = [], []
    early = None

    def record(s):
        if out_dir is not None and (s.step % cfg.snapshot_every == 0 or s.step == n_steps):
            snapshots.append(write_snapshot(out_dir / f"snap_{s.step}.csv", s, x))
        xf = _single_crossing(x, s.theta, level)
        if xf is not None:
            times.append(s.t)
            positions.append(xf)
        if observe is not None:
            observe(s)

    record(state)
    for n in range(n_steps):
        state = advance(state, ctx)
        # t from the step count so it does not drift with roundoff
        state.t = (n + 1) * cfg.dt
        if state.step == early_step:
            early = state.copy()
        record(state)
    return state, early, mesh, times, positions, snapshots


def build_report(cfg: SimulationConfig, state: FlowState, early: FlowState | None, mesh: Mesh1D,
                 times, positions, level: float, windows: ReportWindows = ReportWindows()) -> WaveReport:
    """Travelling-wave report of a finished run; flags it not steady when any check fails."""
    report = WaveReport(model=cfg.model, times=list(times), positions=list(positions), u_f=float("nan"))
    L = mesh.x_right - mesh.x_left
    notes = []
    try:
        fit = wave_speed(report.trajectory)
        report.u_p, report.fit_r2 = fit
    except ValueError as exc:
        report.note = f"front not established: {exc}"
        return report
    if fit.r2 < FIT_R2_MIN:
        notes.append(f"front trajectory not linear (r2 = {fit.r2:.6f})")

    xf = _single_crossing(mesh.centers, state.theta, level)
    if xf is None:
        report.note = "no single temperature front in the final state"
        return report
    report.x_front = xf
    if state.G is not None:
        xg = _single_crossing(mesh.centers, state.G, 0.5)
        report.x_front_G = float("nan") if xg is None else xg

    try:
        p = plateau_states(state, mesh, *plateau_windows(xf, mesh, windows), windows.flat_tol)
        report.rho_u, report.u_u, report.rho_b, report.u_b = p.rho_u, p.u_u, p.rho_b, p.u_b
        report.theta_u, report.theta_b, report.y_b = p.theta_u, p.theta_b, tuple(float(v) for v in p.y_b)
        fv = flame_velocity_from_jump(report)
        report.u_f, report.u_f_kinematic, report.u_f_discrepancy = fv
        report.thickness = combustion_zone_thickness(state, mesh, p.y_b[IF], p.y_u[IF])
    except (WaveNotSteady, FrontNotEstablished, ZeroDivisionError) as exc:
        notes.append(str(exc))

    if early is None:
        notes.append("run too short for the steadiness check")
    else:
        try:
            report.steady_linf = steady_profile_gap(early, state, mesh, level, windows.steady_window * L)
        except FrontNotEstablished as exc:
            notes.append(f"steadiness check failed: {exc}")
        else:
            if not report.steady_linf <= STEADY_TOL:
                notes.append(f"profile still changing (L-inf gap {report.steady_linf:.2e})")
    report.steady = not notes
    report.note = "; ".join(notes)
    return report


def plateau_windows(xf: float, mesh: Mesh1D, windows: ReportWindows):
    """Burnt and fresh intervals around a front at ``xf``."""
    L = mesh.x_right - mesh.x_left
    hi = xf - windows.burnt_margin * L
    lo = hi - windows.burnt_width * L
    if lo < mesh.x_left:
        raise WaveNotSteady(f"front at {xf:.4g} too close to the wall for the burnt window")
    return (lo, hi), (xf + windows.fresh_margin * L, mesh.x_right)


def run_simulation(cfg: SimulationConfig, out_dir=None, write: bool = True,
                   windows: ReportWindows = ReportWindows(), observe=None) -> RunResult:
    """Advance ``cfg`` to ``t_end``, write snapshots and the wave report.

    ``out_dir`` defaults to ``cfg.out_dir``; with ``write=False`` nothing is
    written.  When the explicit G transport exceeds its CFL bound the run
    restarts with half the time step, at most ``MAX_DT_HALVINGS`` times; the
    returned config carries the step actually used.  ``observe`` is called
    with every state, including the initial one.
    """
    out = Path(out_dir if out_dir is not None else cfg.out_dir) if write else None
    level = tracking_level(cfg)
    run_cfg = cfg
    for attempt in range(MAX_DT_HALVINGS + 1):
        if out is not None:
            out.mkdir(parents=True, exist_ok=True)
            _clear_outputs(out)
        try:
            state, early, mesh, times, positions, snaps = _integrate(run_cfg, out, level, observe)
            break
        except CFLError as exc:
            if attempt == MAX_DT_HALVINGS:
                raise
            log.warning("%s; retrying with dt = %g", exc, run_cfg.dt / 2)
            # keep the snapshot cadence and end time in physical units
            run_cfg = dataclasses.replace(
                run_cfg, dt=run_cfg.dt / 2, snapshot_every=2 * run_cfg.snapshot_every
            )

    report = build_report(run_cfg, state, early, mesh, times, positions, level, windows)
    if run_cfg is not cfg:
        extra = f"dt reduced to {run_cfg.dt!r} by the CFL bound"
        report.note = f"{report.note}; {extra}" if report.note else extra
    files = list(snaps)
    if out is not None:
        files += _write_run_files(out, run_cfg, report)
        write_manifest(out, run_cfg, files, [int(p.stem.split("_")[1]) for p in snaps])
    return RunResult(state, report, files, run_cfg)


def _write_run_files(out: Path, cfg: SimulationConfig, report: WaveReport):
    config = out / "config.txt"
    config.write_text(format_config(cfg), encoding="utf-8")
    txt = out / "report.txt"
    txt.write_text(format_report(report), encoding="utf-8")
    csv_path = out / "report.csv"
    csv_path.write_text(report_csv(report), encoding="utf-8")
    front = out / "front.csv"
    front.write_text(
        "t,x_front\n" + "".join(f"{t:.17g},{x:.17g}\n" for t, x in report.trajectory),
        encoding="utf-8",
    )
    return [config, txt, csv_path, front]


# -- comparison ---------------------------------------------------------------

def latest_snapshot(run_dir) -> Path:
    run_dir = Path(run_dir)
    snaps = sorted(run_dir.glob("snap_*.csv"), key=lambda p: int(p.stem.split("_")[1]))
    if not snaps:
        raise FileNotFoundError(f"no snapshots in {run_dir}")
    return snaps[-1]


def load_run(run_dir):
    """Config, mesh and final snapshot of a finished run directory."""
    run_dir = Path(run_dir)
    cfg = read_config(run_dir / "config.txt")
    state, _ = read_snapshot(latest_snapshot(run_dir))
    return cfg, cfg.mesh(), state


@dataclass
class Comparison:
    field: str
    linf: float
    l2: float
    thickness_ratio: float
    shift: float
    threshold: float | None = None

    @property
    def passed(self) -> bool:
        return self.threshold is None or self.linf <= self.threshold


def compare_runs(run_a, run_b, fields=("yF", "theta"), thresholds=None, window=None) -> list[Comparison]:
    """Aligned-profile metrics of ``run_b`` against ``run_a`` for each field.

    Fronts are aligned on ``theta`` at the level halfway between ``run_a``'s
    fresh temperature and its adiabatic temperature.  ``thresholds`` maps a
    field to the largest acceptable L-infinity distance; for ``theta`` it is
    relative to the adiabatic temperature.
    """
    thresholds = thresholds or {}
    cfg_a, mesh_a, a = load_run(run_a)
    _, mesh_b, b = load_run(run_b)
    level = tracking_level(cfg_a)
    theta_ad = 2.0 * level - cfg_a.theta0
    out = []
    for name in fields:
        m = compare_profiles(a, b, name, mesh_a, mesh_b, "theta", level, window)
        linf, l2 = m.linf, m.l2
        if name == "theta":
            linf, l2 = linf / theta_ad, l2 / theta_ad
        out.append(Comparison(name, linf, l2, m.thickness_ratio, m.shift, thresholds.get(name)))
    return out


def comparison_csv(rows: list[Comparison]) -> str:
    lines = ["field,linf,l2,thickness_ratio,shift,threshold,passed\n"]
    for r in rows:
        thr = "" if r.threshold is None else repr(r.threshold)
        lines.append(f"{r.field},{r.linf!r},{r.l2!r},{r.thickness_ratio!r},{r.shift!r},{thr},{r.passed}\n")
    return "".join(lines)


# -- delta sweep --------------------------------------------------------------

def _sweep_member(args):
    cfg, out_dir, windows = args
    return run_simulation(cfg, out_dir, windows=windows).report


def sweep(cfg: SimulationConfig, deltas, out_dir, jobs: int = 1, fields=("yF", "theta"),
          reference_dir=None, windows: ReportWindows = ReportWindows()):
    """Primitive reference run, then one flame-velocity run per ``delta``.

    The reference run's jump-condition flame velocity is injected into every
    member.  An existing ``reference_dir`` is reused instead of rerunning it.
    Members run in ``jobs`` worker processes and each writes its own
    directory.  Returns the reference report and a list of
    ``(delta, report, comparisons)``.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    if reference_dir is None:
        reference_dir = out_dir / "primitive"
        ref_cfg = dataclasses.replace(cfg, model="primitive")
        ref_report = run_simulation(ref_cfg, reference_dir, windows=windows).report
    else:
        ref_report = WaveReport(**_report_fields(parse_report((Path(reference_dir) / "report.txt").read_text())))
    if not np.isfinite(ref_report.u_f) or ref_report.u_f <= 0:
        raise SolverError(f"reference run gave no usable flame velocity ({ref_report.note})")

    members = []
    for delta in deltas:
        member = dataclasses.replace(cfg, model="flame-velocity", u_f=ref_report.u_f, delta=float(delta))
        members.append((member, out_dir / _delta_dirname(delta), windows))
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            reports = list(pool.map(_sweep_member, members))
    else:
        reports = [_sweep_member(m) for m in members]

    results = []
    for (member, d, _), report in zip(members, reports):
        results.append((member.delta, report, compare_runs(reference_dir, d, fields)))
    (out_dir / "sweep.csv").write_text(sweep_csv(ref_report, results), encoding="utf-8")
    return ref_report, results


def _delta_dirname(delta) -> str:
    return "delta_" + re.sub(r"[^0-9a-zA-Z.+-]", "_", repr(float(delta)))


def _report_fields(values: dict) -> dict:
    names = {f.name for f in dataclasses.fields(WaveReport)}
    kw = {k: v for k, v in values.items() if k in names}
    kw["y_b"] = tuple(values.get(k, float("nan")) for k in ("yF_b", "yO_b", "yP_b", "yN_b"))
    kw["note"] = str(values.get("note", "")) if values.get("note") is not None else ""
    return kw


def sweep_csv(ref: WaveReport, results) -> str:
    lines = ["delta,u_f,u_p,thickness,field,linf,l2,thickness_ratio\n"]
    for delta, report, comps in results:
        for c in comps:
            lines.append(
                f"{delta!r},{ref.u_f!r},{report.u_p!r},{report.thickness!r},"
                f"{c.field},{c.linf!r},{c.l2!r},{c.thickness_ratio!r}\n"
            )
    return "".join(lines)
