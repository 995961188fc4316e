"""Scenario definitions, the simulation loop, and run artifacts.

A scenario bundles the switching law for the system parameter, the on/off
law for the controller gate, initial conditions, and integration settings.
Runs are deterministic: step times come from the step index, signals are
sampled once per step at the step's start time and held across the four
RK4 stages, and random draws are pure functions of (seed, time bin).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import DivergenceError, InvalidInputError
from .signals import (
    SwitchingSignal,
    chirp_source,
    constant,
    random_source,
    sampled_hold,
    sine_source,
    square_wave,
    step_schedule,
    unit_uniform,
)
from .system import coupled_rhs, distribution_matrix, ensure_state_ok, rk4_step
from .synthesis import GainCertificate

DEFAULT_DT = 1e-3
DEFAULT_T_END = 30.0
DEFAULT_STRIDE = 10
DEFAULT_MASTER_IC = (15.0, 20.0, 10.0)
DEFAULT_SLAVE_IC = (25.0, -5.0, 15.0)

# e-norm level below which the pair counts as synchronized.
SYNC_THRESHOLD = 1e-2

# Below this error level the two trajectories agree to the working
# precision of the state variables; Lyapunov comparisons there see only
# rounding noise, so monotonicity is not scored against them.
SYNC_NOISE_FLOOR = 1e-9

# Allowed per-step relative growth of e'Pe before it counts as a violation
# (absorbs RK4 discretization of the continuous-time decrease).
LYAPUNOV_REL_TOL = 1e-6

# Random initial conditions are drawn from this box, one stream per system.
IC_RANGE = (-30.0, 30.0)
_STREAM_MASTER_IC = 1
_STREAM_SLAVE_IC = 2

PRESETS = ("none", "step", "sine", "chirp", "random", "random-ic", "onoff")

CSV_HEADER = "t,x_m,y_m,z_m,x_s,y_s,z_s,e1,e2,e3,e_norm,alpha,gate"


@dataclass(frozen=True)
class Scenario:
    name: str
    alpha_signal: SwitchingSignal
    gate_signal: SwitchingSignal
    master_ic: tuple[float, float, float]
    slave_ic: tuple[float, float, float]
    dt: float = DEFAULT_DT
    t_end: float = DEFAULT_T_END
    seed: int = 0
    stride: int = DEFAULT_STRIDE
    sync_threshold: float = SYNC_THRESHOLD


@dataclass(frozen=True)
class TrajectoryRecord:
    t: float
    x_m: float
    y_m: float
    z_m: float
    x_s: float
    y_s: float
    z_s: float
    e1: float
    e2: float
    e3: float
    e_norm: float
    alpha: float
    gate: int


@dataclass(frozen=True)
class RunMetrics:
    """Summary of one run.

    ``time_to_sync`` is the first instant after which the error norm stays
    below the threshold through t_end; it is None when that never happens
    (and then ``max_error_after_sync`` is None as well).
    """

    time_to_sync: float | None
    max_error_after_sync: float | None
    final_error: float
    lyapunov_violations: int
    diverged: bool


def scenario_preset(
    name: str,
    *,
    seed: int = 0,
    dt: float = DEFAULT_DT,
    t_end: float = DEFAULT_T_END,
    stride: int = DEFAULT_STRIDE,
    ts: float | None = None,
    sync_threshold: float = SYNC_THRESHOLD,
) -> Scenario:
    """Named scenario recipes.

    ``ts`` overrides the sample-and-hold period of the random presets
    (default 0.25 s); the sine and chirp presets keep their fixed periods.
    """
    gate: SwitchingSignal = constant(1.0)
    master = DEFAULT_MASTER_IC
    slave = DEFAULT_SLAVE_IC
    if name == "none":
        alpha = constant(0.0)
    elif name == "step":
        alpha = step_schedule([(0.0, 0.0), (10.0, 0.8), (20.0, 1.0)])
    elif name == "sine":
        alpha = sampled_hold(sine_source(1.0, 0.5, 0.5), 0.25)
    elif name == "chirp":
        alpha = sampled_hold(chirp_source(0.1, 1.0, t_end), 0.1)
    elif name == "random":
        alpha = random_source(seed, ts if ts is not None else 0.25, 0.0, 1.0)
    elif name == "random-ic":
        alpha = random_source(seed, ts if ts is not None else 0.25, 0.0, 1.0)
        lo, hi = IC_RANGE
        width = hi - lo
        master = tuple(
            lo + width * unit_uniform(seed, _STREAM_MASTER_IC, i) for i in range(3)
        )
        slave = tuple(
            lo + width * unit_uniform(seed, _STREAM_SLAVE_IC, i) for i in range(3)
        )
    elif name == "onoff":
        alpha = square_wave(20.0, 0.5, delay=5.0, low=0.0, high=1.0)
        gate = square_wave(10.0, 0.5, delay=5.0, low=0.0, high=1.0)
    else:
        raise InvalidInputError(f"unknown scenario preset {name!r}")
    return Scenario(
        name=name,
        alpha_signal=alpha,
        gate_signal=gate,
        master_ic=master,
        slave_ic=slave,
        dt=dt,
        t_end=t_end,
        seed=seed,
        stride=stride,
        sync_threshold=sync_threshold,
    )


def _rhs_factory(alpha, gate_on, k_rows, b):
    def rhs(t, y):
        dm, ds = coupled_rhs(
            alpha, (y[0], y[1], y[2]), (y[3], y[4], y[5]), k_rows, b, gate_on
        )
        return dm + ds

    return rhs


def run_scenario(
    scenario: Scenario, certificate: GainCertificate
) -> tuple[list[TrajectoryRecord], RunMetrics]:
    """Integrate the coupled pair under a scenario's switching laws.

    Emits a record every ``stride`` steps (plus the final step) and
    computes metrics over every step.  On divergence the run stops early,
    keeps the partial trajectory, and flags the metrics.
    """
    if not scenario.dt > 0.0:
        raise InvalidInputError("dt must be positive")
    if not scenario.t_end > 0.0:
        raise InvalidInputError("t_end must be positive")
    if scenario.stride < 1:
        raise InvalidInputError("stride must be at least 1")
    k_rows = tuple(tuple(float(v) for v in row) for row in np.atleast_2d(certificate.k))
    b = distribution_matrix(certificate.b_form)
    alpha_sig = scenario.alpha_signal
    gate_sig = scenario.gate_signal
    dt = scenario.dt

    state = tuple(float(v) for v in scenario.master_ic) + tuple(
        float(v) for v in scenario.slave_ic
    )
    try:
        ensure_state_ok(state, 0.0)
    except DivergenceError:
        raise InvalidInputError("initial conditions must be finite and within bounds")
    n_full = int(math.floor(scenario.t_end / dt + 1e-9))
    remainder = scenario.t_end - n_full * dt
    take_remainder = remainder > dt * 1e-9

    t_now = 0.0
    a_now = alpha_sig(0.0)
    g_now = gate_sig(0.0)
    steps = [(t_now, state, a_now, g_now)]
    diverged = False
    for i in range(n_full):
        rhs = _rhs_factory(a_now, g_now >= 0.5, k_rows, b)
        state = rk4_step(rhs, t_now, state, dt)
        t_now = (i + 1) * dt
        try:
            ensure_state_ok(state, t_now)
        except DivergenceError:
            diverged = True
            break
        a_now = alpha_sig(t_now)
        g_now = gate_sig(t_now)
        steps.append((t_now, state, a_now, g_now))
    if take_remainder and not diverged:
        rhs = _rhs_factory(a_now, g_now >= 0.5, k_rows, b)
        state = rk4_step(rhs, t_now, state, remainder)
        t_now = scenario.t_end
        try:
            ensure_state_ok(state, t_now)
            steps.append((t_now, state, alpha_sig(t_now), gate_sig(t_now)))
        except DivergenceError:
            diverged = True

    t_arr = np.array([s[0] for s in steps])
    y_arr = np.array([s[1] for s in steps])
    a_arr = np.array([s[2] for s in steps])
    g_arr = np.array([s[3] for s in steps])
    e = y_arr[:, 3:6] - y_arr[:, 0:3]
    e_norm = np.sqrt(e[:, 0] * e[:, 0] + e[:, 1] * e[:, 1] + e[:, 2] * e[:, 2])

    idxs = list(range(0, len(steps), scenario.stride))
    if idxs[-1] != len(steps) - 1:
        idxs.append(len(steps) - 1)
    records = [
        TrajectoryRecord(
            t=float(t_arr[i]),
            x_m=float(y_arr[i, 0]),
            y_m=float(y_arr[i, 1]),
            z_m=float(y_arr[i, 2]),
            x_s=float(y_arr[i, 3]),
            y_s=float(y_arr[i, 4]),
            z_s=float(y_arr[i, 5]),
            e1=float(e[i, 0]),
            e2=float(e[i, 1]),
            e3=float(e[i, 2]),
            e_norm=float(e_norm[i]),
            alpha=float(a_arr[i]),
            gate=int(g_arr[i] >= 0.5),
        )
        for i in idxs
    ]
    metrics = _run_metrics(scenario, certificate, t_arr, e, e_norm, g_arr, diverged)
    return records, metrics


def _run_metrics(scenario, certificate, t_arr, e, e_norm, g_arr, diverged) -> RunMetrics:
    threshold = scenario.sync_threshold
    above = e_norm >= threshold
    if diverged:
        time_to_sync = None
    elif not above.any():
        time_to_sync = 0.0
    elif bool(above[-1]):
        time_to_sync = None
    else:
        time_to_sync = float(t_arr[int(np.flatnonzero(above)[-1]) + 1])
    if time_to_sync is None:
        max_after = None
    else:
        max_after = float(e_norm[t_arr >= time_to_sync].max())
    v_vals = np.einsum("ni,ij,nj->n", e, certificate.p, e)
    gate_on = g_arr[:-1] >= 0.5
    grew = v_vals[1:] > v_vals[:-1] * (1.0 + LYAPUNOV_REL_TOL)
    meaningful = e_norm[1:] > SYNC_NOISE_FLOOR
    violations = int(np.count_nonzero(gate_on & grew & meaningful))
    return RunMetrics(
        time_to_sync=time_to_sync,
        max_error_after_sync=max_after,
        final_error=float(e_norm[-1]),
        lyapunov_violations=violations,
        diverged=diverged,
    )


def _fmt(v: float) -> str:
    return format(float(v), ".12g")


def write_trajectory_csv(records, path) -> None:
    """Write records with the fixed header; 12 significant digits per field."""
    with open(path, "w", newline="") as fh:
        fh.write(CSV_HEADER + "\n")
        for r in records:
            fh.write(
                ",".join(
                    (
                        _fmt(r.t),
                        _fmt(r.x_m),
                        _fmt(r.y_m),
                        _fmt(r.z_m),
                        _fmt(r.x_s),
                        _fmt(r.y_s),
                        _fmt(r.z_s),
                        _fmt(r.e1),
                        _fmt(r.e2),
                        _fmt(r.e3),
                        _fmt(r.e_norm),
                        _fmt(r.alpha),
                        str(r.gate),
                    )
                )
                + "\n"
            )


def metrics_to_dict(metrics: RunMetrics) -> dict:
    """JSON-ready view; absent sync times are omitted rather than null."""
    out: dict = {}
    if metrics.time_to_sync is not None:
        out["time_to_sync"] = metrics.time_to_sync
        out["max_error_after_sync"] = metrics.max_error_after_sync
    out["final_error"] = metrics.final_error
    out["lyapunov_violations"] = metrics.lyapunov_violations
    out["diverged"] = metrics.diverged
    return out


def write_metrics_json(metrics: RunMetrics, path) -> None:
    with open(path, "w") as fh:
        json.dump(metrics_to_dict(metrics), fh, indent=2)
        fh.write("\n")
