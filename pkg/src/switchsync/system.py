"""Unified chaotic system family, master/slave coupling, and RK4 integration.

The family interpolates between the Lorenz, Lu and Chen attractors as its
single parameter alpha moves across [0, 1].  The master copy runs free; the
slave copy receives a control input made of a nonlinear cancellation term
plus linear state feedback on the synchronization error.  State vectors are
plain tuples of floats so the fixed-step integrator stays cheap.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DivergenceError, InvalidInputError

# Tolerated overshoot outside [0, 1] before alpha is rejected; values inside
# the band are clamped.
ALPHA_BAND = 1e-12

# Any state component beyond this magnitude is treated as numerical blow-up
# (uncontrolled trajectories stay within ~1e2 here).
STATE_LIMIT = 1e6


def check_alpha(alpha: float) -> float:
    a = float(alpha)
    if not (-ALPHA_BAND <= a <= 1.0 + ALPHA_BAND):
        raise InvalidInputError(f"alpha must lie in [0, 1], got {alpha!r}")
    return min(1.0, max(0.0, a))


def drift(alpha, state):
    """Time derivative of one free-running copy of the system."""
    a = check_alpha(alpha)
    x, y, z = state
    return (
        (25.0 * a + 10.0) * (y - x),
        (28.0 - 35.0 * a) * x + (29.0 * a - 1.0) * y - x * z,
        x * y - (a + 8.0) / 3.0 * z,
    )


def linear_error_matrix(alpha) -> np.ndarray:
    """Error-dynamics matrix left once the nonlinear terms are cancelled.

    Five entries depend affinely on alpha; the rest are exactly zero.
    """
    a = check_alpha(alpha)
    return np.array(
        [
            [-(25.0 * a + 10.0), 25.0 * a + 10.0, 0.0],
            [28.0 - 35.0 * a, 29.0 * a - 1.0, 0.0],
            [0.0, 0.0, -(a + 8.0) / 3.0],
        ]
    )


def error_matrix(alpha, z_m, x_s, y_m) -> np.ndarray:
    """State-dependent error-dynamics matrix before any control is applied."""
    a = check_alpha(alpha)
    if not (math.isfinite(z_m) and math.isfinite(x_s) and math.isfinite(y_m)):
        raise InvalidInputError("state components must be finite")
    return np.array(
        [
            [-(25.0 * a + 10.0), 25.0 * a + 10.0, 0.0],
            [(28.0 - 35.0 * a) - z_m, 29.0 * a - 1.0, -x_s],
            [y_m, x_s, -(a + 8.0) / 3.0],
        ]
    )


def distribution_matrix(form: str) -> np.ndarray:
    """Input distribution matrix: a 3x1 column of ones or the 3x3 identity."""
    if form == "ones":
        return np.ones((3, 1))
    if form == "identity":
        return np.eye(3)
    raise InvalidInputError(f"unsupported distribution form {form!r}")


def control_law(k, b, master, slave, gate):
    """Slave control input: nonlinear cancellation plus linear feedback.

    ``k`` is an m-by-3 gain given as a sequence of rows, ``b`` the 3-by-m
    distribution matrix.  With the default ones-column ``b`` every channel
    receives the same scalar k.e; the identity form applies a full 3x3 gain
    row by row.  A switched-off gate yields the zero input.
    """
    if not gate:
        return (0.0, 0.0, 0.0)
    e1 = slave[0] - master[0]
    e2 = slave[1] - master[1]
    e3 = slave[2] - master[2]
    z_m = master[2]
    y_m = master[1]
    x_s = slave[0]
    if b.shape == (3, 1):
        row = k[0]
        lin = row[0] * e1 + row[1] * e2 + row[2] * e3
        u1 = u2 = u3 = lin
    else:
        u1, u2, u3 = b @ (np.asarray(k, dtype=float) @ (e1, e2, e3))
    return (u1, z_m * e1 + x_s * e3 + u2, -y_m * e1 - x_s * e2 + u3)


def coupled_rhs(alpha, master, slave, k, b, gate):
    """Derivatives of the coupled pair: free master, controlled slave."""
    dm = drift(alpha, master)
    ds = drift(alpha, slave)
    u = control_law(k, b, master, slave, gate)
    return dm, (ds[0] + u[0], ds[1] + u[1], ds[2] + u[2])


def closed_loop_error_rhs(alpha, e, k, b):
    """Error derivative after exact cancellation: linear in e at fixed alpha."""
    m = linear_error_matrix(alpha) + b @ np.asarray(k, dtype=float)
    out = m @ np.asarray(e, dtype=float)
    return (float(out[0]), float(out[1]), float(out[2]))


def sync_error_norm(e) -> float:
    """Euclidean norm of the synchronization error vector."""
    return math.sqrt(e[0] * e[0] + e[1] * e[1] + e[2] * e[2])


def rk4_step(rhs, t, y, dt):
    """One classical 4th-order Runge-Kutta step for a tuple-valued state."""
    half = 0.5 * dt
    k1 = rhs(t, y)
    k2 = rhs(t + half, tuple(a + half * d for a, d in zip(y, k1)))
    k3 = rhs(t + half, tuple(a + half * d for a, d in zip(y, k2)))
    k4 = rhs(t + dt, tuple(a + dt * d for a, d in zip(y, k3)))
    w = dt / 6.0
    return tuple(
        a + w * (d1 + 2.0 * (d2 + d3) + d4)
        for a, d1, d2, d3, d4 in zip(y, k1, k2, k3, k4)
    )


def ensure_state_ok(y, t):
    """Raise DivergenceError if any component is non-finite or beyond bounds."""
    for v in y:
        if not (math.isfinite(v) and abs(v) <= STATE_LIMIT):
            raise DivergenceError(t)


def rk4_integrate(rhs, initial, t0, t_end, dt, observer=None):
    """Integrate with a fixed step; the final partial step uses the remainder.

    ``observer(t, state)`` runs at every accepted step, including t0.
    Step times are computed as t0 + i*dt rather than accumulated, so runs
    are reproducible.
    """
    if not dt > 0.0:
        raise InvalidInputError("dt must be positive")
    if t_end < t0:
        raise InvalidInputError("t_end must not precede t0")
    y = tuple(float(v) for v in initial)
    ensure_state_ok(y, t0)
    if observer is not None:
        observer(t0, y)
    span = t_end - t0
    n_full = int(math.floor(span / dt + 1e-9))
    t = t0
    for i in range(1, n_full + 1):
        y = rk4_step(rhs, t, y, dt)
        t = t0 + i * dt
        ensure_state_ok(y, t)
        if observer is not None:
            observer(t, y)
    remainder = span - n_full * dt
    if remainder > dt * 1e-9:
        y = rk4_step(rhs, t, y, remainder)
        t = t_end
        ensure_state_ok(y, t)
        if observer is not None:
            observer(t, y)
    return y
