"""Piecewise-constant switching laws for the system parameter and the gate.

Every generator returns a SwitchingSignal: a right-continuous function of
time whose value only changes at its declared breakpoints or at multiples
of its sampling period.  Random draws come from a counter-based splitmix64
mix, so a signal's value at time t is a pure function of (seed, t) and can
never depend on evaluation order.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass
from typing import Callable

from .errors import InvalidInputError

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_STREAM_SALT = 0xA0761D6478BD642F


def _mix(z: int) -> int:
    """splitmix64 finalizer."""
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9 & _MASK
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB & _MASK
    return z ^ (z >> 31)


def unit_uniform(seed: int, stream: int, index: int) -> float:
    """Deterministic uniform draw on [0, 1).

    The draw is the ``index``-th output of a splitmix64 sequence whose
    initial state folds ``seed`` and ``stream`` together; distinct streams
    give independent sequences for the same seed.
    """
    base = _mix((seed & _MASK) ^ (stream * _STREAM_SALT & _MASK))
    return (_mix((base + (index + 1) * _GOLDEN) & _MASK) >> 11) * 2.0**-53


def _hold_index(t: float, ts: float) -> int:
    # floor(k*ts / ts) can land at k-1 when both the product and the
    # quotient round down; the relative nudge keeps sample instants on
    # their own hold interval without moving any point a full step early.
    return math.floor(t / ts + 1e-9)


@dataclass(frozen=True)
class SwitchingSignal:
    """A piecewise-constant function of time with a declared codomain.

    At a change instant the new value applies (right-continuity), matching
    zero-order-hold semantics.  Evaluation re-checks the codomain so a
    misbehaving source fails loudly rather than feeding the simulation.
    """

    fn: Callable[[float], float]
    lo: float
    hi: float

    def __call__(self, t: float) -> float:
        v = self.fn(t)
        if not (self.lo <= v <= self.hi):
            raise InvalidInputError(
                f"signal value {v!r} left codomain [{self.lo}, {self.hi}] at t={t!r}"
            )
        return v


def constant(value: float, lo: float = 0.0, hi: float = 1.0) -> SwitchingSignal:
    if not (lo <= value <= hi):
        raise InvalidInputError(f"constant {value!r} outside codomain [{lo}, {hi}]")
    return SwitchingSignal(lambda t: value, lo, hi)


def step_schedule(breakpoints, lo: float = 0.0, hi: float = 1.0) -> SwitchingSignal:
    """Hold value_i from t_i (inclusive) until the next breakpoint.

    Breakpoints are (time, value) pairs starting at t = 0 with strictly
    increasing times.
    """
    pts = [(float(t), float(v)) for t, v in breakpoints]
    if not pts:
        raise InvalidInputError("step schedule needs at least one breakpoint")
    if pts[0][0] != 0.0:
        raise InvalidInputError("step schedule must start at t = 0")
    times = [t for t, _ in pts]
    values = [v for _, v in pts]
    if any(b <= a for a, b in zip(times, times[1:])):
        raise InvalidInputError("breakpoint times must be strictly increasing")
    for v in values:
        if not (lo <= v <= hi):
            raise InvalidInputError(f"value {v!r} outside codomain [{lo}, {hi}]")

    def fn(t: float) -> float:
        i = bisect_right(times, t) - 1
        return values[max(i, 0)]

    return SwitchingSignal(fn, lo, hi)


def sampled_hold(
    source: Callable[[float], float],
    ts: float,
    lo: float = 0.0,
    hi: float = 1.0,
) -> SwitchingSignal:
    """Sample a continuous source every ``ts`` seconds and hold the value."""
    if not ts > 0.0:
        raise InvalidInputError("sampling period must be positive")
    return SwitchingSignal(lambda t: source(_hold_index(t, ts) * ts), lo, hi)


def sine_source(omega: float, amplitude: float, bias: float) -> Callable[[float], float]:
    """Continuous sinusoid bias + amplitude*sin(omega*t), confined to [0, 1]."""
    span = abs(amplitude)
    if bias - span < 0.0 or bias + span > 1.0:
        raise InvalidInputError(
            f"sine with amplitude {amplitude} and bias {bias} leaves [0, 1]"
        )
    return lambda t: bias + amplitude * math.sin(omega * t)


def chirp_source(f0: float, f1: float, sweep_time: float) -> Callable[[float], float]:
    """Linear frequency sweep f0 -> f1 (Hz) over ``sweep_time`` seconds.

    The raw sinusoid is halved and biased by 0.5 so the output stays in
    [0, 1].
    """
    if not (f0 > 0.0 and f1 > 0.0 and sweep_time > 0.0):
        raise InvalidInputError("chirp needs positive frequencies and sweep time")
    rate = (f1 - f0) / (2.0 * sweep_time)

    def fn(t: float) -> float:
        phase = 2.0 * math.pi * (f0 * t + rate * t * t)
        return 0.5 * math.sin(phase) + 0.5

    return fn


def random_source(seed: int, ts: float, low: float, high: float) -> SwitchingSignal:
    """A fresh uniform draw on [low, high) at every multiple of ``ts``.

    Fully determined by the seed; see unit_uniform for the generator.
    """
    if not ts > 0.0:
        raise InvalidInputError("sampling period must be positive")
    if not low < high:
        raise InvalidInputError(f"need low < high, got [{low}, {high})")
    width = high - low

    def fn(t: float) -> float:
        return low + width * unit_uniform(seed, 0, _hold_index(t, ts))

    return SwitchingSignal(fn, low, high)


def square_wave(
    period: float,
    duty: float,
    delay: float = 0.0,
    low: float = 0.0,
    high: float = 1.0,
) -> SwitchingSignal:
    """Periodic two-level wave: high on [delay, delay + duty*period) mod period.

    Times before the first high window evaluate by the same modular rule,
    so t < delay falls in the trailing low segment.
    """
    if not period > 0.0:
        raise InvalidInputError("period must be positive")
    if not 0.0 < duty < 1.0:
        raise InvalidInputError("duty must lie strictly between 0 and 1")
    on_time = duty * period
    lo = min(low, high)
    hi = max(low, high)

    def fn(t: float) -> float:
        return high if (t - delay) % period < on_time else low

    return SwitchingSignal(fn, lo, hi)
