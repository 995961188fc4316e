import math

import numpy as np
import pytest

from switchsync import signals
from switchsync.errors import InvalidInputError


class TestStepSchedule:
    def setup_method(self):
        self.sig = signals.step_schedule([(0.0, 0.0), (10.0, 0.8), (20.0, 1.0)])

    def test_before_first_switch(self):
        assert self.sig(9.99) == 0.0

    def test_right_continuous_at_switch(self):
        assert self.sig(10.0) == 0.8

    def test_after_last_switch(self):
        assert self.sig(25.0) == 1.0

    def test_empty_rejected(self):
        with pytest.raises(InvalidInputError):
            signals.step_schedule([])

    def test_unordered_rejected(self):
        with pytest.raises(InvalidInputError):
            signals.step_schedule([(0.0, 0.1), (5.0, 0.2), (5.0, 0.3)])

    def test_must_start_at_zero(self):
        with pytest.raises(InvalidInputError):
            signals.step_schedule([(1.0, 0.5)])

    def test_out_of_codomain_value_rejected(self):
        with pytest.raises(InvalidInputError):
            signals.step_schedule([(0.0, 1.5)])


class TestSineSource:
    def test_at_zero(self):
        src = signals.sine_source(1.0, 0.5, 0.5)
        assert src(0.0) == 0.5

    def test_peak(self):
        src = signals.sine_source(1.0, 0.5, 0.5)
        assert abs(src(math.pi / 2.0) - 1.0) < 1e-15

    def test_formula(self):
        src = signals.sine_source(1.0, 0.5, 0.5)
        assert abs(src(1.0) - 0.920735492404) < 1e-9

    def test_codomain_violation_at_construction(self):
        with pytest.raises(InvalidInputError):
            signals.sine_source(1.0, 0.7, 0.5)


class TestSampledHold:
    def setup_method(self):
        self.src = signals.sine_source(1.0, 0.5, 0.5)
        self.sig = signals.sampled_hold(self.src, 0.25)

    def test_holds_from_zero(self):
        assert self.sig(0.2) == 0.5

    def test_next_sample(self):
        assert abs(self.sig(0.3) - 0.623701979627) < 1e-9

    def test_constant_source_passes_through(self):
        sig = signals.sampled_hold(lambda t: 0.25, 0.1)
        for t in np.linspace(0.0, 5.0, 101):
            assert sig(t) == 0.25

    def test_agrees_with_source_at_sample_instants(self):
        for ts in (0.25, 0.1, 0.3):
            sig = signals.sampled_hold(self.src, ts)
            for k in range(0, 120):
                t = k * ts
                assert sig(t) == self.src(t)

    def test_invalid_period(self):
        with pytest.raises(InvalidInputError):
            signals.sampled_hold(self.src, 0.0)


class TestChirpSource:
    def setup_method(self):
        self.src = signals.chirp_source(0.1, 1.0, 30.0)

    def test_at_zero(self):
        assert self.src(0.0) == 0.5

    def test_formula(self):
        assert abs(self.src(1.0) - 0.830655932662) < 1e-9

    def test_range_on_dense_grid(self):
        vals = np.array([self.src(t) for t in np.arange(0.0, 30.0, 1e-2)])
        assert (vals >= 0.0).all() and (vals <= 1.0).all()

    def test_invalid_parameters(self):
        with pytest.raises(InvalidInputError):
            signals.chirp_source(0.0, 1.0, 30.0)
        with pytest.raises(InvalidInputError):
            signals.chirp_source(0.1, 1.0, 0.0)


class TestRandomSource:
    def test_same_seed_same_signal(self):
        a = signals.random_source(99, 0.25, 0.0, 1.0)
        b = signals.random_source(99, 0.25, 0.0, 1.0)
        grid = np.arange(0.0, 30.0, 1e-2)
        assert all(a(t) == b(t) for t in grid)

    def test_different_seeds_differ(self):
        a = signals.random_source(1, 0.25, 0.0, 1.0)
        b = signals.random_source(2, 0.25, 0.0, 1.0)
        assert any(a(t) != b(t) for t in np.arange(0.0, 10.0, 0.25))

    def test_values_in_range(self):
        sig = signals.random_source(7, 0.1, 0.0, 1.0)
        vals = [sig(t) for t in np.arange(0.0, 30.0, 1e-2)]
        assert all(0.0 <= v < 1.0 for v in vals)

    def test_hold_semantics(self):
        ts = 0.25
        sig = signals.random_source(5, ts, 0.0, 1.0)
        for k in range(100):
            base = sig(k * ts)
            for frac in (0.0, 0.2, 0.5, 0.9999):
                assert sig(k * ts + frac * ts) == base

    def test_invalid_range(self):
        with pytest.raises(InvalidInputError):
            signals.random_source(0, 0.25, 1.0, 1.0)


class TestSquareWave:
    def setup_method(self):
        self.sig = signals.square_wave(20.0, 0.5, delay=5.0, low=0.0, high=1.0)

    def test_before_first_window_is_low(self):
        assert self.sig(0.0) == 0.0

    def test_window_edges(self):
        assert self.sig(5.0) == 1.0
        assert self.sig(14.999) == 1.0
        assert self.sig(15.0) == 0.0
        assert self.sig(25.0) == 1.0

    def test_periodicity(self):
        sig = signals.square_wave(7.0, 0.5)
        rng = np.random.default_rng(2)
        for t in rng.uniform(0.0, 50.0, size=200):
            assert sig(t) == sig(t + 7.0)

    def test_invalid_duty(self):
        with pytest.raises(InvalidInputError):
            signals.square_wave(10.0, 1.0)
        with pytest.raises(InvalidInputError):
            signals.square_wave(0.0, 0.5)


class TestSignalInvariants:
    def test_alpha_signals_stay_in_unit_interval(self):
        grid = np.arange(0.0, 30.0, 1e-3)
        candidates = [
            signals.step_schedule([(0.0, 0.0), (10.0, 0.8), (20.0, 1.0)]),
            signals.sampled_hold(signals.sine_source(1.0, 0.5, 0.5), 0.25),
            signals.sampled_hold(signals.chirp_source(0.1, 1.0, 30.0), 0.1),
            signals.random_source(3, 0.25, 0.0, 1.0),
            signals.square_wave(20.0, 0.5, delay=5.0),
        ]
        for sig in candidates:
            vals = np.array([sig(t) for t in grid])
            assert (vals >= 0.0).all() and (vals <= 1.0).all()

    def test_piecewise_constant_between_declared_instants(self):
        # value changes only at multiples of the sampling period
        ts = 0.25
        sig = signals.random_source(11, ts, 0.0, 1.0)
        grid = np.arange(0.0, 10.0, 1e-3)
        vals = np.array([sig(t) for t in grid])
        changes = np.flatnonzero(np.diff(vals) != 0.0) + 1
        for idx in changes:
            t_change = grid[idx]
            assert abs(t_change / ts - round(t_change / ts)) < 1e-6

    def test_codomain_guard_fires_on_bad_source(self):
        sig = signals.sampled_hold(lambda t: 2.0, 0.1)
        with pytest.raises(InvalidInputError):
            sig(0.0)
