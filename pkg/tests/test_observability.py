import math

import numpy as np
import pytest

from degenwave.errors import InsufficientData, TimeTooShort
from degenwave.observability import (
    default_beta,
    default_horizon,
    hidden_trace_ratio_ensemble,
    hidden_trace_stability,
    high_mode_obstruction_scan,
    observability_ratio,
)
from degenwave.params import observation_time_threshold
from degenwave.waves import full_trace_norm_closed, modal_state, random_state


@pytest.fixture(scope="module")
def horizon(domain001):
    return default_horizon(domain001.delta0)


class TestObservabilityRatio:
    def test_zero_datum_degenerate(self, basis05, domain001, horizon):
        rec = observability_ratio(modal_state(basis05, 2, 2), domain001, horizon)
        assert rec.degenerate
        assert math.isnan(rec.ratio)

    def test_single_mode_positive(self, basis05, domain001, horizon):
        st = modal_state(basis05, 1, 1, amplitudes={(1, 1): 1.0})
        rec = observability_ratio(st, domain001, horizon)
        assert rec.E0 == pytest.approx(st.omega[0, 0] ** 2 / 4.0)
        assert rec.trace_restricted > 0.0
        assert rec.interior_term > 0.0
        assert math.isfinite(rec.ratio) and rec.ratio > 0.0

    def test_scaling_invariance(self, basis05, domain001, horizon):
        st1 = modal_state(basis05, 2, 2, amplitudes={(1, 1): 1.0}, velocities={(2, 1): 0.5})
        st2 = modal_state(basis05, 2, 2, amplitudes={(1, 1): 3.7}, velocities={(2, 1): 1.85})
        r1 = observability_ratio(st1, domain001, horizon)
        r2 = observability_ratio(st2, domain001, horizon)
        assert r2.ratio == pytest.approx(r1.ratio, rel=1e-10)

    def test_time_gate(self, basis05, domain001):
        st = modal_state(basis05, 1, 1, amplitudes={(1, 1): 1.0})
        threshold = observation_time_threshold(domain001.delta0, default_beta(0.01))
        with pytest.raises(TimeTooShort):
            observability_ratio(st, domain001, 0.9 * threshold)


class TestObstructionScan:
    def test_slope_and_boundedness(self, basis05_k64, domain001, horizon):
        scan = high_mode_obstruction_scan(
            [8, 16, 32, 64], horizon, domain001, basis=basis05_k64
        )
        assert 1.9 <= scan.slope <= 2.1
        assert scan.remedied_max_over_min <= 10.0
        assert all(b > a for a, b in zip(scan.pure_ratios, scan.pure_ratios[1:]))

    def test_pure_ratio_formula(self, basis05_k64, domain001, horizon):
        scan = high_mode_obstruction_scan(
            [8, 16, 32, 64], horizon, domain001, basis=basis05_k64
        )
        n = 16
        w = math.sqrt((n * math.pi) ** 2 + basis05_k64.rho[0])
        flux_sq = basis05_k64.flux[0] ** 2
        expect = (w**2 / 4.0) / (
            flux_sq * 0.5 * (horizon / 2.0 + math.sin(2.0 * w * horizon) / (4.0 * w))
        )
        assert scan.pure_ratios[1] == pytest.approx(expect, rel=1e-12)

    def test_insufficient_data(self, basis05_k64, domain001, horizon):
        with pytest.raises(InsufficientData):
            high_mode_obstruction_scan([8, 16, 32], horizon, domain001, basis=basis05_k64)
        with pytest.raises(InsufficientData):
            high_mode_obstruction_scan([8, 10, 12, 14], horizon, domain001, basis=basis05_k64)


class TestHiddenTraceEnsemble:
    def test_reproducible(self, basis05_k64, horizon):
        a = hidden_trace_ratio_ensemble(basis05_k64, 7, 10, (8, 8), horizon)
        b = hidden_trace_ratio_ensemble(basis05_k64, 7, 10, (8, 8), horizon)
        assert a.ratios == b.ratios

    def test_single_mode_member_closed_form(self, basis05_k64, horizon):
        st = modal_state(basis05_k64, 1, 1, amplitudes={(1, 1): 2.0}, velocities={(1, 1): -1.0})
        trace = full_trace_norm_closed(st, horizon)
        h1w = 0.5 * st.omega[0, 0] ** 2 * 4.0
        l2 = 0.5 * 1.0
        w = st.omega[0, 0]
        a, b = 2.0, -1.0
        c, s = a, b / w
        # int (c cos + s sin)^2 = c^2 I_cc + 2 c s I_cs + s^2 I_ss
        icc = horizon / 2.0 + math.sin(2 * w * horizon) / (4 * w)
        iss = horizon / 2.0 - math.sin(2 * w * horizon) / (4 * w)
        ics = math.sin(w * horizon) ** 2 / (2 * w)
        expect = basis05_k64.flux[0] ** 2 * 0.5 * (c**2 * icc + 2 * c * s * ics + s**2 * iss)
        assert trace == pytest.approx(expect, rel=1e-12)
        assert trace / (h1w + l2) > 0.0

    def test_stability_under_doubling(self, basis05_k64, horizon):
        base, doubled, increase = hidden_trace_stability(
            basis05_k64, 20250810, 50, (16, 16), horizon
        )
        assert increase <= 0.05

    def test_ratio_homogeneity(self, basis05_k64, horizon):
        st = random_state(basis05_k64, 8, 8, seed=3, member=0)
        scaled = modal_state(basis05_k64, 8, 8, amplitudes=5.0 * st.a, velocities=5.0 * st.b)
        from degenwave.waves import data_norms

        r1 = full_trace_norm_closed(st, horizon) / sum(data_norms(st))
        r2 = full_trace_norm_closed(scaled, horizon) / sum(data_norms(scaled))
        assert r2 == pytest.approx(r1, rel=1e-10)


class TestTraceTimeMonotonicity:
    def test_nondecreasing_in_horizon(self, basis05, horizon):
        st = random_state(basis05, 4, 4, seed=21)
        values = [
            full_trace_norm_closed(st, t_prime)
            for t_prime in np.linspace(1.0, horizon, 25)
        ]
        diffs = np.diff(values)
        assert np.all(diffs >= -1e-12 * max(values))
