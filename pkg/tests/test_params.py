import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from degenwave.errors import (
    BetaOutOfRange,
    NonPositiveInput,
    TimeTooShort,
)
from degenwave.params import (
    CERTIFICATION_GRID_PER_UNIT,
    DegeneracyParams,
    DomainSpec,
    _band_certified,
    beta_upper_bound,
    carleman_params_from_json,
    carleman_params_to_json,
    eval_cutoff_theta,
    eval_cutoff_time,
    observation_time_threshold,
    theta_cutoff,
    theta_strips,
    time_cutoff,
    validate_carleman_params,
)


class TestDegeneracyParams:
    def test_valid_range(self):
        assert DegeneracyParams(0.5).alpha == 0.5

    @pytest.mark.parametrize("alpha", [0.0, 1.0, -0.2, 1.5])
    def test_rejects_outside_range(self, alpha):
        with pytest.raises(ValueError):
            DegeneracyParams(alpha)

    def test_critical_flag_admits_one(self):
        assert DegeneracyParams(1.0, critical=True).critical

    def test_weight(self):
        assert DegeneracyParams(0.5).weight(0.25) == pytest.approx(0.5)


class TestDomainSpec:
    def test_strips_disjoint(self):
        strips = DomainSpec(0.01).omega_theta_strips
        assert strips == ((0.0, 0.04), (0.96, 1.0))

    def test_strips_merge_when_overlapping(self):
        assert theta_strips(0.2) == ((0.0, 1.0),)

    @pytest.mark.parametrize("d0", [0.0, 1.0 / 32.0, 0.5])
    def test_rejects_bad_margin(self, d0):
        with pytest.raises(ValueError):
            DomainSpec(d0)


class TestObservationTimeThreshold:
    def test_balanced_example(self):
        # both branches equal 40 at delta0 = 0.01, beta = 0.005
        assert observation_time_threshold(0.01, 0.005) == pytest.approx(40.0)

    def test_geometry_dominated(self):
        assert observation_time_threshold(0.25, 8.0) == pytest.approx(8.0)

    def test_large_beta_limit(self):
        assert observation_time_threshold(1.0 / 32.0, 1e9) == pytest.approx(
            4.0 * math.sqrt(32.0)
        )

    def test_rejects_nonpositive(self):
        with pytest.raises(NonPositiveInput):
            observation_time_threshold(0.0, 1.0)
        with pytest.raises(NonPositiveInput):
            observation_time_threshold(0.01, -1.0)


class TestValidateCarlemanParams:
    def test_canonical_configuration(self):
        p = validate_carleman_params(0.5, DomainSpec(0.01), beta=0.005, T=50.0)
        assert p.t0 == pytest.approx(25.0)
        assert p.gamma == pytest.approx((0.005 * 2500.0 - 8.0) / 8.0)
        assert p.gamma_hat == pytest.approx(p.gamma / 4.0)
        assert 0.0 < p.epsilon < p.T / 16.0
        assert p.A1 < p.A0 < 1.0

    def test_time_too_short(self):
        with pytest.raises(TimeTooShort):
            validate_carleman_params(0.5, DomainSpec(0.01), beta=0.005, T=30.0)

    def test_beta_out_of_range(self):
        # bound is min{(2-alpha)^2/8, delta0}/2 = 0.01 < 0.02
        with pytest.raises(BetaOutOfRange):
            validate_carleman_params(0.5, DomainSpec(0.02), beta=0.02, T=80.0)

    def test_rejects_nonpositive_scalars(self):
        with pytest.raises(NonPositiveInput):
            validate_carleman_params(0.5, DomainSpec(0.01), beta=0.005, T=50.0, s=0.0)

    def test_certification_survives_grid_doubling(self):
        p = validate_carleman_params(0.5, DomainSpec(0.01), beta=0.005, T=50.0)
        assert _band_certified(
            p.alpha, p.beta, p.T, p.gamma_hat, p.epsilon,
            2 * CERTIFICATION_GRID_PER_UNIT,
        )

    @settings(max_examples=30, deadline=None)
    @given(
        d0=st.floats(min_value=0.002, max_value=0.031),
        frac=st.floats(min_value=0.1, max_value=1.0),
    )
    def test_threshold_gate_is_sharp(self, d0, frac):
        beta = frac * beta_upper_bound(0.5, d0)
        t_star = observation_time_threshold(d0, beta)
        validate_carleman_params(0.5, DomainSpec(d0), beta=beta, T=t_star * 1.001)
        with pytest.raises(TimeTooShort):
            validate_carleman_params(0.5, DomainSpec(d0), beta=beta, T=t_star * 0.999)


class TestThetaCutoff:
    def test_plateau_and_gap(self):
        spec = theta_cutoff(0.01)
        v, d1, d2 = eval_cutoff_theta(spec, np.array([0.5, 0.015]))
        assert v[0] == 1.0 and d1[0] == 0.0 and d2[0] == 0.0
        assert v[1] == 0.0 and d1[1] == 0.0 and d2[1] == 0.0

    def test_ramp_interior(self):
        spec = theta_cutoff(0.01)
        v, d1, _ = eval_cutoff_theta(spec, 0.025)
        assert 0.0 < float(v) < 1.0
        assert float(d1) > 0.0

    def test_exact_idempotent_outside_bands(self):
        d0 = 0.01
        spec = theta_cutoff(d0)
        theta = np.linspace(0.0, 1.0, 5001)
        bands = ((theta > 2 * d0) & (theta < 3 * d0)) | (
            (theta > 1 - 3 * d0) & (theta < 1 - 2 * d0)
        )
        v, _, _ = eval_cutoff_theta(spec, theta)
        assert np.all(v[~bands] * (1.0 - v[~bands]) == 0.0)

    def test_derivative_bounds_scale_free(self):
        # max |z'| delta0 and |z''| delta0^2 agree across margins to 1%
        stats = []
        for d0 in (1.0 / 64.0, 1.0 / 128.0, 1.0 / 256.0):
            x = np.linspace(0.0, 1.0, 10001)
            _, d1, d2 = eval_cutoff_theta(theta_cutoff(d0), x)
            stats.append((np.max(np.abs(d1)) * d0, np.max(np.abs(d2)) * d0**2))
        first, second = zip(*stats)
        assert max(first) / min(first) < 1.01
        assert max(second) / min(second) < 1.01

    def test_derivatives_match_finite_differences(self):
        spec = theta_cutoff(0.01)
        x = np.array([0.022, 0.025, 0.028, 0.975])
        h = 1e-6
        v, d1, d2 = eval_cutoff_theta(spec, x)
        vp, _, _ = eval_cutoff_theta(spec, x + h)
        vm, _, _ = eval_cutoff_theta(spec, x - h)
        assert np.allclose((vp - vm) / (2 * h), d1, rtol=1e-4)
        # centered FD2 roundoff floor is ~eps/h^2, so compare against the
        # derivative scale rather than pointwise (S'' vanishes mid-band)
        scale = np.max(np.abs(d2))
        assert np.allclose((vp - 2 * v + vm) / h**2, d2, rtol=1e-3, atol=1e-3 * scale)


class TestTimeCutoff:
    def test_plateau_gap_ramp(self):
        T, eps = 40.0, 2.0
        spec = time_cutoff(eps, T)
        v, d1, d2 = eval_cutoff_time(spec, np.array([T / 2, eps / 2, 1.5 * eps]))
        assert (v[0], d1[0], d2[0]) == (1.0, 0.0, 0.0)
        assert (v[1], d1[1], d2[1]) == (0.0, 0.0, 0.0)
        assert 0.0 < v[2] < 1.0 and d1[2] > 0.0

    def test_total_on_real_line(self):
        spec = time_cutoff(2.0, 40.0)
        v, _, _ = eval_cutoff_time(spec, np.array([-5.0, 100.0]))
        assert np.all(v == 0.0)


class TestJsonInterface:
    def test_round_trip(self):
        doc = {"alpha": 0.5, "delta0": 0.01, "beta": 0.005, "T": 50.0,
               "lambda": 1.0, "s": 2.0}
        params = carleman_params_from_json(json.dumps(doc))
        out = json.loads(carleman_params_to_json(params))
        assert out["lambda"] == 1.0
        for key in ("gamma", "gamma_hat", "epsilon", "A0", "A1", "t0"):
            assert key in out

    def test_missing_key(self):
        with pytest.raises(KeyError):
            carleman_params_from_json({"alpha": 0.5})
