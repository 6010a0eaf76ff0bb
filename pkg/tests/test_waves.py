import math

import numpy as np
import pytest

from degenwave.errors import GridMismatch, TruncationTooSmall
from degenwave.waves import (
    RANDOM_CAP,
    boundary_trace_norm,
    data_norms,
    duhamel_forcing,
    energy,
    energy_series,
    evolve,
    full_trace_norm_closed,
    interior_observation_norm,
    modal_state,
    parseval_l2_norm_sq,
    project_initial_data,
    random_state,
    sine_overlap_matrix,
)

T_HORIZON = 44.0


def interp_mode(basis, k):
    """Radial eigenvector as a callable via linear interpolation."""

    def f(r):
        r = np.asarray(r, dtype=float)
        return np.interp(r.ravel(), basis.mesh.nodes, basis.R[k - 1]).reshape(r.shape)

    return f


class TestProjection:
    def test_basis_element_round_trip(self, basis05):
        r1 = interp_mode(basis05, 1)
        st = project_initial_data(
            lambda th, r: np.sin(math.pi * th) * r1(r), None, basis05, 4, 4
        )
        assert st.a[0, 0] == pytest.approx(1.0, abs=1e-10)
        assert np.abs(st.a).sum() - abs(st.a[0, 0]) < 1e-10
        assert np.all(st.b == 0.0)

    def test_velocity_projection(self, basis05):
        r1 = interp_mode(basis05, 1)
        st = project_initial_data(
            None, lambda th, r: np.sin(2 * math.pi * th) * r1(r), basis05, 4, 4
        )
        assert st.b[1, 0] == pytest.approx(1.0, abs=1e-10)
        assert np.abs(st.b).sum() - abs(st.b[1, 0]) < 1e-10

    def test_smooth_data_reconstruction_converges(self, basis05):
        phi0 = lambda th, r: th * (1.0 - th) * r * (1.0 - r)
        errors = []
        for trunc in (2, 4, 8, 16):
            st = project_initial_data(phi0, None, basis05, trunc, trunc)
            # Parseval defect: ||phi0||^2 - sum of squared coefficients / 2
            theta = np.linspace(0.0, 1.0, 513)[:, None]
            nodes = basis05.mesh.nodes[None, :]
            vals = phi0(theta, nodes)
            lump = np.zeros(basis05.mesh.nodes.size)
            mats = basis05.mats
            lump[:] = mats.md
            lump[:-1] += mats.me
            lump[1:] += mats.me
            w_theta = np.full(513, 1.0 / 512)
            w_theta[[0, -1]] = 0.5 / 512
            norm_sq = float((vals**2 * lump[None, :] * w_theta[:, None]).sum())
            errors.append(norm_sq - parseval_l2_norm_sq(st))
        assert all(e > -1e-12 for e in errors)  # Bessel-type inequality
        assert errors[-1] < 0.02 * errors[0]

    def test_modal_dictionary_input(self, basis05):
        st = project_initial_data({(2, 3): 1.5}, {(1, 1): -0.5}, basis05, 4, 4)
        assert st.a[1, 2] == 1.5
        assert st.b[0, 0] == -0.5

    def test_truncation_errors(self, basis05):
        with pytest.raises(TruncationTooSmall):
            modal_state(basis05, 4, basis05.k_max + 1)
        with pytest.raises(TruncationTooSmall):
            modal_state(basis05, 4, 4, amplitudes={(5, 1): 1.0})


class TestEvolution:
    def test_identity_at_zero(self, basis05):
        st = random_state(basis05, 4, 4, seed=1)
        st0 = evolve(st, 0.0)
        assert np.allclose(st0.a, st.a, atol=0.0)
        assert np.allclose(st0.b, st.b, atol=0.0)

    def test_half_period_single_mode(self, basis05):
        st = modal_state(basis05, 2, 2, amplitudes={(1, 1): 1.0})
        w = st.omega[0, 0]
        half = evolve(st, math.pi / w)
        assert half.a[0, 0] == pytest.approx(-1.0, rel=1e-14)
        assert abs(half.b[0, 0]) < 1e-12

    def test_linearity(self, basis05):
        s1 = random_state(basis05, 4, 4, seed=2)
        s2 = random_state(basis05, 4, 4, seed=3)
        c1, c2 = 1.3, -0.4
        combo = modal_state(
            basis05, 4, 4, amplitudes=c1 * s1.a + c2 * s2.a, velocities=c1 * s1.b + c2 * s2.b
        )
        t = 17.3
        e_combo = evolve(combo, t)
        e1, e2 = evolve(s1, t), evolve(s2, t)
        assert np.allclose(e_combo.a, c1 * e1.a + c2 * e2.a, atol=1e-12)
        assert np.allclose(e_combo.b, c1 * e1.b + c2 * e2.b, atol=1e-12)

    def test_frequencies_strictly_increasing(self, basis05):
        st = modal_state(basis05, 6, 6)
        assert np.all(np.diff(st.omega, axis=0) > 0.0)
        assert np.all(np.diff(st.omega, axis=1) > 0.0)
        mu = (np.arange(1, 7) * math.pi) ** 2
        assert np.array_equal(st.omega_sq, mu[:, None] + basis05.rho[None, :6])

    def test_energy_values(self, basis05):
        st = modal_state(basis05, 1, 1, amplitudes={(1, 1): 1.0})
        assert energy(st) == pytest.approx(st.omega[0, 0] ** 2 / 4.0, rel=1e-14)
        kin = modal_state(basis05, 1, 1, velocities={(1, 1): 1.0})
        assert energy(kin) == pytest.approx(0.25, rel=1e-14)
        assert energy(modal_state(basis05, 2, 2)) == 0.0

    def test_energy_conservation(self, basis05):
        st = random_state(basis05, 8, 8, seed=11)
        e0 = energy(st)
        series = energy_series(st, np.linspace(0.0, T_HORIZON, 1001))
        drift = np.max(np.abs(series.total - e0)) / e0
        assert drift <= 1e-12

    def test_data_norms_equal_twice_energy(self, basis05):
        st = random_state(basis05, 6, 6, seed=4)
        h1w, l2 = data_norms(st)
        assert h1w + l2 == pytest.approx(2.0 * energy(st), rel=1e-14)

    def test_parseval(self, basis05):
        st = random_state(basis05, 6, 6, seed=5)
        at_t = evolve(st, 3.7)
        # reconstruct on the tensor grid and integrate discretely
        theta = np.linspace(0.0, 1.0, 2049)
        w_theta = np.full(theta.size, 1.0 / 2048)
        w_theta[[0, -1]] *= 0.5
        sines = np.sin(np.outer(np.arange(1, 7) * math.pi, theta))
        mats = basis05.mats
        lump = mats.md.copy()
        lump[:-1] += mats.me
        lump[1:] += mats.me
        field = np.einsum("nk,nt,kr->tr", at_t.a, sines, basis05.R[:6])
        norm_sq = float((field**2 * lump[None, :] * w_theta[:, None]).sum())
        assert norm_sq == pytest.approx(parseval_l2_norm_sq(at_t), rel=1e-10)


class TestDuhamel:
    def test_zero_forcing_equals_evolve(self, basis05):
        st = random_state(basis05, 3, 3, seed=6)
        f = np.zeros((3, 3, 101))
        t = 50 * 0.04
        forced = duhamel_forcing(st, f, 0.04, t)
        free = evolve(st, t)
        assert np.allclose(forced.a, free.a, atol=0.0)

    def test_constant_forcing_second_order(self, basis05):
        st = modal_state(basis05, 1, 1)
        w = st.omega[0, 0]
        c = 0.7
        t_end = 2.0
        errs = []
        for steps in (1000, 2000):
            dt = t_end / steps
            f = np.full((1, 1, steps + 1), c)
            out = duhamel_forcing(st, f, dt, t_end)
            exact = c * (1.0 - math.cos(w * t_end)) / w**2
            errs.append(abs(out.a[0, 0] - exact))
        assert errs[1] < 1e-5
        assert errs[0] / errs[1] == pytest.approx(4.0, rel=0.2)

    def test_resonant_forcing(self, basis05):
        st = modal_state(basis05, 1, 1)
        w = st.omega[0, 0]
        steps = 4000
        t_end = 2.0
        dt = t_end / steps
        s_grid = np.arange(steps + 1) * dt
        f = np.cos(w * s_grid)[None, None, :]
        out = duhamel_forcing(st, f, dt, t_end)
        assert out.a[0, 0] == pytest.approx(t_end * math.sin(w * t_end) / (2 * w), abs=1e-6)

    def test_grid_mismatch(self, basis05):
        st = modal_state(basis05, 2, 2)
        with pytest.raises(GridMismatch):
            duhamel_forcing(st, np.zeros((3, 3, 11)), 0.1, 0.5)
        with pytest.raises(GridMismatch):
            duhamel_forcing(st, np.zeros((2, 2, 11)), 0.1, 0.5678)


class TestBoundaryTrace:
    def test_zero_state(self, basis05):
        st = modal_state(basis05, 2, 2)
        rep = boundary_trace_norm(st, T_HORIZON, 0.01, method="closed-form")
        assert rep.full_trace_norm_sq == 0.0
        assert rep.restricted_trace_norm_sq == 0.0

    def test_single_mode_closed_form(self, basis05):
        st = modal_state(basis05, 1, 1, amplitudes={(1, 1): 1.0})
        w = st.omega[0, 0]
        flux = basis05.flux[0]
        expect = flux**2 * 0.5 * (T_HORIZON / 2 + math.sin(2 * w * T_HORIZON) / (4 * w))
        rep = boundary_trace_norm(st, T_HORIZON, 0.01, method="closed-form")
        assert rep.full_trace_norm_sq == pytest.approx(expect, rel=1e-12)
        assert full_trace_norm_closed(st, T_HORIZON) == pytest.approx(expect, rel=1e-12)

    def test_restricted_approaches_full(self, basis05):
        st = random_state(basis05, 4, 4, seed=8)
        rep = boundary_trace_norm(st, T_HORIZON, 1e-7, method="closed-form")
        assert rep.restricted_trace_norm_sq == pytest.approx(
            rep.full_trace_norm_sq, rel=1e-5
        )

    def test_restricted_below_full(self, basis05):
        st = random_state(basis05, 6, 6, seed=9)
        rep = boundary_trace_norm(st, T_HORIZON, 0.01, method="closed-form")
        assert 0.0 < rep.restricted_trace_norm_sq <= rep.full_trace_norm_sq

    def test_trapezoid_agrees_with_closed_form(self, basis05):
        st = random_state(basis05, 4, 4, seed=10)
        exact = boundary_trace_norm(st, T_HORIZON, 0.01, method="closed-form")
        quad = boundary_trace_norm(st, T_HORIZON, 0.01, time_samples="auto")
        assert not quad.underresolved
        assert quad.full_trace_norm_sq == pytest.approx(
            exact.full_trace_norm_sq, rel=1e-5
        )
        assert quad.restricted_trace_norm_sq == pytest.approx(
            exact.restricted_trace_norm_sq, rel=1e-5
        )

    def test_underresolved_flag(self, basis05):
        st = random_state(basis05, 16, 16, seed=12)
        rep = boundary_trace_norm(st, T_HORIZON, 0.01, time_samples=64)
        assert rep.underresolved


class TestInteriorNorm:
    def test_zero_state(self, basis05):
        st = modal_state(basis05, 2, 2)
        assert interior_observation_norm(st, 0.01, T_HORIZON) == 0.0

    def test_region_exhaustion(self, basis05):
        st = modal_state(basis05, 1, 1, amplitudes={(1, 1): 1.0})
        w = st.omega[0, 0]
        val = interior_observation_norm(st, 0.2499999, T_HORIZON, method="closed-form")
        g11 = basis05.consistent_gram()[0, 0]
        amp_int = T_HORIZON / 2 + math.sin(2 * w * T_HORIZON) / (4 * w)
        expect = 2.0 * T_HORIZON * energy(st) + 0.5 * amp_int * g11
        assert val == pytest.approx(expect, rel=1e-5)

    def test_strip_measure_scaling(self, basis05):
        st = modal_state(basis05, 1, 1, amplitudes={(1, 1): 1.0})
        small = interior_observation_norm(st, 0.001, T_HORIZON, method="closed-form")
        double = interior_observation_norm(st, 0.002, T_HORIZON, method="closed-form")
        assert small > 0.0
        assert small / double == pytest.approx(0.5, rel=0.05)

    def test_trapezoid_matches_closed_form(self, basis05):
        st = random_state(basis05, 4, 4, seed=13)
        exact = interior_observation_norm(st, 0.01, T_HORIZON, method="closed-form")
        quad = interior_observation_norm(
            st, 0.01, T_HORIZON, method="trapezoid", time_samples="auto"
        )
        assert quad == pytest.approx(exact, rel=1e-5)


class TestRandomState:
    def test_truncation_prefix_property(self, basis05):
        small = random_state(basis05, 8, 8, seed=42, member=3)
        large = random_state(basis05, 16, 16, seed=42, member=3)
        assert np.array_equal(large.a[:8, :8], small.a)
        assert np.array_equal(large.b[:8, :8], small.b)

    def test_reproducible(self, basis05):
        a = random_state(basis05, 4, 4, seed=5, member=1)
        b = random_state(basis05, 4, 4, seed=5, member=1)
        assert np.array_equal(a.a, b.a)

    def test_cap(self, basis05):
        with pytest.raises(TruncationTooSmall):
            random_state(basis05, RANDOM_CAP + 1, 4, seed=0)


class TestOverlapMatrices:
    def test_full_interval_orthogonality(self):
        G = sine_overlap_matrix(6, 0.0, 1.0)
        assert np.allclose(G, 0.5 * np.eye(6), atol=1e-14)

    def test_against_quadrature(self):
        from scipy.integrate import quad

        G = sine_overlap_matrix(4, 0.1, 0.7)
        for n in range(1, 5):
            for m in range(1, 5):
                ref, _ = quad(
                    lambda th: math.sin(n * math.pi * th) * math.sin(m * math.pi * th),
                    0.1,
                    0.7,
                )
                assert G[n - 1, m - 1] == pytest.approx(ref, abs=1e-12)
