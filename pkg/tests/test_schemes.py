import numpy as np
import pytest

from risholo import (
    PgmSettings,
    RisPhaseProfile,
    TransmitCovariance,
    direct_path_distance,
    farfield_phases,
    focus_distances,
    focusing_phases,
    objective,
    pgm_solve,
    project_q,
    scheme_far_field,
    scheme_location_focus,
    scheme_los_csi,
    scheme_perfect_csi,
    water_filling,
    waterfill_powers,
)
from risholo.geometry import Surface, element_positions

from conftest import (
    NOISE_POWER_W,
    POWER_BUDGET_W,
    make_channels,
    make_geometry,
    random_complex,
)


def settings(**kw):
    defaults = dict(power_budget=POWER_BUDGET_W, noise_power=NOISE_POWER_W)
    defaults.update(kw)
    return PgmSettings(**defaults)


def shared_init(geom, seed=0):
    rng = np.random.default_rng(seed)
    return RisPhaseProfile(rng.uniform(-np.pi, np.pi, geom.num_ris))


class TestWaterFilling:
    def test_rank_one_channel_gets_all_power(self):
        rng = np.random.default_rng(0)
        u = random_complex(rng, 4)
        v = random_complex(rng, 3)
        h = np.outer(u, v.conj())
        q = water_filling(h, 2.0, 0.1)
        powers = np.linalg.eigvalsh(q.q)
        assert powers[-1] == pytest.approx(2.0, rel=1e-9)
        assert np.all(powers[:-1] < 1e-12)
        # the powered direction is the top right-singular vector
        _, _, vh = np.linalg.svd(h)
        top = vh[0].conj()
        assert abs(top.conj() @ q.q @ top) == pytest.approx(2.0, rel=1e-9)

    def test_equal_modes_split_evenly_at_high_power(self):
        h = np.diag([1.0, 1.0]).astype(complex)
        q = water_filling(h, 10.0, 0.01)
        np.testing.assert_allclose(np.diag(q.q).real, [5.0, 5.0], rtol=1e-9)

    def test_hand_solved_water_level(self):
        # singular values (1, 0.5), noise 0.1, budget 1: level 0.75,
        # powers (0.65, 0.35)
        h = np.diag([1.0, 0.5]).astype(complex)
        q = water_filling(h, 1.0, 0.1)
        np.testing.assert_allclose(np.diag(q.q).real, [0.65, 0.35], rtol=1e-12)

    def test_weak_mode_gets_nothing_at_low_power(self):
        powers = waterfill_powers(np.array([1.0, 0.1]), 0.05, 0.1)
        assert powers[1] == 0.0
        assert powers[0] == pytest.approx(0.05)

    def test_budget_saturated_exactly(self):
        rng = np.random.default_rng(1)
        for _ in range(10):
            h = random_complex(rng, 4, 6)
            q = water_filling(h, 3.0, 0.5)
            assert q.trace == pytest.approx(3.0, rel=1e-9)

    def test_zero_channel_rejected(self):
        with pytest.raises(ValueError):
            water_filling(np.zeros((3, 3), dtype=complex), 1.0, 0.1)

    def test_budget_dwarfed_by_noise_floor(self):
        # floors ~1e13 absorb a 1e-4 budget in floats; the strongest mode
        # must still receive the whole budget
        powers = waterfill_powers(np.array([1e-10, 0.5e-10]), 1e-4, 0.1)
        assert powers[0] == pytest.approx(1e-4)
        assert powers[1] == 0.0

    def test_beats_random_feasible_covariances(self):
        rng = np.random.default_rng(2)
        theta = RisPhaseProfile(np.zeros(1))
        f2 = np.zeros((1, 3), dtype=complex)
        f3 = np.zeros((2, 1), dtype=complex)
        for _ in range(5):
            h = random_complex(rng, 2, 3)
            q_opt = water_filling(h, 1.0, 0.2)
            best = objective(theta, q_opt, h, f2, f3, 0.2)
            for _ in range(100):
                raw = random_complex(rng, 3, 3)
                q_rand = project_q(raw @ raw.conj().T, 1.0)
                assert best >= objective(theta, q_rand, h, f2, f3, 0.2) - 1e-12

    def test_matches_gradient_solve_over_covariance(self):
        rng = np.random.default_rng(3)
        theta = RisPhaseProfile(np.zeros(1))
        f2 = np.zeros((1, 3), dtype=complex)
        f3 = np.zeros((3, 1), dtype=complex)
        for _ in range(3):
            h = random_complex(rng, 3, 3)
            q_wf = water_filling(h, 1.0, 0.2)
            rate_wf = objective(theta, q_wf, h, f2, f3, 0.2)
            res = pgm_solve(h, f2, f3, settings(power_budget=1.0, noise_power=0.2),
                            rng=np.random.default_rng(0))
            assert abs(res.trace.objective[-1] - rate_wf) <= 0.005 * rate_wf


class TestFocusingPhases:
    def test_cascade_phase_matches_direct_phase_for_every_cell(self):
        geom = make_geometry(ris_side=6)
        theta = focusing_phases(geom)
        d1, d2 = focus_distances(geom)
        k0 = geom.wavenumber
        cascade = k0 * d1 + theta.phases + k0 * d2
        direct = k0 * direct_path_distance(geom)
        residual = np.mod(cascade - direct + np.pi, 2 * np.pi) - np.pi
        np.testing.assert_allclose(residual, 0.0, atol=1e-8)

    def test_direct_phase_at_equal_heights(self):
        geom = make_geometry(tx_height=2.0, rx_height=2.0, wall_distance=15.0)
        assert direct_path_distance(geom) * geom.wavenumber == pytest.approx(
            geom.wavenumber * 15.0
        )

    def test_center_cell_hand_value(self):
        geom = make_geometry(ris_side=5, wall_distance=15.0, ris_offset=7.5, tx_height=2.0)
        theta = focusing_phases(geom)
        k0 = geom.wavenumber
        expected = k0 * (15.0 - 2.0 * np.sqrt(7.5**2 + 4.0))
        expected = np.mod(expected + np.pi, 2 * np.pi) - np.pi
        assert theta.phases[12] == pytest.approx(expected, abs=1e-9)

    def test_phases_wrapped(self):
        geom = make_geometry(ris_side=10)
        for phases in (focusing_phases(geom).phases, farfield_phases(geom).phases):
            assert np.all(phases >= -np.pi)
            assert np.all(phases <= np.pi)


class TestFarfieldPhases:
    def test_center_cell_agrees_with_focusing(self):
        geom = make_geometry(ris_side=5)
        assert farfield_phases(geom).phases[12] == pytest.approx(
            focusing_phases(geom).phases[12], abs=1e-10
        )

    def test_unwrapped_profile_is_affine_in_cell_x(self):
        geom = make_geometry(ris_side=6)
        d1, d2 = focus_distances(geom)  # noqa: F841 - only x matters below
        k0 = geom.wavenumber
        x = element_positions(geom, Surface.RIS)[:, 0]
        d1c = np.hypot(geom.ris_offset, geom.tx_height)
        d2c = np.hypot(geom.wall_distance - geom.ris_offset, geom.rx_height)
        slope = -k0 * (geom.ris_offset / d1c - (geom.wall_distance - geom.ris_offset) / d2c)
        intercept = k0 * (direct_path_distance(geom) - d1c - d2c)
        expected = np.mod(intercept + slope * x + np.pi, 2 * np.pi) - np.pi
        np.testing.assert_allclose(farfield_phases(geom).phases, expected, atol=1e-9)

    def test_matches_focusing_rate_at_long_range(self):
        geom = make_geometry(ris_side=8, wall_distance=1000.0, ris_offset=500.0)
        channels = make_channels(geom, rician_k=100000.0, direct_blocked=False)
        st = settings()
        near = scheme_location_focus(geom, channels, st)
        far = scheme_far_field(geom, channels, st)
        assert far.rate == pytest.approx(near.rate, rel=0.01)


class TestIterativeSchemes:
    def test_los_csi_matches_perfect_csi_at_huge_k(self):
        geom = make_geometry(ris_side=6)
        channels = make_channels(geom, rician_k=100000.0, direct_blocked=True)
        st = settings()
        init = shared_init(geom)
        perfect = scheme_perfect_csi(channels, st, init_theta=init)
        los = scheme_los_csi(channels, st, init_theta=init)
        assert los.rate == pytest.approx(perfect.rate, rel=0.01)

    def test_los_csi_covariance_is_waterfilled_on_true_channel(self):
        # the joint solve's covariance must leave no trace in the outcome
        geom = make_geometry(ris_side=4)
        channels = make_channels(geom, rician_k=5.0, direct_blocked=False)
        st = settings()
        out = scheme_los_csi(channels, st, init_theta=shared_init(geom))
        expected = water_filling(out.end_to_end, st.power_budget, st.noise_power)
        np.testing.assert_allclose(out.q.q, expected.q, atol=1e-18)

    def test_perfect_csi_dominates_los_csi_at_low_k(self):
        # pure Rayleigh: the full-knowledge solve sees the realization the
        # los-only solve cannot, so it wins on every trial
        geom = make_geometry(tx_side=4, rx_side=4, ris_side=3)
        st = settings()
        for trial in range(3):
            channels = make_channels(geom, rician_k=0.0, direct_blocked=False, trial=trial)
            init = shared_init(geom, seed=trial)
            perfect = scheme_perfect_csi(channels, st, init_theta=init)
            los = scheme_los_csi(channels, st, init_theta=init)
            assert perfect.rate >= los.rate - 1e-3

    def test_dominance_chain_at_huge_k(self):
        geom = make_geometry(ris_side=6)
        st = settings()
        for trial in range(2):
            channels = make_channels(
                geom, rician_k=100000.0, direct_blocked=True, trial=trial
            )
            init = shared_init(geom, seed=trial)
            r1 = scheme_perfect_csi(channels, st, init_theta=init).rate
            r2 = scheme_los_csi(channels, st, init_theta=init).rate
            r3 = scheme_location_focus(geom, channels, st).rate
            r4 = scheme_far_field(geom, channels, st).rate
            eps = 1e-3
            assert r1 >= r2 - eps
            assert r2 >= r3 - eps
            assert r3 >= r4 - eps

    def test_rate_is_evaluated_on_true_channels(self):
        geom = make_geometry(ris_side=4)
        channels = make_channels(geom, rician_k=2.0, direct_blocked=False)
        st = settings()
        out = scheme_location_focus(geom, channels, st)
        recomputed = objective(out.theta, out.q, channels.h_dir, channels.h, channels.g,
                               st.noise_power)
        assert out.rate == pytest.approx(recomputed, rel=1e-12)

    def test_end_to_end_identity(self):
        geom = make_geometry(ris_side=4)
        channels = make_channels(geom, rician_k=2.0, direct_blocked=False)
        out = scheme_location_focus(geom, channels, settings())
        phi = out.theta.reflection
        expected = channels.h_dir + (channels.g * phi[None, :]) @ channels.h
        np.testing.assert_allclose(out.end_to_end, expected, rtol=1e-14)

    def test_blocked_single_cell_cascade_closed_form(self):
        # one transmit element, one receive element, one cell, no direct path:
        # the rate is log2(1 + |g h|^2 P / sigma^2) whatever the phase
        geom = make_geometry(tx_side=1, rx_side=1, ris_side=1)
        channels = make_channels(geom, rician_k=100000.0, direct_blocked=True)
        st = settings()
        out = scheme_perfect_csi(channels, st, init_theta=shared_init(geom))
        amp = abs(channels.g[0, 0] * channels.h[0, 0])
        expect = np.log2(1.0 + amp**2 * st.power_budget / st.noise_power)
        assert out.rate == pytest.approx(expect, rel=1e-6)
