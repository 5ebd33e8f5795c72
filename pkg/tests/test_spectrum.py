from dataclasses import replace

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from axion_optomech.spectrum import (
    OptomechParams,
    PeakNotFoundError,
    locate_peak,
    probe_sideband,
    scan_spectrum,
    sideband_coefficients,
    solve_sideband,
    steady_state_intensity,
    transmission,
    transmission_at_offset,
)

PAPER = OptomechParams()


def residual(p, s):
    b = 2 * p.g**2 / p.omega_m
    return abs(p.E_pu**2 - (p.kappa**2 + (p.Delta - b * s) ** 2) * s) / p.E_pu**2


def bisect_sigma(p, n=200):
    f = lambda s: (p.kappa**2 + (p.Delta - 2 * p.g**2 * s / p.omega_m) ** 2) * s - p.E_pu**2  # noqa: E731
    lo, hi = mpmath.mpf(0), 2 * mpmath.mpf(p.E_pu) ** 2 / p.kappa**2
    for _ in range(n):
        mid = (lo + hi) / 2
        lo, hi = (lo, mid) if f(mid) > 0 else (mid, hi)
    return lo


class TestSteadyState:
    def test_undriven(self):
        assert steady_state_intensity(replace(PAPER, E_pu=0.0)).sigma == 0.0

    def test_linear_cavity(self):
        p = replace(PAPER, g=0.0)
        assert steady_state_intensity(p).sigma == p.E_pu**2 / p.kappa**2

    def test_default_parameters_against_bisection(self, mp40):
        ss = steady_state_intensity(PAPER)
        assert ss.sigma == pytest.approx(float(bisect_sigma(PAPER)), rel=1e-14)
        assert ss.sigma == pytest.approx(1.0e-6, rel=1e-6)
        assert not ss.multistable

    def test_bistable_branch_selection(self, mp40):
        # Delta well above sqrt(3) kappa with strong drive: three positive roots
        p = OptomechParams(omega_m=1e5, kappa=1e3, Delta=1e4, g=1e3, E_pu=5e4, E_pr=1.0)
        ss = steady_state_intensity(p)
        assert ss.multistable and len(ss.roots) == 3
        assert ss.sigma == min(ss.roots)
        b = 2 * p.g**2 / p.omega_m
        oracle = sorted(
            float(r.real) for r in mpmath.polyroots(
                [b**2, -2 * p.Delta * b, p.kappa**2 + p.Delta**2, -p.E_pu**2], maxsteps=200, extraprec=100)
            if abs(r.imag) < 1e-20 and r.real > 0
        )
        assert list(ss.roots) == pytest.approx(oracle, rel=1e-12)
        for s in ss.roots:
            assert residual(p, s) < 1e-12

    @settings(max_examples=200, deadline=None)
    @given(
        st.floats(3, 7), st.floats(3, 7), st.floats(-5, 5), st.floats(0, 5), st.floats(0, 7),
    )
    def test_residual_property(self, log_wm, log_k, det, log_g, log_e):
        k = 10**log_k
        p = OptomechParams(omega_m=10**log_wm, kappa=k, Delta=det * k, g=10**log_g, E_pu=10**log_e)
        ss = steady_state_intensity(p)
        assert ss.sigma >= 0
        for s in ss.roots:
            assert residual(p, s) < 1e-12


class TestSideband:
    def test_no_coupling_collapses(self):
        p = replace(PAPER, g=0.0, Delta=37.0)
        delta = np.array([1e3, 9.9e4, 1e5, 3e5])
        expected = p.E_pr / (p.kappa - 1j * delta + 1j * p.Delta)
        np.testing.assert_allclose(probe_sideband(p, delta, 1e-6), expected, rtol=1e-14)
        assert sideband_coefficients(p, 1e5, 1e-6)[3] == 0

    def test_no_probe(self):
        assert probe_sideband(replace(PAPER, E_pr=0.0), 1e5, 1e-6) == 0

    def test_on_resonance_against_direct_high_precision(self, mp40):
        p = replace(PAPER, omega_m=1e5 + 10)
        sigma = steady_state_intensity(p).sigma
        sol = solve_sideband(p, p.omega_m)

        mpf = mpmath.mpf
        d, wm, k, gm = mpf(p.omega_m), mpf(p.omega_m), mpf(p.kappa), mpf(p.gamma_m)
        g, s, D = mpf(p.g), mpf(sigma), mpf(p.Delta)
        K1 = wm**2 - 1j * d * gm - d**2
        K2 = -k + 1j * d + 1j * D - 2j * g**2 * s / wm
        K3 = k - 1j * d + 1j * D - 2j * g**2 * s / wm
        K4 = 2 * g**2 * s * wm
        a = p.E_pr * K1 * (K1 * K2 - 1j * K4) / ((K1 * K3 - 1j * K4) * (K1 * K2 - 1j * K4) + K4**2)
        assert abs(sol.a_plus) == pytest.approx(float(abs(a)), rel=1e-10)
        assert abs(sol.a_plus - complex(a)) / abs(a) < 1e-10
        assert sol.K4 == pytest.approx(float(K4), rel=1e-14)
        assert sol.K1 == pytest.approx(complex(K1), rel=1e-9)


class TestTransmission:
    def test_linear_cavity_on_pump(self):
        t, T = transmission(replace(PAPER, g=0.0), 0.0)
        assert t == pytest.approx(-1.0, abs=1e-15)
        assert T == pytest.approx(1.0, abs=1e-15)

    def test_needs_probe(self):
        with pytest.raises(ValueError):
            transmission(replace(PAPER, E_pr=0.0), 1e5)

    def test_far_from_line_is_unity(self):
        _, T = transmission_at_offset(PAPER, -50.0)
        assert abs(T - 1) < 1e-6

    def test_zero_coupling_matches_linear_cavity_everywhere(self):
        p = replace(PAPER, g=0.0)
        x = np.linspace(-100, 100, 4001)
        t, _ = transmission_at_offset(p, x)
        delta = p.omega0 + x
        t_lin = 1 - 2 * p.kappa / (p.kappa - 1j * delta)
        assert np.max(np.abs(t - t_lin)) < 1e-12

    def test_probe_amplitude_cancels(self):
        x = PAPER.mechanical_offset + np.linspace(-3, 3, 101) * PAPER.gamma_m
        _, T1 = transmission_at_offset(PAPER, x)
        _, T2 = transmission_at_offset(replace(PAPER, E_pr=PAPER.E_pr * 37.5), x)
        np.testing.assert_allclose(T2, T1, rtol=1e-12)

    def test_single_feature_at_mechanical_line(self):
        p = PAPER.with_mechanical_offset(10.0)
        spec = scan_spectrum(p)
        dev = np.abs(spec.transmission - 1)
        hot = spec.offsets[dev > 1e-3]
        assert hot.size > 0
        assert np.all(np.abs(hot - 10.0) < 50 * p.gamma_m)


class TestScan:
    def test_cluster_centered_on_line(self):
        for off in (10.0, 0.0):
            p = PAPER.with_mechanical_offset(off)
            spec = scan_spectrum(p)
            assert spec.peak_in_window
            near = np.abs(spec.offsets - off) <= p.gamma_m / 2
            assert near.sum() >= 20
            assert np.all(np.diff(spec.offsets) > 0)
            assert len(spec.offsets) == len(spec.transmission)
            assert np.all(spec.transmission >= 0)

    def test_halving_refinement_step_keeps_samples(self):
        p = PAPER.with_mechanical_offset(10.0)
        a = scan_spectrum(p, refine_step=1 / 40)
        b = scan_spectrum(p, refine_step=1 / 80)
        common, ia, ib = np.intersect1d(a.offsets, b.offsets, return_indices=True)
        assert len(common) == len(a.offsets)
        assert np.array_equal(a.transmission[ia], b.transmission[ib])

    def test_line_outside_window_flagged(self):
        spec = scan_spectrum(PAPER.with_mechanical_offset(150.0))
        assert not spec.peak_in_window
        with pytest.raises(PeakNotFoundError):
            locate_peak(PAPER.with_mechanical_offset(150.0))

    def test_usage_checks(self):
        with pytest.raises(ValueError):
            scan_spectrum(PAPER, window=(1.0, -1.0))
        with pytest.raises(ValueError):
            scan_spectrum(PAPER, n_coarse=50)

    def test_csv(self):
        text = scan_spectrum(PAPER).to_csv()
        assert text.startswith("offset_hz,transmission\n")


class TestPeak:
    def test_red_curve(self):
        p = PAPER.with_mechanical_offset(10.0)
        pk = locate_peak(p)
        assert abs(pk.center - 10.0) <= 1e-3 * p.gamma_m
        assert pk.fwhm == pytest.approx(p.gamma_m, rel=0.2)
        assert pk.height > 1

    def test_fwhm_tracks_damping(self):
        p = PAPER
        w1 = locate_peak(p).fwhm
        w2 = locate_peak(replace(p, Q=p.Q / 2, gamma_m=None)).fwhm
        assert w2 / w1 == pytest.approx(2.0, rel=0.05)

    @settings(max_examples=25, deadline=None)
    @given(st.floats(-100, 100))
    def test_center_follows_omega_m(self, off):
        p = PAPER.with_mechanical_offset(off)
        assert abs(locate_peak(p).center - p.mechanical_offset) <= 1e-3 * p.gamma_m

    def test_dip_is_found_too(self):
        # weak coupling turns the feature into a dip below the unit baseline
        p = replace(PAPER, g=20.0)
        pk = locate_peak(p)
        assert pk.height < 1
        assert abs(pk.center) <= 1e-3 * p.gamma_m

    def test_as_dict(self):
        assert set(locate_peak(PAPER).as_dict()) == {"center_hz", "fwhm_hz", "height"}


def test_params_validation():
    with pytest.raises(ValueError):
        OptomechParams(kappa=0.0)
    with pytest.raises(ValueError):
        OptomechParams(Q=-1.0)
    with pytest.raises(ValueError):
        OptomechParams(E_pu=-1.0)
    assert OptomechParams().gamma_m == pytest.approx(1e5 / 3e12, rel=1e-15)
