"""Langevin model core: Green-function routes, moments, asymptotic laws."""

import math

import numpy as np
import pytest
from scipy.integrate import quad
from scipy.special import gamma

from sfdlab.errors import DivergenceError, ParameterError, UnsupportedBranchError
from sfdlab.gle import (
    AsymptoticLaw,
    GleParams,
    _series_terms,
    asymptotic_laws,
    attainment_boundary,
    green_closed,
    green_series,
    green_series_grid,
    mean_displacement,
    msd,
    variance,
)
from sfdlab.laplace import TransferSpec, invert_at
from sfdlab.mittag_leffler import ml_kernel

from conftest import fit_loglog_slope

E_HALF_1_AT_M1 = 0.42758357615580705   # exp(1)*erfc(1)
E_HALF_2_AT_M1 = 0.5559627432513196    # direct Taylor summation
E_32_2_AT_M1 = 0.7374822479018948      # direct Taylor summation

P_CASE3B = GleParams(alpha=0.5, gamma=0.5, lambda1=0.0, lambda2=1.0,
                     force_amp=0.0, v0=0.0)
P_OVER = GleParams(alpha=1.0, gamma=0.5, lambda1=1.0, lambda2=1.0, kT=0.5)


class TestGreenClosed:
    def test_short_time_head(self):
        p = P_CASE3B
        for t in (1e-8, 1e-6):
            want = t ** 0.5 / gamma(1.5)
            assert green_closed(p, t) == pytest.approx(want, rel=1e-3)

    def test_overdamped_value(self):
        assert green_closed(P_OVER, 1.0, overdamped=True) == pytest.approx(
            E_HALF_1_AT_M1, rel=1e-10
        )

    def test_alpha_one_kernel(self):
        p = GleParams(alpha=1.0, gamma=0.5, lambda1=0.0, lambda2=1.0)
        assert green_closed(p, 1.0) == pytest.approx(E_32_2_AT_M1, rel=1e-10)

    def test_unsupported_branch(self):
        p = GleParams(alpha=0.5, gamma=0.5, lambda1=1.0, lambda2=1.0)
        with pytest.raises(UnsupportedBranchError):
            green_closed(p, 1.0)


class TestGreenSeries:
    def test_reduces_to_closed_form(self):
        got = green_series(P_CASE3B, 1.3)
        assert got.bound == 0.0
        assert got.value == pytest.approx(green_closed(P_CASE3B, 1.3), rel=1e-14)

    def test_against_talbot(self):
        p = GleParams(alpha=0.5, gamma=0.5, lambda1=0.1, lambda2=1.0)
        spec = TransferSpec(0.5, 0.5, 0.1, 1.0)
        for t in (0.01, 0.1, 1.0, 5.0):
            got = green_series(p, t)
            want = invert_at(spec, t)
            assert got.value == pytest.approx(want, rel=1e-5), t

    def test_first_correction_against_quadrature(self):
        # T_1 = int G0(t-u) G0s(u) du by adaptive quadrature, independent of
        # the grid convolution machinery
        p = GleParams(alpha=0.5, gamma=0.5, lambda1=0.1, lambda2=1.0)
        t_end = 1.0
        _, _, terms = _series_terms(p, t_end, 1024, 1)

        def g0(u):
            return ml_kernel(1.0, 1.5, 1.0, 0.5, u)

        def g0s(u):
            return ml_kernel(1.0, 0.5, 1.0, -0.5, u)

        want, err = quad(lambda u: g0(t_end - u) * g0s(u), 0.0, t_end,
                         points=[0.0, t_end], limit=200)
        assert err < 1e-9
        assert terms[0][-1] == pytest.approx(want, rel=1e-6)

    def test_divergence_error_at_large_time(self):
        p = GleParams(alpha=0.5, gamma=0.5, lambda1=0.1, lambda2=1.0)
        with pytest.raises(DivergenceError):
            green_series(p, 10.0)

    def test_grid_variant_matches_pointwise(self):
        p = GleParams(alpha=0.5, gamma=0.5, lambda1=0.1, lambda2=1.0)
        g = green_series_grid(p, 2.0, 512)
        got = green_series(p, 2.0, n_grid=512)
        assert g.values[-1] == pytest.approx(got.value, rel=1e-12)


class TestMeanDisplacement:
    def test_free_of_motion_sources(self):
        p = GleParams(alpha=0.5, gamma=0.5, lambda2=1.0, v0=0.0, force_amp=0.0,
                      x0=2.5)
        for t in (0.1, 1.0, 10.0):
            assert mean_displacement(p, t) == p.x0

    def test_velocity_head(self):
        p = GleParams(alpha=0.5, gamma=0.5, lambda2=1.0, v0=1.0, force_amp=0.0)
        t = 1e-7
        assert mean_displacement(p, t) == pytest.approx(t, rel=1e-3)

    def test_velocity_and_force_head(self):
        p = GleParams(alpha=0.5, gamma=0.5, lambda2=1.0, v0=1.0, force_amp=1.0,
                      kappa=1.0)
        t = 1e-7
        want = t + math.sqrt(t) / gamma(1.5)
        assert mean_displacement(p, t) == pytest.approx(want, rel=1e-3)

    def test_overdamped_mean_stays_home(self):
        assert mean_displacement(P_OVER, 3.0, overdamped=True) == P_OVER.x0

    def test_general_route_against_laplace(self):
        # lambda1 > 0: the grid route (series Green function + fractional
        # integration) against the transform representation
        # mean - x0 = v0 L^-1[s^(alpha-1) G(s)] + a L^-1[s^(kappa-1) G(s)]
        p = GleParams(alpha=0.5, gamma=0.5, lambda1=0.1, lambda2=1.0,
                      v0=1.0, force_amp=0.5, kappa=0.75)

        def transform(s):
            g = 1.0 / (s ** 1.5 + 0.1 * s + s ** 0.5)
            return (1.0 * s ** (p.alpha - 1.0) + 0.5 * s ** (p.kappa - 1.0)) * g

        for t in (0.5, 2.0):
            want = p.x0 + invert_at(transform, t)
            got = mean_displacement(p, t, n_grid=4096)
            assert got == pytest.approx(want, rel=2e-4)

    def test_general_route_against_closed(self):
        # lambda1 = 0 evaluated through the grid route must match the closed
        # forms (exercises frac_integral_grid on the series Green function)
        p_closed = GleParams(alpha=0.5, gamma=0.5, lambda1=0.0, lambda2=1.0,
                             v0=1.0, force_amp=0.5, kappa=0.75)
        p_grid = GleParams(alpha=0.5, gamma=0.5, lambda1=1e-12, lambda2=1.0,
                           v0=1.0, force_amp=0.5, kappa=0.75)
        t = 1.0
        closed = mean_displacement(p_closed, t)
        grid = mean_displacement(p_grid, t, n_grid=4096)
        assert grid == pytest.approx(closed, rel=2e-4)


class TestVariance:
    def test_overdamped_value(self):
        # 2 kT zeta t E_{1/2,2}(-1) with kT = 1/2, zeta = 1
        assert variance(P_OVER, 1.0, overdamped=True) == pytest.approx(
            E_HALF_2_AT_M1, rel=1e-10
        )

    def test_overdamped_short_time(self):
        p = P_OVER
        t = 1e-4
        want = 2.0 * p.kT * 1.0 * t
        assert variance(p, t, overdamped=True) == pytest.approx(want, rel=1e-2)

    def test_short_time_power_kernel(self):
        t = 1e-4
        want = 2.0 * t ** 2.5 / (2.5 * gamma(1.5) * gamma(2.0))
        assert variance(P_CASE3B, t) == pytest.approx(want, rel=1e-3)

    def test_positive_on_parameter_sweep(self):
        params = [
            P_CASE3B,
            GleParams(alpha=0.75, gamma=0.5, lambda2=1.0, force_amp=0.0, v0=0.0),
            GleParams(alpha=0.9, gamma=0.3, lambda2=2.0, force_amp=0.0, v0=0.0),
        ]
        for p in params:
            for t in np.geomspace(1e-3, 1e3, 7):
                assert variance(p, float(t)) > 0.0

    def test_general_grid_route(self):
        p = GleParams(alpha=0.5, gamma=0.5, lambda1=0.1, lambda2=1.0)
        v = variance(p, 1.0)
        # lambda1 softens the kernel only mildly at t=1
        v0 = variance(P_CASE3B, 1.0)
        assert v > 0.0
        assert v == pytest.approx(v0, rel=0.1)


class TestMsd:
    def test_centered_case_equals_variance(self):
        p = P_CASE3B
        for t in (0.1, 1.0):
            assert msd(p, t) == pytest.approx(variance(p, t), rel=1e-12)

    def test_overdamped_equals_variance(self):
        assert msd(P_OVER, 2.0, overdamped=True) == pytest.approx(
            variance(P_OVER, 2.0, overdamped=True), rel=1e-14
        )

    def test_decomposition_identity(self):
        p = GleParams(alpha=0.5, gamma=0.5, lambda2=1.0, v0=1.0, force_amp=0.5)
        for t in (0.3, 2.0):
            dx = mean_displacement(p, t) - p.x0
            residual = msd(p, t) - variance(p, t) - dx * dx
            assert abs(residual) <= 4.0 * np.finfo(float).eps * msd(p, t)

    def test_forced_short_time_slope(self):
        # alpha = gamma = 1/2, kappa = 1: R^2 -> a^2 t / Gamma(3/2)^2
        p = GleParams(alpha=0.5, gamma=0.5, lambda2=1.0, kappa=1.0,
                      force_amp=1.0, v0=0.0)
        t = 1e-7
        want = t / gamma(1.5) ** 2
        assert msd(p, t) == pytest.approx(want, rel=1e-3)


class TestAsymptoticLaws:
    def test_case3_long_subdiffusion(self):
        p = GleParams(alpha=0.5, gamma=0.5, lambda2=1.0, lambda1=0.5, kT=1.0)
        laws = asymptotic_laws(p, "case3")
        long = [l for l in laws if l.regime == "long"]
        assert len(long) == 1
        assert long[0].exponent == 0.5
        assert long[0].prefactor == pytest.approx(2.0 / gamma(1.5), rel=1e-12)

    def test_case3_short_ballistic(self):
        p = GleParams(alpha=0.75, gamma=0.5, lambda2=1.0, kappa=0.5,
                      force_amp=0.0, v0=1.0)
        laws = asymptotic_laws(p, "case3")
        short = [l for l in laws if l.regime == "short"]
        assert short[0].exponent == 2.0
        assert short[0].prefactor == 1.0

    def test_case3b_sfd_pair(self):
        p = GleParams(alpha=0.5, gamma=0.5, lambda2=1.0, kappa=1.0,
                      force_amp=1.0, kT=1.0)
        laws = asymptotic_laws(p, "case3b")
        short = min((l for l in laws if l.regime == "short"),
                    key=lambda l: l.exponent)
        long = [l for l in laws if l.regime == "long"][0]
        assert (short.exponent, long.exponent) == (1.0, 0.5)
        assert short.prefactor == pytest.approx(1.0 / gamma(1.5) ** 2, rel=1e-12)
        assert long.prefactor == pytest.approx(2.0 / gamma(1.5), rel=1e-12)

    def test_case2_sqrt_law(self):
        zeta_n = 0.6
        p = GleParams(alpha=0.5, gamma=(2.0 * zeta_n + 1.0) / 4.0, lambda2=1.0,
                      force_amp=0.0)
        laws = asymptotic_laws(p, "case2", noise_exponent=zeta_n)
        long = [l for l in laws if l.regime == "long"][0]
        assert long.exponent == pytest.approx(0.5, rel=1e-12)

    def test_case1_catalog(self):
        p = GleParams(alpha=0.5, gamma=0.5, lambda1=2.0, lambda2=0.0, kT=1.0)
        laws = asymptotic_laws(p, "case1")
        long = [l for l in laws if l.regime == "long"][0]
        assert long.exponent == 1.0
        assert long.prefactor == pytest.approx(2.0 / 2.0, rel=1e-12)

    def test_case3a_gamma_convention(self):
        laws = asymptotic_laws(P_OVER, "case3a")
        literal = asymptotic_laws(P_OVER, "case3a", paper_literal=True)
        long = [l for l in laws if l.regime == "long"][0]
        long_lit = [l for l in literal if l.regime == "long"][0]
        g = P_OVER.gamma
        assert long_lit.prefactor / long.prefactor == pytest.approx(
            gamma(1.0 + g) / gamma(1.0 - g), rel=1e-14
        )

    def test_case_validation(self):
        with pytest.raises(ParameterError):
            asymptotic_laws(P_CASE3B, "case1")
        with pytest.raises(ParameterError):
            asymptotic_laws(P_OVER, "case3b")
        with pytest.raises(ParameterError):
            asymptotic_laws(P_CASE3B, "case9")


class TestAsymptoteAttainment:
    def test_long_time_boundary_is_discovered(self):
        p = GleParams(alpha=0.75, gamma=0.5, lambda2=1.0, force_amp=0.0)
        law = [l for l in asymptotic_laws(p, "case3b") if l.regime == "long"][0]
        tt = np.geomspace(1.0, 1e6, 25)
        vals = np.array([msd(p, float(t)) for t in tt])
        boundary = attainment_boundary(tt, vals, law, band=0.02)
        assert boundary is not None
        print(f"\nlong-time 2% band entered at t = {boundary:.3g}")
        assert np.all(
            np.abs(vals[tt >= boundary] / (law.prefactor * tt[tt >= boundary]
                                           ** law.exponent) - 1.0) <= 0.02
        )

    def test_short_time_boundary(self):
        p = GleParams(alpha=0.75, gamma=0.5, lambda2=1.0, force_amp=0.0, v0=1.0)
        law = AsymptoticLaw(2.0, 1.0, "short", "ballistic")
        tt = np.geomspace(1e-8, 1.0, 17)
        vals = np.array([msd(p, float(t)) for t in tt])
        boundary = attainment_boundary(tt, vals, law, band=0.02)
        assert boundary is not None and boundary >= 1e-4


def test_long_time_slope_independent_of_alpha():
    # gamma = 0.5 fixed: the fitted long-time slope must not move with alpha
    slopes = []
    for alpha in (0.6, 0.8, 1.0):
        p = GleParams(alpha=alpha, gamma=0.5, lambda2=1.0, force_amp=0.0)
        tt = np.geomspace(1e5, 1e7, 5)
        vals = [msd(p, float(t)) for t in tt]
        slopes.append(fit_loglog_slope(tt, vals))
    assert max(slopes) - min(slopes) <= 0.02
    assert abs(slopes[0] - 0.5) <= 0.02


def test_equipartition_defaults():
    p = GleParams(alpha=0.5, gamma=0.5, lambda2=1.0, kT=4.0)
    assert p.v0_eff == 2.0
    assert p.force_eff == 2.0
    p0 = GleParams(alpha=0.5, gamma=0.5, lambda2=1.0, kT=4.0, v0=0.0, force_amp=0.0)
    assert p0.v0_eff == 0.0
    assert p0.force_eff == 0.0
