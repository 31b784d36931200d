"""Monte Carlo machinery: noise synthesis, path statistics, determinism."""

import math
import os

import numpy as np
import pytest
from scipy.special import gamma

from sfdlab.errors import ParameterError, SynthesisError
from sfdlab.gle import GleParams, mean_displacement
from sfdlab.mittag_leffler import ml_eval
from sfdlab.simulate import (
    NoiseSpec,
    _CirculantSampler,
    cell_covariance,
    ensemble_msd,
    sample_noise,
    simulate_paths,
)

P_OVER = GleParams(alpha=1.0, gamma=0.5, lambda1=1.0, lambda2=1.0, kT=1.0)


class TestNoiseSpec:
    def test_fdt_construction(self):
        spec = NoiseSpec.from_gle_params(P_OVER)
        assert spec.white_coeff == P_OVER.kT * P_OVER.lambda1
        assert spec.powerlaw_coeff == P_OVER.kT * P_OVER.lambda2
        assert spec.noise_exponent == P_OVER.gamma

    def test_validation(self):
        with pytest.raises(ParameterError):
            NoiseSpec(-1.0, 0.0)
        with pytest.raises(ParameterError):
            NoiseSpec(0.0, 1.0, noise_exponent=1.0)


class TestCellCovariance:
    def test_white_diagonal_weight(self):
        # classical delta convention: 2 * white_coeff / dt at lag 0
        cov = cell_covariance(NoiseSpec(3.0, 0.0), 0.5, 4)
        assert cov[0] == pytest.approx(2.0 * 3.0 / 0.5, rel=1e-14)
        assert np.all(cov[1:] == 0.0)

    def test_power_part_is_exact_cell_average(self):
        z = 0.5
        dt = 0.1
        cov = cell_covariance(NoiseSpec(0.0, 1.0, z), dt, 3)
        # independent double integral over one cell pair at lag 1
        from scipy.integrate import dblquad

        want, err = dblquad(
            lambda v, u: abs(dt + u - v) ** (-z) / gamma(1.0 - z),
            0.0, dt, 0.0, dt, epsabs=1e-12,
        )
        assert err < 1e-7
        assert cov[1] == pytest.approx(want / dt ** 2, rel=1e-6)

    def test_reproduces_variance_identity(self):
        # quadratic form with exact Green cell integrals must reproduce
        # 2 kT zeta t E_{1/2,2}(-sqrt(t)) (the fluctuation-dissipation value)
        import scipy.linalg as sl

        from sfdlab.simulate import _green_cell_integrals

        dt, n = 1e-3, 1000
        spec = NoiseSpec.from_gle_params(P_OVER)
        cov = cell_covariance(spec, dt, n)
        w = _green_cell_integrals(P_OVER, dt, n, True)[::-1]
        got = float(w @ sl.toeplitz(cov) @ w)
        want = 2.0 * ml_eval(0.5, 2.0, -1.0)
        assert got == pytest.approx(want, rel=5e-4)


class TestSampleNoise:
    def test_white_noise_moments(self):
        spec = NoiseSpec(2.0, 0.0)
        s = sample_noise(spec, 0.1, 1 << 16, seed=42)
        v = s.values
        n = v.size
        # variance 2*white/dt, negligible lag-1 covariance
        assert v.var() == pytest.approx(2.0 * 2.0 / 0.1, rel=4.0 / math.sqrt(n))
        lag1 = float(np.mean(v[1:] * v[:-1]))
        assert abs(lag1) <= 4.0 * (2.0 * 2.0 / 0.1) / math.sqrt(n)

    @pytest.mark.parametrize("lag", [1, 2, 4, 8])
    def test_powerlaw_autocovariance(self, lag):
        # replicate means: 160 independent sequences give a clean standard error
        spec = NoiseSpec(0.0, 1.0, 0.5)
        dt, n, reps = 0.1, 2048, 160
        cov = cell_covariance(spec, dt, n)
        estimates = []
        for r in range(reps):
            v = sample_noise(spec, dt, n, seed=1000 + r).values
            estimates.append(float(np.mean(v[lag:] * v[:-lag])))
        mean = float(np.mean(estimates))
        se = float(np.std(estimates, ddof=1)) / math.sqrt(reps)
        assert abs(mean - cov[lag]) <= 4.0 * se

    def test_seed_determinism(self):
        spec = NoiseSpec(1.0, 1.0, 0.5)
        a = sample_noise(spec, 0.1, 512, seed=7).values
        b = sample_noise(spec, 0.1, 512, seed=7).values
        assert np.array_equal(a, b)
        c = sample_noise(spec, 0.1, 512, seed=8).values
        assert not np.array_equal(a, c)


class TestGeneralKernelPath:
    """lambda1 > 0 without the overdamped shortcut: the full machinery."""

    P = GleParams(alpha=0.5, gamma=0.5, lambda1=0.1, lambda2=1.0, v0=1.0,
                  force_amp=0.0, kT=1.0)

    def test_ensemble_matches_analytic_msd(self):
        from sfdlab.gle import msd

        e = simulate_paths(self.P, 5e-3, 400, 3000, seed=77)
        curve = ensemble_msd(e)
        for t in (0.2, 1.0, 2.0):
            i = int(np.argmin(np.abs(curve.times - t)))
            t_i = float(curve.times[i])
            want = msd(self.P, t_i)
            assert abs(curve.values[i] - want) <= 3.0 * curve.stderr[i], t_i

    def test_variance_against_quadratic_form(self):
        # the discretized solution representation gives the variance as an
        # exact quadratic form W^T C W: an independent route to the same
        # number the fluctuation-dissipation grid quadrature produces
        import scipy.linalg as sl

        from sfdlab.gle import variance
        from sfdlab.simulate import _green_cell_integrals

        p = GleParams(alpha=0.5, gamma=0.5, lambda1=0.1, lambda2=1.0,
                      v0=0.0, force_amp=0.0)
        dt, n = 1e-3, 1000
        spec = NoiseSpec.from_gle_params(p)
        cov = cell_covariance(spec, dt, n)
        w = _green_cell_integrals(p, dt, n, False)[::-1]
        qform = float(w @ sl.toeplitz(cov) @ w)
        assert qform == pytest.approx(variance(p, 1.0), rel=2e-4)


def test_embedding_clip_guard():
    # a covariance sequence that is not nonnegative definite must be refused
    with pytest.raises(SynthesisError):
        _CirculantSampler(np.array([1.0, 1.2]))


class TestSimulatePaths:
    def test_zero_noise_paths_equal_mean(self):
        p = GleParams(alpha=0.5, gamma=0.5, lambda1=0.0, lambda2=0.0,
                      v0=1.0, force_amp=0.0, kT=1.0)
        e = simulate_paths(p, 1e-2, 50, 3, seed=1)
        want = np.array(
            [p.x0] + [mean_displacement(p, (i + 1) * 1e-2) for i in range(50)]
        )
        for i in range(3):
            assert np.allclose(e.positions[i], want, rtol=0.0, atol=1e-14)

    def test_initial_position_exact(self):
        p = GleParams(alpha=1.0, gamma=0.5, lambda1=1.0, lambda2=1.0, x0=3.0)
        e = simulate_paths(p, 1e-2, 10, 5, seed=2, overdamped=True)
        assert np.all(e.positions[:, 0] == 3.0)

    def test_overdamped_benchmark_small(self):
        e = simulate_paths(P_OVER, 1e-2, 500, 3000, seed=11, overdamped=True)
        curve = ensemble_msd(e)
        bad = 0
        checks = np.geomspace(0.05, 5.0, 12)
        for t in checks:
            i = int(np.argmin(np.abs(curve.times - t)))
            want = 2.0 * curve.times[i] * ml_eval(0.5, 2.0,
                                                  -math.sqrt(curve.times[i]))
            if abs(curve.values[i] - want) > 3.0 * curve.stderr[i]:
                bad += 1
        assert bad <= 1

    def test_bit_identical_rerun_and_thread_invariance(self, monkeypatch):
        a = simulate_paths(P_OVER, 1e-2, 100, 200, seed=5, overdamped=True)
        b = simulate_paths(P_OVER, 1e-2, 100, 200, seed=5, overdamped=True)
        assert np.array_equal(a.positions, b.positions)
        monkeypatch.setenv("SFD_LAB_THREADS", "4")
        c = simulate_paths(P_OVER, 1e-2, 100, 200, seed=5, overdamped=True)
        assert np.array_equal(a.positions, c.positions)

    def test_stderr_clt_scaling(self):
        e1 = simulate_paths(P_OVER, 1e-2, 100, 1000, seed=3, overdamped=True)
        e2 = simulate_paths(P_OVER, 1e-2, 100, 2000, seed=3, overdamped=True)
        r = ensemble_msd(e2).stderr[-1] / ensemble_msd(e1).stderr[-1]
        assert r == pytest.approx(1.0 / math.sqrt(2.0), rel=0.2)

    def test_gaussianity_skewness(self):
        e = simulate_paths(P_OVER, 1e-2, 200, 10000, seed=13, overdamped=True)
        x = e.positions[:, -1]
        z = (x - x.mean()) / x.std()
        skew = float(np.mean(z ** 3))
        se = math.sqrt(6.0 / e.n_paths)
        assert abs(skew) <= 4.0 * se


class TestEnsembleMsd:
    def test_identical_paths_zero_stderr(self):
        p = GleParams(alpha=0.5, gamma=0.5, lambda1=0.0, lambda2=0.0,
                      v0=1.0, force_amp=0.0)
        e = simulate_paths(p, 1e-2, 20, 4, seed=1)
        curve = ensemble_msd(e)
        assert np.all(curve.stderr == 0.0)

    def test_synthetic_unit_normal(self, rng):
        from sfdlab.simulate import TrajectoryEnsemble

        n_paths, n_steps = 20000, 4
        pos = np.concatenate(
            [np.zeros((n_paths, 1)), rng.standard_normal((n_paths, n_steps))],
            axis=1,
        )
        e = TrajectoryEnsemble(0.1, n_steps, n_paths, pos, seed=0,
                               params=GleParams(lambda2=1.0), overdamped=False)
        curve = ensemble_msd(e)
        for i in range(n_steps):
            assert abs(curve.values[i] - 1.0) <= 3.0 * curve.stderr[i]

    def test_needs_two_paths(self):
        p = GleParams(alpha=0.5, gamma=0.5, lambda1=0.0, lambda2=0.0, v0=1.0,
                      force_amp=0.0)
        e = simulate_paths(p, 1e-2, 5, 1, seed=1)
        with pytest.raises(ParameterError):
            ensemble_msd(e)
