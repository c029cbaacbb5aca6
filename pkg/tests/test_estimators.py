import math

import numpy as np
import pytest
from scipy import integrate

from meub.errors import ConvergenceError, DomainError
from meub.estimators import (
    McConfig,
    QuadConfig,
    adaptive_simpson,
    integration_segments,
    mc_abs_moment,
    mc_entropy,
    quad_abs_moment,
    quad_entropy,
)
from meub.gmm import Gmm, gaussian_abs_moment, mixture_abs_moment

from conftest import random_gmm

HALF_LOG_2PIE = 0.5 * math.log(2 * math.pi * math.e)
# entropy of 1/2 N(-1, 1) + 1/2 N(1, 1), frozen from scipy quad and a Gauss-Legendre panel sum
SYM_ENTROPY = 1.7557693535515044
# entropy of the near-Dirac mixture, frozen from mpmath at 40 digits
DIRAC_ENTROPY = -4.795669565217519


class TestAdaptiveSimpson:
    def test_polynomial_exact(self):
        v, err = adaptive_simpson(lambda x: x**3 - 2 * x, [(0.0, 2.0)])
        assert v == pytest.approx(0.0, abs=1e-14)
        assert err <= 1e-14

    def test_oscillating(self):
        v, _ = adaptive_simpson(np.sin, [(0.0, math.pi)], rel_tol=1e-12)
        assert v == pytest.approx(2.0, abs=1e-11)

    def test_multiple_segments(self):
        v, _ = adaptive_simpson(np.abs, [(-1.0, 0.0), (0.0, 2.0)])
        assert v == pytest.approx(2.5, abs=1e-13)

    def test_empty(self):
        assert adaptive_simpson(np.exp, [(1.0, 1.0)]) == (0.0, 0.0)

    def test_depth_limit(self):
        with pytest.raises(ConvergenceError):
            adaptive_simpson(lambda x: np.sign(x - 1 / 3) * 1e3, [(0.0, 1.0)], abs_tol=1e-300,
                             rel_tol=1e-300, max_depth=5)


class TestSegments:
    def test_breakpoints(self):
        g = Gmm.from_components([(0.5, -0.5, 1e-5), (0.5, 0.5, 0.1)])
        segs = integration_segments(g, 12.0)
        pts = {a for a, _ in segs} | {b for _, b in segs}
        assert -0.5 in pts and 0.5 in pts
        assert -0.5 - 12e-5 in pts
        # the narrow window sits inside the wide one; segments tile the union
        assert all(b == c for (_, b), (c, _) in zip(segs, segs[1:]))
        assert sum(b - a for a, b in segs) == pytest.approx(2 * 12 * 0.1, rel=1e-12)

    def test_gap_between_windows(self):
        g = Gmm.from_components([(0.5, -100.0, 1.0), (0.5, 100.0, 1.0)])
        segs = integration_segments(g, 12.0)
        assert all(not (a < 0.0 < b) for a, b in segs)

    def test_extra_points_outside_ignored(self):
        g = Gmm.normal()
        assert integration_segments(g, 12.0, (50.0,)) == integration_segments(g, 12.0)


class TestQuadrature:
    def test_normal(self):
        assert quad_entropy(Gmm.normal()) == pytest.approx(HALF_LOG_2PIE, abs=1e-10)
        assert quad_entropy(Gmm.normal(3.0, 0.01)) == pytest.approx(
            HALF_LOG_2PIE + math.log(0.01), abs=1e-10)

    def test_symmetric_pair(self, sym_mixture):
        assert quad_entropy(sym_mixture) == pytest.approx(SYM_ENTROPY, abs=1e-9)

    def test_dirac(self, dirac_mixture):
        assert quad_entropy(dirac_mixture) == pytest.approx(DIRAC_ENTROPY, abs=1e-9)

    def test_against_scipy(self):
        rng = np.random.default_rng(8)
        for _ in range(10):
            g = random_gmm(rng)
            lo = min(m - 12 * s for m, s in zip(g.means, g.sigmas))
            hi = max(m + 12 * s for m, s in zip(g.means, g.sigmas))

            def f(x):
                lp = g.log_pdf(x)
                return -math.exp(lp) * lp

            ref = integrate.quad(f, lo, hi, points=sorted(g.means), epsabs=1e-13, epsrel=1e-12, limit=500)[0]
            assert quad_entropy(g) == pytest.approx(ref, abs=1e-8)

    def test_tail_width_stability(self):
        rng = np.random.default_rng(21)
        for _ in range(10):
            g = random_gmm(rng)
            a = quad_entropy(g, QuadConfig(tail_width=12))
            b = quad_entropy(g, QuadConfig(tail_width=16))
            assert abs(a - b) <= 1e-9

    def test_abs_moments(self):
        rng = np.random.default_rng(4)
        for _ in range(10):
            g = random_gmm(rng)
            for l in (0, 1, 3, 6):
                assert quad_abs_moment(g, l, 0.3) == pytest.approx(mixture_abs_moment(g, l, 0.3), rel=1e-8)

    def test_bad_config(self):
        with pytest.raises(DomainError):
            QuadConfig(tail_width=5)
        with pytest.raises(DomainError):
            QuadConfig(rel_tol=0.0)
        with pytest.raises(DomainError):
            quad_abs_moment(Gmm.normal(), -1)


class TestMonteCarlo:
    def test_normal_within_three_se(self):
        h, se = mc_entropy(Gmm.normal(), McConfig(200_000, 1))
        assert abs(h - HALF_LOG_2PIE) < 3 * se
        # the variance of -log p(X) for a normal is 1/2
        assert se == pytest.approx(math.sqrt(0.5 / 200_000), rel=0.02)

    def test_mixture_within_four_se(self, sym_mixture):
        h, se = mc_entropy(sym_mixture, McConfig(200_000, 2))
        assert abs(h - SYM_ENTROPY) < 4 * se

    def test_error_shrinks_with_samples(self, sym_mixture):
        def rmse(n):
            errs = [mc_entropy(sym_mixture, McConfig(n, s))[0] - SYM_ENTROPY for s in range(20)]
            return math.sqrt(sum(e * e for e in errs) / len(errs))

        assert rmse(100_000) < rmse(1000)

    def test_deterministic_and_worker_independent(self, sym_mixture):
        cfg = McConfig(300_000, 77)
        a = mc_entropy(sym_mixture, cfg, workers=1)
        b = mc_entropy(sym_mixture, cfg, workers=4)
        assert a == b
        assert mc_abs_moment(sym_mixture, 3, 0.0, cfg, workers=3) == mc_abs_moment(sym_mixture, 3, 0.0, cfg)

    def test_single_sample(self):
        h, se = mc_entropy(Gmm.normal(), McConfig(1, 0))
        assert math.isfinite(h)
        assert math.isnan(se)

    def test_abs_moment(self):
        for l in (1, 2, 4):
            est, se = mc_abs_moment(Gmm.normal(1.0, 2.0), l, 0.0, McConfig(200_000, 9))
            assert abs(est - gaussian_abs_moment(1.0, 2.0, l)) < 4 * se

    @pytest.mark.parametrize("samples, seed", [(0, 1), (10, -1), (10, 1 << 64), (1.5, 1)])
    def test_bad_config(self, samples, seed):
        with pytest.raises(DomainError):
            McConfig(samples, seed)
