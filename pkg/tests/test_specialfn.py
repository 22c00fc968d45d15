import math

import mpmath
import numpy as np
import pytest

from mesozeta import specialfn as sf

mpmath.mp.dps = 30

# Oracle values, frozen from independent high-precision computations:
#   theta root: bisection on mpmath.siegeltheta (log-Gamma based) in [17, 18]
#   gamma_1:    mpmath.zetazero(1)
#   zeta(1/2):  mpmath.zeta(0.5)
THETA_ROOT = 17.845599540410860817
GAMMA_1 = 14.13472514173469379
ZETA_HALF = -1.4603545088095868129
EULER_GAMMA = 0.5772156649015329


class TestTheta:
    def test_zero_at_origin(self):
        assert sf.riemann_siegel_theta(0.0) == 0.0

    def test_odd(self):
        grid = np.array([0.5, 5.0, 17.0, 50.0, 1234.5])
        assert np.all(sf.riemann_siegel_theta(-grid) == -sf.riemann_siegel_theta(grid))

    def test_root(self):
        assert abs(sf.riemann_siegel_theta(THETA_ROOT)) < 5e-8

    def test_matches_loggamma_oracle(self):
        # asymptotic branch against mpmath's direct evaluation
        for t in (10.0, 25.0, 300.0, 5e4, 2e6):
            ref = float(mpmath.siegeltheta(t))
            assert abs(sf.riemann_siegel_theta(t) - ref) <= 1e-10 * max(1.0, abs(ref))

    def test_asymptotic_consistency_bound(self):
        # |theta - main terms| <= 1/(40 t) for t >= 50
        for t in np.geomspace(50, 1e6, 25):
            main = 0.5 * t * math.log(t / (2 * math.pi)) - 0.5 * t - math.pi / 8
            assert abs(sf.riemann_siegel_theta(t) - main) <= 1.0 / (40.0 * t)


class TestZ:
    def test_value_at_zero(self):
        assert abs(sf.riemann_siegel_Z(0.0) - ZETA_HALF) < 1e-10

    def test_first_zero(self):
        assert abs(sf.riemann_siegel_Z(GAMMA_1, sf.EvaluationPrecision(1e-8))) < 1e-8

    def test_grams_law_first_eleven(self):
        from mesozeta.zeros import gram_points

        g = gram_points(np.arange(0, 11))
        z = sf.riemann_siegel_Z(g)
        signs = np.sign(z) * (-1.0) ** np.arange(0, 11)
        assert np.all(signs > 0)

    def test_against_mpmath_oracle(self):
        rng = np.random.default_rng(11)
        for tb in (20.0, 300.0, 800.0, 5e3, 1e5):
            for _ in range(4):
                t = tb * (1 + rng.random())
                ref = float(mpmath.siegelz(mpmath.mpf(t)))
                tol = float(sf.attainable_tolerance(t))
                assert abs(sf.riemann_siegel_Z(t) - ref) <= tol

    def test_precision_unreachable(self):
        with pytest.raises(sf.PrecisionUnreachableError):
            sf.riemann_siegel_Z(1e6, sf.EvaluationPrecision(1e-12))

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            sf.riemann_siegel_Z(-1.0)


class TestArchimedeanDensity:
    def test_closed_form_at_zero(self):
        expected = -EULER_GAMMA - 3 * math.log(2) - math.pi / 2 - math.log(math.pi)
        assert abs(sf.archimedean_density(0.0) - expected) < 1e-12

    def test_even(self):
        grid = np.array([0.3, 1.0, 37.5, 240.0])
        assert np.allclose(sf.archimedean_density(grid), sf.archimedean_density(-grid), rtol=0, atol=0)

    def test_stirling_residual(self):
        # |omega(xi)/2pi - log((|xi|+2)/2pi)/2pi| <= C/(|xi|+2), C small
        xi = 100.0
        resid = abs(
            sf.archimedean_density(xi) / (2 * math.pi)
            - math.log((xi + 2) / (2 * math.pi)) / (2 * math.pi)
        )
        assert resid <= 2.0 / (xi + 2)

    def test_stirling_residual_decay_slope(self):
        # log-log regression slope of the residual vs (|xi|+2) within +-0.2 of -1
        xs = np.geomspace(10, 1e4, 40)
        resid = np.abs(
            sf.archimedean_density(xs) / (2 * math.pi)
            - np.log((xs + 2) / (2 * math.pi)) / (2 * math.pi)
        )
        slope = np.polyfit(np.log(xs + 2), np.log(resid), 1)[0]
        assert abs(slope + 1.0) < 0.2


class TestVonMangoldt:
    def test_prime_power(self):
        assert sf.von_mangoldt(8) == pytest.approx(math.log(2), abs=0)

    def test_composite(self):
        assert sf.von_mangoldt(6) == 0.0

    def test_one(self):
        assert sf.von_mangoldt(1) == 0.0

    def test_rejects_zero(self):
        with pytest.raises(ValueError):
            sf.von_mangoldt(0)


def _sieve_psi_oracle(limit):
    """Independent sieve-of-Eratosthenes summatory oracle."""
    lam = np.zeros(limit + 1)
    is_prime = np.ones(limit + 1, dtype=bool)
    is_prime[:2] = False
    for p in range(2, limit + 1):
        if is_prime[p]:
            is_prime[2 * p :: p] = False
            q = p
            while q <= limit:
                lam[q] = math.log(p)
                q *= p
    return np.cumsum(lam)


class TestChebyshevPsi:
    def test_empty(self):
        assert sf.chebyshev_psi(1.5) == 0.0

    def test_ten(self):
        expected = 3 * math.log(2) + 2 * math.log(3) + math.log(5) + math.log(7)
        assert sf.chebyshev_psi(10) == pytest.approx(expected, rel=1e-14)

    def test_monotone(self):
        vals = [sf.chebyshev_psi(x) for x in np.linspace(0, 300, 61)]
        assert all(b >= a for a, b in zip(vals, vals[1:]))

    def test_sieve_oracle_to_1e5(self):
        limit = 100_000
        oracle = _sieve_psi_oracle(limit)
        for x in (97, 1000, 31623, 99991, limit):
            assert sf.chebyshev_psi(x) == pytest.approx(oracle[x], rel=1e-12)
