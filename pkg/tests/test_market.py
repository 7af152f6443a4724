import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from unitlinked.market import (
    BlackScholesParams,
    HestonParams,
    VasicekParams,
    bs_call,
    bs_endowment,
    forward_variance_from_nu,
    lambda_heston,
    normal_cdf,
    nu_from_forward_variance,
    vasicek_A,
    vasicek_B,
    vasicek_conditional_moments,
    vasicek_zcb_price,
)

# Frozen from 40-digit mpmath evaluations.
B_0_1 = 0.8639392643942737798
A_0_1 = 0.9986938066307944193
P_0_10 = 0.9156139242295411231
VAR_0_1 = 0.0003007922426039823782
XI_EXAMPLE = 0.03970149501247504161
LAMBDA_EXAMPLE = 0.001980099667498336107
CALL_ATM = 0.02134584974830989122  # quadrature of the discounted lognormal payoff


def heston(**kw):
    base = dict(kappa=1e-3, nu_bar=0.01, eta=0.01, nu0=0.04, mu=0.015, s0=100.0)
    base.update(kw)
    return HestonParams(**base)


class TestVasicek:
    def test_B_boundary_and_value(self, vasicek):
        assert vasicek_B(3.0, 3.0, vasicek) == 0.0
        assert vasicek_B(0.0, 1.0, vasicek) == pytest.approx(B_0_1, rel=1e-15)

    def test_B_small_k_limit(self):
        p = VasicekParams(k=1e-8, theta=0.01, sigma=0.02, r0=0.01)
        assert vasicek_B(0.0, 1.0, p) == pytest.approx(1.0, rel=1e-7)

    def test_B_range(self, vasicek):
        t = np.linspace(0, 10, 50)
        b = vasicek_B(t, 10.0, vasicek)
        assert np.all(b >= 0) and np.all(b <= 10.0 - t + 1e-15)

    def test_A(self, vasicek):
        assert vasicek_A(2.0, 2.0, vasicek) == 1.0
        assert vasicek_A(0.0, 1.0, vasicek) == pytest.approx(A_0_1, rel=1e-14)

    def test_A_without_volatility(self):
        p = VasicekParams(k=0.3, theta=0.01, sigma=0.0, r0=0.01)
        B = vasicek_B(0.0, 7.0, p)
        assert vasicek_A(0.0, 7.0, p) == pytest.approx(math.exp(0.01 * (B - 7.0)), rel=1e-14)

    def test_zcb(self, vasicek):
        assert vasicek_zcb_price(5.0, 5.0, 0.3, vasicek) == 1.0
        composed = vasicek_A(0.0, 10.0, vasicek) * math.exp(-vasicek_B(0.0, 10.0, vasicek) * 0.01)
        assert vasicek_zcb_price(0.0, 10.0, 0.01, vasicek) == composed
        assert composed == pytest.approx(P_0_10, rel=1e-14)

    def test_zcb_matches_gaussian_integral(self, vasicek):
        # int_0^T r ds is Gaussian; E exp(-X) = exp(-m + v/2)
        k, th, s, r0 = vasicek.k, vasicek.theta, vasicek.sigma, 0.03
        for T in (0.5, 3.0, 25.0):
            B = (1 - math.exp(-k * T)) / k
            m = th * T + (r0 - th) * B
            v = s**2 / k**2 * (T - B - k * B * B / 2)
            assert vasicek_zcb_price(0.0, T, r0, vasicek) == pytest.approx(math.exp(-m + v / 2), rel=1e-13)

    def test_zcb_decreasing_in_rate(self, vasicek):
        r = np.linspace(-0.05, 0.2, 40)
        assert np.all(np.diff(vasicek_zcb_price(1.0, 4.0, r, vasicek)) < 0)

    def test_moments(self, vasicek):
        assert vasicek_conditional_moments(2.0, 2.0, 0.05, vasicek) == (0.05, 0.0)
        mean, var = vasicek_conditional_moments(0.0, 1.0, 0.01, vasicek)
        assert mean == pytest.approx(0.01, rel=1e-15)
        assert var == pytest.approx(VAR_0_1, rel=1e-14)
        mean, var = vasicek_conditional_moments(0.0, 1e4, 0.2, vasicek)
        assert mean == pytest.approx(vasicek.theta) and var == pytest.approx(0.02**2 / 0.6)

    def test_domain_errors(self, vasicek):
        for fn in (vasicek_B, vasicek_A):
            with pytest.raises(ValueError):
                fn(2.0, 1.0, vasicek)
        with pytest.raises(ValueError):
            vasicek_zcb_price(2.0, 1.0, 0.01, vasicek)
        with pytest.raises(ValueError):
            vasicek_conditional_moments(2.0, 1.0, 0.01, vasicek)

    @pytest.mark.parametrize("kw", [dict(k=0.0), dict(k=-1.0), dict(sigma=-0.1), dict(r0=math.nan)])
    def test_param_validation(self, kw):
        base = dict(k=0.3, theta=0.01, sigma=0.02, r0=0.01)
        base.update(kw)
        with pytest.raises(ValueError):
            VasicekParams(**base)


class TestForwardVariance:
    def test_examples(self):
        p = heston()
        assert forward_variance_from_nu(3.0, 3.0, 0.07, p) == 0.07
        assert forward_variance_from_nu(0.0, 10.0, 0.04, p) == pytest.approx(XI_EXAMPLE, rel=1e-14)
        assert nu_from_forward_variance(0.0, 10.0, XI_EXAMPLE, p) == pytest.approx(0.04, rel=1e-13)
        assert nu_from_forward_variance(0.0, 10.0, p.nu_bar, p) == p.nu_bar

    def test_tiny_kappa_keeps_level(self):
        p = heston(kappa=1e-15)
        assert forward_variance_from_nu(0.0, 30.0, 0.04, p) == pytest.approx(0.04, rel=1e-12)

    def test_lies_between(self):
        p = heston()
        xi = forward_variance_from_nu(0.0, np.linspace(0, 40, 30), 0.04, p)
        assert np.all((xi >= p.nu_bar) & (xi <= 0.04))

    @settings(max_examples=300, deadline=None)
    @given(t=st.floats(0, 30), tau=st.floats(0, 30), nu=st.floats(1e-3, 1.0),
           nu_bar=st.floats(1e-3, 1.0), kappa=st.floats(1e-4, 0.05))
    def test_round_trip(self, t, tau, nu, nu_bar, kappa):
        p = heston(kappa=kappa, nu_bar=nu_bar)
        u = t + tau
        back = nu_from_forward_variance(t, u, forward_variance_from_nu(t, u, nu, p), p)
        assert abs(back - nu) <= 1e-14 * max(nu, nu_bar)

    @settings(max_examples=100, deadline=None)
    @given(t=st.floats(0, 10), tau=st.floats(0, 30), a=st.floats(0, 1), b=st.floats(0, 1))
    def test_affine_in_nu(self, t, tau, a, b):
        p = heston(kappa=0.2)
        u = t + tau
        slope = math.exp(-p.kappa * tau)
        f = lambda v: forward_variance_from_nu(t, u, v, p)  # noqa: E731
        assert 0 < slope <= 1
        assert f(a) - f(b) == pytest.approx(slope * (a - b), abs=1e-15)

    def test_lambda(self):
        p = heston()
        assert lambda_heston(2.0, 2.0, 0.09, p) == pytest.approx(0.01 * 0.3, rel=1e-15)
        assert lambda_heston(0.0, 5.0, 0.03, heston(eta=0.0)) == 0.0
        assert lambda_heston(0.0, 10.0, XI_EXAMPLE, p) == pytest.approx(LAMBDA_EXAMPLE, rel=1e-12)

    def test_domain_errors(self):
        p = heston()
        with pytest.raises(ValueError):
            forward_variance_from_nu(2.0, 1.0, 0.04, p)
        with pytest.raises(ValueError):
            nu_from_forward_variance(2.0, 1.0, 0.04, p)
        with pytest.raises(ValueError):
            lambda_heston(0.0, 10.0, -0.5, p)

    @pytest.mark.parametrize("kw", [dict(kappa=0.0), dict(nu_bar=-0.01), dict(eta=-1.0), dict(nu0=-0.1), dict(s0=0.0)])
    def test_param_validation(self, kw):
        with pytest.raises(ValueError):
            heston(**kw)


class TestNormalCdf:
    def test_values(self):
        assert normal_cdf(0.0) == 0.5
        assert normal_cdf(1.959963985) == pytest.approx(0.9750000000268815623, abs=1e-15)

    def test_against_quadrature(self):
        mp.mp.dps = 30
        density = lambda x: mp.e ** (-x * x / 2) / mp.sqrt(2 * mp.pi)  # noqa: E731
        for x in np.linspace(-8, 8, 41):
            ref = mp.quad(density, [-mp.inf, 0, x]) if x > 0 else mp.quad(density, [-mp.inf, x])
            assert abs(normal_cdf(x) - float(ref)) <= 1e-12

    def test_symmetry(self):
        x = np.random.default_rng(3).normal(0, 3, 500)
        assert np.max(np.abs(normal_cdf(x) + normal_cdf(-x) - 1)) <= 1e-15


class TestBlackScholes:
    def test_call_against_quadrature(self):
        assert bs_call(0.0, 1.0, 1.0, 1.0, 0.01, 0.04) == pytest.approx(CALL_ATM, rel=1e-12)

    def test_call_generic_against_scipy_quad(self):
        S, K, r, sig, tau = 1.3, 1.1, 0.02, 0.25, 3.0

        def integrand(z):
            ST = S * math.exp((r - sig**2 / 2) * tau + sig * math.sqrt(tau) * z)
            return max(ST - K, 0.0) * math.exp(-z * z / 2) / math.sqrt(2 * math.pi)

        z0 = (math.log(K / S) - (r - sig**2 / 2) * tau) / (sig * math.sqrt(tau))
        ref = math.exp(-r * tau) * integrate.quad(integrand, z0, 40, epsabs=1e-14, epsrel=1e-13)[0]
        assert bs_call(0.0, tau, S, K, r, sig) == pytest.approx(ref, rel=1e-10)

    def test_call_limits(self):
        assert bs_call(0.0, 1.0, 2.0, 1e-12, 0.01, 0.2) == pytest.approx(2.0, rel=1e-10)
        assert bs_call(0.0, 0.1, 1.0, 10.0, 0.01, 0.2) < 1e-20

    def test_call_bounds(self):
        rng = np.random.default_rng(11)
        S, K = rng.uniform(0.5, 2, 200), rng.uniform(0.5, 2, 200)
        tau, r, sig = rng.uniform(0.1, 5, 200), rng.uniform(0, 0.05, 200), rng.uniform(0.05, 0.5, 200)
        c = bs_call(0.0, tau, S, K, r, sig)
        assert np.all(c >= np.maximum(S - K * np.exp(-r * tau), 0) - 1e-14) and np.all(c < S)

    def test_expiry_branches(self):
        assert bs_call(1.0, 1.0, 1.2, 1.0, 0.01, 0.2) == pytest.approx(0.2)
        assert bs_endowment(2.0, 2.0, 0.8, 1.0, 0.01, 0.2) == 1.0
        assert bs_endowment(2.0, 2.0, 1.3, 1.0, 0.01, 0.2) == 1.3

    def test_endowment_identity_example(self):
        lhs = bs_endowment(0.0, 1.0, 1.0, 1.0, 0.01, 0.04)
        assert lhs == pytest.approx(CALL_ATM + math.exp(-0.01), abs=1e-14)

    def test_endowment_small_guarantee(self):
        assert bs_endowment(0.0, 5.0, 1.0, 1e-14, 0.01, 0.2) == pytest.approx(1.0, rel=1e-12)

    def test_endowment_lower_bounds(self):
        S = np.linspace(0.3, 3, 40)
        v = bs_endowment(0.0, 4.0, S, 1.0, 0.02, 0.3)
        assert np.all(v >= math.exp(-0.08)) and np.all(v >= S * normal_cdf((np.log(S) + 0.065 * 4) / 0.6))

    def test_endowment_monotone(self):
        S, G = np.meshgrid(np.linspace(0.2, 3, 60), np.linspace(0.2, 3, 60))
        v = bs_endowment(0.0, 7.0, S, G, 0.01, 0.15)
        assert np.all(np.diff(v, axis=1) >= 0) and np.all(np.diff(v, axis=0) >= 0)

    def test_bs_params(self):
        with pytest.raises(ValueError):
            BlackScholesParams(s0=1.0, r=0.01, sigma=0.0)
        with pytest.raises(ValueError):
            BlackScholesParams(s0=-1.0, r=0.01, sigma=0.1)
