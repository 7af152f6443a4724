"""Closed-form analytics: Vasicek short rate, Heston forward variance, Black-Scholes.

All functions accept scalars or numpy arrays and broadcast.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr


@dataclass(frozen=True)
class VasicekParams:
    """Short rate ``dr = k(theta - r) dt + sigma dW``.

    ``sigma = 0`` is accepted and gives a deterministic rate path; it is
    the degenerate case used to compare against Black-Scholes.
    """

    k: float
    theta: float
    sigma: float
    r0: float

    def __post_init__(self):
        if not self.k > 0:
            raise ValueError(f"Vasicek k must be > 0, got {self.k}")
        if not self.sigma >= 0:
            raise ValueError(f"Vasicek sigma must be >= 0, got {self.sigma}")
        if not (math.isfinite(self.r0) and math.isfinite(self.theta)):
            raise ValueError("Vasicek r0 and theta must be finite")


@dataclass(frozen=True)
class HestonParams:
    kappa: float
    nu_bar: float
    eta: float
    nu0: float
    mu: float
    s0: float

    def __post_init__(self):
        if not self.kappa > 0:
            raise ValueError(f"Heston kappa must be > 0, got {self.kappa}")
        if not self.nu_bar >= 0:
            raise ValueError(f"Heston nu_bar must be >= 0, got {self.nu_bar}")
        if not self.eta >= 0:
            raise ValueError(f"Heston eta must be >= 0, got {self.eta}")
        if not self.nu0 >= 0:
            raise ValueError(f"Heston nu0 must be >= 0, got {self.nu0}")
        if not self.s0 > 0:
            raise ValueError(f"Heston s0 must be > 0, got {self.s0}")
        if not math.isfinite(self.mu):
            raise ValueError("Heston mu must be finite")


@dataclass(frozen=True)
class BlackScholesParams:
    """Constant-rate, constant-volatility market. ``sigma`` is a volatility, not a variance."""

    s0: float
    r: float
    sigma: float

    def __post_init__(self):
        if not self.s0 > 0:
            raise ValueError(f"Black-Scholes s0 must be > 0, got {self.s0}")
        if not self.sigma > 0:
            raise ValueError(f"Black-Scholes sigma must be > 0, got {self.sigma}")
        if not math.isfinite(self.r):
            raise ValueError("Black-Scholes r must be finite")


def _check_order(t, T, what="t <= T"):
    if np.any(np.asarray(t) > np.asarray(T)):
        raise ValueError(f"domain error: require {what}")


def _scalar(x):
    return x.item() if isinstance(x, np.ndarray) and x.ndim == 0 else x


# -- Vasicek -----------------------------------------------------------------

def vasicek_B(t, T, p: VasicekParams):
    """B(t, T) = (1 - exp(-k (T - t))) / k."""
    _check_order(t, T)
    tau = np.subtract(T, t)
    return _scalar(-np.expm1(-p.k * tau) / p.k)


def vasicek_A(t, T, p: VasicekParams):
    _check_order(t, T)
    B = vasicek_B(t, T, p)
    tau = np.subtract(T, t)
    s2 = p.sigma * p.sigma
    return _scalar(np.exp((p.theta - s2 / (2 * p.k**2)) * (B - tau) - s2 / (4 * p.k) * B * B))


def vasicek_zcb_price(t, T, r_t, p: VasicekParams):
    """Zero-coupon bond price A(t,T) exp(-B(t,T) r_t)."""
    return _scalar(vasicek_A(t, T, p) * np.exp(-vasicek_B(t, T, p) * np.asarray(r_t)))


def vasicek_conditional_moments(t, T, r_t, p: VasicekParams):
    """Mean and variance of r_T given r_t (the rate is Gaussian)."""
    _check_order(t, T)
    tau = np.subtract(T, t)
    decay = np.exp(-p.k * tau)
    mean = decay * r_t + p.theta * (1 - decay)
    var = p.sigma**2 / (2 * p.k) * -np.expm1(-2 * p.k * tau)
    return _scalar(mean), _scalar(var)


# -- Heston in forward-variance form -----------------------------------------

def forward_variance_from_nu(t, u, nu_t, p: HestonParams):
    """xi_{t,u} = nu_bar + exp(-kappa (u - t)) (nu_t - nu_bar)."""
    _check_order(t, u, "t <= u")
    return _scalar(p.nu_bar + np.exp(-p.kappa * np.subtract(u, t)) * (np.asarray(nu_t) - p.nu_bar))


def nu_from_forward_variance(t, u, xi, p: HestonParams):
    """Inverse of :func:`forward_variance_from_nu` in the variance argument."""
    _check_order(t, u, "t <= u")
    return _scalar(p.nu_bar + np.exp(p.kappa * np.subtract(u, t)) * (np.asarray(xi) - p.nu_bar))


def lambda_heston(t, u, xi, p: HestonParams):
    """Diffusion coefficient of the forward variance, exp(-kappa (u-t)) * eta * sqrt(nu)."""
    nu = np.asarray(nu_from_forward_variance(t, u, xi, p))
    if np.any(nu < 0):
        raise ValueError("domain error: implied instantaneous variance is negative")
    return _scalar(np.exp(-p.kappa * np.subtract(u, t)) * p.eta * np.sqrt(nu))


# -- Black-Scholes ------------------------------------------------------------

def normal_cdf(x):
    """Standard normal distribution function."""
    return _scalar(ndtr(x))


def _d1_d2(tau, S, K, r, sigma):
    vol = sigma * np.sqrt(tau)
    d1 = (np.log(S / K) + (r + 0.5 * sigma * sigma) * tau) / vol
    return d1, d1 - vol


def bs_call(t, T, S, K, r, sigma):
    """European call price; at or past expiry the intrinsic value is returned."""
    tau = np.subtract(T, t)
    S, K = np.asarray(S, dtype=float), np.asarray(K, dtype=float)
    live = tau > 0
    safe_tau = np.where(live, tau, 1.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        d1, d2 = _d1_d2(safe_tau, S, K, r, sigma)
        price = ndtr(d1) * S - ndtr(d2) * K * np.exp(-r * safe_tau)
    return _scalar(np.where(live, price, np.maximum(S - K, 0.0)))


def bs_endowment(t, T, S, G_e, r, sigma):
    """Value of max(S_T, G_e) under Black-Scholes: a call struck at G_e plus a bond paying G_e.

    At or past maturity the terminal payoff ``max(S, G_e)`` is returned.
    """
    tau = np.subtract(T, t)
    S, G_e = np.asarray(S, dtype=float), np.asarray(G_e, dtype=float)
    live = tau > 0
    safe_tau = np.where(live, tau, 1.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        d1, d2 = _d1_d2(safe_tau, S, G_e, r, sigma)
        price = ndtr(d1) * S + G_e * np.exp(-r * safe_tau) * ndtr(-d2)
    return _scalar(np.where(live, price, np.maximum(S, G_e)))
