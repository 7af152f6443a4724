"""Market prices of risk that make the discounted stock, forward variance and bond martingales.

The three conditions are solved for the Vasicek-Heston specialization.
``gamma0`` is evaluated in a form that does not depend on the variance, so
it stays finite when a truncated variance hits zero; ``gamma0_unreduced``
keeps the expression with the common ``eta * sqrt(nu)`` factor for checking.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .market import HestonParams, VasicekParams, _scalar, vasicek_B


@dataclass(frozen=True)
class GammaTriple:
    gamma0: float
    gamma1: float
    gamma2: float


def gamma1(r, mu, nu):
    """(r - mu) / sqrt(nu)."""
    nu = np.asarray(nu)
    if np.any(nu <= 0):
        raise ValueError("domain error: gamma1 needs nu > 0")
    return _scalar((np.asarray(r) - mu) / np.sqrt(nu))


def gamma2(t, T, r, xi, nu, p: HestonParams):
    """xi r / (eta exp(-kappa (T - t)) sqrt(nu))."""
    nu = np.asarray(nu)
    if np.any(nu <= 0) or p.eta == 0:
        raise ValueError("domain error: gamma2 needs nu > 0 and eta > 0")
    decay = np.exp(-p.kappa * np.subtract(T, t))
    return _scalar(np.asarray(xi) * r / (p.eta * decay * np.sqrt(nu)))


def _theta_denominator(t, T, nu, vp, hp):
    return 2 * vasicek_B(t, T, vp) * vp.sigma * hp.eta * np.sqrt(nu)


def _one_minus_Bk(t, T, vp):
    # 1 - B k = exp(-k (T - t)), evaluated without cancellation
    return np.exp(-vp.k * np.subtract(T, t))


def _gamma0_numerator(t, T, r, vp):
    B = vasicek_B(t, T, vp)
    return -2 * _one_minus_Bk(t, T, vp) * np.asarray(r) + B * (B * vp.sigma**2 - 2 * vp.k * vp.theta)


def _check_gamma0_domain(t, T, vp):
    if np.any(np.asarray(t) >= np.asarray(T)):
        raise ValueError("domain error: gamma0 needs t < T (B(t,T) = 0 at maturity)")
    if vp.sigma <= 0:
        raise ValueError("domain error: gamma0 needs sigma > 0")


def gamma0(t, T, r, vp: VasicekParams):
    """Bond market price of risk, [2(Bk - 1) r + B(B sigma^2 - 2 k theta)] / (2 B sigma)."""
    _check_gamma0_domain(t, T, vp)
    B = vasicek_B(t, T, vp)
    return _scalar(_gamma0_numerator(t, T, r, vp) / (2 * B * vp.sigma))


def gamma0_unreduced(t, T, r, nu, vp: VasicekParams, hp: HestonParams):
    _check_gamma0_domain(t, T, vp)
    nu = np.asarray(nu)
    if np.any(nu <= 0) or hp.eta == 0:
        raise ValueError("domain error: needs nu > 0 and eta > 0")
    num = hp.eta * np.sqrt(nu) * _gamma0_numerator(t, T, r, vp)
    return _scalar(num / _theta_denominator(t, T, nu, vp, hp))


def gamma1_unreduced(t, T, r, nu, vp: VasicekParams, hp: HestonParams):
    nu = np.asarray(nu)
    num = -2 * vasicek_B(t, T, vp) * vp.sigma * hp.eta * (hp.mu - np.asarray(r))
    return _scalar(num / _theta_denominator(t, T, nu, vp, hp))


def gamma2_unreduced(t, T, r, xi, nu, vp: VasicekParams, hp: HestonParams):
    nu = np.asarray(nu)
    B = vasicek_B(t, T, vp)
    num = 2 * B * np.exp(hp.kappa * np.subtract(T, t)) * np.asarray(r) * vp.sigma * np.asarray(xi)
    return _scalar(num / _theta_denominator(t, T, nu, vp, hp))


def gamma_triple(t, T, r, xi, nu, vp: VasicekParams, hp: HestonParams) -> GammaTriple:
    return GammaTriple(
        gamma0=float(gamma0(t, T, r, vp)),
        gamma1=float(gamma1(r, hp.mu, nu)),
        gamma2=float(gamma2(t, T, r, xi, nu, hp)),
    )


def rate_drift_correction(t, T, r, vp: VasicekParams):
    """The term sigma * gamma0 added to the short-rate drift.

    Zero when ``sigma == 0``: a rate with no diffusion carries no risk to price.
    """
    if vp.sigma == 0:
        return _scalar(np.zeros_like(np.asarray(r, dtype=float)))
    return _scalar(vp.sigma * np.asarray(gamma0(t, T, r, vp)))


# Martingale-condition residuals. Each returns (residual, scale) where scale
# is the largest term entering the condition, for relative comparisons.

def stock_drift_residual(r, mu, nu, g1):
    terms = np.abs([mu, r, np.sqrt(nu) * g1])
    return mu - r + np.sqrt(nu) * g1, terms.max()


def forward_variance_drift_residual(t, T, r, xi, nu, g2, hp: HestonParams):
    diffusion = hp.eta * np.exp(-hp.kappa * (T - t)) * np.sqrt(nu)
    return diffusion * g2 - r * xi, max(abs(diffusion * g2), abs(r * xi))


def bond_condition_lhs(t, T, g0, vp: VasicekParams):
    """Left side of the bond martingale condition; equals r when g0 is right."""
    B = vasicek_B(t, T, vp)
    inner = vp.sigma * B * g0 + B * vp.k * vp.theta - 0.5 * B * B * vp.sigma**2
    return -inner / _one_minus_Bk(t, T, vp)


def bond_drift_residual(t, T, r, g0, vp: VasicekParams):
    B = vasicek_B(t, T, vp)
    terms = np.abs([vp.sigma * B * g0, B * vp.k * vp.theta, 0.5 * B * B * vp.sigma**2])
    scale = max(abs(r), terms.max() / _one_minus_Bk(t, T, vp))
    return bond_condition_lhs(t, T, g0, vp) - r, scale
