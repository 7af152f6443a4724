"""Single and continuous-rate premiums for unit-linked endowments.

Black-Scholes prices are closed form in the financial part and integrate
over mortality with adaptive Simpson quadrature. Vasicek-Heston prices are
Monte Carlo estimates; survival factors are deterministic multipliers
because the insured's state is independent of the market.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .engine import (
    MonteCarloSettings,
    PathSet,
    PriceEstimate,
    discount_factors,
    mc_estimate,
    simulate_with,
)
from .market import BlackScholesParams, HestonParams, VasicekParams, bs_endowment
from .mortality import GompertzMakehamFit, hazard, survival_probability


@dataclass(frozen=True)
class PolicySpec:
    x: float
    T: float
    G_e: float
    G_d: float | None = None
    death_benefit: bool = False

    def __post_init__(self):
        if not self.x >= 0:
            raise ValueError("age x must be >= 0")
        if not self.T > 0:
            raise ValueError("maturity T must be > 0")
        if not self.G_e > 0:
            raise ValueError("endowment guarantee G_e must be > 0")
        if self.death_benefit and not (self.G_d is not None and self.G_d > 0):
            raise ValueError("death-benefit policies need G_d > 0")


@dataclass(frozen=True)
class PremiumQuote:
    single: float
    yearly: float
    estimate: PriceEstimate | None = None

    @property
    def exact(self) -> bool:
        return self.estimate is None


def endowment_payoff(s_T, G):
    return np.maximum(s_T, G)


# -- quadrature ------------------------------------------------------------------

def adaptive_simpson(f, a: float, b: float, tol: float = 1e-10, max_depth: int = 60) -> float:
    """Integrate scalar ``f`` over [a, b]; ``tol`` is relative to the magnitude of the integral."""
    if b == a:
        return 0.0
    fa, fm, fb = f(a), f(0.5 * (a + b)), f(b)
    whole = (b - a) / 6 * (fa + 4 * fm + fb)
    atol = tol * max(abs(whole), 1e-300)
    total = 0.0
    stack = [(a, b, fa, fm, fb, whole, atol, 0)]
    while stack:
        lo, hi, flo, fmid, fhi, est, eps, depth = stack.pop()
        mid = 0.5 * (lo + hi)
        lm, rm = 0.5 * (lo + mid), 0.5 * (mid + hi)
        flm, frm = f(lm), f(rm)
        left = (mid - lo) / 6 * (flo + 4 * flm + fmid)
        right = (hi - mid) / 6 * (fmid + 4 * frm + fhi)
        diff = left + right - est
        if depth >= max_depth or abs(diff) <= 15 * eps:
            total += left + right + diff / 15
        else:
            stack.append((mid, hi, fmid, frm, fhi, right, eps / 2, depth + 1))
            stack.append((lo, mid, flo, flm, fmid, left, eps / 2, depth + 1))
    return total


def trapezoid_weights(grid_nodes: np.ndarray) -> np.ndarray:
    w = np.zeros_like(grid_nodes)
    h = np.diff(grid_nodes)
    w[:-1] += h / 2
    w[1:] += h / 2
    return w


# -- Black-Scholes ----------------------------------------------------------------

def annuity_factor_bs(x: float, T: float, r: float, fit: GompertzMakehamFit) -> float:
    """Present value of a unit continuous annuity paid while alive over [0, T]."""
    if not T > 0:
        raise ValueError("T must be > 0")
    return adaptive_simpson(lambda s: math.exp(-r * s) * survival_probability(fit, x, s), 0.0, T)


def pure_endowment_bs(policy: PolicySpec, bs: BlackScholesParams, fit: GompertzMakehamFit) -> PremiumQuote:
    bse = float(bs_endowment(0.0, policy.T, bs.s0, policy.G_e, bs.r, bs.sigma))
    single = bse * survival_probability(fit, policy.x, policy.T)
    return PremiumQuote(single, single / annuity_factor_bs(policy.x, policy.T, bs.r, fit))


def endowment_with_death_benefit_bs(policy: PolicySpec, bs: BlackScholesParams, fit: GompertzMakehamFit,
                                    *, strict_paper: bool = False) -> PremiumQuote:
    """Endowment paying max(G_e, S_T) at maturity if alive and max(G_d, S_s) at death before T.

    ``strict_paper=True`` reproduces the alternative published expression:
    no survival factor on the maturity term and an extra exp(-r s) on the
    death-benefit integrand.
    """
    if not policy.death_benefit:
        raise ValueError("policy has no death benefit")
    x, T, G_d = policy.x, policy.T, policy.G_d
    bse_T = float(bs_endowment(0.0, T, bs.s0, policy.G_e, bs.r, bs.sigma))

    def integrand(s):
        v = float(bs_endowment(0.0, s, bs.s0, G_d, bs.r, bs.sigma))
        v *= survival_probability(fit, x, s) * hazard(fit, x + s)
        return v * math.exp(-bs.r * s) if strict_paper else v

    death = adaptive_simpson(integrand, 0.0, T) if (fit.a or fit.b) else 0.0
    maturity = bse_T if strict_paper else bse_T * survival_probability(fit, x, T)
    single = maturity + death
    return PremiumQuote(single, single / annuity_factor_bs(x, T, bs.r, fit))


# -- Vasicek-Heston -------------------------------------------------------------------

def _annuity_from_mean_discount(nodes: np.ndarray, mean_discount: np.ndarray, x: float,
                                fit: GompertzMakehamFit) -> float:
    return float(trapezoid_weights(nodes) @ (mean_discount * survival_probability(fit, x, nodes)))


def mc_annuity_factor_vh(x: float, T: float, paths: PathSet, fit: GompertzMakehamFit) -> float:
    """Trapezoidal integral over [0, T] of E[discount] times survival, from simulated discounts."""
    if abs(paths.grid.T - T) > 1e-12 * max(1.0, T):
        raise ValueError("paths do not cover [0, T]")
    return _annuity_from_mean_discount(paths.grid.nodes, discount_factors(paths).mean(axis=0), x, fit)


def _death_weights(nodes, x, fit):
    return trapezoid_weights(nodes) * survival_probability(fit, x, nodes) * hazard(fit, x + nodes)


def _vh_run(policy: PolicySpec, vp, hp, fit, mc: MonteCarloSettings):
    """Per-path maturity and death-benefit values plus the mean discount curve."""
    grid = mc.grid(policy.T)
    nodes = grid.nodes
    weights = _death_weights(nodes, policy.x, fit) if policy.death_benefit else None
    maturity, death = [], []
    discount_sum = np.zeros(grid.N + 1)
    for block in simulate_with(mc, vp, hp, policy.T):
        D = discount_factors(block)
        discount_sum += D.sum(axis=0)
        maturity.append(D[:, -1] * endowment_payoff(block.s[:, -1], policy.G_e))
        if weights is not None:
            death.append((D * endowment_payoff(block.s, policy.G_d)) @ weights)
    mean_discount = discount_sum / mc.n_paths
    return (np.concatenate(maturity), np.concatenate(death) if death else None,
            _annuity_from_mean_discount(nodes, mean_discount, policy.x, fit))


def pure_endowment_vh(policy: PolicySpec, vp: VasicekParams, hp: HestonParams, fit: GompertzMakehamFit,
                      mc: MonteCarloSettings) -> PremiumQuote:
    maturity, _, annuity = _vh_run(PolicySpec(policy.x, policy.T, policy.G_e), vp, hp, fit, mc)
    surv = survival_probability(fit, policy.x, policy.T)
    est = mc_estimate(maturity * surv, mc.seed)
    return PremiumQuote(est.mean, est.mean / annuity, est)


def endowment_with_death_benefit_vh(policy: PolicySpec, vp: VasicekParams, hp: HestonParams,
                                    fit: GompertzMakehamFit, mc: MonteCarloSettings) -> PremiumQuote:
    if not policy.death_benefit:
        raise ValueError("policy has no death benefit")
    maturity, death, annuity = _vh_run(policy, vp, hp, fit, mc)
    samples = maturity * survival_probability(fit, policy.x, policy.T) + death
    est = mc_estimate(samples, mc.seed)
    return PremiumQuote(est.mean, est.mean / annuity, est)


def vh_endowment_value(T: float, G: float, vp: VasicekParams, hp: HestonParams,
                       mc: MonteCarloSettings) -> tuple[PriceEstimate, np.ndarray]:
    """Survival-free value E[D_T max(S_T, G)] and the per-path discounted payoffs."""
    samples = np.concatenate([
        discount_factors(b)[:, -1] * endowment_payoff(b.s[:, -1], G) for b in simulate_with(mc, vp, hp, T)
    ])
    return mc_estimate(samples, mc.seed), samples


@dataclass(frozen=True)
class PriceSurface:
    T: float
    ages: np.ndarray
    guarantees: np.ndarray
    premium: np.ndarray  # (len(ages), len(guarantees))
    stderr: np.ndarray


def price_surface(ages, guarantees, T: float, vp: VasicekParams, hp: HestonParams,
                  fit: GompertzMakehamFit, mc: MonteCarloSettings) -> PriceSurface:
    """Pure-endowment single premiums over an (age, guarantee) grid on one set of paths."""
    ages = np.asarray(ages, dtype=float)
    guarantees = np.asarray(guarantees, dtype=float)
    if ages.size == 0 or guarantees.size == 0:
        raise ValueError("age and guarantee grids must be non-empty")
    d_T, s_T = [], []
    for b in simulate_with(mc, vp, hp, T):
        d_T.append(discount_factors(b)[:, -1])
        s_T.append(b.s[:, -1])
    d_T, s_T = np.concatenate(d_T), np.concatenate(s_T)
    est = [mc_estimate(d_T * endowment_payoff(s_T, G)) for G in guarantees]
    value = np.array([e.mean for e in est])
    err = np.array([e.stderr for e in est])
    surv = np.asarray(survival_probability(fit, ages, T), dtype=float).reshape(-1, 1)
    return PriceSurface(T, ages, guarantees, surv * value, surv * err)
