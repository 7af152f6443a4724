"""Unit-linked endowment pricing under Vasicek-Heston (Monte Carlo) and Black-Scholes (closed form)."""

from .engine import (
    MonteCarloSettings,
    PathSet,
    PriceEstimate,
    SimulationError,
    TimeGrid,
    discount_factors,
    gaussian_stream,
    iter_vh_blocks,
    mc_estimate,
    pathwise_discount,
    simulate_bs_paths,
    simulate_vh_paths,
)
from .market import (
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
from .measure import GammaTriple, gamma0, gamma1, gamma2, gamma_triple
from .mortality import (
    GompertzMakehamFit,
    MortalityTable,
    bundled_table,
    empirical_hazard,
    fit_gompertz_makeham,
    fit_table,
    hazard,
    load_mortality_table,
    survival_probability,
)
from .pricing import (
    PolicySpec,
    PremiumQuote,
    annuity_factor_bs,
    endowment_payoff,
    endowment_with_death_benefit_bs,
    endowment_with_death_benefit_vh,
    mc_annuity_factor_vh,
    price_surface,
    pure_endowment_bs,
    pure_endowment_vh,
)

__version__ = "0.1.0"
