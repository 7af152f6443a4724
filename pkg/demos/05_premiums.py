"""Single and yearly premiums in both models, plus a small price surface.

Path counts and steps are reduced so the script finishes in well under a
minute; the CLI runs the full 5000-path daily-step configuration.
"""
import numpy as np

from unitlinked import (
    BlackScholesParams,
    HestonParams,
    MonteCarloSettings,
    PolicySpec,
    VasicekParams,
    bundled_table,
    endowment_with_death_benefit_bs,
    endowment_with_death_benefit_vh,
    fit_table,
    price_surface,
    pure_endowment_bs,
    pure_endowment_vh,
)

fit = fit_table(bundled_table())
vp = VasicekParams(k=0.3, theta=0.01, sigma=0.02, r0=0.01)
hp = HestonParams(kappa=1e-3, nu_bar=0.01, eta=0.01, nu0=0.04, mu=0.015, s0=1.0)
bs = BlackScholesParams(s0=1.0, r=0.01, sigma=0.04)
mc = MonteCarloSettings(n_paths=1000, seed=2018, steps_per_year=52)

print("  T   BS pure   VH pure (stderr)   BS death  VH death")
for T in (1.0, 5.0, 10.0, 20.0):
    pure = PolicySpec(50.0, T, 1.0)
    full = PolicySpec(50.0, T, 1.0, 1.0, death_benefit=True)
    a = pure_endowment_bs(pure, bs, fit)
    b = pure_endowment_vh(pure, vp, hp, fit, mc)
    c = endowment_with_death_benefit_bs(full, bs, fit)
    d = endowment_with_death_benefit_vh(full, vp, hp, fit, mc)
    print(f"{T:4.0f}  {a.single:8.4f}  {b.single:8.4f} ({b.estimate.stderr:.4f})  {c.single:8.4f}  {d.single:8.4f}")
    print(f"      yearly: {a.yearly:.4f}  {b.yearly:.4f}  {c.yearly:.4f}  {d.yearly:.4f}")

# The published formula variant: no survival factor on the maturity term, doubly discounted deaths
full = PolicySpec(50.0, 20.0, 1.0, 1.0, death_benefit=True)
print("strict variant:", endowment_with_death_benefit_bs(full, bs, fit, strict_paper=True).single)

# One set of paths, re-used for every (age, guarantee) cell
hp100 = HestonParams(kappa=1e-3, nu_bar=0.01, eta=0.01, nu0=0.04, mu=0.015, s0=100.0)
surf = price_surface([20, 40, 60, 80], [50, 100, 150, 200], 20.0, vp, hp100, fit, mc)
with np.printoptions(precision=2, suppress=True):
    print(surf.premium)
