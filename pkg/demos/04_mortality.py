"""Fit Gompertz-Makeham to the Norwegian 2018 table and look at survival curves."""
import numpy as np

from unitlinked import bundled_table, empirical_hazard, fit_table, hazard, survival_probability

table = bundled_table()
ages, rates = empirical_hazard(table)
fit = fit_table(table)  # ages 9..89, first and last rows dropped
print(f"a={fit.a:.6g}  b={fit.b:.6g}  c={fit.c:.6g}  sse={fit.residual:.3g}")

print(" age   observed   fitted")
for a, y in zip(ages, rates):
    print(f"{a:4.0f}  {y:9.5f}  {hazard(fit, a):9.5f}")

# probability that a life aged x reaches x + T
T = np.array([10, 20, 30, 40])
for x in (30, 50, 70):
    print(x, np.round(survival_probability(fit, x, T), 4))
