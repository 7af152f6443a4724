"""Closed-form building blocks: Vasicek bonds, forward variance, the Black-Scholes endowment."""
import numpy as np

from unitlinked import (
    HestonParams,
    VasicekParams,
    bs_call,
    bs_endowment,
    forward_variance_from_nu,
    nu_from_forward_variance,
    vasicek_A,
    vasicek_B,
    vasicek_zcb_price,
)

vp = VasicekParams(k=0.3, theta=0.01, sigma=0.02, r0=0.01)
hp = HestonParams(kappa=1e-3, nu_bar=0.01, eta=0.01, nu0=0.04, mu=0.015, s0=100.0)

# Bond curve today
for T in (1, 5, 10, 20, 40):
    print(f"T={T:>2}  B={vasicek_B(0, T, vp):.6f}  A={vasicek_A(0, T, vp):.6f}  "
          f"P={vasicek_zcb_price(0, T, vp.r0, vp):.6f}")

# higher short rate today, cheaper bond
r = np.linspace(-0.02, 0.08, 6)
print("P(0,10) over r:", np.round(vasicek_zcb_price(0.0, 10.0, r, vp), 5))

# Forward variance for delivery at T=10 barely moves off nu0 because kappa is tiny.
xi = forward_variance_from_nu(0.0, 10.0, hp.nu0, hp)
print("xi_0(10) =", xi, " back to nu:", nu_from_forward_variance(0.0, 10.0, xi, hp))

# An endowment is a call plus a discounted guarantee.
tau, S, G, rr, sig = 10.0, 1.0, 1.0, 0.01, 0.04
lhs = bs_endowment(0.0, tau, S, G, rr, sig)
rhs = bs_call(0.0, tau, S, G, rr, sig) + G * np.exp(-rr * tau)
print(f"BSE={lhs:.12f}  call+G e^-rt={rhs:.12f}  diff={lhs - rhs:.1e}")
