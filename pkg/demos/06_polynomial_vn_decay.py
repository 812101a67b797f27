"""
Geometric decay of V_n for a semihyperbolic polynomial
======================================================

For p(z) = z² − 2 the filled Julia set is [−2, 2], and the sets
V_n = {|p^n(z)| ≤ R} shrink onto it.  Their areas decay like θ^n.
"""
from entire_dyn import poincare as pc
from entire_dyn.polynomial import PolynomialSpec

cheb = PolynomialSpec((-2, 0, 1))
rep = pc.vn_area(cheb, 3.0, n_max=10, resolution=1024)
for n, est in rep.entries:
    print(f"V_{n:<2d} area {est.value:.6f}")
print("fitted theta:", round(rep.theta_hat, 4), "over n in", rep.fit_range)
