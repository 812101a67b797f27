"""
Poincaré functions of polynomials
=================================

A Poincaré function solves f(λz) = p(f(z)) at a repelling fixed point of p.
For p(z) = z² at z0 = 1 the solution is exp, and for p(z) = 2z² − 1 it is
cosh √(2z), so both make handy sanity checks.
"""
import math

import numpy as np

from entire_dyn import poincare as pc
from entire_dyn.functions import Poincare
from entire_dyn.polynomial import PolynomialSpec

# the power series at 0 for z² reproduces 1/n!
sq = PolynomialSpec((0, 0, 1))
series = pc.schroeder_series(sq, 1, 2, 12)
print("coefficients:", np.round(series.coefficients.real[:6], 12))
print("1/n!        :", [round(1 / math.factorial(n), 12) for n in range(6)])

# far from the origin the series is continued through the functional equation
full = pc.build_series(sq, 1, 2)
for z in (1.0, 5 + 2j, 12j):
    print(f"f({z}) = {pc.poincare_eval(sq, 1, 2, full, z):.10g}   exp = {np.exp(z):.10g}")

# the order of a Poincaré function is log d / log|λ|
cosh_like = Poincare.from_polynomial((-1, 0, 2), z0=1)
print("order of the cosh √(2z) Poincaré function:", cosh_like.order())

# Green's function of the Chebyshev polynomial z² − 2: g(w + 1/w) = log|w|
cheb = PolynomialSpec((-2, 0, 1))
w = 3 * np.exp(0.4j)
print("g(w + 1/w) =", pc.green(cheb, w + 1 / w), " log|w| =", math.log(abs(w)))
