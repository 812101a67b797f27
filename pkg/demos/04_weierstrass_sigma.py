"""
Weierstraß σ and the region of lattices
=======================================

σ is evaluated by reducing z to the fundamental cell and restoring it with the
quasi-periodicity factor, so |z| in the hundreds costs no more than |z| ≈ 1.
The region of τ where Re(1/η₁) ≥ Im τ/(2π) meets the imaginary axis just
above 6/π.
"""
import math

import numpy as np

from entire_dyn import weierstrass as ws
from entire_dyn.measure import WindowSpec

ctx = ws.LatticeContext.from_tau(1j)
print("eta1(i) =", ctx.eta1, " (pi =", math.pi, ")")
print("Legendre residual:", ctx.legendre_residual)

z = np.array([0.3 + 0.2j, 7.3 + 3.1j, 120 + 45j])
print("log sigma:", ws.log_sigma(ctx, z))
print("2 zeta(1/2) - eta1:", abs(2 * ws.zeta(ctx, 0.5) - ctx.eta1))

lo, hi = ws.boundary_on_imaginary_axis()
print(f"boundary on the imaginary axis: {lo:.9f} (6/pi = {6 / math.pi:.9f})")

# a coarse text rendering of the region
img = ws.region_raster(WindowSpec(-1.5, 1.5, 0.01, 2.2), 40)
for row in img[::2]:
    print("".join("#" if v == ws.INSIDE else "." for v in row))
