"""
The escaping set of sin
=======================

Orbits that climb the imaginary axis run out of floating-point range after
two or three steps.  Past that point magnitudes are tracked in level-index
form, so the classification still terminates with a definite answer.
"""
import math

from entire_dyn import dynamics as dy
from entire_dyn.functions import sine
from entire_dyn.measure import WindowSpec, area_window

f = sine()

# a single orbit: escaping, with lower and upper magnitude bounds recorded
rec = dy.iterate_orbit(f, 5j, max_iter=6, stop_on_escape=False)
print("status:", rec.status, "escape index:", rec.escape_index)
for k, (lo, hi) in enumerate(zip(rec.magnitudes, rec.upper_magnitudes)):
    print(f"  |f^{k}(5i)| in [{lo}, {hi}]")

# real starting points stay in [-1, 1]
print("z = 1.5:", dy.classify_escape(f, 1.5))

# the escaping fraction of a window is stable under refinement
pred = lambda z: dy.escape_status_grid(f, z, 50)[0] == 1
win = WindowSpec(0, math.pi, 0, 10)
for res in (128, 256, 512):
    est = area_window(pred, win, res)
    print(f"resolution {res:4d}: escaping area {est.value:.4f} (delta {est.delta:.4f})")
