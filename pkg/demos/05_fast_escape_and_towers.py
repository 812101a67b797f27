"""
Fast escape and tower arithmetic
================================

Iterated maximum moduli M^n(R) become towers of exponentials after a few
steps.  The level-index type stores exp applied k times to a float, so such
towers compare and combine without overflow.
"""
from entire_dyn import dynamics as dy
from entire_dyn.functions import Poincare, sine

exp_f = Poincare.from_polynomial((0, 0, 1), z0=1)
print("M-iterates of exp from R = 2:", dy.m_iterates(exp_f, 2.0, 4))
print("M-iterates of sin from R = 10:", dy.m_iterates(sine(), 10.0, 3))

Ms = dy.m_iterates(exp_f, 3.0, 8)
for z in (10, 20j, 5 + 5j, -10):
    print(f"exp, z = {z}: {dy.classify_fast_escape(exp_f, z, R=3.0, m_list=Ms)}")

# E_a(x) = exp(x^a): the a = 1/2 tower overtakes the a = 1 tower two steps behind
rep = dy.verify_tower_lemma(0.5, 1.0, [10.0 ** (e / 4) for e in range(25)], range(4, 13))
print("empirical x0:", rep.x0, " violations below it:", len(rep.violations))
print("E_0.5^8(100) =", dy.tower_apply_E(0.5, 100.0, 8))
