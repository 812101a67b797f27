import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from entire_dyn import dynamics as dy
from entire_dyn.errors import PreconditionError
from entire_dyn.extreal import ExtReal
from entire_dyn.functions import PolySin, Sigma
from entire_dyn.measure import NrOracle, n_of_r

P25 = dy.CriterionParams(epsilon=0.25, R=5.0)


def _mp_escape_index(z, bailout=1e10, max_iter=50):
    """Escape index of ``sin`` at 60 digits (independent oracle)."""
    with mp.workdps(60):
        w = mp.mpc(z)
        for k in range(max_iter + 1):
            if abs(w) > bailout:
                return k
            w = mp.sin(w)
    return None


# -- orbits -------------------------------------------------------------------------

def test_sin_5i_escapes_early(sin_f):
    rec = dy.iterate_orbit(sin_f, 5j, max_iter=50)
    assert rec.status == dy.ESCAPING
    assert rec.escape_index == _mp_escape_index(5j) == 2
    assert rec.escape_index <= 5
    assert len(rec.magnitudes) == rec.escape_index + 1
    assert float(rec.magnitudes[1]) == pytest.approx(math.sinh(5.0), rel=1e-12)


def test_sin_fixed_point_and_real_line(sin_f):
    rec = dy.iterate_orbit(sin_f, 0.0, max_iter=50)
    assert rec.status == dy.BOUNDED
    assert all(m.is_zero() for m in rec.magnitudes)
    assert dy.classify_escape(sin_f, 1.5, 50) == dy.BOUNDED
    assert dy.classify_escape(sin_f, 0.1, 50) == dy.BOUNDED


def test_classify_3i_and_undecided_is_legal(sin_f):
    assert dy.classify_escape(sin_f, 3j, 50) == dy.ESCAPING
    assert _mp_escape_index(3j) is not None
    tag = dy.classify_escape(sin_f, 1.5 + 0.01j, 20, bailout=2.0)
    assert tag in (dy.ESCAPING, dy.BOUNDED, dy.UNDECIDED)


def test_max_iter_precondition(sin_f):
    with pytest.raises(PreconditionError):
        dy.iterate_orbit(sin_f, 1j, max_iter=dy.MAX_ITER_CAP + 1)


def test_escape_grid_matches_scalar_classification(sin_f):
    rng = np.random.default_rng(5)
    z = rng.uniform(0, math.pi, 200) + 1j * rng.uniform(0, 10, 200)
    status, idx = dy.escape_status_grid(sin_f, z, max_iter=50)
    code = {dy.ESCAPING: 1, dy.BOUNDED: 0, dy.UNDECIDED: 2}
    scalar = np.array([code[dy.classify_escape(sin_f, w, 50)] for w in z])
    # bounded/undecided differ only by the cycle heuristic; escaping must agree
    assert np.array_equal(status == 1, scalar == 1)


@settings(max_examples=60, deadline=None)
@given(st.floats(-3, 3), st.floats(-4, 4), st.integers(1, 30), st.integers(1, 30))
def test_escaping_is_monotone_in_max_iter(x, y, m, extra):
    from entire_dyn.functions import sine
    f = sine()
    if dy.classify_escape(f, complex(x, y), m) == dy.ESCAPING:
        assert dy.classify_escape(f, complex(x, y), m + extra) == dy.ESCAPING


def test_escaping_magnitudes_increase_past_bailout(exp_f):
    rec = dy.iterate_orbit(exp_f, 3.0, max_iter=6, stop_on_escape=False)
    assert rec.status == dy.ESCAPING
    tail = rec.magnitudes[rec.escape_index:]
    assert all(a < b for a, b in zip(tail, tail[1:]))
    assert all(lo <= hi for lo, hi in zip(rec.magnitudes, rec.upper_magnitudes))


# -- M-iterates and fast escape ------------------------------------------------------

def test_m_iterates_sin(sin_f):
    Ms = dy.m_iterates(sin_f, 10.0, 2)
    assert float(Ms[0]) == pytest.approx(math.sinh(10.0), rel=1e-9)
    # oracle: log sinh(sinh 10) = sinh 10 - log 2 to double precision
    assert Ms[1].canonical()[0] == 1
    assert Ms[1].canonical()[1] == pytest.approx(math.sinh(10.0) - math.log(2.0), rel=1e-9)


def test_m_iterates_exp(exp_f):
    Ms = dy.m_iterates(exp_f, 2.0, 3)
    e2 = math.exp(2.0)
    assert float(Ms[0]) == pytest.approx(e2, rel=1e-9)
    assert float(Ms[1]) == pytest.approx(math.exp(e2), rel=1e-9)
    assert Ms[2].isclose(ExtReal(1, math.exp(e2)), rel=1e-9)


def test_m_iterates_first_matches_max_modulus(cosh_f, sigma_i):
    from entire_dyn.functions import max_modulus
    for f, R in ((cosh_f, 4.0), (sigma_i, 3.0)):
        assert dy.m_iterates(f, R, 1)[0].isclose(max_modulus(f, R, 4096), rel=1e-12)


def test_m_iterates_consistency(sin_f, exp_f, cosh_f):
    for f, R in ((sin_f, 10.0), (exp_f, 2.0), (cosh_f, 4.0)):
        Ms = dy.m_iterates(f, R, 6)
        for a, b in zip(Ms, Ms[1:]):
            assert dy.m_step(f, a).isclose(b, rel=1e-6)


def test_m_iterates_precondition(sin_f):
    with pytest.raises(PreconditionError):
        dy.m_iterates(PolySin(alpha=0.1), 1.0, 2)      # M(1) = sinh(0.1) < 1
    with pytest.raises(PreconditionError):
        dy.m_iterates(sin_f, 10.0, 101)


def test_fast_escape_examples(sin_f, exp_f):
    r = dy.classify_fast_escape(exp_f, 10.0, R=3.0, L_max=3)
    assert r.detected and r.L <= 2
    assert str(dy.classify_fast_escape(sin_f, 0.0, R=10.0)) == "not_detected"
    r = dy.classify_fast_escape(sin_f, 20j, R=10.0, L_max=3)
    assert r.detected and r.L <= 2


def test_fast_escape_never_crashes_near_zero_orbit(exp_f):
    r = dy.classify_fast_escape(exp_f, -10.0, R=3.0, L_max=3)
    assert str(r) in ("not_detected",) or r.detected


# -- criterion sets -------------------------------------------------------------------

def test_in_X_examples(sin_f):
    assert dy.in_X(sin_f, 10j, P25)
    assert abs(10 / math.tanh(10.0)) >= 10 ** 0.75     # the closed-form reading
    assert dy.in_X(sin_f, 3.14, P25)
    assert not dy.in_X(sin_f, math.pi / 2, P25)


def test_in_X_zero_flag(sin_f):
    res = dy.in_X(sin_f, math.pi, P25)
    assert res.zero or bool(res)


def test_in_Y_examples(sin_f):
    p1 = dy.CriterionParams(epsilon=1.0)
    assert dy.in_Y(sin_f, 10j, p1)
    assert not dy.in_Y(sin_f, 2.0, p1)
    ps = dy.CriterionParams(epsilon=0.4, y_threshold="stretched")
    # 5+5i is itself a lattice point (σ vanishes there); nearby points are far above
    assert not dy.in_Y(Sigma(1j), 5 + 5j, ps)
    assert dy.in_Y(Sigma(1j), 5.5 + 5.5j, ps)


def test_in_X_n_power_threshold(sin_f):
    nr = NrOracle("closed_form", sin_f)
    p = dy.CriterionParams(epsilon=0.25, x_threshold="n_power", n_oracle=lambda r: n_of_r(nr, r))
    # |10 coth 10| ~ 10 against n(10)^0.75 = 9^0.75 ~ 5.2
    assert dy.in_X(sin_f, 10j, p)


def test_params_validation():
    for kw in ({"epsilon": 0}, {"epsilon": 0.1, "R": 1.0}, {"epsilon": 0.1, "x_threshold": "x"},
               {"epsilon": 0.1, "x_threshold": "n_power"}):
        with pytest.raises(PreconditionError):
            dy.CriterionParams(**kw)


def test_in_T_examples(sin_f):
    assert str(dy.in_T(sin_f, 10j, P25, k_max=20)) == "in_T_up_to(20)"
    assert str(dy.in_T(sin_f, 0.5, P25)) == "excluded_at(0)"
    z = 5 * math.pi / 2                      # cot vanishes, so z is not in X
    assert not dy.in_X(sin_f, z, P25)
    assert str(dy.in_T(sin_f, z, P25)) == "excluded_at(0)"


def test_in_T_growth_invariant(sin_f):
    """Points in T up to depth k satisfy ``|f^k(z)| >= (1+ε)^k |z|`` (lower bounds)."""
    rng = np.random.default_rng(11)
    eps = P25.epsilon
    checked = 0
    for z in rng.uniform(-30, 30, 60) + 1j * rng.uniform(6, 40, 60):
        res = dy.in_T(sin_f, z, P25, k_max=6)
        if res.status != "in_T_up_to" or res.k < 1:
            continue
        mags = dy.iterate_orbit(sin_f, z, res.k, bailout=ExtReal(60, 1.0), stop_on_escape=False).magnitudes
        for k in range(res.k + 1):
            assert dy.ge_scaled(mags[k], ExtReal.from_float(abs(z)), (1 + eps) ** k)
        checked += 1
    assert checked > 20


# -- towers ----------------------------------------------------------------------------

def test_tower_examples():
    assert float(dy.tower_apply_E(1.0, 1.0, 2)) == pytest.approx(math.exp(math.e), rel=1e-14)
    assert float(dy.tower_apply_E(0.5, 100.0, 1)) == pytest.approx(22026.465794806718, rel=1e-14)
    for k in range(7):
        a, b = dy.tower_apply_E(0.5, 100.0, k), dy.tower_recursive(0.5, 100.0, k)
        assert a.canonical()[0] == b.canonical()[0]
        assert a.canonical()[1] == pytest.approx(b.canonical()[1], rel=1e-9)


def test_tower_lemma_examples():
    grid = np.logspace(0.5, 6, 100)
    rep = dy.verify_tower_lemma(0.5, 1.0, grid, range(4, 13))
    assert rep.x0 is not None and rep.x0 <= 1e6
    assert all(x < rep.x0 for x, _ in rep.violations)
    with pytest.raises(PreconditionError):
        dy.verify_tower_lemma(0.5, 0.5, grid, range(4, 6))
    assert dy.tower_apply_E(1.0, 1e10, 4) >= dy.tower_apply_E(2.0, 1e10, 2)


def test_x_alpha_fixed_point():
    t = dy.x_alpha(0.1).log_float()
    assert 0.1 * t == pytest.approx(math.log(t), rel=1e-10)
    assert dy.x_alpha(1.0).is_zero()
    with pytest.raises(PreconditionError):
        dy.tower_apply_E(0.1, 10.0, 3)
