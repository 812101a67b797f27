import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from entire_dyn.errors import ConfigError, DomainError, PoleError
from entire_dyn.extreal import ExtReal
from entire_dyn.functions import (PRESETS, ExpSum, Overflow, Poincare, PolySin, Sigma,
                                  format_function, max_modulus, parse_function)
from entire_dyn import weierstrass as ws

from conftest import random_disk


def test_sin_at_10i(sin_f):
    v = sin_f.eval(10j)
    assert v.imag == pytest.approx(float(mp.sinh(10)), rel=1e-13)
    assert abs(v.real) < 1e-9 * abs(v)
    assert sin_f.eval(0) == 0


def test_exp_at_one(exp_f):
    assert exp_f.eval(1) == pytest.approx(math.e, rel=1e-13)


def test_overflow_token(sin_f, exp_f):
    big = sin_f.eval(800j)
    assert isinstance(big, Overflow)
    assert big.magnitude.isclose(ExtReal.from_log(800 - math.log(2)), rel=1e-13)
    assert isinstance(exp_f.eval(800), Overflow)


def test_polysin_against_mpmath():
    f = PolySin((1, 0.5j, 2), 1.5 - 0.2j, 0.3)
    rng = np.random.default_rng(1)
    for z in random_disk(rng, 50, 20):
        ref = complex(mp.polyval([2, 0.5j, 1], z) * mp.sin((1.5 - 0.2j) * z + 0.3))
        assert f.eval(z) == pytest.approx(ref, rel=1e-11)


def test_log_derivative_closed_forms(sin_f):
    assert sin_f.eval_log_derivative(10j) == pytest.approx(10 / math.tanh(10), rel=1e-14)
    assert abs(sin_f.eval_log_derivative(math.pi / 2)) < 1e-15
    with pytest.raises(PoleError):
        sin_f.eval_log_derivative(0)


def test_log_derivative_matches_value_and_derivative(sin_f, exp_f, sigma_i):
    rng = np.random.default_rng(2)
    es = ExpSum((((1,), 1), ((1, 1), -1)))
    for f in (sin_f, exp_f, sigma_i, es, PolySin((0, 1, 1), 2.0, 0.1)):
        z = random_disk(rng, 200, 6)
        val = np.exp(f.log_eval(z))
        keep = np.abs(val) > 1e-6
        lhs = f.log_derivative_array(z)[keep]
        rhs = (z * f.derivative(z) / val)[keep]
        assert np.allclose(lhs, rhs, rtol=1e-9, atol=1e-12)


def test_sigma_log_derivative_is_z_zeta(sigma_i):
    z = np.array([0.3 + 0.4j, 2.5 - 1.1j, 7.3 + 3.1j])
    ctx = ws.LatticeContext.from_tau(1j)
    assert np.allclose(sigma_i.log_derivative_array(z), z * ws.zeta(ctx, z), rtol=1e-13)


def test_poincare_log_derivative_finite_difference(exp_f, cosh_f):
    for f in (exp_f, cosh_f):
        z, h = 1e-6, 1e-9
        fd = (f.eval(z + h) - f.eval(z - h)) / (2 * h)
        assert f.eval_log_derivative(z) == pytest.approx(z * fd / f.eval(z), rel=1e-6)


def test_order():
    assert PolySin((3, 1), 2).order() == 1
    assert Sigma(1j).order() == 2
    assert ExpSum((((1,), 1), ((1,), -1))).order() == 1
    assert Poincare.from_polynomial((-1, 0, 2), z0=1).order() == 0.5


def test_max_modulus_examples(sin_f, exp_f):
    assert float(max_modulus(sin_f, 10, 1024)) == pytest.approx(math.sinh(10), rel=1e-6)
    assert max_modulus(sin_f, 0).is_zero()
    assert float(max_modulus(exp_f, 5)) == pytest.approx(math.exp(5), rel=1e-4)


def test_max_modulus_monotone(sin_f, sigma_i, cosh_f):
    for f in (sin_f, sigma_i, cosh_f):
        vals = [max_modulus(f, r) for r in np.linspace(0.5, 12, 12)]
        assert all(a <= b for a, b in zip(vals, vals[1:]))


def test_growth_models_track_sampled_modulus(sin_f, exp_f, sigma_i):
    for f, r in ((sin_f, 500.0), (exp_f, 300.0)):
        sampled = max_modulus(f, r, 8192).log_float()
        assert f.log_max_modulus_model(ExtReal.from_float(r)).log_float() == pytest.approx(
            math.log(sampled), rel=1e-3)
    # σ: ½(B + A) r² up to O(r)
    r = 40.0
    sampled = max_modulus(sigma_i, r, 8192).log_float()
    model = float(sigma_i.log_max_modulus_model(ExtReal.from_float(r)))
    assert abs(sampled - model) < 2 * r


def test_invariants_rejected():
    with pytest.raises(DomainError):
        PolySin((1,), 0)
    with pytest.raises(DomainError):
        PolySin((0,), 1)
    with pytest.raises(DomainError):
        ExpSum((((1,), 1), ((1,), 2)))          # equal arguments
    with pytest.raises(DomainError):
        Sigma(1 - 1j)


def test_presets_parse():
    for name in PRESETS:
        f = parse_function(name)
        assert format_function(parse_function(format_function(f))) == format_function(f)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False),
                min_size=1, max_size=4),
       st.complex_numbers(min_magnitude=0.1, max_magnitude=5),
       st.complex_numbers(max_magnitude=5))
def test_text_round_trip(P, alpha, beta):
    if all(c == 0 for c in P):
        return
    f = PolySin(tuple(P), alpha, beta)
    text = format_function(f)
    assert format_function(parse_function(text)) == text
    assert parse_function(text) == f


def test_text_round_trip_expsum_sigma():
    for f in (ExpSum((((1, 2j), 1), ((0.5,), 1j), ((1,), -1))), Sigma(0.3 + 1.2j)):
        text = format_function(f)
        assert format_function(parse_function(text)) == text


def test_parse_errors():
    with pytest.raises(ConfigError):
        parse_function("family = nope")
    with pytest.raises(ConfigError):
        parse_function("family = polysin\nP = 1,0")
    with pytest.raises(ConfigError):
        parse_function("family = sigma\ntau = 0,1\ntau = 0,2")
    with pytest.raises(ConfigError):
        parse_function("family = sigma\ntau = 0,1\nextra = 3")


def test_sin_inequalities_sampled(sin_f):
    rng = np.random.default_rng(3)
    r = np.exp(rng.uniform(0, np.log(1e4), 20000))
    z = r * np.exp(2j * np.pi * rng.random(20000))
    strip = np.abs(z.imag) >= np.log(4 * np.abs(z) + 1)
    assert np.all(sin_f.log_eval(z[strip]).real >= np.log(2 * np.abs(z[strip])))
    sel = (np.abs(z.imag) >= 1) & (np.abs(z) >= 16)
    assert np.all(np.abs(sin_f.log_derivative_array(z[sel])) >= np.abs(z[sel]) ** 0.75)
