import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from entire_dyn.extreal import ONE, ZERO, ExtReal, ext_max

levels = st.integers(min_value=0, max_value=6)
bases = st.floats(min_value=0.0, max_value=1e300, allow_nan=False)
ext = st.builds(ExtReal, levels, bases)


def test_from_float_round_trip():
    for x in (0.0, 1e-300, 0.5, 1.0, 22026.47, 1e299):
        assert float(ExtReal.from_float(x)) == x


def test_exp_bumps_level_past_cap():
    x = ExtReal.from_float(1e5).exp()
    assert x.canonical() == (1, 1e5)
    assert x.exp().canonical() == (2, 1e5)
    assert float(ExtReal.from_float(2.0).exp()) == pytest.approx(math.exp(2.0), rel=1e-15)


def test_from_log_matches_float():
    assert float(ExtReal.from_log(10.0)) == pytest.approx(math.exp(10.0), rel=1e-15)
    assert ExtReal.from_log(1e4).canonical() == (1, 1e4)


def test_canonical_form_is_unique():
    assert ExtReal(1, 5.0) == ExtReal.from_float(math.exp(5.0))
    assert hash(ExtReal(1, 5.0)) == hash(ExtReal.from_float(math.exp(5.0)))
    assert ExtReal(2, 0.5) == ExtReal(1, math.exp(0.5))


def test_zero_and_one():
    assert ZERO.is_zero() and not ONE.is_zero()
    assert ZERO < ONE
    assert ext_max([ONE, ExtReal(1, 10.0), ZERO]) == ExtReal(1, 10.0)


def test_pow_and_scale_at_high_level():
    x = ExtReal(2, 50.0)                      # exp(exp(50))
    # (exp(exp 50))^0.5 = exp(0.5 exp(50))
    assert x.pow(0.5).isclose(ExtReal(1, 0.5 * math.exp(50.0)))
    assert ExtReal.from_float(3.0).scale(2.0) == ExtReal.from_float(6.0)


@settings(max_examples=300, deadline=None)
@given(ext, ext, ext)
def test_order_is_transitive(a, b, c):
    if a <= b and b <= c:
        assert a <= c
    assert (a < b) + (a == b) + (a > b) == 1


@settings(max_examples=300, deadline=None)
@given(st.floats(0, 1e300), st.floats(0, 1e300))
def test_order_matches_floats(x, y):
    assert (ExtReal.from_float(x) < ExtReal.from_float(y)) == (x < y)


@settings(max_examples=300, deadline=None)
@given(ext, ext)
def test_exp_is_monotone(a, b):
    if a < b:
        assert a.exp() <= b.exp()
        if a.canonical()[0] < 4:
            assert a.exp() < b.exp() or a.exp().isclose(b.exp(), rel=1e-15)


@settings(max_examples=200, deadline=None)
@given(st.floats(1.0, 700.0))
def test_log_inverts_exp(t):
    x = ExtReal.from_float(t)
    assert x.exp().log().isclose(x, rel=1e-14)


def _random_ext(rng, n):
    levels = rng.integers(0, 5, n)
    bases = np.where(rng.random(n) < 0.5, rng.random(n) * 50.0, 10.0 ** rng.uniform(-3, 299, n))
    return [ExtReal(int(k), float(b)) for k, b in zip(levels, bases)]


def test_order_sweep_ten_thousand_triples():
    rng = np.random.default_rng(2024)
    a, b, c = (_random_ext(rng, 10_000) for _ in range(3))
    for x, y, z in zip(a, b, c):
        lo, mid, hi = sorted((x, y, z))
        assert lo <= mid <= hi and lo <= hi
    f = rng.random((10_000, 2)) * 10.0 ** rng.uniform(-5, 300, (10_000, 1))
    for x, y in f:
        assert (ExtReal.from_float(x) < ExtReal.from_float(y)) == (x < y)


def test_exp_monotone_sweep():
    rng = np.random.default_rng(7)
    xs, ys = _random_ext(rng, 10_000), _random_ext(rng, 10_000)
    for x, y in zip(xs, ys):
        if x < y:
            assert x.exp() < y.exp() or x.exp() == y.exp()
            assert not x.exp() > y.exp()
