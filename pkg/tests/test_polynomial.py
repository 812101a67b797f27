import numpy as np
import pytest

from entire_dyn.errors import DomainError, RootFindingError
from entire_dyn.polynomial import PolynomialSpec, find_roots, horner, log_polyval


def test_degree_validation():
    with pytest.raises(DomainError):
        PolynomialSpec((1, 2))
    with pytest.raises(DomainError):
        PolynomialSpec((1, 2, 0))
    assert PolynomialSpec((0, 0, 1)).degree == 2


def test_horner_matches_numpy():
    c = (1 - 2j, 0.5, 3, -1j)
    z = np.array([0.3 + 0.1j, -2, 5j])
    assert np.allclose(horner(c, z), np.polyval(c[::-1], z), rtol=1e-14)


def test_log_polyval_far_field():
    c = (-2, 0, 1)
    z = np.array([1e50 * np.exp(0.3j)])
    expected = 2 * np.log(z) + np.log1p(-2 / z ** 2)
    assert np.allclose(log_polyval(c, z), expected, rtol=1e-14)
    # log_z alone is enough past float range
    L = log_polyval(c, 0j, np.array([1000 + 0.5j]))
    assert L[0] == pytest.approx(2000 + 1j, rel=1e-14)


def test_find_roots_quadratic_oracle():
    roots = sorted(find_roots((-2, -1, 1)), key=lambda z: z.real)
    assert roots[0] == pytest.approx(-1) and roots[1] == pytest.approx(2)


def test_find_roots_needs_degree():
    with pytest.raises(RootFindingError):
        find_roots((3,))
