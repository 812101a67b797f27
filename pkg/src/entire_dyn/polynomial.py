"""Complex polynomials with overflow-safe evaluation in the log domain."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, RootFindingError

# Past this modulus the lower-order terms are folded into a log1p correction.
_LOG_DOMAIN_MODULUS = 1e40


@dataclass(frozen=True)
class PolynomialSpec:
    """Polynomial with ascending coefficients ``c[0] + c[1] z + ...``."""

    coefficients: tuple

    def __post_init__(self):
        coeffs = tuple(complex(c) for c in self.coefficients)
        while len(coeffs) > 1 and coeffs[-1] == 0:
            coeffs = coeffs[:-1]
        if len(coeffs) < 3:
            raise DomainError("polynomial degree must be at least 2")
        if not all(np.isfinite(c) for c in coeffs):
            raise DomainError("coefficients must be finite")
        object.__setattr__(self, "coefficients", coeffs)

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    @property
    def leading(self) -> complex:
        return self.coefficients[-1]

    @property
    def is_real(self) -> bool:
        return all(c.imag == 0 for c in self.coefficients)

    def __call__(self, z):
        return horner(self.coefficients, z)

    def derivative_coefficients(self) -> tuple:
        return derivative(self.coefficients)

    def derivative(self, z):
        return horner(self.derivative_coefficients(), z)

    def log_eval(self, z, log_z=None):
        return log_polyval(self.coefficients, z, log_z)

    def escape_radius(self) -> float:
        """Radius ``R >= 1`` with ``|p(w)| > 2|w|`` whenever ``|w| > R``.

        From ``|p(w)| >= |w|^(d-1) (|a_d| |w| - S)`` with ``S`` the sum of the
        lower coefficient moduli.
        """
        s = sum(abs(c) for c in self.coefficients[:-1])
        return max(1.0, (2.0 + s) / abs(self.leading))

    def __str__(self):
        return format_polynomial(self.coefficients)


def horner(coeffs, z):
    """Evaluate ascending ``coeffs`` at ``z`` (scalar or array)."""
    z = np.asarray(z, dtype=complex)
    acc = np.zeros_like(z) + coeffs[-1]
    for c in reversed(coeffs[:-1]):
        acc = acc * z + c
    return acc


def derivative(coeffs) -> tuple:
    out = tuple(k * coeffs[k] for k in range(1, len(coeffs)))
    return out if out else (0j,)


def strip_zeros(coeffs) -> tuple:
    coeffs = tuple(complex(c) for c in coeffs)
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs = coeffs[:-1]
    return coeffs


def log_polyval(coeffs, z, log_z=None):
    """Complex ``log P(z)``; stays finite where ``P(z)`` itself would overflow.

    ``log_z`` may be supplied for points whose modulus is beyond float range
    (``z`` is then ignored wherever ``Re log_z`` exceeds the direct range).
    """
    coeffs = strip_zeros(coeffs)
    z = np.asarray(z, dtype=complex)
    if log_z is None:
        with np.errstate(divide="ignore"):
            log_z = np.log(z)
    log_z = np.asarray(log_z, dtype=complex)
    shape = np.broadcast(z, log_z).shape
    z = np.broadcast_to(z, shape)
    log_z = np.broadcast_to(log_z, shape)
    d = len(coeffs) - 1
    out = np.empty(shape, dtype=complex)
    if d == 0:
        out[...] = np.log(complex(coeffs[0])) if coeffs[0] != 0 else -np.inf
        return out
    far = log_z.real > np.log(_LOG_DOMAIN_MODULUS)
    near = ~far
    if np.any(near):
        with np.errstate(divide="ignore", invalid="ignore"):
            out[near] = np.log(horner(coeffs, z[near]))
    if np.any(far):
        lz = log_z[far]
        lead = coeffs[-1]
        corr = np.zeros(lz.shape, dtype=complex)
        for j, c in enumerate(coeffs[:-1]):
            if c != 0:
                corr += (c / lead) * np.exp((j - d) * lz)
        out[far] = np.log(lead) + d * lz + np.log1p(corr)
    return out


def log_poly_ratio(num, den, z, log_z=None):
    """``num(z)/den(z)`` computed in the log domain where needed."""
    return np.exp(log_polyval(num, z, log_z) - log_polyval(den, z, log_z))


def format_polynomial(coeffs) -> str:
    terms = []
    for k, c in enumerate(coeffs):
        if c == 0:
            continue
        cs = f"{c.real:g}" if c.imag == 0 else f"({c:g})"
        terms.append(cs if k == 0 else f"{cs}*z" if k == 1 else f"{cs}*z^{k}")
    return " + ".join(terms) if terms else "0"


def find_roots(coeffs, tol=1e-13, max_newton=50):
    """All roots of an ascending-coefficient polynomial.

    Companion-matrix eigenvalues (``numpy.roots``) polished by Newton's
    method until the residual is below ``tol`` times the coefficient scale.
    """
    coeffs = strip_zeros(coeffs)
    if len(coeffs) < 2:
        raise RootFindingError("constant polynomial has no roots")
    roots = np.roots(np.array(coeffs[::-1], dtype=complex))
    dcoeffs = derivative(coeffs)
    scale = max(abs(c) for c in coeffs)
    polished = []
    for r in roots:
        z = complex(r)
        for _ in range(max_newton):
            pz = complex(horner(coeffs, z))
            dz = complex(horner(dcoeffs, z))
            if dz == 0:
                break
            step = pz / dz
            z -= step
            if abs(step) <= 1e-16 * max(1.0, abs(z)):
                break
        resid = abs(complex(horner(coeffs, z)))
        bound = tol * scale * max(1.0, abs(z)) ** (len(coeffs) - 1)
        if resid > bound:
            # Multiple roots polish poorly; accept if the raw root was no better.
            if resid > max(bound, abs(complex(horner(coeffs, complex(r))))):
                raise RootFindingError(f"Newton polish failed at {r!r}: residual {resid:.3e}")
        polished.append(z)
    return polished
