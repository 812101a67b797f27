"""Poincaré functions of polynomials and the polynomial-side objects around them.

A Poincaré function solves ``f(lam*z) = p(f(z))`` with ``f(0) = z0`` and
``f'(0) = 1`` at a repelling fixed point ``z0`` of ``p`` (multiplier ``lam``).
Near 0 it is a power series; everywhere else it is reached by the ladder
``f(z) = p^n(f(z / lam^n))``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import PreconditionError, ResidualError, RootFindingError
from .extreal import ExtReal
from .polynomial import PolynomialSpec, find_roots, horner, log_polyval

SCHROEDER_RESIDUAL_TOL = 1e-10
_TAIL_TOL = 1e-14
_FAR = math.log(1e40)
_GREEN_ESCAPE = 1e10


@dataclass(frozen=True)
class PowerSeries:
    coefficients: np.ndarray = field(repr=False)
    radius_estimate: float

    @property
    def truncation(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, z):
        return horner(self.coefficients, z)

    def derivative(self, z):
        c = self.coefficients
        return horner(c[1:] * np.arange(1, len(c)), z)

    def __eq__(self, other):
        return (isinstance(other, PowerSeries)
                and np.array_equal(self.coefficients, other.coefficients)
                and self.radius_estimate == other.radius_estimate)

    def __hash__(self):
        return hash((self.coefficients.tobytes(), self.radius_estimate))


def find_repelling_fixed_points(p: PolynomialSpec, tol: float = 1e-9):
    """Roots of ``p(z) - z`` with multiplier modulus above ``1 + tol``."""
    coeffs = list(p.coefficients)
    coeffs[1] -= 1.0
    roots = find_roots(coeffs)
    out = []
    for z0 in roots:
        resid = abs(complex(p(z0)) - z0)
        if resid > 1e-13 * max(1.0, abs(z0)) ** p.degree * max(abs(c) for c in p.coefficients):
            raise RootFindingError(f"fixed point {z0!r} has residual {resid:.3e}")
        lam = complex(p.derivative(z0))
        if abs(lam) > 1.0 + tol:
            out.append((z0, lam))
    out.sort(key=lambda t: (t[0].real, t[0].imag))
    return out


def _taylor_at(p: PolynomialSpec, z0: complex):
    """Coefficients ``b_m = p^(m)(z0)/m!`` of ``p(z0 + h)``."""
    coeffs = np.array(p.coefficients, dtype=complex)
    out = []
    for m in range(p.degree + 1):
        out.append(complex(horner(coeffs, z0)))
        coeffs = coeffs[1:] * np.arange(1, len(coeffs)) / (m + 1)
    return out


def schroeder_coefficients(p: PolynomialSpec, z0: complex, lam: complex, N: int) -> np.ndarray:
    """Coefficients ``c_0..c_N`` with ``c_0 = z0``, ``c_1 = 1``.

    Matching ``z^n`` on both sides of the functional equation gives
    ``c_n (lam^n - lam) = sum_{m>=2} b_m [z^n] h^m`` where ``h = f - z0``;
    the right side only involves ``c_1..c_{n-1}``.
    """
    b = _taylor_at(p, z0)
    d = p.degree
    c = np.zeros(N + 1, dtype=complex)
    c[0] = z0
    if N == 0:
        return c
    c[1] = 1.0
    # H[m][n] = [z^n] h^m
    H = np.zeros((d + 1, N + 1), dtype=complex)
    H[1, 1] = 1.0
    lam_pow = complex(lam)
    for n in range(2, N + 1):
        lam_pow *= lam
        for m in range(2, d + 1):
            H[m, n] = np.dot(c[1:n], H[m - 1, n - 1:0:-1])
        rhs = sum(b[m] * H[m, n] for m in range(2, d + 1))
        c[n] = rhs / (lam_pow - lam)
        H[1, n] = c[n]
    return c


def estimate_radius(coeffs: np.ndarray, max_term: float = 1e4) -> float:
    """Truncation radius of a Taylor series.

    Largest ``r`` where the last two terms are below ``1e-14`` of the
    largest term, capped where the largest term exceeds ``max_term`` so that
    cancellation in the partial sum stays below roughly ``1e-12``.
    """
    mags = np.abs(coeffs)
    n = np.arange(len(coeffs))
    tail = slice(max(1, len(coeffs) - 2), len(coeffs))
    with np.errstate(divide="ignore"):
        logm = np.log(mags)
    cap = math.log(max_term) + max(0.0, logm[0])

    def ok(log_r):
        terms = logm + n * log_r
        top = np.max(terms)
        return np.max(terms[tail]) <= math.log(_TAIL_TOL) + top and top <= cap

    lo, hi = -30.0, 30.0
    if not ok(lo):
        return math.exp(lo)
    if ok(hi):
        return math.exp(hi)
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        lo, hi = (mid, hi) if ok(mid) else (lo, mid)
    return math.exp(lo)


def schroeder_residual(p: PolynomialSpec, lam: complex, series: PowerSeries, radius: float,
                       samples: int = 256) -> float:
    """Max relative residual of ``f(lam z) - p(f(z))`` on ``|z| = radius``."""
    z = radius * np.exp(2j * np.pi * np.arange(samples) / samples)
    lhs = series(lam * z)
    rhs = p(series(z))
    return float(np.max(np.abs(lhs - rhs) / np.maximum(1.0, np.abs(lhs))))


def schroeder_series(p: PolynomialSpec, z0: complex, lam: complex, N: int = 64,
                     check: bool = True) -> PowerSeries:
    if not 1 <= N <= 200:
        raise PreconditionError("truncation N must lie in [1, 200]")
    if abs(lam) <= 1.0:
        raise PreconditionError("multiplier must be repelling")
    if abs(complex(p(z0)) - z0) > 1e-8 * max(1.0, abs(z0)):
        raise PreconditionError("z0 is not a fixed point of p")
    if abs(complex(p.derivative(z0)) - lam) > 1e-8 * abs(lam):
        raise PreconditionError("lam does not equal p'(z0)")
    c = schroeder_coefficients(p, complex(z0), complex(lam), N)
    series = PowerSeries(c, estimate_radius(c))
    if check:
        resid = schroeder_residual(p, lam, series, series.radius_estimate / abs(lam))
        if not resid < SCHROEDER_RESIDUAL_TOL:
            raise ResidualError(f"Schroeder residual {resid:.3e} with N={N}")
    return series


def build_series(p: PolynomialSpec, z0: complex, lam: complex, N: int = 64) -> PowerSeries:
    """Schröder series with ``N`` doubled (capped at 200) until the residual test passes."""
    while True:
        try:
            return schroeder_series(p, z0, lam, N)
        except ResidualError:
            if N >= 200:
                raise
            N = min(200, 2 * N)


def _entry_radius(lam: complex, series: PowerSeries) -> float:
    return series.radius_estimate / (2.0 * abs(lam))


def ladder_steps(lam: complex, series: PowerSeries, log_abs_z) -> np.ndarray:
    """Least ``n >= 0`` with ``|z / lam^n| <= r0 / (2|lam|)``."""
    excess = (np.asarray(log_abs_z, dtype=float) - math.log(_entry_radius(lam, series))) / math.log(abs(lam))
    with np.errstate(invalid="ignore"):
        n = np.where(excess > 0, np.ceil(excess - 1e-12), 0)
    return np.nan_to_num(n, nan=0.0).astype(np.int64)


def _step(p: PolynomialSpec, w, L, far):
    """One application of ``p`` on the (value, log) pair; returns the new pair."""
    new_L = log_polyval(p.coefficients, np.where(far, 0, w), L)
    new_far = new_L.real > _FAR
    # only the phase modulo 2π matters; keep it bounded as moduli grow
    new_L = np.where(new_far, new_L.real + 1j * np.angle(np.exp(1j * new_L.imag)), new_L)
    new_w = np.where(new_far, np.nan, 0j)
    near = ~new_far
    if np.any(near):
        # direct Horner where the previous point was still near; exp(log) otherwise
        direct = near & ~far
        new_w[direct] = p(w[direct])
        back = near & far
        new_w[back] = np.exp(new_L[back])
    return new_w, new_L, new_far


def poincare_log_eval(p: PolynomialSpec, lam: complex, series: PowerSeries, z, log_z=None,
                      extra_steps: int = 0, derivative: bool = False):
    """Vectorised ``log f(z)`` (and optionally ``log f'(z)``) via the ladder.

    ``log_z`` lets callers pass points whose modulus is beyond float range;
    ``extra_steps`` forces that many additional ladder rungs (for
    consistency checks).
    """
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    if log_z is None:
        with np.errstate(divide="ignore"):
            log_z = np.log(z)
    log_z = np.atleast_1d(np.asarray(log_z, dtype=complex))
    z, log_z = np.broadcast_arrays(z, log_z)
    n = ladder_steps(lam, series, log_z.real) + int(extra_steps)
    log_lam = np.log(complex(lam))
    with np.errstate(over="ignore", invalid="ignore"):
        u = np.where(z == 0, 0j, np.exp(log_z - n * log_lam))
    w = series(u)
    with np.errstate(divide="ignore"):
        L = np.log(w)
    far = np.zeros(w.shape, dtype=bool)
    if derivative:
        dcoef = p.derivative_coefficients()
        with np.errstate(divide="ignore"):
            logD = np.log(series.derivative(u)) - n * log_lam
    for j in range(1, int(n.max(initial=0)) + 1):
        act = n >= j
        if derivative:
            with np.errstate(divide="ignore", invalid="ignore"):
                logD[act] += log_polyval(dcoef, np.where(far[act], 0, w[act]), L[act])
        w_a, L_a, far_a = _step(p, w[act], L[act], far[act])
        w[act], L[act], far[act] = w_a, L_a, far_a
    if derivative:
        return L, logD
    return L


def poincare_eval(p: PolynomialSpec, z0: complex, lam: complex, series: PowerSeries, z,
                  extra_steps: int = 0):
    """``f(z)`` as a complex number, or an :class:`Overflow` past float range."""
    from .functions import Overflow

    if z == 0 and extra_steps == 0:
        return complex(z0)
    L = complex(poincare_log_eval(p, lam, series, complex(z), extra_steps=extra_steps)[0])
    if L.real < math.log(1e300):
        return complex(np.exp(L))
    return Overflow(ExtReal.from_log(L.real))


@dataclass(frozen=True)
class LogExt:
    """``log|f(z)|`` (float or ExtReal) with the phase while it is still resolvable.

    ``sign`` is the sign of ``f(z)`` for real inputs of a real function
    (``0`` when unknown or not applicable).
    """

    log_abs: object
    phase: float | None
    sign: int = 0


def far_sign(p: PolynomialSpec) -> int:
    """Sign of ``p(x)`` for huge real ``x`` when ``p`` is real of even degree."""
    return 1 if p.leading.real > 0 else -1


def poincare_log_ext(p: PolynomialSpec, lam: complex, series: PowerSeries, log_z: complex,
                     max_steps: int = 5_000_000) -> LogExt:
    """``log f(z)`` from ``log z`` with no limit on the size of ``f(z)``.

    The ladder is run directly until ``log|w|`` exceeds ``1e15``; the
    remaining ``m`` rungs use ``log|p^m(w)| = d^m (log|w| + c) - c`` with
    ``c = log|a_d|/(d-1)``, exact to rounding at that size, and the result
    is returned as an ExtReal.
    """
    log_z = complex(log_z)
    limit = math.log(_entry_radius(lam, series)) + max_steps * math.log(abs(lam))
    if not (math.isfinite(log_z.real) and math.isfinite(log_z.imag)) or log_z.real > limit:
        return LogExt(None, None, 0)
    real_input = p.is_real and np.isreal(series.coefficients).all() and log_z.imag in (0.0, math.pi)
    n = int(ladder_steps(lam, series, np.array([log_z.real]))[0])
    u = complex(np.exp(log_z - n * np.log(complex(lam))))
    if real_input:
        u = complex(u.real, 0.0)
    w = complex(series(u))
    coeffs = p.coefficients
    d = p.degree
    j = 0
    L = None
    while j < n:
        if L is None:
            if abs(w) < 1e40:
                nw = 0j
                for c in reversed(coeffs):
                    nw = nw * w + c
                if nw == w:          # fixed point reached (e.g. underflow to 0)
                    j = n
                    break
                w = nw
                j += 1
                continue
            L = complex(np.log(w))
        if L.real > 1e15:
            break
        L = complex(log_polyval(coeffs, 0j, L))
        L = complex(L.real, math.remainder(L.imag, 2 * math.pi))
        j += 1
        if j > max_steps:
            return LogExt(None, None, 0)
    sign = 0
    if L is None:
        if real_input:
            sign = 0 if w.real == 0 else (1 if w.real > 0 else -1)
        with np.errstate(divide="ignore"):
            return LogExt(math.log(abs(w)) if w != 0 else -math.inf, float(np.angle(w)), sign)
    m = n - j
    if m == 0:
        if real_input:
            sign = 1 if math.cos(L.imag) > 0 else -1
        return LogExt(L.real, L.imag, sign)
    c = math.log(abs(p.leading)) / (d - 1)
    log_abs = ExtReal.from_log(m * math.log(d) + math.log(L.real + c)).add(-c)
    if real_input:
        s = 1 if math.cos(L.imag) > 0 else -1
        lead = 1 if p.leading.real > 0 else -1
        sign = lead if d % 2 == 0 else (lead ** m) * s
    return LogExt(log_abs, None, sign)


# -- Green's function of the basin of infinity -------------------------------

def _green_constant(p: PolynomialSpec) -> float:
    return math.log(abs(p.leading)) / (p.degree - 1)


def green(p: PolynomialSpec, z, n_iter: int = 200):
    """``g(z) = lim d^-n log|p^n(z)|``; 0 for points that never pass ``1e10``.

    After the orbit passes ``1e10`` one more step is taken in the log
    domain and ``g = d^-(n+1) (log|p^(n+1)(z)| + log|a_d|/(d-1))``.
    """
    scalar = np.ndim(z) == 0
    w = np.atleast_1d(np.asarray(z, dtype=complex)).copy()
    g = np.zeros(w.shape)
    active = np.ones(w.shape, dtype=bool)
    d, c = p.degree, _green_constant(p)
    scale = 1.0
    for _ in range(n_iter + 1):
        esc = active & (np.abs(w) > _GREEN_ESCAPE)
        if np.any(esc):
            lp = log_polyval(p.coefficients, w[esc]).real
            g[esc] = scale / d * (lp + c)
            active &= ~esc
        if not np.any(active):
            break
        w[active] = p(w[active])
        scale /= d
    return float(g[0]) if scalar else g


def green_from_log(p: PolynomialSpec, log_w):
    """Green's function at points given by their logarithm (for huge moduli)."""
    log_w = np.asarray(log_w, dtype=complex)
    out = np.empty(log_w.shape)
    far = log_w.real > math.log(_GREEN_ESCAPE)
    out[far] = log_w.real[far] + _green_constant(p)
    if np.any(~far):
        out[~far] = green(p, np.exp(log_w[~far]))
    return out


def green_gradient_ratio(p: PolynomialSpec, z: complex) -> float:
    """``|z| * |grad g(z)|`` by central differences with step ``|z| * 1e-6``."""
    z = complex(z)
    h = abs(z) * 1e-6
    pts = np.array([z + h, z - h, z + 1j * h, z - 1j * h])
    gx_p, gx_m, gy_p, gy_m = green(p, pts)
    if min(gx_p, gx_m, gy_p, gy_m) <= 0:
        raise PreconditionError("green_gradient_ratio needs g > 0 around z")
    gx = (gx_p - gx_m) / (2 * h)
    gy = (gy_p - gy_m) / (2 * h)
    return abs(z) * math.hypot(gx, gy)


# -- filled Julia set and the sets V_n ---------------------------------------

def lower_modulus_polynomial(p: PolynomialSpec):
    """Ascending coefficients of ``q(t) = |a_d| t^d - sum_{j<d} |a_j| t^j``.

    ``|p(w)| >= q(|w|)``; ``q`` has one positive root and ``q(t)/t^d`` increases.
    """
    return [-abs(c) for c in p.coefficients[:-1]] + [abs(p.leading)]


def doubling_radius(p: PolynomialSpec) -> float:
    """Smallest ``R`` certified by coefficients with ``|p(w)| > 2|w|`` for ``|w| > R``."""
    q = lower_modulus_polynomial(p)
    q[1] -= 2.0
    roots = find_roots(q)
    pos = [r.real for r in roots if abs(r.imag) < 1e-9 and r.real > 0]
    return max(pos) if pos else 0.0


def lemma_radius_ok(p: PolynomialSpec, R: float) -> bool:
    """Coefficient certificate for ``|p(z)| > 2R`` whenever ``|z| > R``."""
    q = lower_modulus_polynomial(p)
    qR = sum(c * R ** k for k, c in enumerate(q))
    qprime_positive = sum(k * c * R ** (k - 1) for k, c in enumerate(q) if k) > 0
    return R > 0 and qR >= 2 * R and qprime_positive


@dataclass(frozen=True)
class Membership:
    status: str  # "in_K" or "escaped"
    n: int | None = None


def filled_julia_membership(p: PolynomialSpec, z: complex, max_iter: int = 500,
                            R_escape: float | None = None) -> Membership:
    if R_escape is None:
        R_escape = max(doubling_radius(p), 1.0)
    elif R_escape < doubling_radius(p):
        raise PreconditionError(
            f"R_escape={R_escape} below the certified doubling radius {doubling_radius(p):.6g}")
    w = complex(z)
    for n in range(max_iter + 1):
        if abs(w) > R_escape:
            return Membership("escaped", n)
        w = complex(p(w))
    return Membership("in_K")


def exit_index(p: PolynomialSpec, z, R: float, n_max: int) -> np.ndarray:
    """First ``j <= n_max`` with ``|p^j(z)| > R``, else ``n_max + 1``."""
    w = np.asarray(z, dtype=complex).copy()
    out = np.full(w.shape, n_max + 1, dtype=np.int64)
    active = np.ones(w.shape, dtype=bool)
    for j in range(n_max + 1):
        out_now = active & (np.abs(w) > R)
        out[out_now] = j
        active &= ~out_now
        if j == n_max or not np.any(active):
            break
        w[active] = p(w[active])
    return out


@dataclass(frozen=True)
class VnReport:
    entries: list          # [(n, AreaEstimate)]
    theta_hat: float
    fit_range: tuple
    R: float


def vn_area(p: PolynomialSpec, R: float, n_max: int = 10, resolution: int = 1024,
            workers: int | None = None, min_cells: int = 64) -> VnReport:
    """Grid areas of ``V_n = {|p^n(z)| <= R}`` for ``n = 0..n_max`` and a decay fit."""
    from .measure import WindowSpec, area_window_levels

    if not lemma_radius_ok(p, R):
        raise PreconditionError(f"R={R} does not satisfy |p(z)| > 2R for |z| > R")
    window = WindowSpec(-R, R, -R, R)
    # V_n is {exit index > n}; the level function is the exit index itself
    entries = area_window_levels(lambda zz: exit_index(p, zz, R, n_max), window, resolution,
                                 levels=range(n_max + 1), workers=workers)
    ns, logs = [], []
    for n, est in entries:
        if n >= 1 and est.samples_hit >= min_cells:
            ns.append(n)
            logs.append(math.log(est.value))
    if len(ns) >= 2:
        slope = np.polyfit(ns, logs, 1)[0]
        theta = math.exp(slope)
        rng = (ns[0], ns[-1])
    else:
        theta, rng = math.nan, ()
    return VnReport(entries, theta, rng, R)
