"""Weierstraß σ, ζ and ℘ for the lattice spanned by 1 and τ.

Evaluation reduces ``z`` to its nearest lattice point using a Gauss-reduced
basis and carries the quasi-periodicity factors in a logarithmic channel,
so ``log σ(z)`` stays available long after ``σ(z)`` leaves float range.  At
the reduced point, a partial lattice product over ``|w| <= truncation``
is corrected by an Eisenstein-series tail.

The quasi-period uses the convention ``η₁ = 2ζ(1/2)`` so that
``σ(z + 1) = -exp(η₁ (z + 1/2)) σ(z)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import zeta as riemann_zeta

from .errors import ConvergenceError, PoleError, PreconditionError

ETA1_TAIL_TOL = 1e-12
LEGENDRE_TOL = 1e-10
_TAIL_ORDERS = 12  # Eisenstein tail terms G_4 .. G_{2K}
_POLE_TOL = 1e-8
_ZERO_TOL = 1e-14


# -- η₁ ------------------------------------------------------------------------

def _eta1_terms_needed(im_tau: float, tol: float = ETA1_TAIL_TOL, max_terms: int = 200_000) -> int:
    q = math.exp(-2 * math.pi * im_tau)
    for n in range(5, max_terms + 1, 5):
        if _eta1_tail_bound(q, n) <= tol:
            return n
    return max_terms


def _eta1_tail_bound(q_abs: float, n_terms: int) -> float:
    """Bound on ``2π² Σ_{n>N} |1/sin²(nπτ)|`` with ``|q| = exp(-2π Im τ)``."""
    qn = q_abs ** (n_terms + 1)
    if qn == 0.0:
        return 0.0
    return 2 * math.pi ** 2 * 4 * qn / ((1 - q_abs) * (1 - qn) ** 2)


def eta1_series(tau, n_terms: int):
    """Partial sum ``π²(1/3 + 2 Σ_{n<=N} 1/sin²(nπτ))`` and its tail bound.

    ``1/sin²(nπτ)`` is evaluated as ``-4 qⁿ / (1 - qⁿ)²`` with
    ``q = exp(2πiτ)``; this is the same quantity written so that nothing
    overflows for large ``Im τ``.  Works elementwise on arrays of ``τ``.
    """
    tau = np.asarray(tau, dtype=complex)
    # the lattice is unchanged by τ -> τ + 1; fix Re τ in [-1/2, 1/2]
    tau = tau - np.round(tau.real)
    q = np.exp(2j * np.pi * tau)
    total = np.zeros(tau.shape, dtype=complex)
    qn = np.ones(tau.shape, dtype=complex)
    for _ in range(n_terms):
        qn = qn * q
        total += qn / (1 - qn) ** 2
    value = np.pi ** 2 * (1.0 / 3.0 - 8.0 * total)
    q_abs = np.exp(-2 * np.pi * tau.imag)
    tail = np.vectorize(_eta1_tail_bound, otypes=[float])(q_abs, n_terms)
    return value, tail


def eta1(tau: complex, n_terms: int | None = None) -> complex:
    """Quasi-period ``η₁ = 2ζ(1/2)`` of the lattice ``Z + τZ``.

    ``n_terms`` defaults to the least multiple of 5 whose tail bound is
    below ``1e-12``.
    """
    tau = complex(tau)
    if not tau.imag > 0:
        raise PreconditionError("Im tau must be positive")
    if n_terms is None:
        n_terms = _eta1_terms_needed(tau.imag)
    if n_terms < 5:
        raise PreconditionError("n_terms must be at least 5")
    value, tail = eta1_series(tau, n_terms)
    if float(tail) > ETA1_TAIL_TOL:
        raise ConvergenceError(f"eta1 tail bound {float(tail):.3e} exceeds {ETA1_TAIL_TOL:g}")
    return complex(value)


def eta1_with_tail(tau: complex, n_terms: int):
    value, tail = eta1_series(complex(tau), n_terms)
    return complex(value), float(tail)


def eta1_asymptotic_check(tau: complex) -> dict:
    """Compare ``η₁`` with ``π²/3 (1 - 24 x)`` for three readings of ``x``.

    Readings: ``nome`` ``x = exp(2πiτ)``, ``literal`` ``x = exp(-2πτ)``
    with complex ``τ``, ``imag`` ``x = exp(-2π Im τ)``.  A reading matches
    when its error is within ``1000 · exp(-4π Im τ)`` (the stated order of
    the remainder) plus rounding.
    """
    tau = complex(tau)
    value = eta1(tau)
    bound = 1000 * math.exp(-4 * math.pi * tau.imag) + 1e-13 * abs(value)
    readings = {
        "nome": np.exp(2j * np.pi * tau),
        "literal": np.exp(-2 * np.pi * tau),
        "imag": math.exp(-2 * math.pi * tau.imag),
    }
    out = {"eta1": value, "bound": bound}
    for name, x in readings.items():
        err = abs(value - np.pi ** 2 / 3 * (1 - 24 * x))
        out[name] = {"error": float(err), "matches": bool(err <= bound)}
    return out


# -- lattice geometry -------------------------------------------------------------

def gauss_reduce(u: complex, v: complex):
    """Lagrange-Gauss reduction of a lattice basis.

    Returns ``(u', v', M)`` with ``[u', v'] = M @ [u, v]`` for an integer
    matrix ``M``, ``|u'| <= |v'|`` and ``|Re(v'/u')| <= 1/2``.
    """
    M = np.array([[1, 0], [0, 1]], dtype=np.int64)
    u, v = complex(u), complex(v)
    if abs(u) > abs(v):
        u, v = v, u
        M = M[::-1].copy()
    while True:
        mu = round((v / u).real)
        v = v - mu * u
        M[1] -= mu * M[0]
        if abs(v) >= abs(u):
            break
        u, v = v, u
        M = M[::-1].copy()
    if (v / u).imag < 0:
        v = -v
        M[1] = -M[1]
    return u, v, M


def eisenstein(tau: complex, k: int, n_max: int = 60) -> complex:
    """``G_{2k}(τ) = Σ' (m + nτ)^(-2k)`` via the Lambert-series q-expansion, ``k >= 2``."""
    q = np.exp(2j * np.pi * complex(tau))
    n = np.arange(1, n_max + 1)
    qn = q ** n
    lam = np.sum(n.astype(float) ** (2 * k - 1) * qn / (1 - qn))
    coef = 2 * (2j * np.pi) ** (2 * k) / math.factorial(2 * k - 1)
    return complex(2 * riemann_zeta(2 * k) + coef * lam)


@dataclass(frozen=True, eq=False)
class LatticeContext:
    """Lattice data for ``Λ = Z + τZ`` shared by all σ, ζ, ℘ evaluations."""

    tau: complex
    eta1: complex
    eta2: complex
    B: float
    A: float
    alpha_phase: float
    legendre_residual: float
    truncation: float = 0.0
    # derived data, not part of the identity of the context
    _basis: tuple = field(default=None, repr=False)
    _points: np.ndarray = field(default=None, repr=False)
    _tails: np.ndarray = field(default=None, repr=False)

    @classmethod
    def from_tau(cls, tau: complex, n_terms: int | None = None,
                 truncation: float | None = None) -> "LatticeContext":
        """Build the context; ``truncation`` defaults to ten covering radii (at least 8)."""
        tau = complex(tau)
        if not tau.imag > 0:
            raise PreconditionError("Im tau must be positive")
        e1 = eta1(tau, n_terms)
        e2 = e1 * tau - 2j * math.pi
        B = math.pi / tau.imag
        A = abs(e1 - B)
        # α is undefined when A = 0; take the canonical 0
        alpha = 0.0 if A <= 1e-14 * B else math.atan2((e1 - B).imag, (e1 - B).real)
        if alpha <= -math.pi:
            alpha += 2 * math.pi
        u, v, M = gauss_reduce(1.0, tau)
        if truncation is None:
            # reduced points satisfy |z| <= |u + v| / 2, so the tail series
            # converges like 0.1^(2k)
            truncation = max(8.0, 10 * abs(u + v) / 2)
        points = _lattice_points(u, v, truncation)
        tails = _eisenstein_tails(u, v, points)
        ctx = cls(tau, e1, e2, B, A, alpha, 0.0, truncation,
                  (u, v, M), points, tails)
        resid = _legendre_residual(ctx)
        object.__setattr__(ctx, "legendre_residual", resid)
        if not resid < LEGENDRE_TOL:
            raise ConvergenceError(f"Legendre residual {resid:.3e} for tau={tau}")
        return ctx

    def eta_of(self, m, n):
        """Quasi-period ``η(w) = m η₁ + n η₂`` of ``w = m + nτ``."""
        return m * self.eta1 + n * self.eta2


def _lattice_points(u: complex, v: complex, radius: float) -> np.ndarray:
    """Nonzero lattice points with ``|w| <= radius``, sorted by modulus."""
    # with a reduced basis |a u + b v| >= (sqrt(3)/2) max(|a| |u|, |b| |v|)
    a_max = int(math.ceil(radius / (abs(u) * math.sqrt(3) / 2))) + 1
    b_max = int(math.ceil(radius / (abs(v) * math.sqrt(3) / 2))) + 1
    a, b = np.meshgrid(np.arange(-a_max, a_max + 1), np.arange(-b_max, b_max + 1), indexing="ij")
    w = (a * u + b * v).ravel()
    w = w[(np.abs(w) <= radius) & (np.abs(w) > 0)]
    return w[np.argsort(np.abs(w), kind="stable")]


def _eisenstein_tails(u: complex, v: complex, points: np.ndarray) -> np.ndarray:
    """``T_{2k} = Σ_{|w|>ρ} w^(-2k)`` for ``k = 2..K`` (index 0 is ``k = 2``).

    Two routes per ``k``: ``G_{2k}`` minus the partial sum (absolute error
    about ``eps · Σ|w|^(-2k)``, which dominates once the tail is tiny), or a
    direct sum over the shell ``ρ < |w| <= 4ρ`` (relative error about
    ``16 · 4^(-2k)``).  The route with the smaller error estimate is used.
    """
    tau_r = v / u
    rho = float(np.max(np.abs(points)))
    shell = _lattice_points(u, v, 4 * rho)
    shell = shell[np.abs(shell) > rho]
    out = np.empty(_TAIL_ORDERS - 1, dtype=complex)
    inv, inv_shell = 1.0 / points, 1.0 / shell
    for i, k in enumerate(range(2, _TAIL_ORDERS + 1)):
        terms = inv ** (2 * k)
        diff = eisenstein(tau_r, k) * u ** (-2 * k) - np.sum(terms)
        err_diff = 4 * np.finfo(float).eps * (np.sum(np.abs(terms)) + 2 * float(zeta2k_bound(k)))
        direct = np.sum(inv_shell ** (2 * k))
        err_direct = 16.0 * 4.0 ** (-2 * k) * float(np.sum(np.abs(inv_shell) ** (2 * k)))
        out[i] = direct if err_direct < err_diff else diff
    return out


def zeta2k_bound(k: int) -> float:
    return 2 * riemann_zeta(2 * k)


def _legendre_residual(ctx: LatticeContext) -> float:
    """``|η₁τ - η₂ - 2πi|`` with ``η₂`` measured independently of the series.

    ``2ζ`` at the half-periods of the reduced basis gives ``η(u)`` and
    ``η(v)``; these need no argument reduction.  Inverting the basis change
    yields ``η₂ = η(τ)``, which is compared with the Legendre relation.
    """
    u, v, M = ctx._basis
    eta_u = 2 * complex(_zeta_reduced(ctx, np.array([u / 2]))[0])
    eta_v = 2 * complex(_zeta_reduced(ctx, np.array([v / 2]))[0])
    # [u, v] = M [1, τ]  =>  [1, τ] = M^-1 [u, v]; η is additive on the lattice
    Minv = np.linalg.inv(M.astype(float))
    eta_tau = Minv[1, 0] * eta_u + Minv[1, 1] * eta_v
    eta_one = Minv[0, 0] * eta_u + Minv[0, 1] * eta_v
    return max(abs(ctx.eta1 * ctx.tau - eta_tau - 2j * math.pi), abs(eta_one - ctx.eta1))


def reduce_to_lattice(ctx: LatticeContext, z):
    """Nearest lattice point ``m + nτ`` to ``z``; ties go to the smaller ``|w|``.

    Returns ``(z - w, m, n)`` as arrays.
    """
    u, v, M = ctx._basis
    z = np.asarray(z, dtype=complex)
    # coordinates in the reduced basis: z = s u + t v
    det = (u.conjugate() * v).imag
    s = (z * v.conjugate()).imag / (u * v.conjugate()).imag
    t = (u.conjugate() * z).imag / det
    s0, t0 = np.floor(s), np.floor(t)
    best = np.full(z.shape, 1e300)
    best_w = np.full(z.shape, 1e300)
    best_a = np.zeros(z.shape)
    best_b = np.zeros(z.shape)
    for da in (-1, 0, 1, 2):
        for db in (-1, 0, 1, 2):
            a, b = s0 + da, t0 + db
            w = a * u + b * v
            dist = np.abs(z - w)
            wabs = np.abs(w)
            better = (dist < best - 1e-15 * np.maximum(1.0, best)) | (
                (np.abs(dist - best) <= 1e-15 * np.maximum(1.0, best)) & (wabs < best_w))
            best = np.where(better, dist, best)
            best_w = np.where(better, wabs, best_w)
            best_a = np.where(better, a, best_a)
            best_b = np.where(better, b, best_b)
    m = best_a * M[0, 0] + best_b * M[1, 0]
    n = best_a * M[0, 1] + best_b * M[1, 1]
    w = best_a * u + best_b * v
    return z - w, m.astype(np.int64), n.astype(np.int64)


def _chunks(n: int, size: int = 256):
    for start in range(0, n, size):
        yield slice(start, min(n, start + size))


def _log_sigma_reduced(ctx: LatticeContext, zr: np.ndarray) -> np.ndarray:
    out = np.empty(zr.shape, dtype=complex)
    w = ctx._points
    tails = ctx._tails
    ks = np.arange(2, _TAIL_ORDERS + 1)
    for sl in _chunks(zr.size):
        z = zr[sl]
        uu = z[:, None] / w[None, :]
        with np.errstate(divide="ignore", invalid="ignore"):
            terms = np.log1p(-uu) + uu + 0.5 * uu * uu
            acc = np.log(z) + terms.sum(axis=1)
        acc -= (tails[None, :] * z[:, None] ** (2 * ks[None, :]) / (2 * ks[None, :])).sum(axis=1)
        out[sl] = acc
    return out


def _zeta_reduced(ctx: LatticeContext, zr: np.ndarray) -> np.ndarray:
    out = np.empty(zr.shape, dtype=complex)
    w = ctx._points
    ks = np.arange(2, _TAIL_ORDERS + 1)
    for sl in _chunks(zr.size):
        z = zr[sl]
        zz = z[:, None]
        terms = 1.0 / (zz - w[None, :]) + 1.0 / w[None, :] + zz / w[None, :] ** 2
        acc = 1.0 / z + terms.sum(axis=1)
        acc -= (ctx._tails[None, :] * zz ** (2 * ks[None, :] - 1)).sum(axis=1)
        out[sl] = acc
    return out


def _wp_reduced(ctx: LatticeContext, zr: np.ndarray) -> np.ndarray:
    out = np.empty(zr.shape, dtype=complex)
    w = ctx._points
    ks = np.arange(2, _TAIL_ORDERS + 1)
    for sl in _chunks(zr.size):
        z = zr[sl]
        zz = z[:, None]
        terms = 1.0 / (zz - w[None, :]) ** 2 - 1.0 / w[None, :] ** 2
        acc = 1.0 / z ** 2 + terms.sum(axis=1)
        acc += ((2 * ks[None, :] - 1) * ctx._tails[None, :] * zz ** (2 * ks[None, :] - 2)).sum(axis=1)
        out[sl] = acc
    return out


def _wrap_phase(x):
    return np.angle(np.exp(1j * x))


def log_sigma(ctx: LatticeContext, z):
    """``log σ(z)`` with imaginary part in ``(-π, π]``; ``-inf`` at lattice points.

    The real part is ``log|σ(z)|`` and remains finite far beyond the range
    where ``σ(z)`` itself overflows.
    """
    scalar = np.ndim(z) == 0
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    zr, m, n = reduce_to_lattice(ctx, z)
    w = z - zr
    zero = np.abs(zr) <= _ZERO_TOL * np.maximum(1.0, np.abs(z))
    safe = np.where(zero, 0.5, zr)
    core = _log_sigma_reduced(ctx, safe.ravel()).reshape(z.shape)
    eta = ctx.eta_of(m, n)
    shift = eta * (zr + w / 2) + 1j * np.pi * ((m + n + m * n) % 2)
    total = core + shift
    out = total.real + 1j * _wrap_phase(total.imag)
    out = np.where(zero, complex(-np.inf, 0.0), out)
    return complex(out[0]) if scalar else out


def sigma(ctx: LatticeContext, z):
    """``σ(z)``; entries whose modulus exceeds float range come back as ``inf``.

    Use :func:`log_sigma` for the magnitude channel.
    """
    L = log_sigma(ctx, z)
    with np.errstate(over="ignore", invalid="ignore"):
        val = np.where(np.isneginf(np.real(L)), 0j, np.exp(L))
    return complex(val) if np.ndim(L) == 0 else val


def zeta(ctx: LatticeContext, z):
    """Weierstraß ``ζ = σ'/σ``; raises :class:`PoleError` within ``1e-8`` of the lattice."""
    scalar = np.ndim(z) == 0
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    zr, m, n = reduce_to_lattice(ctx, z)
    if np.any(np.abs(zr) < _POLE_TOL):
        raise PoleError("zeta evaluated within 1e-8 of a lattice point")
    out = _zeta_reduced(ctx, zr.ravel()).reshape(z.shape) + ctx.eta_of(m, n)
    return complex(out[0]) if scalar else out


def wp(ctx: LatticeContext, z):
    """Weierstraß ``℘ = -ζ'``; raises :class:`PoleError` near lattice points."""
    scalar = np.ndim(z) == 0
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    zr, _, _ = reduce_to_lattice(ctx, z)
    if np.any(np.abs(zr) < _POLE_TOL):
        raise PoleError("wp evaluated within 1e-8 of a lattice point")
    out = _wp_reduced(ctx, zr.ravel()).reshape(z.shape)
    return complex(out[0]) if scalar else out


def sigma_product(tau: complex, z, radius: float = 60.0):
    """Raw truncated product ``log σ(z)`` without reduction or tail (reference only)."""
    u, v, _ = gauss_reduce(1.0, complex(tau))
    w = _lattice_points(u, v, radius)
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    uu = z[:, None] / w[None, :]
    return np.log(z) + (np.log1p(-uu) + uu + 0.5 * uu * uu).sum(axis=1)


# -- condition (8c) and the parameter region ------------------------------------------

def condition_8c_pair(ctx: LatticeContext):
    """Literal test ``Re(1/η₁) >= Im τ/(2π)`` and the disk form ``A <= B``."""
    literal = (1.0 / ctx.eta1).real >= ctx.tau.imag / (2 * math.pi)
    disk = ctx.A <= ctx.B
    return bool(literal), bool(disk)


def condition_8c(ctx: LatticeContext) -> bool:
    if ctx.eta1 == 0:
        raise PreconditionError("eta1 vanishes")
    return condition_8c_pair(ctx)[0]


def condition_margin(tau) -> np.ndarray:
    """``Re(1/η₁(τ)) - Im τ/(2π)`` elementwise (positive inside the region)."""
    tau = np.asarray(tau, dtype=complex)
    n_terms = _eta1_terms_needed(float(np.min(tau.imag)))
    value, _ = eta1_series(tau, n_terms)
    return (1.0 / value).real - tau.imag / (2 * math.pi)


INSIDE, OUTSIDE, UNKNOWN = 1, 0, 2


def region_raster(window, resolution: int, max_terms: int = 20_000) -> np.ndarray:
    """Pixel grid of condition (8c) over a τ-window.

    Returns a ``(resolution, resolution)`` uint8 array, row 0 at the top
    (largest ``Im τ``), with values ``INSIDE``, ``OUTSIDE`` or ``UNKNOWN``
    (η₁ series not converged within ``max_terms``).
    """
    from .measure import grid_centers

    if not window.y_min >= 0:
        # pixel centres then stay strictly inside the upper half plane
        raise PreconditionError("window must lie in the closed upper half plane")
    xs, ys = grid_centers(window, resolution)
    out = np.empty((resolution, resolution), dtype=np.uint8)
    for row in range(resolution):
        y = ys[resolution - 1 - row]
        n_terms = min(_eta1_terms_needed(y, max_terms=max_terms), max_terms)
        tau = xs + 1j * y
        value, tail = eta1_series(tau, n_terms)
        lit = (1.0 / value).real >= y / (2 * math.pi)
        line = np.where(lit, INSIDE, OUTSIDE).astype(np.uint8)
        line[tail > ETA1_TAIL_TOL] = UNKNOWN
        out[row] = line
    return out


def boundary_on_imaginary_axis(lo: float = 1.5, hi: float = 2.5, tol: float = 1e-12):
    """Bracket ``[a, b]`` of the sign change of the (8c) margin along ``τ = it``."""
    f = lambda t: float(condition_margin(np.array([1j * t]))[0])
    fa, fb = f(lo), f(hi)
    if fa * fb > 0:
        raise ConvergenceError("no sign change of the (8c) margin in the bracket")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if (fm > 0) == (fa > 0):
            lo, fa = mid, fm
        else:
            hi = mid
    return lo, hi


# -- asymptotic objects ---------------------------------------------------------

def V_of_z(ctx: LatticeContext, z, check: bool = True):
    """``V(z)`` from the Cartesian form; the polar form is checked to ``1e-10``."""
    z = np.asarray(z, dtype=complex)
    B = ctx.B
    v1 = B / 2 * np.abs(z) ** 2 + ((ctx.eta1 / 2 - B / 2) * z * z).real
    if check:
        r, th = np.abs(z), np.angle(z)
        v2 = 0.5 * (B + ctx.A * np.cos(ctx.alpha_phase + 2 * th)) * r ** 2
        if np.any(np.abs(v1 - v2) > 1e-10 * np.maximum(np.abs(v1), 1e-300) + 1e-300):
            scale = np.maximum(np.abs(v1), B * r ** 2)
            if np.any(np.abs(v1 - v2) > 1e-10 * scale):
                raise ArithmeticError("V forms disagree")
    return float(v1) if v1.ndim == 0 else v1


def zeta_model(ctx: LatticeContext, z):
    """Leading behaviour ``η₁z - (2πi/Im τ) Im z`` of ``ζ`` away from the lattice."""
    z = np.asarray(z, dtype=complex)
    return ctx.eta1 * z - (2j * math.pi / ctx.tau.imag) * z.imag


@dataclass(frozen=True)
class Exclusion:
    in_E: np.ndarray
    in_F: np.ndarray
    in_G: np.ndarray


def exclusion_membership(ctx: LatticeContext, z) -> Exclusion:
    """Membership in the disk unions E, F and the angular set G.

    E uses radius ``exp(-|w|)`` and F radius ``|w|^(-1/2)`` around each
    lattice point ``w``; at ``w = 0`` both radii are taken as 1.  G is the
    pair of sectors ``|θ - θ±| <= r^(-1/4)`` with ``θ± = (±π - α)/2``.
    """
    z = np.asarray(z, dtype=complex)
    zr, _, _ = reduce_to_lattice(ctx, z)
    u, v, _ = ctx._basis
    in_E = np.zeros(z.shape, dtype=bool)
    in_F = np.zeros(z.shape, dtype=bool)
    # the nearest lattice point plus its neighbours covers every disk that can
    # contain z (all radii are at most 1, below the covering radius test)
    w0 = z - zr
    for du in (-1, 0, 1):
        for dv in (-1, 0, 1):
            w = w0 + du * u + dv * v
            dist = np.abs(z - w)
            wabs = np.abs(w)
            origin = wabs < 1e-12
            with np.errstate(divide="ignore"):
                rE = np.where(origin, 1.0, np.exp(-wabs))
                rF = np.where(origin, 1.0, 1.0 / np.sqrt(np.where(origin, 1.0, wabs)))
            in_E |= dist < rE
            in_F |= dist < rF
    r = np.abs(z)
    th = np.angle(z)
    width = np.where(r > 0, r, 1.0) ** -0.25
    in_G = np.zeros(z.shape, dtype=bool)
    for sgn in (1, -1):
        target = (sgn * math.pi - ctx.alpha_phase) / 2
        d = np.abs(_wrap_phase(th - target))
        in_G |= d <= width
    return Exclusion(in_E, in_F, in_G)


@dataclass(frozen=True)
class BoundsReport:
    c1_hat: float
    c2_hat: float
    n_c1: int
    n_c2: int
    r_range: tuple
    samples: int
    argmin_c1: complex
    argmin_c2: complex

    @property
    def positive(self) -> bool:
        return self.c1_hat > 0 and self.c2_hat > 0


def verify_theorem7_bounds(ctx: LatticeContext, r_range, samples: int, seed: int = 0,
                           exclude: str = "separate") -> BoundsReport:
    """Sampled infima of ``log|σ(z)|/|z|^{3/2}`` and ``|zζ(z)|/|z|^{3/2}``.

    Samples are uniform in ``(log r, θ)``.  With ``exclude="separate"`` the
    σ statistic skips E∪G and the ζ statistic skips F∪G; ``"union"`` skips
    E∪F∪G for both.
    """
    if not condition_8c(ctx):
        raise PreconditionError("condition (8c) fails for this lattice")
    r_lo, r_hi = map(float, r_range)
    if not 10 <= r_lo < r_hi <= 1e3:
        raise PreconditionError("r_range must lie in [10, 1000]")
    rng = np.random.Generator(np.random.Philox(key=seed))
    logr = rng.uniform(math.log(r_lo), math.log(r_hi), samples)
    th = rng.uniform(-math.pi, math.pi, samples)
    z = np.exp(logr) * np.exp(1j * th)
    ex = exclusion_membership(ctx, z)
    if exclude == "union":
        keep1 = keep2 = ~(ex.in_E | ex.in_F | ex.in_G)
    elif exclude == "separate":
        keep1 = ~(ex.in_E | ex.in_G)
        keep2 = ~(ex.in_F | ex.in_G)
    else:
        raise ValueError("exclude must be 'separate' or 'union'")
    r32 = np.abs(z) ** 1.5
    z1, z2 = z[keep1], z[keep2]
    s1 = np.real(log_sigma(ctx, z1)) / r32[keep1]
    s2 = np.abs(z2 * zeta(ctx, z2)) / r32[keep2]
    i1, i2 = int(np.argmin(s1)), int(np.argmin(s2))
    return BoundsReport(float(s1[i1]), float(s2[i2]), int(keep1.sum()), int(keep2.sum()),
                        (r_lo, r_hi), samples, complex(z1[i1]), complex(z2[i2]))
