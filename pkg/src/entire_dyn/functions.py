"""The entire-function families: evaluation, log-derivatives, order, M(r, f).

Every family exposes a vectorised ``log_eval`` returning ``log f(z)``; all
other quantities (values, overflow tokens, maximum modulus) are derived from
it, so values far beyond float range are handled uniformly.  Derivatives
are analytic per family.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import poincare as _pc
from . import weierstrass as _ws
from .errors import ConfigError, DomainError, PoleError, PreconditionError
from .extreal import LOG_CAP, ZERO, ExtReal
from .polynomial import PolynomialSpec, derivative, horner, log_polyval, strip_zeros

DEFAULT_SAMPLES = 4096
_DOMINANT = 30.0      # |Im w| beyond which sin uses the dominant exponential
_ZERO_TOL = 1e-300
_EPS = 2.220446049250313e-16
_ZOOM_ROUNDS = 6
_ZOOM_POINTS = 33


@dataclass(frozen=True)
class Overflow:
    """Stand-in for a value whose modulus exceeds float range."""

    magnitude: ExtReal
    phase: float | None = None

    def __abs__(self):
        return self.magnitude


# -- elementary pieces ----------------------------------------------------------

def log_sin(w):
    """Complex ``log sin(w)``, stable for large ``|Im w|``."""
    w = np.asarray(w, dtype=complex)
    out = np.empty(w.shape, dtype=complex)
    small = np.abs(w.imag) <= _DOMINANT
    with np.errstate(divide="ignore"):
        out[small] = np.log(np.sin(w[small]))
    up = w.imag > _DOMINANT
    wu = w[up]
    out[up] = -1j * wu + np.log1p(-np.exp(2j * wu)) - math.log(2) - 0.5j * math.pi
    dn = w.imag < -_DOMINANT
    wd = w[dn]
    out[dn] = 1j * wd + np.log1p(-np.exp(-2j * wd)) - math.log(2) - 0.5j * math.pi
    return out


def cot(w):
    """``cot w`` without overflow for large ``|Im w|``."""
    w = np.asarray(w, dtype=complex)
    out = np.empty(w.shape, dtype=complex)
    pos = w.imag >= 0
    q = np.exp(2j * w[pos])
    out[pos] = 1j * (q + 1) / (q - 1)
    q = np.exp(-2j * w[~pos])
    out[~pos] = 1j * (1 + q) / (1 - q)
    return out


def _log_to_value(L):
    with np.errstate(over="ignore", invalid="ignore"):
        v = np.exp(L)
    return np.where(np.isneginf(L.real), 0j, v)


def _parse_complex(text: str) -> complex:
    parts = [s.strip() for s in text.split(",")]
    if len(parts) == 1:
        return complex(float(parts[0]), 0.0)
    if len(parts) != 2:
        raise ConfigError(f"cannot parse complex number {text!r}")
    return complex(float(parts[0]), float(parts[1]))


def _fmt_complex(c: complex) -> str:
    c = complex(c)
    return f"{c.real!r},{c.imag!r}"


def _fmt_list(cs) -> str:
    return " ; ".join(_fmt_complex(c) for c in cs)


def _parse_list(text: str):
    return tuple(_parse_complex(t) for t in text.split(";") if t.strip())


# -- family base ----------------------------------------------------------------

class FunctionSpec:
    """Common interface of the function families (immutable)."""

    family = "abstract"

    # vectorised primitives ------------------------------------------------
    def log_eval(self, z):
        raise NotImplementedError

    def derivative(self, z):
        raise NotImplementedError

    def log_derivative_array(self, z):
        """``z f'(z)/f(z)`` elementwise (``nan`` where ``f`` vanishes)."""
        raise NotImplementedError

    # scalar conveniences ------------------------------------------------------
    def eval(self, z):
        """``f(z)`` or :class:`Overflow` when ``|f(z)|`` exceeds ``1e300``."""
        L = complex(self.log_eval(np.array([complex(z)]))[0])
        if L.real == -math.inf:
            return 0j
        if L.real < LOG_CAP:
            return complex(np.exp(L))
        return Overflow(ExtReal.from_log(L.real), L.imag)

    def __call__(self, z):
        return self.eval(z)

    def eval_log_derivative(self, z) -> complex:
        z = complex(z)
        L = complex(self.log_eval(np.array([z]))[0])
        if L.real < math.log(_ZERO_TOL):
            raise PoleError(f"f vanishes at {z!r}; z f'/f undefined")
        return complex(self.log_derivative_array(np.array([z]))[0])

    def order(self) -> float:
        raise NotImplementedError

    # growth ------------------------------------------------------------------
    def log_max_modulus_model(self, r: ExtReal) -> ExtReal:
        """Analytic model of ``log M(r, f)`` for large ``r``."""
        raise NotImplementedError

    # orbit support (see dynamics) ----------------------------------------------
    real_bound: float | None = None   # f maps R into [-b, b]
    axis: str | None = None           # "real" or "imag": an invariant line

    def axis_step(self, sign: int, mag: ExtReal):
        """Image of ``sign * mag`` on the invariant axis, for huge ``mag``."""
        raise NotImplementedError

    def axis_log_derivative_abs(self, sign: int, mag: ExtReal) -> ExtReal:
        raise NotImplementedError

    def log_abs_bounds_from_log(self, L: complex, dL: float):
        """Bounds ``(lo, hi)`` on ``log|f(e^L)|`` given ``L`` to absolute error ``dL``.

        Either bound may be ``None`` (unknown).  Values are ExtReal.
        """
        return None, None

    # serialisation ---------------------------------------------------------------
    def to_text(self) -> str:
        raise NotImplementedError


def max_modulus(f: FunctionSpec, r: float, samples: int = DEFAULT_SAMPLES) -> ExtReal:
    """``max |f|`` over ``samples`` equispaced points on ``|z| = r``.

    The best sample angle is refined by zooming six times, each round
    placing 33 points across the two neighbouring intervals.  The result is
    a value attained by ``f`` on the circle, hence a lower bound for
    ``M(r, f)``.  The families oscillate
    ``O(r)`` times around the circle, so ``samples`` should grow with ``r``.
    """
    if samples < 64:
        raise PreconditionError("samples must be at least 64")
    r = float(r)
    if r < 0:
        raise PreconditionError("r must be nonnegative")
    if r == 0:
        L = f.log_eval(np.array([0j]))[0].real
        return ZERO if L == -math.inf else ExtReal.from_log(L)
    theta = 2 * math.pi * np.arange(samples) / samples
    with np.errstate(over="ignore"):
        logs = f.log_eval(r * np.exp(1j * theta)).real
    i = int(np.argmax(logs))
    best = float(logs[i])
    h = 2 * math.pi / samples
    centre = theta[i]
    for _ in range(_ZOOM_ROUNDS):
        t = centre + h * np.linspace(-1.0, 1.0, _ZOOM_POINTS)
        with np.errstate(over="ignore"):
            vals = f.log_eval(r * np.exp(1j * t)).real
        j = int(np.argmax(vals))
        if vals[j] > best:
            best = float(vals[j])
        centre, h = t[j], 2 * h / (_ZOOM_POINTS - 1)
    return ZERO if best == -math.inf else ExtReal.from_log(best)


# -- P(z) sin(αz + β) -----------------------------------------------------------------

@dataclass(frozen=True)
class PolySin(FunctionSpec):
    P: tuple = (1.0,)
    alpha: complex = 1.0
    beta: complex = 0.0

    family = "polysin"

    def __post_init__(self):
        P = strip_zeros(self.P)
        if all(c == 0 for c in P):
            raise DomainError("P must not vanish identically")
        if complex(self.alpha) == 0:
            raise DomainError("alpha must be nonzero")
        object.__setattr__(self, "P", P)
        object.__setattr__(self, "alpha", complex(self.alpha))
        object.__setattr__(self, "beta", complex(self.beta))

    @property
    def deg(self) -> int:
        return len(self.P) - 1

    @cached_property
    def _dP(self):
        return derivative(self.P)

    def log_eval(self, z):
        z = np.asarray(z, dtype=complex)
        return log_polyval(self.P, z) + log_sin(self.alpha * z + self.beta)

    def derivative(self, z):
        z = np.asarray(z, dtype=complex)
        w = self.alpha * z + self.beta
        with np.errstate(over="ignore", invalid="ignore"):
            return horner(self._dP, z) * np.sin(w) + self.alpha * horner(self.P, z) * np.cos(w)

    def log_derivative_array(self, z):
        z = np.asarray(z, dtype=complex)
        w = self.alpha * z + self.beta
        with np.errstate(divide="ignore", invalid="ignore"):
            poly = z * horner(self._dP, z) / horner(self.P, z) if self.deg else 0j
            return poly + self.alpha * z * cot(w)

    def order(self) -> float:
        return 1.0

    def log_max_modulus_model(self, r: ExtReal) -> ExtReal:
        r = ExtReal.coerce(r)
        const = abs(self.beta.imag) - math.log(2) + math.log(abs(self.P[-1]))
        lin = r.scale(abs(self.alpha))
        if self.deg and r >= 1:
            lin = lin.plus(r.log().scale(self.deg))
        return lin.add(const)

    # real line: constant real P with real α, β maps R into [-|P|, |P|]
    @property
    def real_bound(self):
        if self.deg == 0 and self.P[0].imag == 0 and self.alpha.imag == 0 and self.beta.imag == 0:
            return abs(self.P[0])
        return None

    # imaginary axis: even real P, real α, β = 0 keeps iR invariant
    @property
    def axis(self):
        even = all(c == 0 for c in self.P[1::2])
        real = all(c.imag == 0 for c in self.P)
        if even and real and self.alpha.imag == 0 and self.beta == 0:
            return "imag"
        return None

    def axis_step(self, sign: int, mag: ExtReal):
        # f(iy) = i P(iy) sinh(αy): new coordinate P(iy) sinh(αy)
        a = self.alpha.real
        s_arg = ExtReal.coerce(mag).scale(abs(a))           # |α y|
        log_sinh = s_arg.add(-math.log(2))                  # e^-2|αy| is negligible here
        lead = self.P[-1].real * (-1) ** (self.deg // 2)
        log_abs = log_sinh.add(math.log(abs(lead)))
        if self.deg:
            log_abs = log_abs.plus(ExtReal.coerce(mag).log().scale(self.deg))
        new_sign = (1 if lead > 0 else -1) * sign * (1 if a > 0 else -1)
        return new_sign, log_abs.exp()

    def axis_log_derivative_abs(self, sign: int, mag: ExtReal) -> ExtReal:
        # z f'/f = z P'/P + α z cot(αz) -> deg + |α y| coth|α y| on iR
        return ExtReal.coerce(mag).scale(abs(self.alpha.real)).add(self.deg)

    def log_abs_bounds_from_log(self, L: complex, dL: float):
        """One step past float range: ``|Im(αw + β)| >= ...`` with ``w = e^L``."""
        L = complex(L)
        a = self.alpha
        s = abs(math.sin(L.imag + math.atan2(a.imag, a.real))) - dL
        if s <= 0:
            return None, None
        # |Im(αw+β)| >= |α| e^{Re L} s - |Im β|
        base = ExtReal.from_log(L.real + math.log(abs(a)) + math.log(s))
        im_lo = base.add(-abs(self.beta.imag))
        lo = im_lo.add(-math.log(2) - 1.0)  # covers log1p(-e^{-2y}) and lower-order P terms
        if self.deg:
            lo = lo.add(math.log(abs(self.P[-1])) + self.deg * (L.real - dL) - 1.0)
        else:
            lo = lo.add(math.log(abs(self.P[0])))
        hi_arg = ExtReal.from_log(L.real + dL + math.log(abs(a))).add(abs(self.beta.imag))
        hi = hi_arg.add(math.log(abs(self.P[-1])) + self.deg * (L.real + dL) + 1.0)
        return lo, hi

    def to_text(self) -> str:
        return "\n".join([
            "family = polysin",
            f"P = {_fmt_list(self.P)}",
            f"alpha = {_fmt_complex(self.alpha)}",
            f"beta = {_fmt_complex(self.beta)}",
        ]) + "\n"


# -- Σ a_k(z) exp(b_k z) ----------------------------------------------------------------

@dataclass(frozen=True)
class ExpSum(FunctionSpec):
    """``Σ a_k(z) exp(b_k z)`` with polynomial ``a_k`` (ascending coefficient tuples)."""

    terms: tuple = ()

    family = "expsum"

    def __post_init__(self):
        if len(self.terms) < 2:
            raise DomainError("an exponential sum needs at least two terms")
        terms = []
        for a, b in self.terms:
            a = strip_zeros(a)
            b = complex(b)
            if all(c == 0 for c in a):
                raise DomainError("coefficient polynomials must not vanish")
            if b == 0:
                raise DomainError("exponents b_k must be nonzero")
            terms.append((a, b))
        args = [math.atan2(b.imag, b.real) % (2 * math.pi) for _, b in terms]
        for k in range(len(args) - 1):
            if not args[k] < args[k + 1] <= args[k] + math.pi + 1e-12:
                raise DomainError("arg b_k must increase by at most pi per step")
        if not args[0] <= args[-1] - math.pi + 1e-12:
            raise DomainError("arg b_0 must be at most arg b_n - pi")
        object.__setattr__(self, "terms", tuple(terms))

    def _log_terms(self, z, deriv=False):
        z = np.asarray(z, dtype=complex)
        logs = []
        for a, b in self.terms:
            coeffs = a
            if deriv:
                da = derivative(a) + (0j,) * (len(a) - len(derivative(a)))
                coeffs = strip_zeros(tuple(da[j] + b * a[j] for j in range(len(a))))
            logs.append(log_polyval(coeffs, z) + b * z)
        return np.stack(logs)

    @staticmethod
    def _logsumexp(logs):
        top = np.max(logs.real, axis=0)
        safe = np.where(np.isfinite(top), top, 0.0)
        with np.errstate(invalid="ignore", over="ignore"):
            s = np.exp(logs - safe).sum(axis=0)
            return safe + np.log(s)

    def log_eval(self, z):
        return self._logsumexp(self._log_terms(z))

    def derivative(self, z):
        return _log_to_value(self._logsumexp(self._log_terms(z, deriv=True)))

    def log_derivative_array(self, z):
        z = np.asarray(z, dtype=complex)
        with np.errstate(invalid="ignore", over="ignore"):
            return z * np.exp(self._logsumexp(self._log_terms(z, deriv=True)) - self.log_eval(z))

    def order(self) -> float:
        return 1.0

    def log_max_modulus_model(self, r: ExtReal) -> ExtReal:
        r = ExtReal.coerce(r)
        cands = []
        for a, b in self.terms:
            v = r.scale(abs(b))
            deg = len(a) - 1
            if deg and r >= 1:
                v = v.plus(r.log().scale(deg))
            const = math.log(abs(a[-1]))
            cands.append(v.add(const) if v.log_float() > 5 or const >= 0 else v)
        return max(cands)

    def to_text(self) -> str:
        lines = ["family = expsum", f"terms = {len(self.terms)}"]
        for k, (a, b) in enumerate(self.terms):
            lines.append(f"a{k} = {_fmt_list(a)}")
            lines.append(f"b{k} = {_fmt_complex(b)}")
        return "\n".join(lines) + "\n"


# -- Weierstraß σ ----------------------------------------------------------------------

@dataclass(frozen=True)
class Sigma(FunctionSpec):
    tau: complex = 1j

    family = "sigma"

    def __post_init__(self):
        object.__setattr__(self, "tau", complex(self.tau))
        if not self.tau.imag > 0:
            raise DomainError("Im tau must be positive")

    @cached_property
    def ctx(self) -> _ws.LatticeContext:
        return _ws.LatticeContext.from_tau(self.tau)

    def log_eval(self, z):
        return np.asarray(_ws.log_sigma(self.ctx, np.asarray(z, dtype=complex)))

    def derivative(self, z):
        z = np.asarray(z, dtype=complex)
        return _log_to_value(self.log_eval(z)) * _ws.zeta(self.ctx, z)

    def log_derivative_array(self, z):
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        zr, _, _ = _ws.reduce_to_lattice(self.ctx, z)
        out = np.full(z.shape, np.nan + 0j)
        ok = np.abs(zr) >= 1e-8
        out[ok] = z[ok] * _ws.zeta(self.ctx, z[ok])
        return out

    def order(self) -> float:
        return 2.0

    def log_max_modulus_model(self, r: ExtReal) -> ExtReal:
        # max over the circle of V(z) = (B + A) r^2 / 2
        c = self.ctx
        return ExtReal.coerce(r).pow(2).scale(0.5 * (c.B + c.A))

    def to_text(self) -> str:
        return f"family = sigma\ntau = {_fmt_complex(self.tau)}\n"


# -- Poincaré functions -----------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Poincare(FunctionSpec):
    """Poincaré function of ``p`` at the repelling fixed point ``z0`` (multiplier ``lam``)."""

    p: PolynomialSpec = None
    z0: complex = 0j
    lam: complex = 0j
    series: _pc.PowerSeries = field(default=None, repr=False)

    family = "poincare"

    def __post_init__(self):
        if not isinstance(self.p, PolynomialSpec):
            object.__setattr__(self, "p", PolynomialSpec(tuple(self.p)))
        object.__setattr__(self, "z0", complex(self.z0))
        object.__setattr__(self, "lam", complex(self.lam))
        if abs(self.lam) <= 1:
            raise DomainError("multiplier must satisfy |lam| > 1")
        if abs(complex(self.p(self.z0)) - self.z0) > 1e-8 * max(1.0, abs(self.z0)):
            raise DomainError("z0 is not a fixed point of p")
        if abs(complex(self.p.derivative(self.z0)) - self.lam) > 1e-8 * abs(self.lam):
            raise DomainError("lam differs from p'(z0)")
        if self.series is None:
            object.__setattr__(self, "series", _pc.build_series(self.p, self.z0, self.lam))

    @classmethod
    def from_polynomial(cls, coefficients, z0=None, N: int = 64) -> "Poincare":
        """Poincaré function at ``z0`` (default: the repelling fixed point of largest ``|λ|``)."""
        p = PolynomialSpec(tuple(coefficients))
        pts = _pc.find_repelling_fixed_points(p)
        if not pts:
            raise DomainError("p has no repelling fixed point")
        if z0 is None:
            z0, lam = max(pts, key=lambda t: abs(t[1]))
        else:
            z0, lam = min(pts, key=lambda t: abs(t[0] - complex(z0)))
        return cls(p, z0, lam, _pc.build_series(p, z0, lam, N))

    def __eq__(self, other):
        return (isinstance(other, Poincare) and self.p == other.p and self.z0 == other.z0
                and self.lam == other.lam and self.series == other.series)

    def __hash__(self):
        return hash((self.p, self.z0, self.lam))

    @property
    def is_real(self) -> bool:
        return self.p.is_real and self.z0.imag == 0 and self.lam.imag == 0

    def log_eval(self, z, log_z=None):
        return _pc.poincare_log_eval(self.p, self.lam, self.series, z, log_z)

    def derivative(self, z):
        L, D = _pc.poincare_log_eval(self.p, self.lam, self.series, z, derivative=True)
        return _log_to_value(D)

    def log_derivative_array(self, z):
        z = np.asarray(z, dtype=complex)
        L, D = _pc.poincare_log_eval(self.p, self.lam, self.series, z, derivative=True)
        with np.errstate(invalid="ignore", over="ignore"):
            return z * np.exp(D - L)

    def eval(self, z):
        if complex(z) == 0:
            return self.z0
        return super().eval(z)

    def order(self) -> float:
        return math.log(self.p.degree) / math.log(abs(self.lam))

    # growth: log log|f| = ρ log|z| + C, with C periodic in log|z| of period log|λ|
    @cached_property
    def _r1(self) -> float:
        return 16.0 * max(1.0, _pc._entry_radius(self.lam, self.series))

    def _green_c(self):
        return math.log(abs(self.p.leading)) / (self.p.degree - 1)

    @cached_property
    def _M_constants(self):
        """Samples of ``C_M(r) = log(log M(r) + c) - ρ log r`` over one period."""
        rho, c = self.order(), self._green_c()
        rs = self._r1 * abs(self.lam) ** (np.arange(33) / 32)
        vals = []
        for r in rs:
            lm = max_modulus(self, r, max(DEFAULT_SAMPLES, int(8 * r))).log_float()
            vals.append(math.log(lm + c) - rho * math.log(r))
        return np.log(rs), np.array(vals)

    def _axis_constants(self, sign: int):
        """``C(u) = log g(f(u)) - ρ log|u|`` sampled on ``sign * [r1, |λ| r1]``."""
        rho = self.order()
        rs = self._r1 * abs(self.lam) ** (np.arange(65) / 64)
        L = self.log_eval(sign * rs + 0j)
        g = _pc.green_from_log(self.p, L)
        with np.errstate(divide="ignore"):
            return np.log(rs), np.log(g) - rho * np.log(rs)

    @cached_property
    def _axis_C_pos(self):
        return self._axis_constants(1)

    @cached_property
    def _axis_C_neg(self):
        return self._axis_constants(-1)

    def _periodic(self, table, log_r: float, mode: str):
        """Interpolate a one-period table at ``log_r`` or return its min/max."""
        xs, ys = table
        period = math.log(abs(self.lam))
        if mode == "min":
            return float(np.min(ys))
        if mode == "max":
            return float(np.max(ys))
        t = xs[0] + (log_r - xs[0]) % period
        return float(np.interp(t, xs, ys))

    def _loglog_model(self, table, log_r, mode="interp") -> ExtReal:
        """``log M`` or ``log|f|`` as ExtReal from ``ρ log r + C``."""
        rho = self.order()
        if isinstance(log_r, ExtReal):
            lr_f = log_r.log_float() if log_r.is_finite_float() else math.inf
            if lr_f == math.inf or float(log_r) > 1e15:
                C = self._periodic(table, 0.0, "max" if mode == "interp" else mode)
                return log_r.scale(rho).add(C).exp() if C != -math.inf else ZERO
            log_r = float(log_r)
        if log_r > 1e15 and mode == "interp":
            mode = "max"
        C = self._periodic(table, log_r, mode)
        if C == -math.inf:
            return ZERO
        return ExtReal.from_log(rho * log_r + C)

    def log_max_modulus_model(self, r: ExtReal) -> ExtReal:
        r = ExtReal.coerce(r)
        log_r = r.log() if r.canonical()[0] >= 1 else math.log(float(r))
        return self._loglog_model(self._M_constants, log_r).add(-self._green_c())

    # real axis -------------------------------------------------------------------
    @property
    def axis(self):
        return "real" if self.is_real else None

    def axis_step(self, sign: int, mag: ExtReal):
        """``f(sign * mag)`` for huge ``mag`` on the real axis; sign may become ``0`` (unknown)."""
        mag = ExtReal.coerce(mag)
        log_mag = mag.log()
        lf = float(log_mag) if log_mag.is_finite_float() else math.inf
        if lf < 1e6:
            L = complex(lf, 0.0 if sign > 0 else math.pi)
            res = _pc.poincare_log_ext(self.p, self.lam, self.series, L)
            return res.sign, res.log_abs.exp() if isinstance(res.log_abs, ExtReal) else ExtReal.from_log(res.log_abs)
        table = self._axis_C_pos if sign > 0 else self._axis_C_neg
        log_abs = self._loglog_model(table, log_mag, "min")
        new_sign = _pc.far_sign(self.p) if self.p.degree % 2 == 0 else 0
        return new_sign, log_abs.exp()

    def axis_log_derivative_abs(self, sign: int, mag: ExtReal) -> ExtReal:
        # x f'/f ~ ρ log|f| on the escaping side of the axis
        _, fmag = self.axis_step(sign, mag)
        if fmag <= 1:
            return ZERO
        return fmag.log().scale(self.order() * 0.5)

    def log_abs_bounds_from_log(self, L: complex, dL: float):
        res = _pc.poincare_log_ext(self.p, self.lam, self.series, complex(L))
        if res.log_abs is None:
            return None, None
        if not isinstance(res.log_abs, ExtReal) and not math.isfinite(res.log_abs):
            return None, None      # f(z) underflows; no positive lower bound
        la = ExtReal.coerce(res.log_abs) if not isinstance(res.log_abs, ExtReal) else res.log_abs
        if la <= 0:
            return None, None
        # log|f| is smooth in L with relative sensitivity about ρ
        rel = self.order() * (dL + 1e-12) * 4
        if rel >= 0.5:
            return None, None
        return la.scale(1 - rel), la.scale(1 + rel)

    def to_text(self) -> str:
        return "\n".join([
            "family = poincare",
            f"p = {_fmt_list(self.p.coefficients)}",
            f"z0 = {_fmt_complex(self.z0)}",
            f"lambda = {_fmt_complex(self.lam)}",
            f"N = {self.series.truncation}",
        ]) + "\n"


# -- text form -------------------------------------------------------------------------

PRESETS = {
    "sin": "family = polysin\nP = 1.0,0.0\nalpha = 1.0,0.0\nbeta = 0.0,0.0\n",
    "exp": "family = poincare\np = 0.0,0.0 ; 0.0,0.0 ; 1.0,0.0\nz0 = 1.0,0.0\nlambda = 2.0,0.0\nN = 64\n",
    "cosh": "family = poincare\np = -1.0,0.0 ; 0.0,0.0 ; 2.0,0.0\nz0 = 1.0,0.0\nlambda = 4.0,0.0\nN = 64\n",
    "chebyshev": "family = poincare\np = -2.0,0.0 ; 0.0,0.0 ; 1.0,0.0\nz0 = 2.0,0.0\nlambda = 4.0,0.0\nN = 64\n",
    "sigma": "family = sigma\ntau = 0.0,1.0\n",
}


def _entries(text: str) -> dict:
    if "\n" in text.strip():
        items = [ln.split("#", 1)[0] for ln in text.splitlines()]
    else:
        items = text.split()
    out = {}
    for item in items:
        item = item.strip()
        if not item:
            continue
        if "=" not in item:
            raise ConfigError(f"expected key = value, got {item!r}")
        k, v = item.split("=", 1)
        k = k.strip()
        if k in out:
            raise ConfigError(f"duplicate key {k!r}")
        out[k] = v.strip()
    return out


def parse_function(text: str) -> FunctionSpec:
    """Parse the key/value text form (or a preset name) into a FunctionSpec."""
    text = PRESETS.get(text.strip(), text)
    kv = _entries(text)
    family = kv.pop("family", None)
    try:
        if family == "polysin":
            f = PolySin(_parse_list(kv.pop("P")), _parse_complex(kv.pop("alpha")),
                        _parse_complex(kv.pop("beta", "0,0")))
        elif family == "expsum":
            n = int(kv.pop("terms"))
            terms = tuple((_parse_list(kv.pop(f"a{k}")), _parse_complex(kv.pop(f"b{k}")))
                          for k in range(n))
            f = ExpSum(terms)
        elif family == "sigma":
            f = Sigma(_parse_complex(kv.pop("tau")))
        elif family == "poincare":
            p = PolynomialSpec(_parse_list(kv.pop("p")))
            z0 = _parse_complex(kv.pop("z0"))
            lam = _parse_complex(kv.pop("lambda"))
            N = int(kv.pop("N", "64"))
            f = Poincare(p, z0, lam, _pc.build_series(p, z0, lam, N))
        else:
            raise ConfigError(f"unknown family {family!r}")
    except KeyError as exc:
        raise ConfigError(f"missing key {exc.args[0]!r} for family {family!r}") from None
    except (ValueError, DomainError) as exc:
        raise ConfigError(str(exc)) from exc
    if kv:
        raise ConfigError(f"unknown keys for family {family!r}: {sorted(kv)}")
    return f


def format_function(f: FunctionSpec) -> str:
    return f.to_text()


def sine() -> PolySin:
    return PolySin((1.0,), 1.0, 0.0)


def exponential() -> Poincare:
    """``exp`` as the Poincaré function of ``z^2`` at ``z0 = 1``."""
    return Poincare.from_polynomial((0, 0, 1), z0=1)
