"""Orbits with overflow-safe magnitudes, escape and fast-escape classification,
the criterion sets X, Y, W, T, and tower arithmetic for ``E_α``.

Orbit points are carried in one of four modes:

``point``
    a machine complex number with a running relative error estimate;
``axis``
    an exact position ``sign * mag`` on an invariant line (the imaginary
    axis for ``P(z) sin(αz)`` with even real ``P``, the real axis for real
    Poincaré functions), with ``mag`` an ExtReal;
``log``
    ``log w`` as a complex float once ``|w|`` exceeds ``1e300``;
``magnitude``
    lower and upper bounds on ``|w|`` only (the phase is gone).

Classification always uses the lower bound.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import PreconditionError
from .extreal import LOG_CAP, ZERO, ExtReal
from .functions import FunctionSpec, max_modulus

ESCAPING, BOUNDED, UNDECIDED = "escaping", "bounded", "undecided"
DEFAULT_BAILOUT = ExtReal.from_float(1e10)
CYCLE_TOL = 1e-12
_EPS = 2.220446049250313e-16
_EXT_REL = 1e-12          # relative slack on the top-level base in axis mode
MAX_ITER_CAP = 10 ** 6
_SAMPLE_LIMIT = 1e3       # M(r) is sampled up to here, modelled beyond


def _shrink(x: ExtReal, rel: float = _EXT_REL) -> ExtReal:
    level, base = x.canonical()
    return ExtReal(level, base * (1 - rel)) if level else ExtReal(0, base * (1 - rel))


def _grow(x: ExtReal, rel: float = _EXT_REL) -> ExtReal:
    level, base = x.canonical()
    return ExtReal(level, base * (1 + rel))


def _ext_from_log(x: float) -> ExtReal:
    return ZERO if x == -math.inf else ExtReal.from_log(x)


@dataclass
class _State:
    mode: str
    w: complex = 0j
    err: float = 0.0          # relative error of w (point) or absolute error of L (log)
    sign: int = 0
    mag: ExtReal = ZERO
    L: complex = 0j
    lo: ExtReal = ZERO
    hi: ExtReal = ZERO
    on_axis: bool = False


def _axis_sign(f: FunctionSpec, w: complex) -> int | None:
    """Sign on the invariant axis if ``w`` lies exactly on it, else ``None``."""
    if f.axis == "imag" and w.real == 0:
        return 1 if w.imag >= 0 else -1
    if f.axis == "real" and w.imag == 0:
        return 1 if w.real >= 0 else -1
    return None


def _axis_point(f: FunctionSpec, sign: int, mag: float) -> complex:
    return complex(0.0, sign * mag) if f.axis == "imag" else complex(sign * mag, 0.0)


def _initial_state(f: FunctionSpec, z: complex) -> _State:
    m = ExtReal.from_float(abs(z))
    return _State("point", w=z, err=0.0, lo=m, hi=m, on_axis=_axis_sign(f, z) is not None)


def _step(f: FunctionSpec, s: _State) -> _State:
    """Advance one iterate; returns the new state with magnitude bounds."""
    if s.mode == "point":
        w = s.w
        L = complex(f.log_eval(np.array([w]))[0])
        if L.real == -math.inf:
            return _State("point", w=0j, err=0.0, lo=ZERO, hi=ZERO, on_axis=_axis_sign(f, 0j) is not None)
        q = abs(complex(f.log_derivative_array(np.array([w]))[0])) if s.err else 0.0
        dL = (q * s.err if math.isfinite(q) else math.inf) + 4 * _EPS * (abs(L) + 1)
        lo = _ext_from_log(L.real - dL)
        hi = _ext_from_log(L.real + dL)
        if s.on_axis:
            sign = _axis_phase_sign(f, L.imag)
            if L.real <= LOG_CAP:
                nw = _axis_point(f, sign, math.exp(L.real))
                return _State("point", w=nw, err=math.expm1(min(dL, 700.0)), lo=lo, hi=hi, on_axis=True)
            mag = ExtReal.from_log(L.real)
            return _State("axis", sign=sign, mag=mag, err=dL, lo=lo, hi=hi)
        if L.real <= LOG_CAP:
            return _State("point", w=complex(np.exp(L)), err=math.expm1(min(dL, 700.0)),
                          lo=lo, hi=hi, on_axis=False)
        return _State("log", L=L, err=dL, lo=lo, hi=hi)
    if s.mode == "axis":
        sign, mag = f.axis_step(s.sign, s.mag)
        if mag.is_finite_float():
            v = float(mag)
            lo, hi = _shrink(mag), _grow(mag)
            return _State("point", w=_axis_point(f, sign if sign else 1, v),
                          err=_EXT_REL, lo=lo, hi=hi, on_axis=sign != 0 or v == 0)
        if sign == 0:
            return _State("magnitude", lo=_shrink(mag), hi=_grow(mag))
        return _State("axis", sign=sign, mag=mag, lo=_shrink(mag), hi=_grow(mag))
    if s.mode == "log":
        lo_log, hi_log = f.log_abs_bounds_from_log(s.L, s.err)
        lo = lo_log.exp() if lo_log is not None else ZERO
        if hi_log is None:
            hi_log = f.log_max_modulus_model(_ext_from_log(s.L.real + s.err))
        return _State("magnitude", lo=lo, hi=hi_log.exp())
    # magnitude only: no lower bound survives an unknown phase
    return _State("magnitude", lo=ZERO, hi=f.log_max_modulus_model(s.hi).exp()
                  if s.hi > 1 else ExtReal.from_float(1.0))


def _axis_phase_sign(f: FunctionSpec, phase: float) -> int:
    if f.axis == "imag":
        return 1 if math.sin(phase) >= 0 else -1
    return 1 if math.cos(phase) >= 0 else -1


@dataclass
class OrbitRecord:
    points: list = field(default_factory=list)
    magnitudes: list = field(default_factory=list)        # lower bounds
    upper_magnitudes: list = field(default_factory=list)
    escape_index: int | None = None
    status: str = UNDECIDED


def _orbit(f: FunctionSpec, z: complex, max_iter: int):
    """Yield ``(k, state)`` for ``k = 0..max_iter`` (stops early on certified boundedness)."""
    s = _initial_state(f, z)
    for k in range(max_iter + 1):
        yield k, s
        if k == max_iter:
            return
        s = _step(f, s)


def iterate_orbit(f: FunctionSpec, z, max_iter: int = 100, bailout=DEFAULT_BAILOUT,
                  stop_on_escape: bool = True) -> OrbitRecord:
    """Iterate ``f`` from ``z`` and classify the orbit.

    Stops at the first iterate whose lower-bound magnitude exceeds
    ``bailout`` (escaping), at a detected cycle or a certified real-line
    bound (bounded), or after ``max_iter`` iterations (undecided).
    Cycle detection compares against a Brent-style anchor refreshed at
    powers of two, with tolerance ``1e-12`` relative; it is a heuristic.
    """
    if not 1 <= max_iter <= MAX_ITER_CAP:
        raise PreconditionError(f"max_iter must lie in [1, {MAX_ITER_CAP}]")
    bailout = ExtReal.coerce(bailout)
    z = complex(z)
    rec = OrbitRecord()
    anchor, anchor_k = None, 0
    for k, s in _orbit(f, z, max_iter):
        if s.mode == "point":
            rec.points.append(s.w)
        rec.magnitudes.append(s.lo)
        rec.upper_magnitudes.append(s.hi)
        if rec.escape_index is None and s.lo > bailout:
            rec.escape_index = k
            rec.status = ESCAPING
            if stop_on_escape:
                return rec
        if rec.status == ESCAPING:
            continue
        if s.mode == "point":
            w = s.w
            if f.real_bound is not None and w.imag == 0:
                rec.status = BOUNDED
                return rec
            if anchor is not None and abs(w - anchor) <= CYCLE_TOL * max(1.0, abs(anchor)):
                rec.status = BOUNDED
                return rec
            if anchor is None or k >= 2 * anchor_k:
                anchor, anchor_k = w, max(k, 1)
        else:
            anchor = None
    return rec


def classify_escape(f: FunctionSpec, z, max_iter: int = 100, bailout=DEFAULT_BAILOUT) -> str:
    return iterate_orbit(f, z, max_iter, bailout).status


def escape_status_grid(f: FunctionSpec, z, max_iter: int = 50, bailout: float = 1e10):
    """Vectorised :func:`classify_escape` for machine-range bailouts.

    Returns ``(status, escape_index)`` where ``status`` holds 1 (escaping),
    0 (bounded) or 2 (undecided) per point.  Uses the same error model and
    cycle test as the scalar path.
    """
    bailout = float(bailout)
    if not 0 < bailout <= 1e300:
        raise PreconditionError("grid bailout must be a positive float below 1e300")
    z = np.asarray(z, dtype=complex)
    shape = z.shape
    w = z.ravel().copy()
    n = w.size
    err = np.zeros(n)
    status = np.full(n, 2, dtype=np.int8)
    esc = np.full(n, -1, dtype=np.int32)
    active = np.ones(n, dtype=bool)
    log_b = math.log(bailout)
    on_axis = np.zeros(n, dtype=bool)
    if f.axis == "imag":
        on_axis = w.real == 0
    elif f.axis == "real":
        on_axis = w.imag == 0
    anchor = w.copy()
    anchor_k = np.ones(n, dtype=np.int64)
    have_anchor = np.zeros(n, dtype=bool)
    for k in range(max_iter + 1):
        idx = np.flatnonzero(active)
        if idx.size == 0:
            break
        wa = w[idx]
        if k == 0:
            with np.errstate(divide="ignore"):
                lo_log = np.log(np.abs(wa))
        else:
            lo_log = cur_lo[active_prev_pos(idx, prev_idx)]
        escaped = lo_log > log_b
        status[idx[escaped]] = 1
        esc[idx[escaped]] = k
        active[idx[escaped]] = False
        keep = ~escaped
        idx, wa = idx[keep], wa[keep]
        if f.real_bound is not None:
            rb = wa.imag == 0
            status[idx[rb]] = 0
            active[idx[rb]] = False
            idx, wa = idx[~rb], wa[~rb]
        near = have_anchor[idx] & (np.abs(wa - anchor[idx]) <= CYCLE_TOL * np.maximum(1.0, np.abs(anchor[idx])))
        status[idx[near]] = 0
        active[idx[near]] = False
        idx, wa = idx[~near], wa[~near]
        refresh = ~have_anchor[idx] | (k >= 2 * anchor_k[idx])
        anchor[idx[refresh]] = wa[refresh]
        anchor_k[idx[refresh]] = max(k, 1)
        have_anchor[idx[refresh]] = True
        if k == max_iter or idx.size == 0:
            break
        L = f.log_eval(wa)
        ea = err[idx]
        q = np.zeros(idx.size)
        nz = ea > 0
        if np.any(nz):
            with np.errstate(invalid="ignore"):
                q[nz] = np.abs(f.log_derivative_array(wa[nz]))
        with np.errstate(invalid="ignore"):
            dL = np.where(np.isfinite(q), q * ea, np.inf) + 4 * _EPS * (np.abs(L) + 1)
        zero = np.isneginf(L.real)
        dL[zero] = 0.0
        cur_lo = np.where(zero, -np.inf, L.real - dL)
        prev_idx = idx
        with np.errstate(over="ignore", invalid="ignore"):
            nw = np.where(zero, 0j, np.exp(L))
        ax = on_axis[idx] & ~zero
        if np.any(ax):
            mag = np.exp(np.minimum(L.real[ax], 709.0))
            if f.axis == "imag":
                nw[ax] = 1j * np.where(np.sin(L.imag[ax]) >= 0, 1.0, -1.0) * mag
            else:
                nw[ax] = np.where(np.cos(L.imag[ax]) >= 0, 1.0, -1.0) * mag + 0j
        # past float range the lower bound alone decides; points that cannot
        # be certified stay undecided
        lost = (L.real > LOG_CAP) & ~(cur_lo > log_b)
        active[idx[lost]] = False
        w[idx] = nw
        with np.errstate(over="ignore"):
            err[idx] = np.expm1(np.minimum(dL, 700.0))
    return status.reshape(shape), esc.reshape(shape)


def active_prev_pos(idx, prev_idx):
    """Positions of ``idx`` inside ``prev_idx`` (both sorted ascending)."""
    return np.searchsorted(prev_idx, idx)


# -- M-iterates and fast escape ----------------------------------------------------

def _samples_for(r: float) -> int:
    return max(4096, int(8 * r))


def m_step(f: FunctionSpec, r: ExtReal) -> ExtReal:
    """``M(r, f)``: sampled for ``r <= 1e3``, from the growth model beyond."""
    r = ExtReal.coerce(r)
    if r.is_finite_float() and float(r) <= _SAMPLE_LIMIT:
        return max_modulus(f, float(r), _samples_for(float(r)))
    return f.log_max_modulus_model(r).exp()


def m_iterates(f: FunctionSpec, R: float, n: int) -> list:
    """``[M^1(R), ..., M^n(R)]`` as ExtReal values."""
    if not 1 <= n <= 100:
        raise PreconditionError("n must lie in [1, 100]")
    out = [max_modulus(f, float(R), _samples_for(float(R)))]
    if not out[0] > R:
        raise PreconditionError(f"M(R, f) = {out[0]} does not exceed R = {R}")
    for _ in range(n - 1):
        out.append(m_step(f, out[-1]))
    return out


@dataclass(frozen=True)
class FastEscape:
    detected: bool
    L: int | None = None

    def __str__(self):
        return f"fast_escaping({self.L})" if self.detected else "not_detected"


def classify_fast_escape(f: FunctionSpec, z, R: float, L_max: int = 3,
                         max_iter: int = 8, m_list=None) -> FastEscape:
    """Least ``L <= L_max`` with ``|f^n(z)| >= M^{n-L}(R)`` for ``L < n <= max_iter``.

    A semi-decision: ``not_detected`` does not show ``z`` lies outside A(f).
    ``m_list`` may pass a precomputed ``m_iterates(f, R, max_iter)``.
    """
    Ms = m_iterates(f, R, max_iter) if m_list is None else list(m_list)
    if len(Ms) < max_iter:
        raise PreconditionError("m_list is shorter than max_iter")
    rec = iterate_orbit(f, z, max_iter, bailout=ExtReal(50, 1.0), stop_on_escape=False)
    lo = rec.magnitudes
    if rec.status == BOUNDED or len(lo) < max_iter + 1:
        return FastEscape(False)
    for L in range(L_max + 1):
        if all(lo[n] >= Ms[n - L - 1] for n in range(L + 1, max_iter + 1)):
            return FastEscape(True, L)
    return FastEscape(False)


# -- criterion sets ---------------------------------------------------------------

X_THRESHOLDS = ("power", "n_power")
Y_THRESHOLDS = ("linear", "stretched", "order")


@dataclass(frozen=True)
class CriterionParams:
    """Thresholds of the sets X and Y.

    ``x_threshold``: ``"power"`` uses ``|z|^(ρ/2+ε)``, ``"n_power"`` uses
    ``n(|z|)^(1/2+ε)`` from ``n_oracle``.  ``y_threshold``: ``"linear"``
    ``(1+ε)|z|``, ``"stretched"`` ``exp(|z|^ε)``, ``"order"``
    ``exp(|z|^(ρ/2+ε))``.
    """

    epsilon: float
    R: float = 2.0
    x_threshold: str = "power"
    y_threshold: str = "linear"
    n_oracle: object = None

    def __post_init__(self):
        if not self.epsilon > 0:
            raise PreconditionError("epsilon must be positive")
        if not self.R > 1:
            raise PreconditionError("R must exceed 1")
        if self.x_threshold not in X_THRESHOLDS:
            raise PreconditionError(f"x_threshold must be one of {X_THRESHOLDS}")
        if self.y_threshold not in Y_THRESHOLDS:
            raise PreconditionError(f"y_threshold must be one of {Y_THRESHOLDS}")
        if self.x_threshold == "n_power" and self.n_oracle is None:
            raise PreconditionError("n_power threshold needs an n_oracle")


class CriterionResult:
    """Boolean outcome with a flag for points where ``f`` vanishes."""

    __slots__ = ("value", "zero")

    def __init__(self, value: bool, zero: bool = False):
        self.value, self.zero = bool(value), bool(zero)

    def __bool__(self):
        return self.value

    def __eq__(self, other):
        return bool(self) == bool(other)

    def __repr__(self):
        return f"CriterionResult({self.value}{', zero' if self.zero else ''})"


def _log_x_threshold(f: FunctionSpec, r, params: CriterionParams):
    r = np.asarray(r, dtype=float)
    if params.x_threshold == "power":
        return (f.order() / 2 + params.epsilon) * np.log(r)
    # grid rows share radii, so the oracle runs once per distinct radius
    uniq, inv = np.unique(r, return_inverse=True)
    n = np.array([float(params.n_oracle(t)) for t in uniq])[inv].reshape(r.shape)
    return (0.5 + params.epsilon) * np.log(n)


def _log_y_threshold(f: FunctionSpec, r, params: CriterionParams):
    r = np.asarray(r, dtype=float)
    eps = params.epsilon
    if params.y_threshold == "linear":
        return math.log1p(eps) + np.log(r)
    if params.y_threshold == "stretched":
        return r ** eps
    return r ** (f.order() / 2 + eps)


def x_mask(f: FunctionSpec, z, params: CriterionParams):
    """Vectorised membership in X (``False`` where ``f`` vanishes)."""
    z = np.asarray(z, dtype=complex)
    with np.errstate(divide="ignore", invalid="ignore"):
        lhs = np.log(np.abs(f.log_derivative_array(z)))
    return np.nan_to_num(lhs, nan=-np.inf) >= _log_x_threshold(f, np.abs(z), params)


def y_mask(f: FunctionSpec, z, params: CriterionParams):
    z = np.asarray(z, dtype=complex)
    return f.log_eval(z).real >= _log_y_threshold(f, np.abs(z), params)


def w_mask(f: FunctionSpec, z, params: CriterionParams):
    """``W = Δ \\ (X ∩ Y)`` (points with ``|z| < 1`` are outside W)."""
    z = np.asarray(z, dtype=complex)
    return (np.abs(z) >= 1) & ~(x_mask(f, z, params) & y_mask(f, z, params))


def criterion_predicate(f: FunctionSpec, params: CriterionParams, which: str = "W"):
    """Vectorised predicate for ``"X"``, ``"Y"``, ``"XY"`` or ``"W"``."""
    table = {
        "X": lambda z: x_mask(f, z, params),
        "Y": lambda z: y_mask(f, z, params),
        "XY": lambda z: x_mask(f, z, params) & y_mask(f, z, params),
        "W": lambda z: w_mask(f, z, params),
    }
    return table[which]


def _check_delta(z: complex):
    if abs(z) < 1:
        raise PreconditionError("criterion sets are defined on |z| >= 1")


def in_X(f: FunctionSpec, z, params: CriterionParams) -> CriterionResult:
    z = complex(z)
    _check_delta(z)
    L = complex(f.log_eval(np.array([z]))[0])
    if L.real < math.log(1e-300):
        return CriterionResult(False, zero=True)
    return CriterionResult(bool(x_mask(f, np.array([z]), params)[0]))


def in_Y(f: FunctionSpec, z, params: CriterionParams) -> CriterionResult:
    z = complex(z)
    _check_delta(z)
    return CriterionResult(bool(y_mask(f, np.array([z]), params)[0]))


@dataclass(frozen=True)
class TResult:
    """``in_T_up_to(k)`` or ``excluded_at(k)``.

    ``in_T_up_to(k)`` with ``k`` below the requested depth means the orbit
    could not be checked further (its iterates left the range where the
    criteria are computable) rather than that it failed them.
    """

    status: str
    k: int

    def __str__(self):
        return f"{self.status}({self.k})"


def ge_scaled(x: ExtReal, y: ExtReal, k: float) -> bool:
    """``x >= k * y`` for ExtReal ``x, y >= 0`` and ``k > 0``.

    When both logarithms exceed float range the factor ``k`` is below the
    resolution of the representation; equal representations then decide
    by ``k <= 1``.
    """
    x, y = ExtReal.coerce(x), ExtReal.coerce(y)
    if y.is_zero():
        return True
    if x.is_zero():
        return False
    if x.is_finite_float() and y.is_finite_float():
        return math.log(float(x)) >= math.log(k) + math.log(float(y))
    if x.is_finite_float() != y.is_finite_float():
        return not x.is_finite_float()        # k is an ordinary float
    a, b = x.log(), y.log()
    if a.is_finite_float() and b.is_finite_float():
        return x.log_float() >= math.log(k) + y.log_float()
    if a == b:
        return k <= 1
    return a > b


def ge_power(x: ExtReal, y: ExtReal, c: float) -> bool:
    """``x >= y**c`` for ExtReal ``x, y >= 0`` and ``c > 0`` (same resolution rule)."""
    x, y = ExtReal.coerce(x), ExtReal.coerce(y)
    if y.is_zero():
        return True
    if x.is_zero():
        return False
    if x.is_finite_float() and y.is_finite_float():
        return math.log(float(x)) >= c * math.log(float(y))
    if not y > 1:
        return x >= 1
    if not x > 1:
        return False
    return ge_scaled(x.log(), y.log(), c)


def _y_holds(f, mag: ExtReal, nxt: ExtReal, params) -> bool:
    eps = params.epsilon
    if params.y_threshold == "linear":
        return ge_scaled(nxt, mag, 1 + eps)
    if nxt.is_zero() or not nxt > 1:
        return False
    c = eps if params.y_threshold == "stretched" else f.order() / 2 + eps
    return ge_power(nxt.log(), mag, c)


def in_T(f: FunctionSpec, z, params: CriterionParams, k_max: int = 20) -> TResult:
    """Check ``f^k(z) ∈ X ∩ Y`` and ``|f^k(z)| >= R`` for ``k = 0..k_max``.

    Deep in an exact-axis orbit the comparisons run on the level-index
    representation of the central magnitudes, where factors such as
    ``|z|^(1/4)`` can drop below resolution; see :func:`ge_scaled`.
    """
    states = [s for _, s in _orbit(f, complex(z), k_max + 1)]
    for k in range(k_max + 1):
        s, nxt = states[k], states[k + 1]
        nxt_mag = nxt.mag if nxt.mode == "axis" else nxt.lo
        if s.mode == "point":
            w = s.w
            if abs(w) < params.R or abs(w) < 1:
                return TResult("excluded_at", k)
            x_ok = bool(in_X(f, w, params))
            y_ok = _y_holds(f, ExtReal.from_float(abs(w)), nxt_mag, params)
            if not (x_ok and y_ok):
                return TResult("excluded_at", k)
        elif s.mode == "axis" and params.x_threshold == "power":
            x_lhs = f.axis_log_derivative_abs(s.sign, s.mag)
            x_ok = ge_power(x_lhs, s.mag, f.order() / 2 + params.epsilon)
            if not (x_ok and _y_holds(f, s.mag, nxt_mag, params)):
                return TResult("in_T_up_to", k - 1)
        else:
            return TResult("in_T_up_to", k - 1)
    return TResult("in_T_up_to", k_max)


# -- tower functions ------------------------------------------------------------------

def x_alpha(alpha: float) -> ExtReal:
    """Largest fixed point of ``E_α(x) = exp(x^α)`` (0 when ``E_α(x) > x`` throughout).

    With ``x = e^t`` the fixed points solve ``αt = log t``; real solutions
    exist only for ``α <= 1/e``.  Bisection in ``t`` to ``1e-12`` relative.
    """
    alpha = float(alpha)
    if alpha <= 0:
        raise PreconditionError("alpha must be positive")
    if alpha > 1 / math.e:
        return ZERO
    h = lambda t: alpha * t - math.log(t)
    lo = 1 / alpha
    hi = 2 * lo
    while h(hi) <= 0:
        hi *= 2
    while hi - lo > 1e-12 * hi:
        mid = 0.5 * (lo + hi)
        lo, hi = (mid, hi) if h(mid) <= 0 else (lo, mid)
    return ExtReal.from_log(hi)


def tower_apply_E(alpha: float, x, k: int) -> ExtReal:
    """``E_α^k(x)`` with ``E_α(x) = exp(x^α)``.

    For ``k >= 2`` uses ``E_α^k(x) = exp exp F_α^{k-2}(α x^α)`` with
    ``F_α(t) = α e^t``, tracking ``t`` as an ExtReal.
    """
    alpha = float(alpha)
    if alpha <= 0:
        raise PreconditionError("alpha must be positive")
    if k < 0:
        raise PreconditionError("k must be nonnegative")
    x = ExtReal.coerce(x)
    if not x > x_alpha(alpha):
        raise PreconditionError("x must exceed the fixed point x_alpha")
    if k == 0:
        return x
    if k == 1:
        return x.pow(alpha).exp()
    t = x.pow(alpha).scale(alpha)
    for _ in range(k - 2):
        t = t.exp().scale(alpha)
    return t.exp().exp()


def tower_recursive(alpha: float, x, k: int) -> ExtReal:
    """``E_α^k(x)`` by applying ``x -> exp(x^α)`` ``k`` times (reference path)."""
    x = ExtReal.coerce(x)
    for _ in range(k):
        x = x.pow(alpha).exp()
    return x


@dataclass(frozen=True)
class TowerReport:
    alpha: float
    beta: float
    x0: float | None
    violations: list      # (x, k) failures below x0
    tested: int


def verify_tower_lemma(alpha: float, beta: float, x_grid, k_range) -> TowerReport:
    """Empirical ``x0`` with ``E_α^k(x) >= E_β^{k-2}(x)`` for all grid ``x >= x0``."""
    if not beta > alpha > 0:
        raise PreconditionError("need beta > alpha > 0")
    ks = list(k_range)
    if not ks or min(ks) < 4 or max(ks) > 40:
        raise PreconditionError("k_range must lie in [4, 40]")
    xs = sorted(float(x) for x in x_grid)
    floor = max(x_alpha(alpha), x_alpha(beta))
    xs = [x for x in xs if ExtReal.from_float(x) > floor]
    holds = []
    for x in xs:
        bad = [k for k in ks if not tower_apply_E(alpha, x, k) >= tower_apply_E(beta, x, k - 2)]
        holds.append(bad)
    x0 = None
    for i in range(len(xs) - 1, -1, -1):
        if holds[i]:
            break
        x0 = xs[i]
    violations = [(xs[i], k) for i in range(len(xs)) if x0 is None or xs[i] < x0 for k in holds[i]]
    return TowerReport(alpha, beta, x0, violations, len(xs) * len(ks))
