"""Area and logarithmic-area estimates of planar sets given by predicates.

Predicates take a complex ndarray and return a boolean array of the same
shape; plain scalar predicates are wrapped with :func:`numpy.vectorize`.
All reductions are integer hit counts, so results do not depend on how
work is split across threads.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import PreconditionError
from .functions import FunctionSpec, PolySin, Sigma, max_modulus

MC_BLOCK = 65536
_ROW_CHUNK = 32


@dataclass(frozen=True)
class AnnulusSpec:
    r_inner: float
    r_outer: float

    def __post_init__(self):
        if not 1 <= self.r_inner < self.r_outer:
            raise PreconditionError("annulus needs 1 <= r_inner < r_outer")

    @property
    def log_width(self) -> float:
        return math.log(self.r_outer / self.r_inner)

    @property
    def logarea(self) -> float:
        return 2 * math.pi * self.log_width


@dataclass(frozen=True)
class WindowSpec:
    x_min: float
    x_max: float
    y_min: float
    y_max: float

    def __post_init__(self):
        if not (self.x_min < self.x_max and self.y_min < self.y_max):
            raise PreconditionError("window needs x_min < x_max and y_min < y_max")

    @property
    def area(self) -> float:
        return (self.x_max - self.x_min) * (self.y_max - self.y_min)


@dataclass(frozen=True)
class AreaEstimate:
    """An area estimate.

    Grid estimates carry ``std_error = 0`` and report the difference to the
    half-resolution estimate in ``delta``.  ``samples_hit`` is the integer
    count behind ``value``.
    """

    value: float
    std_error: float
    samples: int
    method: str
    resolution_or_seed: int
    delta: float = 0.0
    samples_hit: int = 0

    @property
    def error(self) -> float:
        """Error proxy used for comparisons: std error or two-resolution delta."""
        return self.std_error if self.method == "monte_carlo" else self.delta


def resolve_workers(workers: int | None = None) -> int:
    """Worker count: explicit value, else ``ENTIRE_DYN_WORKERS``, else CPU count."""
    if workers is None:
        env = os.environ.get("ENTIRE_DYN_WORKERS")
        workers = int(env) if env else (os.cpu_count() or 1)
    if workers < 1:
        raise PreconditionError("workers must be positive")
    return int(workers)


def as_vectorized(predicate):
    """Return a predicate that maps complex arrays to boolean arrays."""
    def wrapped(z):
        z = np.asarray(z, dtype=complex)
        out = np.asarray(predicate(z))
        if out.shape != z.shape:
            out = np.vectorize(lambda t: bool(predicate(t)), otypes=[bool])(z)
        return out.astype(bool)
    return wrapped


def _map_chunks(fn, n_items: int, chunk: int, workers: int | None):
    """Apply ``fn(start, stop)`` over ``range(n_items)`` in chunks; results in order."""
    bounds = [(i, min(i + chunk, n_items)) for i in range(0, n_items, chunk)]
    w = resolve_workers(workers)
    if w == 1 or len(bounds) == 1:
        return [fn(a, b) for a, b in bounds]
    with ThreadPoolExecutor(max_workers=w) as pool:
        return list(pool.map(lambda ab: fn(*ab), bounds))


def centers(lo: float, hi: float, n: int) -> np.ndarray:
    """Midpoints of ``n`` equal cells of ``[lo, hi]``, symmetric about the centre."""
    mid, step = 0.5 * (lo + hi), (hi - lo) / n
    return mid + (np.arange(n) - (n - 1) / 2) * step


def grid_centers(window: WindowSpec, resolution: int):
    """Cell midpoints ``(xs, ys)`` of a ``resolution x resolution`` grid."""
    return (centers(window.x_min, window.x_max, resolution),
            centers(window.y_min, window.y_max, resolution))


def _count_window(pred, window: WindowSpec, resolution: int, workers) -> int:
    xs, ys = grid_centers(window, resolution)

    def rows(a, b):
        z = xs[None, :] + 1j * ys[a:b, None]
        return int(np.count_nonzero(pred(z)))

    return sum(_map_chunks(rows, resolution, _ROW_CHUNK, workers))


def _count_logpolar(pred, region: AnnulusSpec, resolution: int, workers) -> int:
    lr = centers(math.log(region.r_inner), math.log(region.r_outer), resolution)
    th = centers(-math.pi, math.pi, resolution)
    ring = np.exp(1j * th)

    def rows(a, b):
        z = np.exp(lr[a:b, None]) * ring[None, :]
        return int(np.count_nonzero(pred(z)))

    return sum(_map_chunks(rows, resolution, _ROW_CHUNK, workers))


def logarea_grid(predicate, region: AnnulusSpec, resolution: int, workers: int | None = None,
                 with_delta: bool = True) -> AreaEstimate:
    """Logarithmic area ``∫ dx dy / |z|^2`` of the predicate set within an annulus.

    In coordinates ``(log r, θ)`` the density becomes uniform, so the
    midpoint rule gives ``hits * Δlog r * Δθ``.  The full annulus has
    logarea ``2π log(r_outer / r_inner)``.
    """
    if resolution < 32:
        raise PreconditionError("resolution must be at least 32")
    pred = as_vectorized(predicate)
    cell = region.logarea / resolution ** 2
    hits = _count_logpolar(pred, region, resolution, workers)
    value = hits * cell
    delta = 0.0
    if with_delta:
        half = resolution // 2
        coarse = _count_logpolar(pred, region, half, workers) * region.logarea / half ** 2
        delta = abs(value - coarse)
    return AreaEstimate(value, 0.0, resolution ** 2, "grid", resolution, delta, hits)


def _mc_block(pred, region: AnnulusSpec, seed: int, block: int, size: int) -> int:
    bitgen = np.random.Philox(key=seed, counter=[0, 0, 0, block])
    u = np.random.Generator(bitgen).random((2, size))
    lr = math.log(region.r_inner) + u[0] * region.log_width
    th = -math.pi + 2 * math.pi * u[1]
    return int(np.count_nonzero(pred(np.exp(lr + 1j * th))))


def logarea_monte_carlo(predicate, region: AnnulusSpec, n: int, seed: int,
                        workers: int | None = None) -> AreaEstimate:
    """Monte Carlo logarea with samples uniform in ``(log r, θ)``.

    Sample block ``b`` (``65536`` samples) draws from a Philox stream keyed
    by ``seed`` with counter ``b``, so the result is bit-identical for any
    worker count.
    """
    if n < 1000:
        raise PreconditionError("n must be at least 1000")
    if seed < 0:
        raise PreconditionError("seed must be nonnegative")
    pred = as_vectorized(predicate)
    n_blocks = -(-n // MC_BLOCK)

    def blocks(a, b):
        return sum(_mc_block(pred, region, seed, k, min(MC_BLOCK, n - k * MC_BLOCK))
                   for k in range(a, b))

    hits = sum(_map_chunks(blocks, n_blocks, 1, workers))
    p = hits / n
    total = region.logarea
    return AreaEstimate(p * total, total * math.sqrt(p * (1 - p) / n), n, "monte_carlo",
                        seed, 0.0, hits)


def area_window(predicate, window: WindowSpec, resolution: int, workers: int | None = None,
                with_delta: bool = True) -> AreaEstimate:
    """Euclidean area of the predicate set in a window (midpoint grid)."""
    if resolution < 32:
        raise PreconditionError("resolution must be at least 32")
    pred = as_vectorized(predicate)
    hits = _count_window(pred, window, resolution, workers)
    value = hits / resolution ** 2 * window.area
    delta = 0.0
    if with_delta:
        half = resolution // 2
        coarse = _count_window(pred, window, half, workers) / half ** 2 * window.area
        delta = abs(value - coarse)
    return AreaEstimate(value, 0.0, resolution ** 2, "grid", resolution, delta, hits)


def area_window_levels(level_fn, window: WindowSpec, resolution: int, levels,
                       workers: int | None = None) -> list:
    """Areas of ``{level_fn > n}`` for each ``n`` in ``levels`` from one pass.

    ``level_fn`` maps a complex array to integers.  The two-resolution delta
    uses the half grid, evaluated once as well.
    """
    if resolution < 32:
        raise PreconditionError("resolution must be at least 32")
    levels = list(levels)

    def histogram(res):
        xs, ys = grid_centers(window, res)

        def rows(a, b):
            lv = np.asarray(level_fn(xs[None, :] + 1j * ys[a:b, None]))
            return np.array([np.count_nonzero(lv > n) for n in levels], dtype=np.int64)

        return np.sum(_map_chunks(rows, res, _ROW_CHUNK, workers), axis=0)

    fine = histogram(resolution)
    half = resolution // 2
    coarse = histogram(half)
    out = []
    for i, n in enumerate(levels):
        value = fine[i] / resolution ** 2 * window.area
        cv = coarse[i] / half ** 2 * window.area
        out.append((n, AreaEstimate(value, 0.0, resolution ** 2, "grid", resolution,
                                    abs(value - cv), int(fine[i]))))
    return out


# -- dyadic profiles ---------------------------------------------------------------

@dataclass(frozen=True)
class DecayProfile:
    """Per-annulus logareas over ``[2^k, 2^(k+1)]`` with ratios and tail sums."""

    entries: list        # [(k, AreaEstimate)]
    ratios: list         # value[k+1] / value[k]
    tail: list           # sum of values from k to k_max

    def values(self):
        return [e.value for _, e in self.entries]

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    def __getitem__(self, i):
        return self.entries[i]


def annulus_decay_profile(predicate, k_min: int, k_max: int, resolution: int,
                          workers: int | None = None) -> DecayProfile:
    if not 0 <= k_min < k_max <= 40:
        raise PreconditionError("need 0 <= k_min < k_max <= 40")
    entries = [(k, logarea_grid(predicate, AnnulusSpec(2.0 ** k, 2.0 ** (k + 1)), resolution,
                                workers))
               for k in range(k_min, k_max + 1)]
    vals = [e.value for _, e in entries]
    ratios = [b / a if a > 0 else math.nan for a, b in zip(vals, vals[1:])]
    tail = list(np.cumsum(vals[::-1])[::-1])
    return DecayProfile(entries, ratios, [float(t) for t in tail])


def strip_predicate(z):
    """The set ``|Im z| < log(4|z| + 1)`` around the real axis."""
    z = np.asarray(z, dtype=complex)
    return np.abs(z.imag) < np.log(4 * np.abs(z) + 1)


# -- n(r) --------------------------------------------------------------------------

@dataclass(frozen=True)
class NrOracle:
    """Counting-function oracle.

    ``mode="closed_form"``: for ``P(z) sin(αz + β)`` the surrogate
    ``ceil(2|α| r / π) + deg P + 1``; for σ the exact count of lattice points
    in ``|z| <= r``.  ``mode="bound_3d1"``: ``log M(e r, f) + C``.
    """

    mode: str
    f: FunctionSpec
    C: float = 0.0

    def __post_init__(self):
        if self.mode not in ("closed_form", "bound_3d1"):
            raise PreconditionError("mode must be closed_form or bound_3d1")
        if self.mode == "closed_form" and not isinstance(self.f, (PolySin, Sigma)):
            raise PreconditionError("closed_form is available for PolySin and Sigma only")

    def __call__(self, r: float) -> float:
        return n_of_r(self, r)


def lattice_count(tau: complex, r: float) -> int:
    """Number of lattice points ``m + nτ`` with modulus at most ``r``."""
    tau = complex(tau)
    n_max = int(math.floor(r / tau.imag)) + 1
    m_max = int(math.ceil(r + n_max * abs(tau.real))) + 1
    n = np.arange(-n_max, n_max + 1)[:, None]
    m = np.arange(-m_max, m_max + 1)[None, :]
    mod = np.abs(m + n * tau)
    return int(np.count_nonzero(mod <= r * (1 + 1e-12)))


def n_of_r(oracle: NrOracle, r: float) -> float:
    r = float(r)
    if r < 1:
        raise PreconditionError("r must be at least 1")
    f = oracle.f
    if oracle.mode == "bound_3d1":
        return float(max_modulus(f, math.e * r).log_float()) + oracle.C
    if isinstance(f, PolySin):
        return float(math.ceil(2 * abs(f.alpha) * r / math.pi - 1e-12) + f.deg + 1)
    return float(lattice_count(f.tau, r))


# -- Eremenko-Lyubich ratio ------------------------------------------------------------

def el_ratio(f: FunctionSpec, R: float, r_list, resolution: int,
             workers: int | None = None) -> list:
    """``logarea({1 <= |z| <= r, |f(z)| < R}) / log r`` for each ``r``."""
    rs = [float(r) for r in r_list]
    if not rs or any(r <= 1 for r in rs) or any(b <= a for a, b in zip(rs, rs[1:])):
        raise PreconditionError("r_list must be increasing with all r > 1")
    log_R = math.log(R)
    pred = lambda z: f.log_eval(z).real < log_R
    return [(r, logarea_grid(pred, AnnulusSpec(1.0, r), resolution, workers,
                             with_delta=False).value / math.log(r)) for r in rs]
