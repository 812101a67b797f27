"""Command-line interface: ``entire-dyn <command> [options]``.

Every run writes its outputs under the ``--out`` prefix together with a
``<prefix>.manifest.json`` holding the configuration, library versions and
timings.  Images are binary PGM with three grey levels; tables are CSV with
12 significant digits.  Exit status 2 signals a configuration error and 3
a numerical failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import platform
import sys
import time
from importlib import metadata

import numpy as np

from . import dynamics, measure, poincare, weierstrass
from .errors import ConfigError, EntireDynError, PreconditionError
from .extreal import ExtReal
from .functions import Poincare, format_function, parse_function
from .polynomial import PolynomialSpec

MAX_RESOLUTION = 16384
IN_SET, COMPLEMENT, UNDECIDED_PIXEL = 0, 255, 128
NUMERICAL_ERRORS = (ArithmeticError, ZeroDivisionError)


class _Failure(Exception):
    def __init__(self, op: str, exc: Exception, code: int):
        super().__init__(f"{op}: {type(exc).__name__}: {exc}")
        self.code = code


class _Run:
    """Collects outputs and the manifest of one invocation."""

    def __init__(self, args, function=None):
        self.args = args
        self.function = function
        self.outputs = []
        self.timings = {}
        self.summary = {}
        self.legend = None

    def call(self, op: str, fn, *a, **kw):
        t0 = time.perf_counter()
        try:
            return fn(*a, **kw)
        except (ConfigError, PreconditionError, ValueError) as exc:
            raise _Failure(op, exc, 2) from exc
        except NUMERICAL_ERRORS as exc:
            raise _Failure(op, exc, 3) from exc
        finally:
            self.timings[op] = self.timings.get(op, 0.0) + time.perf_counter() - t0

    def path(self, suffix: str) -> str:
        return f"{self.args.out}{suffix}"

    def write_pgm(self, image: np.ndarray, suffix: str = ".pgm"):
        path = self.path(suffix)
        write_pgm(path, image)
        self.outputs.append(path)

    def write_csv(self, header, rows, suffix: str = ".csv"):
        path = self.path(suffix)
        with open(path, "w", newline="", encoding="ascii") as fh:
            fh.write(format_csv(header, rows))
        self.outputs.append(path)

    def write_manifest(self):
        cfg = {k: v for k, v in vars(self.args).items() if k != "handler"}
        manifest = {
            "command": self.args.command,
            "config": cfg,
            "function": format_function(self.function) if self.function is not None else None,
            "legend": self.legend,
            "summary": self.summary,
            "outputs": self.outputs,
            "versions": versions(),
            "timings_seconds": self.timings,
        }
        with open(self.path(".manifest.json"), "w", encoding="utf-8") as fh:
            json.dump(manifest, fh, indent=2, sort_keys=True, default=str)


def versions() -> dict:
    out = {"python": platform.python_version(), "numpy": np.__version__}
    for dist in ("artifact", "scipy"):
        try:
            out[dist] = metadata.version(dist)
        except metadata.PackageNotFoundError:
            out[dist] = None
    return out


# -- formatting --------------------------------------------------------------------

def fmt_value(v) -> str:
    """Locale-free text with 12 significant digits for numbers."""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, ExtReal):
        return str(v)
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return f"{v:.12g}"
    return str(v)


def format_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt_value(v) for v in row])
    return buf.getvalue()


def write_pgm(path: str, image: np.ndarray):
    """Binary PGM, top row first."""
    image = np.ascontiguousarray(image, dtype=np.uint8)
    h, w = image.shape
    with open(path, "wb") as fh:
        fh.write(f"P5\n{w} {h}\n255\n".encode("ascii"))
        fh.write(image.tobytes())


def read_pgm(path: str) -> np.ndarray:
    with open(path, "rb") as fh:
        data = fh.read()
    magic, dims, maxval, rest = data.split(b"\n", 3)
    if magic != b"P5" or maxval != b"255":
        raise ConfigError(f"{path} is not an 8-bit binary PGM")
    w, h = map(int, dims.split())
    return np.frombuffer(rest, dtype=np.uint8, count=w * h).reshape(h, w)


# -- argument parsing -------------------------------------------------------------

def _floats(text: str, n: int | None, name: str):
    try:
        vals = [float(t) for t in text.replace(";", ",").split(",") if t.strip()]
    except ValueError as exc:
        raise ConfigError(f"{name}: cannot parse {text!r}") from exc
    if n is not None and len(vals) != n:
        raise ConfigError(f"{name} needs {n} comma-separated numbers")
    return vals


def _complex(text: str, name: str) -> complex:
    try:
        return complex(text.replace(" ", ""))
    except ValueError as exc:
        raise ConfigError(f"{name}: cannot parse complex value {text!r}") from exc


def load_function(text: str):
    if os.path.isfile(text):
        with open(text, encoding="utf-8") as fh:
            text = fh.read()
    return parse_function(text)


def window_arg(args, default):
    vals = _floats(args.window, 4, "--window") if args.window else default
    return measure.WindowSpec(*vals)


def annulus_arg(args, default):
    vals = _floats(args.annulus, 2, "--annulus") if args.annulus else default
    return measure.AnnulusSpec(*vals)


def _poly_arg(args):
    if not args.poly:
        raise ConfigError("--poly is required (ascending coefficients, e.g. -2,0,1)")
    return PolynomialSpec(tuple(_complex(t, "--poly") for t in args.poly.split(",")))


def _check_resolution(res: int):
    if not 1 <= res <= MAX_RESOLUTION:
        raise ConfigError(f"resolution must lie in [1, {MAX_RESOLUTION}]")


def _status_image(status_grid: np.ndarray) -> np.ndarray:
    """Grid rows are ordered by increasing y; images put the largest y on top."""
    return status_grid[::-1]


# -- commands -----------------------------------------------------------------------

def cmd_escape_render(run: _Run):
    a, f = run.args, run.function
    win = window_arg(a, [0.0, math.pi, 0.0, 10.0])
    res = a.resolution or 512
    xs, ys = measure.grid_centers(win, res)
    status = np.empty((res, res), dtype=np.int8)

    def rows(lo, hi):
        z = xs[None, :] + 1j * ys[lo:hi, None]
        status[lo:hi] = dynamics.escape_status_grid(f, z, a.max_iter or 50, a.bailout)[0]
        return None

    run.call("measure.area_window", measure._map_chunks, rows, res, 16, a.workers)
    img = np.full(status.shape, UNDECIDED_PIXEL, dtype=np.uint8)
    img[status == 1] = IN_SET
    img[status == 0] = COMPLEMENT
    run.write_pgm(_status_image(img))
    n = status.size
    fr = [int(np.count_nonzero(status == s)) / n for s in (1, 0, 2)]
    run.legend = {"0": "escaping", "255": "bounded", "128": "undecided"}
    run.summary = {"escaping_fraction": fr[0]}
    run.write_csv(["escaping_fraction", "bounded_fraction", "undecided_fraction",
                   "escaping_area", "resolution", "max_iter"],
                  [[fr[0], fr[1], fr[2], fr[0] * win.area, res, a.max_iter or 50]])


def cmd_fast_escape_render(run: _Run):
    a, f = run.args, run.function
    # odd default resolution: the middle row and column lie on the axes
    win = window_arg(a, [-12.0, 12.0, -12.0, 12.0])
    res = a.resolution or 33
    xs, ys = measure.grid_centers(win, res)
    L = np.full((res, res), -1, dtype=np.int16)
    n_iter = a.max_iter or 8
    Ms = run.call("dynamics.m_iterates", dynamics.m_iterates, f, a.R or 3.0, n_iter)

    def rows(lo, hi):
        for i in range(lo, hi):
            for j in range(res):
                r = dynamics.classify_fast_escape(f, complex(xs[j], ys[i]), a.R or 3.0,
                                                  a.L_max, n_iter, Ms)
                L[i, j] = r.L if r.detected else -1
        return None

    run.call("dynamics.classify_fast_escape", measure._map_chunks, rows, res, 1, a.workers)
    img = np.where(L >= 0, IN_SET, COMPLEMENT).astype(np.uint8)
    run.write_pgm(_status_image(img))
    run.legend = {"0": "fast_escaping", "255": "not_detected"}
    counts = [[l, int(np.count_nonzero(L == l))] for l in range(-1, a.L_max + 1)]
    run.summary = {"detected_fraction": float(np.mean(L >= 0))}
    run.write_csv(["L", "pixels"], counts)


def _criterion_pred(run: _Run):
    a, f = run.args, run.function
    if a.predicate == "strip":
        return measure.strip_predicate
    params = dynamics.CriterionParams(a.epsilon, R=a.R or 2.0,
                                      x_threshold=a.x_threshold, y_threshold=a.y_threshold,
                                      n_oracle=measure.NrOracle("bound_3d1", f, a.C)
                                      if a.x_threshold == "n_power" else None)
    return dynamics.criterion_predicate(f, params, a.predicate)


def cmd_criterion_decay(run: _Run):
    a = run.args
    pred = run.call("dynamics.criterion_predicate", _criterion_pred, run)
    res = a.resolution or 512
    prof = run.call("measure.annulus_decay_profile", measure.annulus_decay_profile,
                    pred, a.k_min, a.k_max, res, a.workers)
    rows = []
    for i, (k, est) in enumerate(prof.entries):
        ratio = prof.ratios[i - 1] if i else math.nan
        row = [k, 2.0 ** k, 2.0 ** (k + 1), est.value, est.delta, ratio, prof.tail[i]]
        if a.mc_samples:
            mc = run.call("measure.logarea_monte_carlo", measure.logarea_monte_carlo, pred,
                          measure.AnnulusSpec(2.0 ** k, 2.0 ** (k + 1)), a.mc_samples,
                          a.seed + k, a.workers)
            row += [mc.value, mc.std_error]
        rows.append(row)
    header = ["k", "r_inner", "r_outer", "logarea", "delta", "ratio", "tail"]
    if a.mc_samples:
        header += ["mc_logarea", "mc_std_error"]
    run.write_csv(header, rows)


def cmd_area_window(run: _Run):
    a, f = run.args, run.function
    win = window_arg(a, [0.0, math.pi, 0.0, 10.0])
    res = a.resolution or 512
    pred = lambda z: dynamics.escape_status_grid(f, z, a.max_iter or 50, a.bailout)[0] == 1
    est = run.call("measure.area_window", measure.area_window, pred, win, res, a.workers)
    run.summary = {"area": est.value}
    run.write_csv(["area", "delta", "fraction", "samples", "resolution"],
                  [[est.value, est.delta, est.value / win.area, est.samples, res]])


def cmd_sigma_region(run: _Run):
    a = run.args
    win = window_arg(a, [-1.5, 1.5, 0.0, 2.2])
    res = a.resolution or 600
    img = run.call("weierstrass.region_raster", weierstrass.region_raster, win, res)
    pix = np.full(img.shape, UNDECIDED_PIXEL, dtype=np.uint8)
    pix[img == weierstrass.INSIDE] = IN_SET
    pix[img == weierstrass.OUTSIDE] = COMPLEMENT
    run.write_pgm(pix)
    run.legend = {"0": "condition holds", "255": "condition fails", "128": "series unresolved"}
    lo, hi = run.call("weierstrass.boundary_on_imaginary_axis",
                      weierstrass.boundary_on_imaginary_axis)
    run.summary = {"inside_fraction": float(np.mean(img == weierstrass.INSIDE))}
    run.write_csv(["inside_fraction", "unknown_fraction", "axis_boundary_lo", "axis_boundary_hi"],
                  [[float(np.mean(img == weierstrass.INSIDE)),
                    float(np.mean(img == weierstrass.UNKNOWN)), lo, hi]])


def cmd_sigma_bounds(run: _Run):
    a = run.args
    tau = _complex(a.tau, "--tau")
    ann = annulus_arg(a, [10.0, 100.0])
    ctx = run.call("weierstrass.LatticeContext", weierstrass.LatticeContext.from_tau, tau)
    rows = []
    edges = [ann.r_inner, ann.r_outer]
    if a.split:
        edges = [ann.r_inner, a.split, ann.r_outer]
    for lo, hi in zip(edges, edges[1:]):
        rep = run.call("weierstrass.verify_theorem7_bounds", weierstrass.verify_theorem7_bounds,
                       ctx, (lo, hi), a.samples, a.seed, a.exclude)
        rows.append([lo, hi, rep.c1_hat, rep.c2_hat, rep.n_c1, rep.n_c2, rep.positive])
    run.write_csv(["r_lo", "r_hi", "c1_hat", "c2_hat", "n_c1", "n_c2", "positive"], rows)


def cmd_eta1(run: _Run):
    a = run.args
    rows = []
    for t in a.tau.split(";"):
        tau = _complex(t, "--tau")
        ctx = run.call("weierstrass.LatticeContext", weierstrass.LatticeContext.from_tau, tau)
        inside = run.call("weierstrass.condition_8c", weierstrass.condition_8c, ctx)
        rows.append([tau.real, tau.imag, ctx.eta1.real, ctx.eta1.imag, ctx.legendre_residual,
                     inside])
    run.write_csv(["tau_re", "tau_im", "eta1_re", "eta1_im", "legendre_residual", "condition"],
                  rows)


def cmd_poincare_series(run: _Run):
    a = run.args
    p = _poly_arg(run.args)
    z0 = _complex(a.z0, "--z0") if a.z0 else None
    f = run.call("poincare.schroeder_series", Poincare.from_polynomial, p.coefficients, z0, a.N)
    run.function = f
    c = f.series.coefficients
    run.summary = {"z0": str(f.z0), "lambda": str(f.lam), "radius": f.series.radius_estimate,
                   "order": f.order()}
    run.write_csv(["n", "re", "im", "abs"], [[n, v.real, v.imag, abs(v)] for n, v in enumerate(c)])


def cmd_vn_decay(run: _Run):
    a = run.args
    p = _poly_arg(a)
    rep = run.call("poincare.vn_area", poincare.vn_area, p, a.R or 3.0, a.n_max,
                   a.resolution or 1024, a.workers)
    run.summary = {"theta_hat": rep.theta_hat, "fit_range": list(rep.fit_range)}
    run.write_csv(["n", "area", "delta", "cells"],
                  [[n, e.value, e.delta, e.samples_hit] for n, e in rep.entries])


def cmd_el_ratio(run: _Run):
    a, f = run.args, run.function
    rs = _floats(a.r_list, None, "--r-list")
    out = run.call("measure.el_ratio", measure.el_ratio, f, a.R or 10.0, rs,
                   a.resolution or 512, a.workers)
    run.write_csv(["r", "ratio"], out)


def cmd_tower_check(run: _Run):
    a = run.args
    xs = np.logspace(math.log10(a.x_min), math.log10(a.x_max), a.x_count)
    rep = run.call("dynamics.verify_tower_lemma", dynamics.verify_tower_lemma,
                   a.alpha, a.beta, xs, range(a.k_min, a.k_max + 1))
    run.summary = {"x0": rep.x0, "violations_below_x0": len(rep.violations)}
    rows = []
    for x in xs:
        for k in range(a.k_min, a.k_max + 1):
            if ExtReal.from_float(float(x)) > max(dynamics.x_alpha(a.alpha),
                                                  dynamics.x_alpha(a.beta)):
                lhs = dynamics.tower_apply_E(a.alpha, float(x), k)
                rhs = dynamics.tower_apply_E(a.beta, float(x), k - 2)
                rows.append([float(x), k, lhs, rhs, lhs >= rhs])
    run.write_csv(["x", "k", "lhs", "rhs", "holds"], rows)


COMMANDS = {
    "escape-render": (cmd_escape_render, True, "classify pixels as escaping, bounded or undecided"),
    "fast-escape-render": (cmd_fast_escape_render, True, "fast-escape semi-decision per pixel"),
    "criterion-decay": (cmd_criterion_decay, True, "per-annulus logarea of a criterion set"),
    "area-window": (cmd_area_window, True, "area of the escaping set in a window"),
    "sigma-region": (cmd_sigma_region, False, "raster of the τ-region of the η₁ condition"),
    "sigma-bounds": (cmd_sigma_bounds, False, "sampled growth constants of σ and zζ"),
    "eta1": (cmd_eta1, False, "quasi-period η₁ and the Legendre check"),
    "poincare-series": (cmd_poincare_series, False, "Schröder series coefficients"),
    "vn-decay": (cmd_vn_decay, False, "areas of the sets V_n for a polynomial"),
    "el-ratio": (cmd_el_ratio, True, "logarea ratio of the preimage of a disk"),
    "tower-check": (cmd_tower_check, False, "compare iterates of exp(x^α) and exp(x^β)"),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--function", default="sin",
                        help="preset name, inline text form, or a file holding it")
    common.add_argument("--window", help="x_min,x_max,y_min,y_max")
    common.add_argument("--annulus", help="r_inner,r_outer")
    common.add_argument("--resolution", type=int)
    common.add_argument("--max-iter", type=int)
    common.add_argument("--bailout", type=float, default=1e10)
    common.add_argument("--epsilon", type=float, default=0.25)
    common.add_argument("--R", type=float)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--workers", type=int,
                        help="thread count (default: ENTIRE_DYN_WORKERS, else CPU count)")
    common.add_argument("--out", default="entire_dyn_out", help="output path prefix")

    parser = argparse.ArgumentParser(prog="entire-dyn", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    ps = {}
    for name, (_, _, help_) in COMMANDS.items():
        ps[name] = sub.add_parser(name, parents=[common], help=help_)
    ps["fast-escape-render"].add_argument("--L-max", dest="L_max", type=int, default=3)
    c = ps["criterion-decay"]
    c.add_argument("--predicate", choices=["W", "X", "Y", "XY", "strip"], default="W")
    c.add_argument("--x-threshold", choices=list(dynamics.X_THRESHOLDS), default="power")
    c.add_argument("--y-threshold", choices=list(dynamics.Y_THRESHOLDS), default="linear")
    c.add_argument("--C", type=float, default=0.0, help="additive constant of the n(r) bound")
    c.add_argument("--k-min", type=int, default=4)
    c.add_argument("--k-max", type=int, default=9)
    c.add_argument("--mc-samples", type=int, default=0)
    s = ps["sigma-bounds"]
    s.add_argument("--tau", default="1j")
    s.add_argument("--samples", type=int, default=100_000)
    s.add_argument("--split", type=float, help="also report the two halves split at this radius")
    s.add_argument("--exclude", choices=["separate", "union"], default="separate")
    ps["eta1"].add_argument("--tau", default="1j", help="one or more τ separated by ';'")
    for name in ("poincare-series", "vn-decay"):
        ps[name].add_argument("--poly", help="ascending coefficients, e.g. -2,0,1")
    ps["poincare-series"].add_argument("--z0")
    ps["poincare-series"].add_argument("--N", type=int, default=64)
    ps["vn-decay"].add_argument("--n-max", type=int, default=10)
    ps["el-ratio"].add_argument("--r-list", default="10,100,1000")
    t = ps["tower-check"]
    t.add_argument("--alpha", type=float, default=0.5)
    t.add_argument("--beta", type=float, default=1.0)
    t.add_argument("--x-min", type=float, default=1.0)
    t.add_argument("--x-max", type=float, default=1e6)
    t.add_argument("--x-count", type=int, default=100)
    t.add_argument("--k-min", type=int, default=4)
    t.add_argument("--k-max", type=int, default=12)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handler, needs_function, _ = COMMANDS[args.command]
    try:
        if args.resolution is not None:
            _check_resolution(args.resolution)
        if args.workers is not None and args.workers < 1:
            raise ConfigError("--workers must be positive")
        try:
            function = load_function(args.function) if needs_function else None
        except (ConfigError, ValueError) as exc:
            raise _Failure("functions.parse_function", exc, 2) from exc
        out_dir = os.path.dirname(os.path.abspath(args.out))
        if not os.path.isdir(out_dir) or not os.access(out_dir, os.W_OK):
            raise ConfigError(f"output directory {out_dir} is not writable")
        run = _Run(args, function)
        handler(run)
        run.write_manifest()
    except _Failure as exc:
        print(f"entire-dyn: error in {exc}", file=sys.stderr)
        return exc.code
    except ConfigError as exc:
        print(f"entire-dyn: configuration error: {exc}", file=sys.stderr)
        return 2
    except EntireDynError as exc:
        print(f"entire-dyn: error: {exc}", file=sys.stderr)
        return 3
    for path in run.outputs:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
