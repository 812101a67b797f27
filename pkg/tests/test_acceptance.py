"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Tolerances and runtime limits are the contract values; a criterion that
cannot be met fails here rather than being loosened.
"""
import math
import time

import numpy as np
import pytest

from entire_dyn import cli, dynamics as dy, measure as ms, poincare as pc, weierstrass as ws
from entire_dyn.functions import Poincare, sine
from entire_dyn.polynomial import PolynomialSpec

from conftest import random_disk

SQ = PolynomialSpec((0, 0, 1))
CHEB = PolynomialSpec((-2, 0, 1))
TWO = PolynomialSpec((-1, 0, 2))


@pytest.fixture
def report(capsys):
    """Print ``criterion N: PASS|FAIL`` (outside capture) and assert the outcome."""
    t0 = time.perf_counter()

    def _report(n, ok, detail, limit):
        elapsed = time.perf_counter() - t0
        ok = bool(ok) and elapsed < limit
        with capsys.disabled():
            print(f"\ncriterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}  "
                  f"[{elapsed:.2f} s, limit {limit:g} s]")
        assert ok, f"criterion {n} failed: {detail}"

    return _report


def test_criterion_01_poincare_exp(report):
    s = pc.schroeder_series(SQ, 1, 2, 20)
    fact = np.array([1 / math.factorial(n) for n in range(21)])
    coef_err = float(np.max(np.abs(s.coefficients - fact) / fact))
    full = pc.build_series(SQ, 1, 2)
    z = random_disk(np.random.default_rng(101), 1000, 10.0)
    vals = np.array([pc.poincare_eval(SQ, 1, 2, full, w) for w in z])
    eval_err = float(np.max(np.abs(vals - np.exp(z)) / np.abs(np.exp(z))))
    report(1, coef_err < 1e-12 and eval_err < 1e-8,
           f"coef rel err {coef_err:.2e}, eval rel err {eval_err:.2e}", 1.0)


def test_criterion_02_poincare_cosh(report):
    full = pc.build_series(TWO, 1, 4)
    z = random_disk(np.random.default_rng(102), 1000, 10.0)
    vals = np.array([pc.poincare_eval(TWO, 1, 4, full, w) for w in z])
    ref = np.cosh(np.sqrt(2 * z))
    err = float(np.max(np.abs(vals - ref) / np.abs(ref)))
    order = Poincare.from_polynomial((-1, 0, 2), z0=1).order()
    report(2, err < 1e-8 and order == 0.5, f"eval rel err {err:.2e}, order {order!r}", 1.0)


def test_criterion_03_eta1_and_legendre(report):
    e = abs(ws.eta1(1j) - math.pi)
    rng = np.random.default_rng(103)
    taus = rng.uniform(-1, 1, 100) + 1j * rng.uniform(0.5, 5, 100)
    worst = max(ws.LatticeContext.from_tau(t).legendre_residual for t in taus)
    report(3, e < 1e-10 and worst < 1e-10, f"|eta1(i) - pi| {e:.2e}, max Legendre {worst:.2e}", 1.0)


def test_criterion_04_boundary(report):
    lo, hi = ws.boundary_on_imaginary_axis()
    ok = 6 / math.pi < lo <= hi < 6 / math.pi + 1e-3
    report(4, ok, f"bracket ({lo:.9f}, {hi:.9f}), 6/pi = {6 / math.pi:.9f}", 5.0)


def _sample_region(rng, keep, n, r_max):
    out = []
    while sum(len(a) for a in out) < n:
        r = np.exp(rng.uniform(0, math.log(r_max), 4 * n))
        z = r * np.exp(1j * rng.uniform(-math.pi, math.pi, 4 * n))
        out.append(z[keep(z)])
    return np.concatenate(out)[:n]


def test_criterion_05_sin_inequalities(report):
    f = sine()
    rng = np.random.default_rng(105)
    z1 = _sample_region(rng, lambda z: np.abs(z.imag) >= np.log(4 * np.abs(z) + 1), 100_000, 1e4)
    bad1 = int(np.count_nonzero(f.log_eval(z1).real < np.log(2 * np.abs(z1))))
    z2 = _sample_region(rng, lambda z: (np.abs(z.imag) >= 1) & (np.abs(z) >= 16), 100_000, 1e4)
    # f'/f = cot z, so the inequality reads |z cot z| >= |z|^(3/4)
    bad2 = int(np.count_nonzero(np.abs(z2 * f.log_derivative_array(z2)) < np.abs(z2) ** 0.75))
    report(5, bad1 == 0 and bad2 == 0, f"violations (4f1) {bad1}, (4f3) {bad2} of 1e5 each", 10.0)


def test_criterion_06_criterion_decay(report):
    f = sine()
    w = dy.criterion_predicate(f, dy.CriterionParams(epsilon=0.25), "W")
    details, ok = [], True
    for name, pred in (("strip", ms.strip_predicate), ("W", w)):
        prof = ms.annulus_decay_profile(pred, 4, 9, 512)
        v = prof.values()
        dec = all(a > b for a, b in zip(v, v[1:]))
        ratio = v[-1] / v[0]
        zmax = 0.0
        for k, est in prof.entries:
            mc = ms.logarea_monte_carlo(pred, ms.AnnulusSpec(2.0 ** k, 2.0 ** (k + 1)),
                                        1_000_000, seed=600 + k)
            zmax = max(zmax, abs(mc.value - est.value) / math.hypot(mc.std_error, est.delta))
        ok &= dec and ratio < 0.2 and zmax < 3
        details.append(f"{name}: decreasing={dec} last/first={ratio:.3f} max z={zmax:.2f}")
    report(6, ok, "; ".join(details), 120.0)


def test_criterion_07_escaping_area(report):
    f = sine()
    pred = lambda z: dy.escape_status_grid(f, z, 50)[0] == 1
    win = ms.WindowSpec(0, math.pi, 0, 10)
    a = ms.area_window(pred, win, 512, with_delta=False).value / win.area
    b = ms.area_window(pred, win, 1024, with_delta=False).value / win.area
    rel = abs(a - b) / b
    report(7, a > 0 and b > 0 and rel < 0.02,
           f"fractions {a:.5f} (512), {b:.5f} (1024), rel diff {rel:.2e}", 120.0)


def test_criterion_08_fast_escape(report):
    f = Poincare.from_polynomial((0, 0, 1), z0=1)
    Ms = dy.m_iterates(f, 3.0, 8)
    tags = {z: dy.classify_fast_escape(f, z, R=3.0, L_max=3, m_list=Ms) for z in (10, 20j, 5 + 5j)}
    ok = all(t.detected and t.L <= 3 for t in tags.values())
    neg = dy.classify_fast_escape(f, -10.0, R=3.0, L_max=3, m_list=Ms)
    detail = ", ".join(f"{z}: {t}" for z, t in tags.items()) + f", -10: {neg}"
    report(8, ok, detail, 1.0)


def test_criterion_09_tower_lemma(report):
    grid = np.logspace(0, 6, 100)
    rep = dy.verify_tower_lemma(0.5, 1.0, grid, range(4, 13))
    ok = rep.x0 is not None and rep.x0 <= 1e6 and all(x < rep.x0 for x, _ in rep.violations)
    worst = 0.0
    for x in grid[::10]:
        for k in range(6):
            a, b = dy.tower_apply_E(0.5, x, k).canonical(), dy.tower_recursive(0.5, x, k).canonical()
            ok &= a[0] == b[0]
            worst = max(worst, abs(a[1] - b[1]) / max(abs(b[1]), 1e-300))
    report(9, ok and worst < 1e-9,
           f"x0 = {rep.x0:.4g}, violations below x0 {len(rep.violations)}, path rel diff {worst:.1e}",
           5.0)


def test_criterion_10_vn_decay(report):
    rep = pc.vn_area(CHEB, 3, n_max=10, resolution=1024)
    areas = [e.value for n, e in rep.entries if 1 <= n <= 10]
    dec = all(a > b for a, b in zip(areas, areas[1:]))
    report(10, dec and rep.theta_hat < 0.95,
           f"V_1..V_10 decreasing={dec}, theta_hat={rep.theta_hat:.4f}", 120.0)


def test_criterion_11_green(report):
    rng = np.random.default_rng(111)
    z = np.exp(rng.uniform(math.log(2), math.log(100), 100)) * np.exp(2j * math.pi * rng.random(100))
    e1 = float(np.max(np.abs(pc.green(SQ, z) - np.log(np.abs(z)))))
    w = random_disk(rng, 5000, 4.0)
    g = pc.green(CHEB, w)
    w, g = w[g > 0.1][:1000], g[g > 0.1][:1000]
    e2 = float(np.max(np.abs(pc.green(CHEB, CHEB(w)) - 2 * g)))
    ratio = pc.green_gradient_ratio(CHEB, 1e3 * np.exp(0.7j))
    ok = e1 < 1e-10 and len(w) == 1000 and e2 < 1e-8 and abs(ratio - 1) < 0.01
    report(11, ok, f"z^2 err {e1:.1e}, residual {e2:.1e} on {len(w)} pts, gradient ratio {ratio:.6f}",
           5.0)


def test_criterion_12_weierstrass(report):
    worst = {}
    for tau in (1j, 0.3 + 1.2j):
        ctx = ws.LatticeContext.from_tau(tau)
        z = random_disk(np.random.default_rng(112), 10_000, 20.0)
        a, b = ws.log_sigma(ctx, z), ws.log_sigma(ctx, -z)
        odd = max(float(np.max(np.abs(a.real - b.real) / np.maximum(1, np.abs(a.real)))),
                  float(np.max(np.abs(np.angle(np.exp(1j * (b.imag - a.imag - math.pi)))))))
        zt = ws.zeta(ctx, z)
        quasi = float(np.max(np.abs(ws.zeta(ctx, z + 1) - zt - ctx.eta1)))
        p = ws.wp(ctx, z)
        per = float(np.max(np.abs(ws.wp(ctx, z + 1) - p) / np.maximum(1, np.abs(p))))
        half = abs(2 * ws.zeta(ctx, 0.5) - ctx.eta1)
        worst[tau] = (odd, quasi, per, half)
    ok = all(o < 1e-8 and q < 1e-8 and p < 1e-8 and h < 1e-10 for o, q, p, h in worst.values())
    detail = "; ".join(f"tau={t}: odd {o:.1e} quasi {q:.1e} per {p:.1e} half {h:.1e}"
                       for t, (o, q, p, h) in worst.items())
    report(12, ok, detail, 30.0)


def test_criterion_13_sigma_growth_bounds(report):
    ctx = ws.LatticeContext.from_tau(1j)
    lo = ws.verify_theorem7_bounds(ctx, (10, 50), 100_000, seed=13, exclude="union")
    hi = ws.verify_theorem7_bounds(ctx, (50, 100), 100_000, seed=14, exclude="union")
    r1 = max(lo.c1_hat, hi.c1_hat) / min(lo.c1_hat, hi.c1_hat)
    r2 = max(lo.c2_hat, hi.c2_hat) / min(lo.c2_hat, hi.c2_hat)
    ok = lo.positive and hi.positive and r1 <= 2 and r2 <= 2
    report(13, ok, f"c1 {lo.c1_hat:.4f}/{hi.c1_hat:.4f} (x{r1:.2f}), "
                   f"c2 {lo.c2_hat:.4f}/{hi.c2_hat:.4f} (x{r2:.2f})", 120.0)


def test_criterion_14_cli_determinism(report, tmp_path):
    cmds = [
        ["escape-render", "--window", "0,3.14159,0,10", "--resolution", "256"],
        ["criterion-decay", "--resolution", "128", "--k-min", "4", "--k-max", "7",
         "--mc-samples", "100000", "--seed", "7"],
        ["sigma-bounds", "--annulus", "10,100", "--samples", "20000", "--seed", "7"],
    ]
    same = []
    for i, cmd in enumerate(cmds):
        blobs = []
        for w in ("1", "4"):
            prefix = str(tmp_path / f"c{i}w{w}")
            assert cli.main([*cmd, "--workers", w, "--out", prefix]) == 0
            data = []
            for ext in (".csv", ".pgm"):
                try:
                    with open(prefix + ext, "rb") as fh:
                        data.append(fh.read())
                except FileNotFoundError:
                    pass
            blobs.append(data)
        same.append(blobs[0] == blobs[1] and len(blobs[0]) >= 1)
    report(14, all(same), f"byte-identical per command: {same}", 300.0)
