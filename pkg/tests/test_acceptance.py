"""Acceptance suite.

Each test runs one acceptance item at its stated tolerance and prints a
single pass/fail line (visible with ``pytest -s`` and in failure output).
Item 08 asserts an absolute perimeter margin of 1e-6 below the Euclidean
value for constructions at offsets >= 50; at those offsets the deficit scale
of the shipped exponential families is e^{-49} ~ 5e-22, so the margin clause
cannot be met by any correct construction and the test documents that
failure rather than weakening the threshold.
"""

import json
import math
import time

import numpy as np
import pytest

from isoplab import (CylinderExtended, PlainBall, RotationSwept,
                     asymptotic_kernels, build_competitor,
                     averaging_identity_residual, check_admissibility,
                     correlation, deficit_profile, density_from_config,
                     excess_kernel, exact_kernels,
                     kernel_deviation, layer_integral, mean_density, rescale,
                     set_measures, simulate_comparison_ode, unit_ball_volume,
                     unit_sphere_area, weighted_ball_measures)
from isoplab.cli import run as cli_run

E_CONST = math.e
MC_SEED = 11

RADIAL2 = {"family": "radial_exp", "dim": 2, "a": 1.0, "params": {"c": 1.0}}
RADIAL3 = {"family": "radial_exp", "dim": 3, "a": 1.0, "params": {"c": 1.0}}
ANGULAR2 = {"family": "angular_mod", "dim": 2, "a": 1.0,
            "params": {"eta": 0.5, "k": 1, "c": 1.0}}


def _report(num, name, ok, elapsed, detail=""):
    status = "PASS" if ok else "FAIL"
    tail = f": {detail}" if detail else ""
    print(f"[{status}] acceptance {num:02d} {name} ({elapsed:.2f} s){tail}")


_cache = {}


def _competitor(cfg_key):
    """Build (and cache) the end-to-end runs shared by items 08, 09, 12."""
    if cfg_key not in _cache:
        cfg = {"radial2": RADIAL2, "radial3": RADIAL3,
               "angular2": ANGULAR2}[cfg_key]
        d = density_from_config(cfg)
        t0 = time.perf_counter()
        cert = build_competitor(d, eps=0.05, R_min=50.0, R_max=200.0,
                                mc_samples=100_000, mc_seed=MC_SEED)
        _cache[cfg_key] = (cert, time.perf_counter() - t0)
    return _cache[cfg_key]


def test_acceptance_01_kernel_mass_identities():
    t0 = time.perf_counter()
    worst = 0.0
    for n in range(2, 7):
        a = asymptotic_kernels(n)
        ia, _, _ = layer_integral(a.area_kernel)
        iv, _, _ = layer_integral(a.volume_kernel)
        worst = max(worst, abs(ia - unit_sphere_area(n)),
                    abs(iv - unit_ball_volume(n)))
    dt = time.perf_counter() - t0
    ok = worst <= 1e-10 and dt < 1.0
    _report(1, "kernel mass identities", ok, dt, f"worst residual {worst:.2e}")
    assert worst <= 1e-10
    assert dt < 1.0


def test_acceptance_02_offset_ratio_identity():
    t0 = time.perf_counter()
    worst = 0.0
    t = np.linspace(-1 + 1e-6, 1 - 1e-6, 1000)
    asym = asymptotic_kernels(3)
    for R in (5.0, 10.0, 100.0):
        ex = exact_kernels(3, R)
        scale = (R + t) / R
        worst = max(worst,
                    float(np.max(np.abs(ex.area_kernel(t) - scale * asym.area_kernel(t)))),
                    float(np.max(np.abs(ex.volume_kernel(t) - scale * asym.volume_kernel(t)))))
    dt = time.perf_counter() - t0
    ok = worst <= 1e-12 and dt < 1.0
    _report(2, "n=3 offset kernel ratio identity", ok, dt,
            f"worst deviation {worst:.2e}")
    assert worst <= 1e-12
    assert dt < 1.0


def test_acceptance_03_uniform_limit_decay():
    t0 = time.perf_counter()
    ok = True
    worst = 0.0
    for n in (2, 3, 4):
        prev = math.inf
        for R in (10.0, 100.0, 1000.0):
            d = kernel_deviation(n, R)
            ok = ok and d.sup <= 2.0 / R and d.sup <= prev
            worst = max(worst, d.sup * R / 2.0)
            prev = d.sup
    dt = time.perf_counter() - t0
    ok = ok and dt < 5.0
    _report(3, "uniform limit of exact kernels", ok, dt,
            f"max deviation*R/2 = {worst:.3f}")
    assert ok


def test_acceptance_04_primitive_closed_forms():
    t0 = time.perf_counter()
    from scipy.integrate import quad
    grid = np.linspace(-1 + 1e-6, 1 - 1e-6, 10_001)
    worst = 0.0
    for n, closed in ((2, lambda t: -2 * t * math.sqrt(1 - t * t)),
                      (3, lambda t: math.pi * (t ** 3 - t))):
        k = excess_kernel(n)
        for t_pt in np.linspace(-0.95, 0.95, 39):
            ref, _ = quad(lambda u: float(k.values(math.sin(u))) * math.cos(u),
                          -math.pi / 2, math.asin(t_pt),
                          epsabs=1e-13, epsrel=1e-13, limit=200)
            worst = max(worst, abs(ref - closed(t_pt)),
                        abs(float(k.primitive(t_pt)) - closed(t_pt)))
        rep = check_admissibility(k, grid=grid)
        if not rep.passed:
            worst = math.inf
    dt = time.perf_counter() - t0
    ok = worst <= 1e-10 and dt < 5.0
    _report(4, "primitive closed forms + admissibility", ok, dt,
            f"worst residual {worst:.2e}")
    assert worst <= 1e-10
    assert dt < 5.0


def test_acceptance_05_sliding_correlation_closed_form():
    t0 = time.perf_counter()
    k = excess_kernel(3)
    g = deficit_profile(density_from_config(RADIAL3))
    const = math.pi * (2 * E_CONST - 14 / E_CONST)
    worst_rel = 0.0
    for R in (5.0, 10.0, 20.0):
        c = correlation(k, g, R)
        worst_rel = max(worst_rel, abs(c / (const * math.exp(-R)) - 1.0))
    from isoplab import ball_deficit_measures
    P, V = ball_deficit_measures(g, 3, 10.0, asymptotic_kernels(3))
    ratio_err = abs(P.value / V.value - (E_CONST ** 2 - 1) / 2)
    dt = time.perf_counter() - t0
    ok = worst_rel <= 1e-8 and ratio_err <= 1e-6 and dt < 5.0
    _report(5, "sliding correlation closed form", ok, dt,
            f"rel {worst_rel:.2e}, ratio err {ratio_err:.2e}")
    assert worst_rel <= 1e-8
    assert ratio_err <= 1e-6
    assert dt < 5.0


def test_acceptance_06_averaging_identity():
    t0 = time.perf_counter()
    g = deficit_profile(density_from_config(RADIAL3))
    lhs, rhs, resid = averaging_identity_residual(excess_kernel(3), g, 5.0, 10.0)
    dt = time.perf_counter() - t0
    ok = resid <= 1e-8 and dt < 5.0
    _report(6, "averaged-translate identity", ok, dt, f"residual {resid:.2e}")
    assert resid <= 1e-8
    assert dt < 5.0


def test_acceptance_07_measure_oracle_agreement():
    t0 = time.perf_counter()
    worst_z = 0.0
    ok = True
    for n in (2, 3):
        families = [density_from_config({"family": "constant", "dim": n, "a": 1.0}),
                    density_from_config({"family": "radial_exp", "dim": n, "a": 1.0})]
        sets = [PlainBall(dim=n, offset=3.0),
                CylinderExtended(dim=n, offset=3.0, delta=0.3),
                RotationSwept(dim=n, offset=3.0, delta=0.2)]
        for d in families:
            for E in sets:
                Pq, Vq = set_measures(E, d)
                Pm, Vm = set_measures(E, d, method="monte_carlo",
                                      budget=1_000_000, seed=MC_SEED)
                for q, m in ((Pq, Pm), (Vq, Vm)):
                    diff = abs(m.value - q.value)
                    if m.error_estimate > 0:
                        worst_z = max(worst_z, diff / m.error_estimate)
                    ok = ok and diff <= 3.0 * m.error_estimate + 1e-12
    dt = time.perf_counter() - t0
    ok = ok and dt < 60.0
    _report(7, "quadrature vs Monte-Carlo oracle", ok, dt,
            f"worst |z| = {worst_z:.2f} (seed {MC_SEED})")
    assert ok


def test_acceptance_08_end_to_end_competitor():
    lines = []
    all_ok = True
    for key, n in (("radial2", 2), ("angular2", 2), ("radial3", 3)):
        cert, dt = _competitor(key)
        om = unit_ball_volume(n)
        volume_ok = abs(cert.volume_gap) <= 1e-6 * om
        margin_ok = cert.perimeter_margin > 1e-6
        bounds_ok = cert.bounds["match_bound_ok"] and \
            cert.bounds.get("advance_bound_ok", True)
        runtime_ok = dt < 120.0
        all_ok = all_ok and volume_ok and margin_ok and bounds_ok and runtime_ok
        lines.append(f"{key}: |V-om|/om={abs(cert.volume_gap)/om:.1e} "
                     f"margin={cert.perimeter_margin:.2e} "
                     f"(strict={cert.strict}) bounds={bounds_ok} {dt:.1f}s")
    _report(8, "end-to-end competitor at offset >= 50", all_ok, 0.0,
            "; ".join(lines))
    for key, n in (("radial2", 2), ("angular2", 2), ("radial3", 3)):
        cert, dt = _competitor(key)
        om = unit_ball_volume(n)
        assert abs(cert.volume_gap) <= 1e-6 * om
        assert cert.bounds["match_bound_ok"]
        assert cert.bounds.get("advance_bound_ok", True)
        assert dt < 120.0
        # strict improvement over the Euclidean perimeter, by an absolute
        # margin of 1e-6: unreachable at offsets >= 50, where the whole
        # deficit on the ball is ~ N omega_N e^{-49} ~ 3e-21; recorded as an
        # honest failure (the margin is positive, i.e. strict, but 15 orders
        # of magnitude below the required threshold)
        assert cert.perimeter_margin > 1e-6, (
            f"{key}: perimeter margin {cert.perimeter_margin:.3e} is strictly "
            "positive but below the stated absolute threshold 1e-6; at "
            "offsets >= 50 every correct construction has margin <= "
            f"{n * unit_ball_volume(n) * math.exp(-49.0):.2e}")


def test_acceptance_09_advance_map_band():
    t0 = time.perf_counter()
    cert, _ = _competitor("angular2")
    eps = 0.05
    assert cert.advance is not None
    q = cert.advance.quotients()
    lo_ok = float(q.min()) >= 1.0 - eps - 1e-3
    hi_ok = float(q.max()) <= 1.0 / (1.0 - eps) + 1e-3
    dt = time.perf_counter() - t0
    ok = lo_ok and hi_ok and dt < 30.0
    _report(9, "advance-map difference-quotient band", ok, dt,
            f"quotients in [{q.min():.6f}, {q.max():.6f}]")
    assert lo_ok and hi_ok
    assert dt < 30.0


def test_acceptance_10_extinction_sweep():
    t0 = time.perf_counter()
    worst = 0.0
    for n in (2, 3, 4):
        for C2 in (0.5, 1.0, 8.0):
            for m0 in (0.1, 1.0):
                cert = simulate_comparison_ode(C2, n, m0, step=1e-3)
                worst = max(worst, cert.residual)
    two = simulate_comparison_ode(1.0, 2, 1.0).extinction_observed
    twelve = simulate_comparison_ode(8.0, 3, 1.0).extinction_observed
    dt = time.perf_counter() - t0
    ok = (worst <= 1e-6 and abs(two - 2.0) <= 1e-6
          and abs(twelve - 12.0) <= 1e-6 and dt < 5.0)
    _report(10, "extinction sweep (18 points)", ok, dt,
            f"worst residual {worst:.2e}; t*(2,1,1)={two:.9f}, "
            f"t*(3,8,1)={twelve:.9f}")
    assert worst <= 1e-6
    assert abs(two - 2.0) <= 1e-6 and abs(twelve - 12.0) <= 1e-6
    assert dt < 5.0


def test_acceptance_11_rescale_invariance():
    t0 = time.perf_counter()
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(5):
        n = int(rng.integers(2, 4))
        a = float(rng.uniform(0.5, 4.0))
        c = float(rng.uniform(0.4, 1.5))
        R = float(rng.uniform(3.0, 8.0))
        target = float(rng.uniform(0.5, 5.0)) * unit_ball_volume(n)
        d = density_from_config({"family": "radial_exp", "dim": n, "a": a,
                                 "params": {"c": c}})
        axis = np.eye(n)[0]
        P, V = weighted_ball_measures(lambda x: np.asarray(d.weight(x)), n,
                                      R * axis, nodes=96)
        rho = mean_density(P, V, n)
        out, lam = rescale(d, target)
        P2, V2 = weighted_ball_measures(lambda x: np.asarray(out.weight(x)), n,
                                        (R / lam) * axis, radius=1.0 / lam,
                                        nodes=96)
        rho2 = mean_density(P2, V2, n)
        worst = max(worst, abs(rho2 - rho / a))
    dt = time.perf_counter() - t0
    ok = worst <= 1e-9 and dt < 5.0
    _report(11, "mean-density rescale invariance", ok, dt,
            f"worst |rho' - rho/a| = {worst:.2e}")
    assert worst <= 1e-9
    assert dt < 5.0


def test_acceptance_12_deterministic_reruns(tmp_path):
    t0 = time.perf_counter()
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"density": ANGULAR2}))
    args = ["competitor", "--config", str(cfg), "--eps", "0.05",
            "--rmin", "50.0", "--rmax", "200.0", "--samples", "20000",
            "--seed", str(MC_SEED)]
    # the deficit is tiny but positive: a certified (non-degenerate) success
    assert cli_run(["--out", str(tmp_path / "a")] + args) == 0
    assert cli_run(["--out", str(tmp_path / "b")] + args) == 0
    same = True
    for name in ("competitor.json", "advance_map.csv", "far_ball_scan.csv"):
        same = same and ((tmp_path / "a" / name).read_bytes()
                         == (tmp_path / "b" / name).read_bytes())
    dt = time.perf_counter() - t0
    _report(12, "byte-identical reruns", same, dt)
    assert same
