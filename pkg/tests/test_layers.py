import math

import numpy as np
import pytest

from isoplab import (asymptotic_kernels, ball_deficit_measures, cap_area,
                     cap_geometry, exact_kernels, kernel_deviation,
                     layer_integral, sin_power_integral, unit_ball_volume,
                     unit_sphere_area)
from isoplab.density import RadialDeficit


def test_cap_geometry_law_of_cosines():
    g = cap_geometry(10.0, 10.0)
    assert math.cos(float(g)) == pytest.approx(0.995, abs=1e-15)
    # generic s: cos(g) = (s^2 + R^2 - 1) / (2 s R)
    g2 = cap_geometry(9.4, 10.0)
    assert math.cos(float(g2)) == pytest.approx((9.4 ** 2 + 99.0) / (2 * 9.4 * 10.0),
                                                abs=1e-14)


def test_cap_geometry_tangency():
    assert float(cap_geometry(10.0 + 1 - 1e-12, 10.0)) < 1e-5
    assert float(cap_geometry(10.0 - 1 + 1e-12, 10.0)) < 1e-5


def test_cap_geometry_rejects_disjoint():
    with pytest.raises(ValueError):
        cap_geometry(12.5, 10.0)
    with pytest.raises(ValueError):
        cap_geometry(5.0, 10.0)


def test_cap_area_full_sphere():
    for n in (2, 3, 4, 5):
        assert cap_area(n, 2.0, math.pi) == pytest.approx(
            unit_sphere_area(n) * 2.0 ** (n - 1), rel=1e-14)


def test_cap_area_empty():
    assert cap_area(3, 1.0, 0.0) == 0.0


def test_cap_area_n3_closed_form():
    for s, g in [(1.0, 0.3), (2.5, 1.2), (0.7, 2.9)]:
        assert cap_area(3, s, g) == pytest.approx(
            2.0 * math.pi * s * s * (1.0 - math.cos(g)), rel=1e-14)


def test_cap_area_n2_two_arcs():
    assert cap_area(2, 3.0, 0.5) == pytest.approx(2.0 * 3.0 * 0.5, rel=1e-15)


def test_sin_power_recurrence_against_quadrature():
    from scipy.integrate import quad
    for m in range(0, 7):
        for g in (0.2, 1.0, 2.5):
            ref, _ = quad(lambda u: math.sin(u) ** m, 0.0, g, epsabs=1e-14)
            assert float(sin_power_integral(m, g)) == pytest.approx(ref, abs=1e-12)


def test_asymptotic_kernels_n3():
    a = asymptotic_kernels(3)
    t = np.linspace(-0.9, 0.9, 7)
    assert np.allclose(a.area_kernel(t), 2.0 * math.pi, atol=1e-14)
    assert np.allclose(a.volume_kernel(t), math.pi * (1 - t * t), atol=1e-14)


def test_kernel_mass_identities():
    # integral of the area kernel is the sphere area, of the volume kernel
    # the ball volume
    for n in range(2, 7):
        a = asymptotic_kernels(n)
        ia, _, _ = layer_integral(a.area_kernel)
        iv, _, _ = layer_integral(a.volume_kernel)
        assert ia == pytest.approx(unit_sphere_area(n), abs=1e-10)
        assert iv == pytest.approx(unit_ball_volume(n), abs=1e-10)


def test_exact_kernel_n3_ratio_identity():
    for R in (5.0, 10.0, 100.0):
        t = np.linspace(-1 + 1e-6, 1 - 1e-6, 1000)
        ex = exact_kernels(3, R)
        asym = asymptotic_kernels(3)
        scale = (R + t) / R
        assert np.max(np.abs(ex.area_kernel(t) - scale * asym.area_kernel(t))) < 1e-12
        assert np.max(np.abs(ex.volume_kernel(t) - scale * asym.volume_kernel(t))) < 1e-12


def test_exact_kernel_n3_values():
    ex = exact_kernels(3, 10.0)
    assert float(ex.volume_kernel(0.5)) == pytest.approx(
        1.05 * math.pi * 0.75, rel=1e-14)
    assert float(ex.volume_kernel(0.0)) == pytest.approx(math.pi, rel=1e-14)


def test_exact_kernels_reject_small_offset():
    with pytest.raises(ValueError):
        exact_kernels(3, 1.0)


def test_deviation_n3_first_order():
    d = kernel_deviation(3, 10.0)
    assert d.sup_area == pytest.approx((1.0 - 1e-6) / 10.0, rel=1e-6)


def test_deviation_monotone_and_bounded():
    for n in (2, 3, 4):
        prev = math.inf
        for R in (10.0, 100.0, 1000.0):
            d = kernel_deviation(n, R)
            assert d.sup <= 2.0 / R
            assert d.sup <= prev
            prev = d.sup


def test_deviation_rejects_endpoint_grid():
    with pytest.raises(ValueError):
        kernel_deviation(3, 10.0, grid=np.array([0.0, 1.0 - 1e-9]))


def test_exact_kernel_mc_oracle():
    # deficit volume through the volume kernel vs Monte-Carlo rejection
    rng = np.random.default_rng(42)
    for n, R in [(2, 5.0), (2, 20.0), (3, 5.0), (3, 20.0), (4, 5.0), (4, 20.0)]:
        g = RadialDeficit(dim=n, profile=lambda r: np.exp(-np.asarray(r, dtype=float)))
        _, V = ball_deficit_measures(g, n, R)
        m = 400_000
        pts = rng.uniform(-1.0, 1.0, size=(m, n))
        inside = np.einsum("ij,ij->i", pts, pts) <= 1.0
        pts[:, 0] += R
        vals = np.where(inside, np.exp(-np.linalg.norm(pts, axis=1)), 0.0)
        box = 2.0 ** n
        est = box * vals.mean()
        err = box * vals.std() / math.sqrt(m)
        assert abs(V.value - est) <= 3.0 * err, (n, R, V.value, est, err)


def test_ball_deficit_exponential_closed_form():
    e = math.e
    g = RadialDeficit(dim=3, profile=lambda r: np.exp(-np.asarray(r, dtype=float)))
    R = 7.0
    P, V = ball_deficit_measures(g, 3, R, asymptotic_kernels(3))
    assert P.value == pytest.approx(2 * math.pi * math.exp(-R) * (e - 1 / e),
                                    rel=1e-12)
    assert V.value == pytest.approx(4 * math.pi * math.exp(-R) / e, rel=1e-12)
    assert P.value / V.value == pytest.approx((e * e - 1) / 2, rel=1e-12)


def test_ball_deficit_zero_profile():
    g = RadialDeficit(dim=2, profile=lambda r: np.zeros_like(np.asarray(r, dtype=float)))
    P, V = ball_deficit_measures(g, 2, 5.0)
    assert P.value == 0.0 and V.value == 0.0


def test_ball_deficit_exact_vs_asymptotic_bracket():
    # n = 3 exact kernels are (s/R) times the limits, so the measures sit
    # within a factor (1 +- 1/R) of the asymptotic ones
    g = RadialDeficit(dim=3, profile=lambda r: np.exp(-np.asarray(r, dtype=float)))
    R = 10.0
    Pe, Ve = ball_deficit_measures(g, 3, R)
    Pa, Va = ball_deficit_measures(g, 3, R, asymptotic_kernels(3))
    for ex, asym in ((Pe, Pa), (Ve, Va)):
        assert (1 - 1 / R) * asym.value <= ex.value <= (1 + 1 / R) * asym.value


def test_ball_deficit_rejects_mismatched_kernels():
    g = RadialDeficit(dim=3, profile=lambda r: np.exp(-np.asarray(r, dtype=float)))
    with pytest.raises(ValueError):
        ball_deficit_measures(g, 3, 5.0, exact_kernels(3, 6.0))
    with pytest.raises(ValueError):
        ball_deficit_measures(g, 2, 5.0, exact_kernels(3, 5.0))
