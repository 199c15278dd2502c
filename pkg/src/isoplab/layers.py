"""Radial-layer geometry of a unit ball whose center sits at distance R > 1
from the origin.

Slicing the ball by concentric spheres |x| = R + t, t in (-1, 1), gives two
kernels on (-1, 1):

* ``area_kernel`` -- the density, against dt, of the surface measure of the
  unit sphere centered at R*e1, written in the coordinate t = |x| - R;
* ``volume_kernel`` -- the area of the slice of the offset ball cut by the
  sphere of radius R + t, so that integrating kernel(t) * w(R + t) gives the
  w-weighted perimeter resp. volume of the offset ball for radial weights w.

As R grows the layers flatten and both kernels converge uniformly to simple
limit profiles in t; ``asymptotic_kernels`` returns those limits.

Conventions: a "cap" of a circle (n = 2) consists of the two symmetric arcs
cut by the slicing circle, matching the slice measure of the disk.  The
integral of sin^m is evaluated by the standard recurrence so that low
dimensions reduce to exact closed forms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.integrate import quad

from .defaults import ENDPOINT_MARGIN, QUAD_ABS_TOL
from .quadrature import unit_ball_volume


@dataclass(frozen=True)
class LayerKernelPair:
    """Pair of layer kernels on (-1, 1) for one offset (or the limit)."""

    dim: int
    kind: str                      # "exact" | "asymptotic"
    offset: float | None           # R for exact kernels, None for the limit
    area_kernel: Callable[[np.ndarray], np.ndarray]
    volume_kernel: Callable[[np.ndarray], np.ndarray]


def cap_geometry(s: float, R: float):
    """Half-angle gamma of the cap cut on the sphere |x| = s by the unit ball
    centered at distance R; requires |s - R| < 1 so that they intersect.

    cos(gamma) = (s^2 + R^2 - 1) / (2 s R).  Both cos and sin of gamma are
    assembled from cancellation-free products so tangency behaves cleanly.
    """
    s = np.asarray(s, dtype=float)
    if np.any(s <= 0) or R <= 1:
        raise ValueError("need s > 0 and R > 1")
    t = s - R
    if np.any(np.abs(t) >= 1):
        raise ValueError("sphere of radius s does not meet the offset unit ball")
    cos_g, sin_g, _ = _cap_trig(s, R)
    return np.arctan2(sin_g, cos_g)


def _cap_trig(s, R):
    """(cos g, sin g, 1 - cos g) for the cap angle, each in stable form."""
    t = s - R
    one_minus = (1.0 - t * t) / (2.0 * s * R)          # 1 - cos g
    plus = ((s + R) ** 2 - 1.0) / (2.0 * s * R)        # 1 + cos g
    cos_g = 1.0 - one_minus
    sin_g = np.sqrt(one_minus * plus)
    return cos_g, sin_g, one_minus


def sin_power_integral(m: int, gamma, cos_g=None, sin_g=None, one_minus_cos=None):
    """Integral of sin^m(u) du from 0 to gamma via the standard recurrence.

    I_0 = gamma, I_1 = 1 - cos(gamma),
    I_m = ((m - 1) I_{m-2} - cos(gamma) sin^{m-1}(gamma)) / m.

    Stable trig values may be supplied to avoid recomputing near tangency.
    """
    if m < 0:
        raise ValueError("power must be nonnegative")
    gamma = np.asarray(gamma, dtype=float)
    if cos_g is None:
        cos_g = np.cos(gamma)
    if sin_g is None:
        sin_g = np.sin(gamma)
    if one_minus_cos is None:
        one_minus_cos = 1.0 - cos_g
    if m == 0:
        return gamma + 0.0
    if m == 1:
        return one_minus_cos + 0.0
    prev2, prev1 = gamma, one_minus_cos            # I_0, I_1
    for k in range(2, m + 1):
        cur = ((k - 1) * prev2 - cos_g * sin_g ** (k - 1)) / k
        prev2, prev1 = prev1, cur
    return prev1


def cap_area(n: int, s, gamma) -> np.ndarray:
    """Surface area of the polar cap of half-angle gamma on a sphere of
    radius s in R^n: s^{n-1} (n-1) omega_{n-1} * integral_0^gamma sin^{n-2}.

    For n = 2 this is 2*s*gamma, i.e. both arcs of the slice.
    """
    if n < 2:
        raise ValueError("need n >= 2")
    s = np.asarray(s, dtype=float)
    gamma = np.asarray(gamma, dtype=float)
    if np.any(gamma < -1e-15) or np.any(gamma > math.pi + 1e-15):
        raise ValueError("cap angle outside [0, pi]")
    coef = (n - 1) * unit_ball_volume(n - 1)
    return s ** (n - 1) * coef * sin_power_integral(n - 2, gamma)


def asymptotic_kernels(n: int) -> LayerKernelPair:
    """Flat-layer limits of the kernels:

    area_kernel(t)   = (n-1) omega_{n-1} (1 - t^2)^{(n-3)/2}
    volume_kernel(t) = omega_{n-1} (1 - t^2)^{(n-1)/2}

    Their full integrals are the unit sphere area and unit ball volume.
    """
    if n < 2:
        raise ValueError("need n >= 2")
    w = unit_ball_volume(n - 1)

    def area_kernel(t):
        t = np.asarray(t, dtype=float)
        return (n - 1) * w * (1.0 - t * t) ** ((n - 3) / 2.0)

    def volume_kernel(t):
        t = np.asarray(t, dtype=float)
        return w * (1.0 - t * t) ** ((n - 1) / 2.0)

    return LayerKernelPair(n, "asymptotic", None, area_kernel, volume_kernel)


def exact_kernels(n: int, R: float) -> LayerKernelPair:
    """Exact layer kernels of the unit ball centered at distance R > 1.

    With s = R + t, the slicing sphere |x| = s cuts the offset ball in a cap
    whose area gives the volume kernel.  Parametrizing the offset unit sphere
    by the angle a between the outward radius and the center direction,
    |x|^2 = R^2 + 1 + 2 R cos(a), the coarea factor of |x| on that sphere is

        area_kernel(t) = (n-1) omega_{n-1} sin^{n-3}(a) * s / R,

    where sin(a) = sqrt((1 - t^2) ((s + R)^2 - 1)) / (2R).  In n = 3 both
    kernels are exactly (s / R) times their flat limits.
    """
    if n < 2:
        raise ValueError("need n >= 2")
    if not R > 1:
        raise ValueError("offset must exceed the ball radius 1")
    w = unit_ball_volume(n - 1)

    def area_kernel(t):
        t = np.asarray(t, dtype=float)
        s = R + t
        sin_a = np.sqrt((1.0 - t * t) * ((s + R) ** 2 - 1.0)) / (2.0 * R)
        return (n - 1) * w * sin_a ** (n - 3) * (s / R)

    def volume_kernel(t):
        t = np.asarray(t, dtype=float)
        s = R + t
        cos_g, sin_g, one_minus = _cap_trig(s, R)
        if n == 2:
            gamma = np.arctan2(sin_g, cos_g)
            return 2.0 * s * gamma
        im = sin_power_integral(n - 2, np.arctan2(sin_g, cos_g),
                                cos_g=cos_g, sin_g=sin_g,
                                one_minus_cos=one_minus)
        return s ** (n - 1) * (n - 1) * w * im

    return LayerKernelPair(n, "exact", float(R), area_kernel, volume_kernel)


@dataclass(frozen=True)
class DeviationReport:
    """Sup-norm relative deviation of exact kernels from their limits."""

    dim: int
    offset: float
    margin: float
    grid_size: int
    sup_area: float
    sup_volume: float

    @property
    def sup(self) -> float:
        return max(self.sup_area, self.sup_volume)


def kernel_deviation(n: int, R: float, grid: np.ndarray | None = None,
                     margin: float = ENDPOINT_MARGIN) -> DeviationReport:
    """sup over the grid of |exact/limit - 1| for both kernels.

    The grid must avoid the endpoints; the default uses 1001 points on
    |t| <= 1 - margin.
    """
    if grid is None:
        grid = np.linspace(-1.0 + margin, 1.0 - margin, 1001)
    grid = np.asarray(grid, dtype=float)
    if np.any(np.abs(grid) > 1.0 - margin * (1 - 1e-12)):
        raise ValueError("grid must stay inside |t| <= 1 - margin")
    ex = exact_kernels(n, R)
    asym = asymptotic_kernels(n)
    dev_a = np.max(np.abs(ex.area_kernel(grid) / asym.area_kernel(grid) - 1.0))
    dev_v = np.max(np.abs(ex.volume_kernel(grid) / asym.volume_kernel(grid) - 1.0))
    return DeviationReport(n, float(R), margin, grid.size, float(dev_a), float(dev_v))


def layer_integral(fn, weight=None, epsabs: float = QUAD_ABS_TOL,
                   breakpoints=()) -> tuple[float, float, int]:
    """Adaptive integral of fn(t) * weight(t) over (-1, 1).

    Substitutes t = sin(u) so endpoint factors (1 - t^2)^{+-1/2} become
    smooth powers of cos(u).  Returns (value, achieved absolute error
    estimate, evaluation count).  Breakpoints are radii in t where the
    weight jumps; the quadrature splits there.
    """
    def integrand(u):
        t = math.sin(u)
        v = float(fn(t)) * math.cos(u)
        if weight is not None:
            v *= float(weight(t))
        return v

    pts = sorted(math.asin(b) for b in breakpoints if -1.0 < b < 1.0)
    val, err, info = quad(integrand, -math.pi / 2, math.pi / 2,
                          epsabs=epsabs, epsrel=1e-12, limit=200,
                          points=pts or None, full_output=True)[:3]
    return val, err, int(info["neval"])
