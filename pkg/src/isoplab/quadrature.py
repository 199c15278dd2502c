"""Shared quadrature machinery: Gauss panels, sphere/ball grids, frames.

Sphere grids use Gauss-Legendre nodes in every polar angle and a uniform
periodic rule in the azimuth, so smooth integrands converge spectrally and
low-order trigonometric modulations are integrated exactly.  All grids are
deterministic for fixed node counts.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

TWO_PI = 2.0 * math.pi


def unit_ball_volume(n: int) -> float:
    """Euclidean volume of the unit ball in R^n."""
    if n < 0:
        raise ValueError("dimension must be nonnegative")
    return math.pi ** (n / 2.0) / math.gamma(n / 2.0 + 1.0)


def unit_sphere_area(n: int) -> float:
    """Surface measure of the unit sphere S^{n-1} in R^n (two points for n = 1)."""
    if n < 1:
        raise ValueError("dimension must be >= 1")
    return n * unit_ball_volume(n)


@lru_cache(maxsize=64)
def _leggauss(n: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(n)
    return x, w


def gauss_nodes(a: float, b: float, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights on [a, b]."""
    x, w = _leggauss(n)
    mid, half = 0.5 * (a + b), 0.5 * (b - a)
    return mid + half * x, half * w


def sphere_grid(n: int, polar_nodes: int = 64, azimuth_nodes: int = 64):
    """Quadrature grid on S^{n-1} subset R^n.

    Returns (points, weights) with points of shape (M, n) and weights summing
    to the sphere area.  S^0 is the two-point set {+1, -1} with unit weights.
    """
    return sphere_band_grid(n, 0.0, math.pi, polar_nodes, azimuth_nodes)


def sphere_band_grid(n: int, polar_lo: float, polar_hi: float,
                     polar_nodes: int = 64, azimuth_nodes: int = 64):
    """Grid on the band {x in S^{n-1} : polar angle from e1 in [lo, hi]}.

    The polar angle is measured from the first coordinate axis.  With
    lo = 0, hi = pi this is the whole sphere; [0, pi/2] is the hemisphere
    {x1 >= 0}.  For n = 1 the band degenerates to the endpoints of S^0 that
    the angular window contains (angle 0 for +1, angle pi for -1).
    """
    if n == 1:
        pts, w = [], []
        if polar_lo <= 0.0:
            pts.append([1.0])
            w.append(1.0)
        if polar_hi >= math.pi:
            pts.append([-1.0])
            w.append(1.0)
        return np.array(pts), np.array(w)
    if n == 2:
        if polar_lo == 0.0 and polar_hi == math.pi:
            # full circle: uniform periodic rule, exact for trig polynomials
            ang = TWO_PI * np.arange(azimuth_nodes) / azimuth_nodes
            pts = np.stack([np.cos(ang), np.sin(ang)], axis=1)
            return pts, np.full(azimuth_nodes, TWO_PI / azimuth_nodes)
        # band = two symmetric arcs; Gauss in the angle
        theta, wt = gauss_nodes(polar_lo, polar_hi, polar_nodes)
        c, s = np.cos(theta), np.sin(theta)
        pts = np.concatenate([np.stack([c, s], axis=1),
                              np.stack([c, -s], axis=1)])
        return pts, np.concatenate([wt, wt])
    theta, wt = gauss_nodes(polar_lo, polar_hi, polar_nodes)
    sub_pts, sub_w = sphere_grid(n - 1, polar_nodes, azimuth_nodes)
    c, s = np.cos(theta), np.sin(theta)
    m = len(sub_pts)
    pts = np.empty((polar_nodes * m, n))
    pts[:, 0] = np.repeat(c, m)
    pts[:, 1:] = (s[:, None, None] * sub_pts[None, :, :]).reshape(-1, n - 1)
    w = ((wt * s ** (n - 2))[:, None] * sub_w[None, :]).ravel()
    return pts, w


def ball_grid(n: int, radial_nodes: int = 64, polar_nodes: int = 64,
              azimuth_nodes: int = 64, polar_lo: float = 0.0,
              polar_hi: float = math.pi):
    """Grid on the unit ball of R^n (optionally restricted to a polar band).

    Returns (points, weights); weights include the r^{n-1} volume factor and
    sum to the (band-restricted) ball volume.
    """
    rho, wr = gauss_nodes(0.0, 1.0, radial_nodes)
    spts, sw = sphere_band_grid(n, polar_lo, polar_hi, polar_nodes, azimuth_nodes)
    pts = (rho[:, None, None] * spts[None, :, :]).reshape(-1, n)
    w = ((wr * rho ** (n - 1))[:, None] * sw[None, :]).ravel()
    return pts, w


def frame_from_axis(axis: np.ndarray, second: np.ndarray | None = None) -> np.ndarray:
    """Deterministic orthonormal frame whose first column is `axis`.

    When `second` is given, the second column is its component orthogonal to
    `axis`, normalized; remaining columns complete the basis via a stable
    Gram-Schmidt sweep over the standard basis.
    """
    axis = np.asarray(axis, dtype=float)
    n = axis.size
    cols = [axis / np.linalg.norm(axis)]
    if second is not None:
        v = np.asarray(second, dtype=float)
        v = v - (v @ cols[0]) * cols[0]
        nv = np.linalg.norm(v)
        if nv < 1e-12:
            raise ValueError("second frame direction is parallel to the axis")
        cols.append(v / nv)
    for k in range(n):
        if len(cols) == n:
            break
        v = np.zeros(n)
        v[k] = 1.0
        for c in cols:
            v = v - (v @ c) * c
        nv = np.linalg.norm(v)
        if nv > 1e-8:
            cols.append(v / nv)
    return np.stack(cols, axis=1)


def halved(value_full, value_half) -> float:
    """Node-halving error proxy: |I_n - I_{n/2}| plus a rounding floor."""
    return abs(value_full - value_half) + 1e-15 * abs(value_full)
