"""Weighted volume and perimeter of the competitor set families.

Three families are supported, all built around a unit ball whose center sits
at distance R > 1 from the origin along a direction theta:

* ``PlainBall``        -- the offset unit ball itself;
* ``CylinderExtended`` -- its far half, a connecting cylinder of radius 1 and
  height delta, and a near half-ball shrunk by the factor (R - delta)/R;
* ``RotationSwept``    -- its trailing half swept by a rotation of angle
  delta about a 2-plane through the origin and the center, together with the
  rotated leading half.

Every boundary is a finite union of closed-form patches (spherical caps,
cylinder walls, flat annuli, swept bands), so perimeters are integrated on
explicit parametrizations rather than through any level-set discretization.
Interfaces interior to a union cancel and are never counted.

Volumes and perimeters are returned as ``MeasureResult`` records carrying the
method tag, an error estimate (node-halving difference for quadrature, one
standard error for Monte-Carlo) and the sample or node count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .defaults import MC_SAMPLES, QUAD_ABS_TOL, RADIAL_NODES, SPHERE_NODES
from .density import Density, RadialDeficit, eval_weight
from .layers import LayerKernelPair, exact_kernels, layer_integral
from .quadrature import (ball_grid, frame_from_axis, gauss_nodes,
                         sphere_band_grid, sphere_grid, unit_ball_volume,
                         unit_sphere_area)

HALF_PI = math.pi / 2


@dataclass(frozen=True)
class MeasureResult:
    """A weighted measure value with provenance.

    ``error_estimate`` is one standard error for Monte-Carlo results and an
    absolute quadrature error proxy otherwise.
    """

    value: float
    method: str                    # "quadrature" | "monte_carlo"
    error_estimate: float
    samples_or_nodes: int
    seed: int | None = None


@dataclass(frozen=True)
class PlainBall:
    dim: int
    offset: float
    direction: tuple[float, ...] | None = None

    def __post_init__(self):
        _check_base(self)


@dataclass(frozen=True)
class CylinderExtended:
    """Far half-ball, bridging cylinder of height delta, shrunk near half."""

    dim: int
    offset: float
    delta: float
    direction: tuple[float, ...] | None = None

    def __post_init__(self):
        _check_base(self)
        if not 0.0 <= self.delta < self.offset - 1.0:
            raise ValueError("delta out of range for the cylinder extension")

    @property
    def shrink(self) -> float:
        return (self.offset - self.delta) / self.offset


@dataclass(frozen=True)
class RotationSwept:
    """Trailing half-ball plus the sweep of the leading half by angle delta."""

    dim: int
    offset: float
    delta: float
    direction: tuple[float, ...] | None = None
    sweep: tuple[float, ...] | None = None

    def __post_init__(self):
        _check_base(self)
        if not 0.0 <= self.delta < HALF_PI:
            raise ValueError("sweep angle out of range")


CompetitorSet = PlainBall | CylinderExtended | RotationSwept


def _check_base(E):
    if E.dim < 2:
        raise ValueError("dimension must be >= 2")
    if not E.offset > 1.0:
        raise ValueError("offset must exceed the unit radius")


def set_frame(E: CompetitorSet) -> np.ndarray:
    """Orthonormal frame: column 0 is the center direction; for swept sets
    column 1 spans the rotation plane."""
    n = E.dim
    direction = np.array(E.direction, dtype=float) if E.direction is not None \
        else np.eye(n)[0]
    second = None
    if isinstance(E, RotationSwept) and E.sweep is not None:
        second = np.array(E.sweep, dtype=float)
    elif isinstance(E, RotationSwept):
        second = np.eye(n)[1] if abs(direction[1]) < 0.9 else np.eye(n)[0]
    return frame_from_axis(direction, second)


# ---------------------------------------------------------------------------
# closed-form patches (local coordinates; column 0 of the frame is e1)
# ---------------------------------------------------------------------------

def sphere_cap_patch(n, radius, center, axis, lo, hi,
                     polar_nodes=SPHERE_NODES, azimuth_nodes=SPHERE_NODES):
    """Quadrature patch on {center + radius*u : angle(u, axis) in [lo, hi]}."""
    pts0, w = sphere_band_grid(n, lo, hi, polar_nodes, azimuth_nodes)
    A = frame_from_axis(np.asarray(axis, dtype=float))
    pts = np.asarray(center, dtype=float) + radius * (pts0 @ A.T)
    return pts, w * radius ** (n - 1)


def ball_cap_patch(n, radius, center, axis, lo, hi,
                   radial_nodes=RADIAL_NODES, polar_nodes=SPHERE_NODES,
                   azimuth_nodes=SPHERE_NODES):
    """Solid patch of the ball restricted to the polar band about ``axis``."""
    pts0, w = ball_grid(n, radial_nodes, polar_nodes, azimuth_nodes, lo, hi)
    A = frame_from_axis(np.asarray(axis, dtype=float))
    pts = np.asarray(center, dtype=float) + radius * (pts0 @ A.T)
    return pts, w * radius ** n


def cylinder_wall_patch(n, R, delta, nodes=SPHERE_NODES):
    """Lateral wall {x1 in [R - delta, R], |x_perp| = 1} in local coords."""
    x1, w1 = gauss_nodes(R - delta, R, max(8, nodes // 4))
    v, wv = sphere_grid(n - 1, nodes, nodes)
    pts = np.empty((x1.size * v.shape[0], n))
    pts[:, 0] = np.repeat(x1, v.shape[0])
    pts[:, 1:] = np.tile(v, (x1.size, 1))
    return pts, (w1[:, None] * wv[None, :]).ravel()


def annulus_patch(n, x1, r_in, r_out, nodes=SPHERE_NODES):
    """Flat ring {x1} x {r_in <= |x_perp| <= r_out} in local coords."""
    rho, wr = gauss_nodes(r_in, r_out, max(8, nodes // 4))
    v, wv = sphere_grid(n - 1, nodes, nodes)
    pts = np.empty((rho.size * v.shape[0], n))
    pts[:, 0] = x1
    pts[:, 1:] = (rho[:, None, None] * v[None, :, :]).reshape(-1, n - 1)
    return pts, ((wr * rho ** (n - 2))[:, None] * wv[None, :]).ravel()


def _meridian_points(n, R, rho_v, phi):
    """Map meridian-disk coordinates (rho*v, phi) to local coordinates."""
    w = R + rho_v[:, 0]
    pts = np.empty((phi.size * rho_v.shape[0], n))
    cos_p, sin_p = np.cos(phi), np.sin(phi)
    pts[:, 0] = (cos_p[:, None] * w[None, :]).ravel()
    pts[:, 1] = (sin_p[:, None] * w[None, :]).ravel()
    if n > 2:
        pts[:, 2:] = np.tile(rho_v[:, 1:], (phi.size, 1))
    return pts, np.tile(w, phi.size)


def swept_band_patch(n, R, phi_lo, phi_hi, nodes=SPHERE_NODES):
    """Lateral surface swept by the meridian circle over [phi_lo, phi_hi]."""
    phi, wp = gauss_nodes(phi_lo, phi_hi, max(8, nodes // 4))
    v, wv = sphere_grid(n - 1, nodes, nodes)
    pts, w_factor = _meridian_points(n, R, v, phi)
    w = (wp[:, None] * wv[None, :]).ravel() * w_factor
    return pts, w


def swept_wedge_patch(n, R, phi_lo, phi_hi, radial_nodes=RADIAL_NODES,
                      nodes=SPHERE_NODES):
    """Solid wedge: meridian disk swept over [phi_lo, phi_hi]."""
    phi, wp = gauss_nodes(phi_lo, phi_hi, max(8, nodes // 4))
    rho, wr = gauss_nodes(0.0, 1.0, radial_nodes)
    v, wv = sphere_grid(n - 1, nodes, nodes)
    rho_v = (rho[:, None, None] * v[None, :, :]).reshape(-1, n - 1)
    w_disk = ((wr * rho ** (n - 2))[:, None] * wv[None, :]).ravel()
    pts, w_factor = _meridian_points(n, R, rho_v, phi)
    w = (wp[:, None] * w_disk[None, :]).ravel() * w_factor
    return pts, w


def integrate_patches(fn, patches, frame=None) -> float:
    """Sum of integral(fn) over patches, mapping local points by ``frame``."""
    total = 0.0
    for pts, w in patches:
        if frame is not None:
            pts = pts @ frame.T
        total += float(np.asarray(fn(pts), dtype=float) @ w)
    return total


# ---------------------------------------------------------------------------
# patch assembly per variant
# ---------------------------------------------------------------------------

def _e1(n):
    v = np.zeros(n)
    v[0] = 1.0
    return v


def _e2(n):
    v = np.zeros(n)
    v[1] = 1.0
    return v


def volume_patches(E: CompetitorSet, nodes=SPHERE_NODES, radial_nodes=RADIAL_NODES):
    """Local-coordinate solid patches covering E with disjoint interiors."""
    n, R = E.dim, E.offset
    c = R * _e1(n)
    if isinstance(E, PlainBall):
        return [ball_cap_patch(n, 1.0, c, _e1(n), 0.0, math.pi, radial_nodes,
                               nodes, nodes)]
    if isinstance(E, CylinderExtended):
        d, k = E.delta, E.shrink
        cl = (R - d) * _e1(n)
        return [
            ball_cap_patch(n, 1.0, c, _e1(n), 0.0, HALF_PI, radial_nodes, nodes, nodes),
            _cyl_interior(n, R, d, radial_nodes, nodes),
            ball_cap_patch(n, k, cl, _e1(n), HALF_PI, math.pi, radial_nodes, nodes, nodes),
        ]
    d = E.delta
    c_rot = R * np.array([math.cos(d), math.sin(d)] + [0.0] * (n - 2))
    axis_rot = np.array([-math.sin(d), math.cos(d)] + [0.0] * (n - 2))
    return [
        ball_cap_patch(n, 1.0, c, _e2(n), HALF_PI, math.pi, radial_nodes, nodes, nodes),
        swept_wedge_patch(n, R, 0.0, d, radial_nodes, nodes),
        ball_cap_patch(n, 1.0, c_rot, axis_rot, 0.0, HALF_PI, radial_nodes, nodes, nodes),
    ]


def _cyl_interior(n, R, delta, radial_nodes, nodes):
    x1, w1 = gauss_nodes(R - delta, R, max(8, nodes // 4))
    bpts, bw = ball_grid(n - 1, radial_nodes, nodes, nodes)
    pts = np.empty((x1.size * bpts.shape[0], n))
    pts[:, 0] = np.repeat(x1, bpts.shape[0])
    pts[:, 1:] = np.tile(bpts, (x1.size, 1))
    return pts, (w1[:, None] * bw[None, :]).ravel()


def surface_patches(E: CompetitorSet, nodes=SPHERE_NODES):
    """Local-coordinate essential-boundary patches of E.

    Interior interfaces (the flat meridian faces of the swept family, the
    matching disk faces of the cylinder family) cancel and are omitted; the
    only flat piece that survives is the exposed annulus of the cylinder
    variant where the shrunk half-ball meets the full-radius face.
    """
    n, R = E.dim, E.offset
    c = R * _e1(n)
    if isinstance(E, PlainBall):
        return [sphere_cap_patch(n, 1.0, c, _e1(n), 0.0, math.pi, nodes, nodes)]
    if isinstance(E, CylinderExtended):
        d, k = E.delta, E.shrink
        cl = (R - d) * _e1(n)
        patches = [
            sphere_cap_patch(n, 1.0, c, _e1(n), 0.0, HALF_PI, nodes, nodes),
            cylinder_wall_patch(n, R, d, nodes),
            sphere_cap_patch(n, k, cl, _e1(n), HALF_PI, math.pi, nodes, nodes),
        ]
        if k < 1.0:
            patches.append(annulus_patch(n, R - d, k, 1.0, nodes))
        return patches
    d = E.delta
    c_rot = R * np.array([math.cos(d), math.sin(d)] + [0.0] * (n - 2))
    axis_rot = np.array([-math.sin(d), math.cos(d)] + [0.0] * (n - 2))
    return [
        sphere_cap_patch(n, 1.0, c, _e2(n), HALF_PI, math.pi, nodes, nodes),
        swept_band_patch(n, R, 0.0, d, nodes),
        sphere_cap_patch(n, 1.0, c_rot, axis_rot, 0.0, HALF_PI, nodes, nodes),
    ]


# ---------------------------------------------------------------------------
# membership and bounding boxes (for rejection sampling)
# ---------------------------------------------------------------------------

def contains_local(E: CompetitorSet, u: np.ndarray) -> np.ndarray:
    """Membership test in local coordinates, shape (m, n) -> bool (m,)."""
    n, R = E.dim, E.offset
    if isinstance(E, PlainBall):
        du = u.copy()
        du[:, 0] -= R
        return np.einsum("ij,ij->i", du, du) <= 1.0
    if isinstance(E, CylinderExtended):
        d, k = E.delta, E.shrink
        du = u.copy()
        du[:, 0] -= R
        right = (np.einsum("ij,ij->i", du, du) <= 1.0) & (u[:, 0] >= R)
        perp2 = np.einsum("ij,ij->i", u[:, 1:], u[:, 1:])
        mid = (u[:, 0] >= R - d) & (u[:, 0] <= R) & (perp2 <= 1.0)
        dl = u.copy()
        dl[:, 0] -= R - d
        left = (np.einsum("ij,ij->i", dl, dl) <= k * k) & (u[:, 0] <= R - d)
        return right | mid | left
    d = E.delta
    phi = np.arctan2(u[:, 1], u[:, 0])
    w = np.hypot(u[:, 0], u[:, 1])
    perp2 = np.einsum("ij,ij->i", u[:, 2:], u[:, 2:]) if n > 2 else 0.0
    base = u.copy()
    base[:, 0] -= R
    in_base = np.einsum("ij,ij->i", base, base) <= 1.0
    rot = u.copy()
    rot[:, 0] -= R * math.cos(d)
    rot[:, 1] -= R * math.sin(d)
    in_rot = np.einsum("ij,ij->i", rot, rot) <= 1.0
    in_wedge = (w - R) ** 2 + perp2 <= 1.0
    return np.where(phi <= 0.0, in_base,
                    np.where(phi >= d, in_rot, in_wedge))


def bounding_box_local(E: CompetitorSet) -> tuple[np.ndarray, np.ndarray]:
    n, R = E.dim, E.offset
    lo = -np.ones(n)
    hi = np.ones(n)
    if isinstance(E, PlainBall):
        lo[0], hi[0] = R - 1.0, R + 1.0
    elif isinstance(E, CylinderExtended):
        lo[0], hi[0] = R - E.delta - E.shrink, R + 1.0
    else:
        d = E.delta
        lo[0], hi[0] = R * math.cos(d) - 1.0, R + 1.0
        hi[1] = R * math.sin(d) + 1.0
    return lo, hi


# ---------------------------------------------------------------------------
# measures
# ---------------------------------------------------------------------------

def _weight_of(d: Density | Callable) -> Callable:
    return (lambda x: eval_weight(d, x)) if isinstance(d, Density) else d


def set_measures(E: CompetitorSet, d: Density, method: str = "quadrature",
                 budget: int | None = None, seed: int | None = None,
                 nodes: int = SPHERE_NODES):
    """Weighted perimeter and volume of a competitor set.

    Quadrature integrates the weight on the closed-form patches; Monte-Carlo
    uses rejection sampling in the local bounding box for the volume and
    uniform parametric sampling of the boundary patches for the perimeter.
    """
    fn = _weight_of(d)
    if method == "quadrature":
        F = set_frame(E)
        per, vol, n_nodes = [], [], 0
        for nn in (max(8, nodes // 2), nodes):
            sp = surface_patches(E, nn)
            vp = volume_patches(E, nn, max(8, nn))
            per.append(integrate_patches(fn, sp, F))
            vol.append(integrate_patches(fn, vp, F))
            n_nodes = sum(p[1].size for p in sp) + sum(p[1].size for p in vp)
        p_err = abs(per[1] - per[0]) + 1e-15 * abs(per[1])
        v_err = abs(vol[1] - vol[0]) + 1e-15 * abs(vol[1])
        return (MeasureResult(per[1], "quadrature", p_err, n_nodes),
                MeasureResult(vol[1], "quadrature", v_err, n_nodes))
    if method != "monte_carlo":
        raise ValueError(f"unknown method {method!r}")
    budget = MC_SAMPLES if budget is None else int(budget)
    if budget < 10_000:
        raise ValueError("monte_carlo budget must be at least 10^4 samples")
    if seed is None:
        raise ValueError("monte_carlo requires an explicit seed")
    return (mc_perimeter(E, fn, budget, seed),
            mc_volume(E, fn, budget, seed))


def mc_volume(E: CompetitorSet, fn, samples: int, seed: int) -> MeasureResult:
    """Rejection sampling of the weighted volume in the local bounding box."""
    rng = np.random.default_rng(seed)
    F = set_frame(E)
    lo, hi = bounding_box_local(E)
    box = float(np.prod(hi - lo))
    total, total2 = 0.0, 0.0
    chunk = 200_000
    done = 0
    while done < samples:
        m = min(chunk, samples - done)
        u = rng.uniform(lo, hi, size=(m, E.dim))
        inside = contains_local(E, u)
        vals = np.zeros(m)
        if np.any(inside):
            vals[inside] = np.asarray(fn(u[inside] @ F.T), dtype=float)
        total += float(vals.sum())
        total2 += float((vals * vals).sum())
        done += m
    mean = total / samples
    var = max(total2 / samples - mean * mean, 0.0)
    return MeasureResult(box * mean, "monte_carlo",
                         box * math.sqrt(var / samples), samples, seed)


def _mc_surface_parts(E: CompetitorSet):
    """(measure, sampler) pairs: sampler(rng, m) -> (local points, integrand factor)."""
    n, R = E.dim, E.offset
    area_sphere = unit_sphere_area(n)

    def hemi(center, axis, radius, sign):
        c = np.asarray(center, dtype=float)
        ax = np.asarray(axis, dtype=float)

        def sample(rng, m):
            u = rng.standard_normal((m, n))
            u /= np.linalg.norm(u, axis=1, keepdims=True)
            flip = sign * (u @ ax) < 0
            u[flip] -= 2.0 * np.outer(u[flip] @ ax, ax)
            return c + radius * u, np.ones(m)
        return 0.5 * area_sphere * radius ** (n - 1), sample

    if isinstance(E, PlainBall):
        c = R * _e1(n)

        def sample(rng, m):
            u = rng.standard_normal((m, n))
            u /= np.linalg.norm(u, axis=1, keepdims=True)
            return c + u, np.ones(m)
        return [(area_sphere, sample)]

    if isinstance(E, CylinderExtended):
        d, k = E.delta, E.shrink
        parts = [hemi(R * _e1(n), _e1(n), 1.0, +1),
                 hemi((R - d) * _e1(n), _e1(n), k, -1)]

        def wall(rng, m):
            x1 = rng.uniform(R - d, R, size=m)
            v = rng.standard_normal((m, n - 1))
            v /= np.linalg.norm(v, axis=1, keepdims=True)
            pts = np.concatenate([x1[:, None], v], axis=1)
            return pts, np.ones(m)
        parts.append((d * unit_sphere_area(n - 1), wall))

        if k < 1.0:
            def ring(rng, m):
                u01 = rng.uniform(size=m)
                rho = (k ** (n - 1) + u01 * (1.0 - k ** (n - 1))) ** (1.0 / (n - 1))
                v = rng.standard_normal((m, n - 1))
                v /= np.linalg.norm(v, axis=1, keepdims=True)
                pts = np.concatenate([np.full((m, 1), R - d), rho[:, None] * v],
                                     axis=1)
                return pts, np.ones(m)
            parts.append((unit_ball_volume(n - 1) * (1.0 - k ** (n - 1)), ring))
        return parts

    d = E.delta
    c_rot = R * np.array([math.cos(d), math.sin(d)] + [0.0] * (n - 2))
    axis_rot = np.array([-math.sin(d), math.cos(d)] + [0.0] * (n - 2))
    parts = [hemi(R * _e1(n), _e2(n), 1.0, -1),
             hemi(c_rot, axis_rot, 1.0, +1)]

    def band(rng, m):
        phi = rng.uniform(0.0, d, size=m)
        v = rng.standard_normal((m, n - 1))
        v /= np.linalg.norm(v, axis=1, keepdims=True)
        w = R + v[:, 0]
        pts = np.empty((m, n))
        pts[:, 0] = w * np.cos(phi)
        pts[:, 1] = w * np.sin(phi)
        if n > 2:
            pts[:, 2:] = v[:, 1:]
        return pts, w
    parts.append((d * unit_sphere_area(n - 1), band))
    return parts


def mc_perimeter(E: CompetitorSet, fn, samples: int, seed: int) -> MeasureResult:
    """Uniform parametric sampling of the boundary patches.

    The budget is split across patches proportionally to their parametric
    measure; patch estimates and variances add.
    """
    rng = np.random.default_rng(seed)
    F = set_frame(E)
    parts = _mc_surface_parts(E)
    measures = np.array([p[0] for p in parts])
    alloc = np.maximum((samples * measures / measures.sum()).astype(int), 1000)
    value, var = 0.0, 0.0
    for (measure, sampler), m in zip(parts, alloc):
        pts, factor = sampler(rng, int(m))
        vals = np.asarray(fn(pts @ F.T), dtype=float) * factor
        value += measure * float(vals.mean())
        var += (measure ** 2) * float(vals.var()) / m
    return MeasureResult(value, "monte_carlo", math.sqrt(var),
                         int(alloc.sum()), seed)


# ---------------------------------------------------------------------------
# deficit measures through the layer kernels, mean density, profile bound
# ---------------------------------------------------------------------------

def ball_deficit_measures(g: RadialDeficit, n: int, R: float,
                          kernels: LayerKernelPair | None = None,
                          epsabs: float = QUAD_ABS_TOL):
    """Deficit-weighted perimeter and volume of the offset unit ball.

    P = integral area_kernel(t) g(R + t) dt and likewise for the volume, via
    the endpoint-substituted adaptive quadrature.
    """
    if not R > 1:
        raise ValueError("offset must exceed 1")
    if kernels is None:
        kernels = exact_kernels(n, R)
    if kernels.dim != n:
        raise ValueError("kernel dimension mismatch")
    if kernels.kind == "exact" and abs(kernels.offset - R) > 1e-12:
        raise ValueError("exact kernels built for a different offset")
    brk = tuple(b - R for b in g.breakpoints)

    def weight(t):
        return float(np.asarray(g.profile(R + t)))

    p, p_err, p_n = layer_integral(kernels.area_kernel, weight, epsabs, brk)
    v, v_err, v_n = layer_integral(kernels.volume_kernel, weight, epsabs, brk)
    return (MeasureResult(p, "quadrature", p_err, p_n),
            MeasureResult(v, "quadrature", v_err, v_n))


def mean_density(P: float, V: float, n: int) -> float:
    """The constant weight under which a ball of volume V has perimeter P:

    rho = (P / (n V^{(n-1)/n}))^n / omega_n.
    """
    if not V > 0:
        raise ValueError("volume must be positive")
    if P < 0:
        raise ValueError("perimeter must be nonnegative")
    return (P / (n * V ** ((n - 1) / n))) ** n / unit_ball_volume(n)


def profile_upper_bound(P_E: float, V_E: float, V: float, a: float, n: int) -> float:
    """Perimeter bound P_E + n (omega_n a)^{1/n} (V - V_E)^{(n-1)/n}: the cost
    of realizing volume V as E plus a ball escaping to the limiting weight."""
    if V < V_E or V_E < 0:
        raise ValueError("need V >= V_E >= 0")
    gap = V - V_E
    return P_E + n * (unit_ball_volume(n) * a) ** (1.0 / n) * gap ** ((n - 1) / n)


def weighted_ball_measures(fn, n: int, center, radius: float = 1.0,
                           nodes: int = SPHERE_NODES,
                           radial_nodes: int = RADIAL_NODES):
    """(perimeter, volume) of an arbitrary ball under an arbitrary weight.

    Plain floats; used for direction scans and rescale cross-checks where the
    full MeasureResult bookkeeping is not needed.
    """
    c = np.asarray(center, dtype=float)
    spts, sw = sphere_cap_patch(n, radius, c, _e1(n), 0.0, math.pi, nodes, nodes)
    bpts, bw = ball_cap_patch(n, radius, c, _e1(n), 0.0, math.pi,
                              radial_nodes, nodes, nodes)
    P = float(np.asarray(fn(spts), dtype=float) @ sw)
    V = float(np.asarray(fn(bpts), dtype=float) @ bw)
    return P, V
