"""Sliding-kernel sign certificates.

Given a kernel k on (-1, 1) and a nonnegative deficit profile g vanishing at
infinity, the correlation

    corr(R) = integral_{-1}^{1} k(t) g(R + t) dt

admits arbitrarily large translates R with corr(R) >= 0 whenever the kernel
is admissible: its running integral from -1 must vanish over the whole
interval and stay strictly positive inside.  Two kinds are supported:

* ``direct``     -- the admissibility conditions apply to the kernel itself;
* ``derivative`` -- they apply to its primitive, which must also vanish at
  t = 1.  The built-in derivative kernel is the layer-area kernel minus N
  times the layer-volume kernel; translates where its correlation is
  nonnegative certify that the offset ball's deficit perimeter dominates N
  times its deficit volume.

The search is a certified grid scan: every evaluated (R, corr) pair is
recorded, the first qualifying translate is returned, and a sign change
between grid neighbors is refined by bisection.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .defaults import DEGENERACY_TOL, ENDPOINT_MARGIN, QUAD_ABS_TOL, SCAN_STEP
from .density import RadialDeficit
from .layers import asymptotic_kernels, layer_integral
from .quadrature import gauss_nodes, unit_ball_volume


@dataclass(frozen=True)
class SlidingKernel:
    """Kernel on (-1, 1) with the data needed for admissibility checks.

    ``values`` is the kernel; for derivative kind, ``primitive`` is its
    running integral from -1 and ``running`` the closed-form running integral
    of the primitive when available (used by fast admissibility checks).
    """

    kind: str                                  # "direct" | "derivative"
    dim: int | None
    values: Callable[[np.ndarray], np.ndarray]
    primitive: Callable[[np.ndarray], np.ndarray] | None = None
    running: Callable[[np.ndarray], np.ndarray] | None = None
    label: str = "kernel"


def excess_kernel(n: int) -> SlidingKernel:
    """Layer-area kernel minus n times the layer-volume kernel.

    Both primitive and its running integral come out in closed form:

        primitive(t) = -omega_{n-1} t (1 - t^2)^{(n-1)/2}
        running(s)   =  omega_{n-1} (1 - s^2)^{(n+1)/2} / (n + 1)

    so primitive(+-1) = 0 and the running integral is positive inside.
    """
    asym = asymptotic_kernels(n)
    w = unit_ball_volume(n - 1)

    def values(t):
        return asym.area_kernel(t) - n * asym.volume_kernel(t)

    def primitive(t):
        t = np.asarray(t, dtype=float)
        return -w * t * (1.0 - t * t) ** ((n - 1) / 2.0)

    def running(s):
        s = np.asarray(s, dtype=float)
        return w * (1.0 - s * s) ** ((n + 1) / 2.0) / (n + 1)

    return SlidingKernel("derivative", n, values, primitive, running,
                         label=f"excess[{n}]")


def direct_kernel(fn, label: str = "user") -> SlidingKernel:
    """Wrap a plain kernel whose own running integral is sign-checked."""
    return SlidingKernel("direct", None, fn, label=label)


def _running_integral(fn, grid: np.ndarray, panel_nodes: int = 12) -> np.ndarray:
    """Cumulative integral of fn from -1 to each grid point (composite Gauss)."""
    edges = np.concatenate([[-1.0], grid])
    out = np.empty(grid.size)
    acc = 0.0
    for i in range(grid.size):
        x, w = gauss_nodes(edges[i], edges[i + 1], panel_nodes)
        acc += float(np.asarray(fn(x), dtype=float) @ w)
        out[i] = acc
    return out


@dataclass(frozen=True)
class AdmissibilityReport:
    integral_zero: bool
    positive_inside: bool
    primitive_vanishes: bool      # trivially True for direct kernels
    integral_value: float
    min_running: float
    primitive_at_one: float
    grid_size: int

    @property
    def passed(self) -> bool:
        return self.integral_zero and self.positive_inside and self.primitive_vanishes


def check_admissibility(k: SlidingKernel, grid: np.ndarray | None = None,
                        margin: float = ENDPOINT_MARGIN,
                        tol: float = 1e-10) -> AdmissibilityReport:
    """Verify the sign conditions on a dense grid of (-1, 1).

    Checks: the checked function (kernel for direct kind, primitive for
    derivative kind) integrates to zero over (-1, 1); its running integral is
    strictly positive at every interior grid point; for derivative kind the
    primitive also vanishes at t = 1.
    """
    if grid is None:
        grid = np.linspace(-1.0 + margin, 1.0 - margin, 10_001)
    grid = np.asarray(grid, dtype=float)
    checked = k.primitive if k.kind == "derivative" else k.values
    if checked is None:
        raise ValueError("derivative kernel lacks a primitive")
    if k.running is not None:
        running = np.asarray(k.running(grid), dtype=float)
        total = float(k.running(1.0))
    else:
        running = _running_integral(checked, grid)
        x, w = gauss_nodes(grid[-1], 1.0, 24)
        total = running[-1] + float(np.asarray(checked(x), dtype=float) @ w)
    prim_one = 0.0
    if k.kind == "derivative":
        val, _, _ = layer_integral(k.values, epsabs=1e-12)
        prim_one = val
    return AdmissibilityReport(
        integral_zero=abs(total) <= tol,
        positive_inside=bool(np.all(running > 0.0)),
        primitive_vanishes=(k.kind == "direct" or abs(prim_one) <= 1e-10),
        integral_value=total,
        min_running=float(running.min()),
        primitive_at_one=prim_one,
        grid_size=grid.size,
    )


def correlation(k: SlidingKernel, g: RadialDeficit, R: float,
                epsabs: float = QUAD_ABS_TOL) -> float:
    """corr(R) = integral of kernel(t) g(R + t) over (-1, 1)."""
    brk = tuple(b - R for b in g.breakpoints)
    val, _, _ = layer_integral(k.values, lambda t: float(np.asarray(g.profile(R + t))),
                               epsabs, brk)
    return val


@dataclass(frozen=True)
class SignSearchOutcome:
    found: bool
    R: float
    correlation: float
    scan: tuple[tuple[float, float], ...]
    degenerate: bool              # deficit vanished on the whole scan window
    strict: bool                  # correlation exceeds the strictness floor


def _tail_is_zero(g: RadialDeficit, lo: float, hi: float, tol=DEGENERACY_TOL) -> bool:
    if g.support_hint is not None and lo >= g.support_hint:
        return True
    r = np.linspace(max(lo, 0.0), hi, 512)
    return bool(np.all(np.abs(np.asarray(g.profile(r), dtype=float)) <= tol))


def sliding_sign_search(k: SlidingKernel, g: RadialDeficit, R_min: float,
                        R_max: float, step: float = SCAN_STEP,
                        refine_bisections: int = 40) -> SignSearchOutcome:
    """Scan translates R in [R_min, R_max] for a nonnegative correlation.

    Returns the first grid point with corr >= 0; when the previous grid value
    was negative the crossing is sharpened by bisection and the refined
    translate is returned instead.  A profile that vanishes identically on
    (R_min - 1, R_max + 1) short-circuits to the degenerate outcome.  If no
    grid point qualifies the full scan is returned with found = False, which
    flags an inadmissible kernel, a non-vanishing deficit, or R_max too small.
    """
    if R_min <= 1.0:
        raise ValueError("R_min must exceed 1")
    if R_max < R_min:
        raise ValueError("R_max must be >= R_min")
    if _tail_is_zero(g, R_min - 1.0, R_max + 1.0):
        return SignSearchOutcome(True, float(R_min), 0.0, ((float(R_min), 0.0),),
                                 True, False)
    grid = np.arange(R_min, R_max + 0.5 * step, step)
    scan: list[tuple[float, float]] = []
    prev: tuple[float, float] | None = None
    for R in grid:
        c = correlation(k, g, float(R))
        scan.append((float(R), c))
        if c >= 0.0:
            R_found, c_found = float(R), c
            if prev is not None and prev[1] < 0.0:
                lo, hi = prev[0], float(R)
                for _ in range(refine_bisections):
                    mid = 0.5 * (lo + hi)
                    cm = correlation(k, g, mid)
                    if cm >= 0.0:
                        hi, R_found, c_found = mid, mid, cm
                    else:
                        lo = mid
            return SignSearchOutcome(True, R_found, c_found, tuple(scan),
                                     False, c_found > 1e-12)
        prev = (float(R), c)
    return SignSearchOutcome(False, float("nan"), float("nan"), tuple(scan),
                             False, False)


def averaging_identity_residual(k: SlidingKernel, g: RadialDeficit,
                                R1: float, R2: float) -> tuple[float, float, float]:
    """Residual of the averaged-translate identity behind the sign search.

    For R2 >= R1 + 2 and a kernel integrating to zero,

        integral_{R1}^{R2} corr(R) dR
          = integral_{R1-1}^{R1+1} g(s) A(s - R1) ds
          + integral_{R2-1}^{R2+1} g(s) B(s - R2) ds,

    with A(s) the running integral of the kernel from -1 and B(s) the
    remaining integral up to 1.  Returns (lhs, rhs, |lhs - rhs|).
    """
    if R2 < R1 + 2.0:
        raise ValueError("need R2 >= R1 + 2")
    from scipy.integrate import quad

    lhs, _ = quad(lambda R: correlation(k, g, R), R1, R2,
                  epsabs=1e-11, epsrel=1e-11, limit=200)

    if k.kind == "derivative" and k.primitive is not None:
        A = k.primitive
    else:
        def A(sig):
            # running integral in the substituted variable, accurate to ~1e-12
            hi = math.asin(min(max(float(sig), -1.0), 1.0))
            val, _ = quad(lambda u: float(k.values(math.sin(u))) * math.cos(u),
                          -math.pi / 2, hi, epsabs=1e-13, epsrel=1e-13, limit=200)
            return val

    total, _, _ = layer_integral(k.values, epsabs=1e-13)

    def left(s):
        return float(np.asarray(g.profile(s))) * float(A(s - R1))

    def right(s):
        return float(np.asarray(g.profile(s))) * (total - float(A(s - R2)))

    r1, _ = quad(left, R1 - 1.0, R1 + 1.0, epsabs=1e-12, epsrel=1e-12, limit=200)
    r2, _ = quad(right, R2 - 1.0, R2 + 1.0, epsabs=1e-12, epsrel=1e-12, limit=200)
    rhs = r1 + r2
    return lhs, rhs, abs(lhs - rhs)
