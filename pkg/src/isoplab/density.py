"""Weight functions on R^N with a finite positive limit at infinity.

A ``Density`` wraps a nonnegative weight f with its limit value a, the radius
beyond which f <= a is declared, and a radial flag.  The module provides
spherical averaging, the radial deficit profile a - mean(f), sampling-based
validation of the limiting behavior, and the volume-normalizing rescale that
maps the limit to 1 and a prescribed weighted volume to the unit-ball volume.

Only continuous closed-form weights are representable here; regularity
hypotheses that cannot be probed by sampling (local integrability, lower
semicontinuity) are documented assumptions, not checks.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .defaults import SPHERE_NODES
from .quadrature import sphere_grid, unit_ball_volume


class ConfigError(ValueError):
    """Malformed density or experiment configuration."""


@dataclass(frozen=True)
class Density:
    """A weight on R^N converging to ``limit_a`` at infinity from below.

    ``weight`` must accept arrays of shape (..., dim) and return shape (...).
    ``envelope_radius`` is the radius beyond which weight <= limit_a holds.

    ``deficit`` optionally evaluates a - weight in closed form.  Far from the
    origin the deficit drops below the rounding floor of the weight itself
    (a - float(f) returns exactly zero once f is within an ulp of a), so
    every far-field computation uses this callable when present and falls
    back to the subtraction otherwise.
    """

    dim: int
    weight: Callable[[np.ndarray], np.ndarray]
    limit_a: float
    envelope_radius: float = 0.0
    radial: bool = False
    label: str = "density"
    deficit: Callable[[np.ndarray], np.ndarray] | None = None

    def __post_init__(self):
        if self.dim < 2:
            raise ConfigError("dim: must be >= 2")
        if not self.limit_a > 0:
            raise ConfigError("a: must be positive")
        if self.envelope_radius < 0:
            raise ConfigError("envelope_radius: must be nonnegative")


def deficit_weight(d: Density) -> Callable[[np.ndarray], np.ndarray]:
    """Pointwise deficit a - f as a callable, preferring the closed form."""
    if d.deficit is not None:
        return d.deficit
    a, f = d.limit_a, d.weight

    def g(x):
        return a - np.asarray(f(x), dtype=float)
    return g


@dataclass(frozen=True)
class RadialDeficit:
    """Radial profile of the deficit below the limit: r -> a - mean_{|x|=r} f.

    ``support_hint`` marks a radius beyond which the profile vanishes
    identically (when known); ``breakpoints`` lists radii where the profile
    is not smooth, so quadratures can split there.
    """

    dim: int
    profile: Callable[[np.ndarray], np.ndarray]
    support_hint: float | None = None
    node_count: int = SPHERE_NODES
    breakpoints: tuple[float, ...] = ()


def eval_weight(d: Density, x) -> np.ndarray | float:
    """Evaluate the weight at one point or an array of points.

    Raises if the input or the result is not finite (a malformed density).
    """
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != d.dim:
        raise ValueError(f"point dimension {x.shape[-1]} != density dim {d.dim}")
    if not np.all(np.isfinite(x)):
        raise ValueError("non-finite evaluation point")
    v = np.asarray(d.weight(x), dtype=float)
    if not np.all(np.isfinite(v)):
        raise ValueError(f"density {d.label!r} returned a non-finite value")
    return v if v.ndim else float(v)


def radial_average(d: Density, r, node_count: int = SPHERE_NODES):
    """Mean of the weight over the sphere of radius r (scalar or array r).

    Radial densities short-circuit to a single on-axis evaluation.  Otherwise
    the mean is taken over a product Gauss grid with ``node_count`` nodes per
    angle, which integrates the shipped trigonometric modulations exactly.
    """
    if node_count < 16:
        raise ValueError("node_count must be at least 16")
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise ValueError("radius must be nonnegative")
    scalar = r.ndim == 0
    rr = np.atleast_1d(r)
    if d.radial:
        pts = np.zeros((rr.size, d.dim))
        pts[:, 0] = rr
        out = np.atleast_1d(eval_weight(d, pts))
    else:
        dirs, w = sphere_grid(d.dim, node_count, node_count)
        pts = rr[:, None, None] * dirs[None, :, :]
        vals = eval_weight(d, pts.reshape(-1, d.dim)).reshape(rr.size, -1)
        out = vals @ w / w.sum()
    return float(out[0]) if scalar else out


def deficit_profile(d: Density, node_count: int = SPHERE_NODES) -> RadialDeficit:
    """Deficit of the radial average below the limit: r -> a - mean f.

    Evaluated as the spherical mean of the pointwise deficit, which is the
    same number but stays accurate when the deficit is far below the weight's
    rounding floor.
    """
    g = deficit_weight(d)

    def profile(r):
        r = np.asarray(r, dtype=float)
        scalar = r.ndim == 0
        rr = np.atleast_1d(r)
        if d.radial:
            pts = np.zeros((rr.size, d.dim))
            pts[:, 0] = rr
            out = np.asarray(g(pts), dtype=float)
        else:
            dirs, w = sphere_grid(d.dim, node_count, node_count)
            pts = rr[:, None, None] * dirs[None, :, :]
            vals = np.asarray(g(pts.reshape(-1, d.dim)),
                              dtype=float).reshape(rr.size, -1)
            out = vals @ w / w.sum()
        return float(out[0]) if scalar else out

    return RadialDeficit(dim=d.dim, profile=profile, node_count=node_count)


@dataclass(frozen=True)
class SampleSpec:
    """Where to probe a density for convergence-from-below validation."""

    radii: Sequence[float]
    n_directions: int = 64
    decay_radius: float = 50.0
    decay_bound: float = 0.01
    tol: float = 1e-12


def default_sample_spec(d: Density) -> SampleSpec:
    r0 = max(d.envelope_radius, 1.0)
    radii = tuple(float(r) for r in np.linspace(r0, 20.0 * r0, 25))
    return SampleSpec(radii=radii, decay_radius=max(10.0 * d.envelope_radius, 50.0))


@dataclass(frozen=True)
class ConvergenceReport:
    """Sampling report for the converging-from-below hypothesis."""

    passed: bool
    violations: tuple[tuple[float, int, float], ...]   # (radius, dir index, f)
    decay_radius: float
    decay_measured: float
    decay_bound: float
    samples: int


def validate_convergence(d: Density, spec: SampleSpec | None = None) -> ConvergenceReport:
    """Probe f <= a beyond the envelope radius and the decay of |f - a|.

    Returns a report rather than raising: a violation sets ``passed`` False
    and is listed with its sample location.
    """
    spec = spec or default_sample_spec(d)
    dirs, _ = sphere_grid(d.dim, max(8, spec.n_directions // 8), spec.n_directions)
    violations = []
    count = 0
    for r in spec.radii:
        if r < d.envelope_radius:
            continue
        vals = np.atleast_1d(eval_weight(d, r * dirs))
        count += vals.size
        bad = np.nonzero(vals > d.limit_a + spec.tol)[0]
        for i in bad[:16]:
            violations.append((float(r), int(i), float(vals[i])))
    # measure decay as the spherical mean of |a - f|, in deficit space when
    # available so tiny tails are reported at full precision
    g = deficit_weight(d)
    probe = spec.decay_radius * dirs
    decay = float(np.mean(np.abs(np.asarray(g(probe), dtype=float))))
    passed = not violations and decay <= spec.decay_bound
    return ConvergenceReport(passed, tuple(violations), spec.decay_radius,
                             float(decay), spec.decay_bound, count)


def rescale(d: Density, target_volume: float) -> tuple[Density, float]:
    """Normalize the limit to 1 and a given weighted volume to omega_N.

    Returns (new density, lam) with new weight x -> f(lam * x) / a and
    lam = (target_volume / (a * omega_N))^{1/N}.  A region of f-volume
    ``target_volume`` maps under x -> x / lam to a region of new-volume
    omega_N; lam is recorded for that coordinate mapping.
    """
    if not target_volume > 0:
        raise ValueError("target volume must be positive")
    a, n = d.limit_a, d.dim
    lam = (target_volume / (a * unit_ball_volume(n))) ** (1.0 / n)
    inner = d.weight

    def weight(x):
        return np.asarray(inner(np.asarray(x, dtype=float) * lam), dtype=float) / a

    new_deficit = None
    if d.deficit is not None:
        inner_g = d.deficit

        def new_deficit(x):
            return np.asarray(inner_g(np.asarray(x, dtype=float) * lam),
                              dtype=float) / a

    out = Density(dim=n, weight=weight, limit_a=1.0,
                  envelope_radius=d.envelope_radius / lam, radial=d.radial,
                  label=f"{d.label}|rescaled", deficit=new_deficit)
    return out, float(lam)


# ---------------------------------------------------------------------------
# Registered closed-form families (config surface)
# ---------------------------------------------------------------------------

FAMILIES = ("constant", "radial_exp", "radial_power", "angular_mod")


def _norms(x):
    return np.linalg.norm(np.asarray(x, dtype=float), axis=-1)


def density_from_config(cfg: dict) -> Density:
    """Build a Density from a config record.

    Schema: {"family": one of constant | radial_exp | radial_power |
    angular_mod, "dim": N, "a": a, "params": {...}, "envelope_radius": R0}.

    Families (r = |x|, theta = angle from the first axis):
      constant      f = a
      radial_exp    f = a (1 - exp(-c r))                      params: c
      radial_power  f = a (1 - (1 + r)^-p)                     params: p
      angular_mod   f = a max(0, 1 - exp(-c r)(1 + eta cos(k theta)))
                                                               params: eta, k, c
    The angular family is clamped at zero near the origin where the
    modulation would otherwise push the weight negative.
    """
    if not isinstance(cfg, dict):
        raise ConfigError("config: expected a JSON object")
    for key in ("family", "dim", "a"):
        if key not in cfg:
            raise ConfigError(f"{key}: required")
    family = cfg["family"]
    if family not in FAMILIES:
        raise ConfigError(f"family: unknown {family!r}, expected one of {FAMILIES}")
    try:
        dim = int(cfg["dim"])
    except (TypeError, ValueError):
        raise ConfigError("dim: must be an integer") from None
    a = float(cfg["a"])
    r0 = float(cfg.get("envelope_radius", 0.0))
    params = dict(cfg.get("params", {}))

    if family == "constant":
        def weight(x):
            return np.full(np.asarray(x, dtype=float).shape[:-1], a)

        def deficit(x):
            return np.zeros(np.asarray(x, dtype=float).shape[:-1])
        radial = True
    elif family == "radial_exp":
        c = float(params.get("c", 1.0))
        if c <= 0:
            raise ConfigError("params.c: must be positive")

        def weight(x):
            return a * (1.0 - np.exp(-c * _norms(x)))

        def deficit(x):
            return a * np.exp(-c * _norms(x))
        radial = True
    elif family == "radial_power":
        p = float(params.get("p", 2.0))
        if p <= 0:
            raise ConfigError("params.p: must be positive")

        def weight(x):
            return a * (1.0 - (1.0 + _norms(x)) ** (-p))

        def deficit(x):
            return a * (1.0 + _norms(x)) ** (-p)
        radial = True
    else:
        eta = float(params.get("eta", 0.5))
        k = int(params.get("k", 1))
        c = float(params.get("c", 1.0))
        if not 0 <= eta <= 1:
            raise ConfigError("params.eta: must lie in [0, 1]")
        if c <= 0:
            raise ConfigError("params.c: must be positive")

        def _modulation(x):
            x = np.asarray(x, dtype=float)
            r = _norms(x)
            with np.errstate(invalid="ignore", divide="ignore"):
                cos_t = np.where(r > 0, x[..., 0] / np.where(r > 0, r, 1.0), 1.0)
            theta = np.arccos(np.clip(cos_t, -1.0, 1.0))
            return r, np.exp(-c * r) * (1.0 + eta * np.cos(k * theta))

        def weight(x):
            _, mod = _modulation(x)
            return a * np.maximum(1.0 - mod, 0.0)

        def deficit(x):
            # where the weight clamps at zero the deficit saturates at a
            _, mod = _modulation(x)
            return a * np.minimum(mod, 1.0)
        radial = False

    label = cfg.get("label", family)
    return Density(dim=dim, weight=weight, limit_a=a, envelope_radius=r0,
                   radial=radial, label=str(label), deficit=deficit)
