"""Radial spatial load-density model and its integration to total load.

A load profile is a sum of components, each a radial Gaussian bump
``P * exp(-a * (r - r_m)^2)`` modulated by a peak-normalized daily time
profile ``beta(t)``. Total load integrates the density over an annulus
``[r0, r1]`` (polar area element ``2*pi*r``) and a time interval using
composite Simpson quadrature on each axis.
"""
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import BadRange, BadResolution

HOURS = 24
PEAK_TOL = 1e-9
DEFAULT_STEPS = 512


@dataclass(frozen=True)
class TimeProfile:
    """Piecewise-linear, 24h-periodic profile from hourly breakpoints.

    Values live in [0, 1] and the maximum breakpoint must equal 1, so
    the component's P is the literal peak density.
    """

    breakpoints: tuple

    def __post_init__(self):
        pts = tuple(float(v) for v in self.breakpoints)
        if len(pts) != HOURS:
            raise ValueError(f"need {HOURS} hourly breakpoints, got {len(pts)}")
        if any(not 0.0 <= v <= 1.0 for v in pts):
            raise ValueError("breakpoints must lie in [0, 1]")
        if abs(max(pts) - 1.0) > PEAK_TOL:
            raise ValueError("profile must be peak-normalized (max breakpoint = 1)")
        object.__setattr__(self, "breakpoints", pts)

    @staticmethod
    def flat() -> "TimeProfile":
        return TimeProfile((1.0,) * HOURS)

    def __call__(self, t):
        hour = np.asarray(t, dtype=np.float64) % HOURS
        i0 = np.floor(hour).astype(np.int64) % HOURS
        frac = hour - np.floor(hour)
        pts = np.asarray(self.breakpoints)
        val = pts[i0] * (1.0 - frac) + pts[(i0 + 1) % HOURS] * frac
        return val if val.ndim else float(val)


@dataclass(frozen=True)
class LoadComponent:
    energy_type: str
    peak_density: float   # P >= 0
    width: float          # a > 0
    peak_radius: float    # r_m >= 0
    beta: TimeProfile = field(default_factory=TimeProfile.flat)

    def __post_init__(self):
        if self.peak_density < 0:
            raise ValueError("peak_density must be >= 0")
        if self.width <= 0:
            raise ValueError("width must be > 0")
        if self.peak_radius < 0:
            raise ValueError("peak_radius must be >= 0")


@dataclass(frozen=True)
class LoadProfile:
    components: tuple

    def __post_init__(self):
        comps = tuple(self.components)
        if not comps:
            raise ValueError("profile needs at least one component")
        object.__setattr__(self, "components", comps)


def cartesian_to_radial(x, y):
    """r = sqrt(x^2 + y^2)."""
    return np.hypot(x, y)


def density_at(profile: LoadProfile, r, t):
    """Load density Q'(r, t); broadcasts over array-valued r and t."""
    r = np.asarray(r, dtype=np.float64)
    total = np.zeros(np.broadcast(r, np.asarray(t, dtype=np.float64)).shape)
    for c in profile.components:
        total = total + c.peak_density * np.exp(-c.width * (r - c.peak_radius) ** 2) * c.beta(t)
    return total if total.ndim else float(total)


def _simpson_grid(lo: float, hi: float, steps: int):
    """Nodes and weights of composite Simpson on [lo, hi]; odd steps round up."""
    if steps < 2:
        raise BadResolution(f"need at least 2 steps, got {steps}")
    if steps % 2:
        steps += 1
    x = np.linspace(lo, hi, steps + 1)
    w = np.ones(steps + 1)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    w *= (hi - lo) / steps / 3.0
    return x, w


def radial_line_integral(profile: LoadProfile, r0: float, r1: float,
                         t: float, steps: int = DEFAULT_STEPS) -> float:
    """1-D integral of Q'(r, t) in r, without the polar 2*pi*r weight."""
    if r1 <= r0:
        raise BadRange(f"need r1 > r0, got [{r0}, {r1}]")
    r, w = _simpson_grid(r0, r1, steps)
    return float(w @ density_at(profile, r, t))


def total_load(profile: LoadProfile, r_range, t_range,
               resolution: int = DEFAULT_STEPS) -> float:
    """Integral of Q'(r, t) * 2*pi*r over [r0, r1] x [t0, t1]."""
    r0, r1 = map(float, r_range)
    t0, t1 = map(float, t_range)
    if r0 < 0 or r1 <= r0:
        raise BadRange(f"need 0 <= r0 < r1, got [{r0}, {r1}]")
    if t1 <= t0:
        raise BadRange(f"need t1 > t0, got [{t0}, {t1}]")
    r, wr = _simpson_grid(r0, r1, resolution)
    t, wt = _simpson_grid(t0, t1, resolution)
    dens = density_at(profile, r[:, None], t[None, :])
    return float(wr @ (dens * 2.0 * np.pi * r[:, None]) @ wt)


def profile_from_json(doc) -> LoadProfile:
    """Build a LoadProfile from a JSON document or string.

    Expected shape: {"components": [{"type", "P", "a", "r_m", "beta"[24]}]};
    a missing "beta" means a flat (constant 1) daily profile.
    """
    if isinstance(doc, (str, bytes)):
        doc = json.loads(doc)
    comps = []
    for c in doc["components"]:
        beta = TimeProfile(tuple(c["beta"])) if "beta" in c else TimeProfile.flat()
        comps.append(LoadComponent(
            energy_type=str(c.get("type", "")),
            peak_density=float(c["P"]),
            width=float(c["a"]),
            peak_radius=float(c["r_m"]),
            beta=beta,
        ))
    return LoadProfile(tuple(comps))
