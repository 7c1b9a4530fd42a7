"""
Stationary and Static Coordinates
=================================

Restricted to (t, r), the effective metric of a radial flow is the
Painleve-Gullstrand-Lemaitre-like block

    ds^2 = g00 dt^2 + 2 g01 dt dr + g11 dr^2
    g00 = 1 - k gamma^2,  g01 = k gamma^2 v,  g11 = -1 - k gamma^2 v^2

with k = (eps - 1) / eps, v the signed radial velocity (outward positive) and
gamma^2 = 1 / (1 - v^2). It is regular across the horizon. Away from g00 = 0
the substitution

    d t~ = dt + (g01 / g00) dr,    d r~ = sqrt(g01^2 - g00 g11) dr

brings it to the static form ds^2 = g00 dt~^2 - dr~^2 / g00. Each side of the
horizon is its own chart; the two are never joined. The angular part r^2 dOmega^2
is carried through untouched.

g01^2 - g00 g11 = 1 / eps for every flow, so r~ is r / sqrt(eps) up to a constant.
"""

import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy.integrate import quad

from ..core.constants import HORIZON_EXCLUSION
from ..core.errors import FlowProfileError, HorizonSingularityError, MetricError, NoHorizonError
from .horizon import find_ergosurface
from .profiles import FlowProfile


@dataclass(frozen=True)
class RadialMetricComponents:
    """Covariant (t, r) block of the effective metric at radius r."""
    g00: float
    g01: float
    g11: float
    r: float

    def __post_init__(self):
        for name in ('g00', 'g01', 'g11', 'r'):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise MetricError(f"{name} must be finite, got {value}")
            object.__setattr__(self, name, value)
        if not self.discriminant > 0.0:
            raise MetricError(
                f"g01^2 - g00 g11 = {self.discriminant} must be > 0 at r = {self.r}"
            )

    @property
    def discriminant(self) -> float:
        """g01^2 - g00 g11, the square of d r~ / dr."""
        return self.g01 ** 2 - self.g00 * self.g11

    def interval(self, dt: float, dr: float) -> float:
        return self.g00 * dt * dt + 2.0 * self.g01 * dt * dr + self.g11 * dr * dr


# =============================================================================
# BLOCKS
# =============================================================================

def _check_epsilon(epsilon: float):
    if not math.isfinite(epsilon) or epsilon < 1.0:
        raise MetricError(f"epsilon must be finite and >= 1, got {epsilon}")


def _flow_terms(profile: FlowProfile, r):
    r = np.asarray(r, dtype=float)
    v = np.asarray(profile.velocity(r), dtype=float)
    gamma_sq = 1.0 / (1.0 - v * v)
    return v, gamma_sq


def covariant_block(profile: FlowProfile, epsilon: float, r) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(g00, g01, g11), vectorised over r."""
    _check_epsilon(epsilon)
    v, gamma_sq = _flow_terms(profile, r)
    k = (epsilon - 1.0) / epsilon
    return 1.0 - k * gamma_sq, k * gamma_sq * v, -1.0 - k * gamma_sq * v * v


def radial_block(profile: FlowProfile, epsilon: float, r: float) -> RadialMetricComponents:
    """Covariant (t, r) block at a single radius inside the profile domain."""
    if not profile.contains(r):
        raise FlowProfileError(f"r = {r} outside the profile domain {profile.domain}")
    g00, g01, g11 = covariant_block(profile, epsilon, r)
    return RadialMetricComponents(float(g00), float(g01), float(g11), float(r))


def radial_inverse_block(profile: FlowProfile, epsilon: float, r) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Contravariant (g^tt, g^tr, g^rr), vectorised over r.

    g^tt = 1 + (eps - 1) gamma^2
    g^tr = (eps - 1) gamma^2 v
    g^rr = -1 + (eps - 1) gamma^2 v^2
    """
    _check_epsilon(epsilon)
    v, gamma_sq = _flow_terms(profile, r)
    a = epsilon - 1.0
    return 1.0 + a * gamma_sq, a * gamma_sq * v, -1.0 + a * gamma_sq * v * v


def radial_inverse_derivative(profile: FlowProfile, epsilon: float, r) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """d/dr of (g^tt, g^tr, g^rr) from the analytic slope of the profile."""
    _check_epsilon(epsilon)
    v, gamma_sq = _flow_terms(profile, r)
    dv = np.asarray(profile.velocity_slope(np.asarray(r, dtype=float)), dtype=float)
    a = epsilon - 1.0
    gamma_4 = gamma_sq * gamma_sq
    d_diag = 2.0 * a * v * dv * gamma_4
    return d_diag, a * dv * gamma_4 * (1.0 + v * v), d_diag


def _g00_derivative(profile: FlowProfile, epsilon: float, r):
    v, gamma_sq = _flow_terms(profile, r)
    dv = np.asarray(profile.velocity_slope(np.asarray(r, dtype=float)), dtype=float)
    k = (epsilon - 1.0) / epsilon
    return -2.0 * k * v * dv * gamma_sq * gamma_sq


# =============================================================================
# STATIC FORM
# =============================================================================

def static_form(components: RadialMetricComponents,
                exclusion: float = HORIZON_EXCLUSION) -> Tuple[float, float]:
    """
    (g00, -(g01^2 - g00 g11) / g00), the static t~t~ and r~r~-in-r coefficients.

    Raises HorizonSingularityError when |g00| <= exclusion.
    """
    if abs(components.g00) <= exclusion:
        raise HorizonSingularityError(
            f"|g00| = {abs(components.g00):.3e} at r = {components.r} is inside "
            f"the horizon-exclusion band ({exclusion:g})"
        )
    return components.g00, -components.discriminant / components.g00


def interval_check(components: RadialMetricComponents,
                   samples: Iterable[Sequence[float]],
                   exclusion: float = HORIZON_EXCLUSION) -> float:
    """
    Worst relative mismatch of ds^2 between the two charts over (dt, dr) samples.

    Each mismatch is scaled by |g00| dt^2 + 2 |g01 dt dr| + |g11| dr^2 so null
    displacements are measured against their terms, not against zero.
    """
    g00_static, _ = static_form(components, exclusion)
    stretch = math.sqrt(components.discriminant)
    shift = components.g01 / components.g00

    worst = 0.0
    for dt, dr in samples:
        dt, dr = float(dt), float(dr)
        original = components.interval(dt, dr)
        dt_static = dt + shift * dr
        dr_static = stretch * dr
        transformed = g00_static * dt_static ** 2 - dr_static ** 2 / g00_static
        scale = (abs(components.g00) * dt * dt + 2.0 * abs(components.g01 * dt * dr)
                 + abs(components.g11) * dr * dr)
        if scale == 0.0:
            continue
        worst = max(worst, abs(original - transformed) / scale)
    return worst


def static_surface_gravity(profile: FlowProfile, epsilon: float,
                           r_h: Optional[float] = None) -> float:
    """
    kappa from the static form: 2 kappa = |d g00 / d r~| at g00 = 0.

    With d r~ = sqrt(g01^2 - g00 g11) dr this is |d g00 / dr| / (2 sqrt(D)).
    """
    if r_h is None:
        report = find_ergosurface(profile, epsilon)
        if not report.has_horizon:
            raise NoHorizonError(f"profile has no horizon at eps = {epsilon}")
        r_h = report.radius
    components = radial_block(profile, epsilon, r_h)
    slope = float(_g00_derivative(profile, epsilon, r_h))
    return 0.5 * abs(slope) / math.sqrt(components.discriminant)


def static_radius(profile: FlowProfile, epsilon: float, r_grid: Sequence[float],
                  r_ref: Optional[float] = None) -> np.ndarray:
    """r~(r) = integral from r_ref of sqrt(g01^2 - g00 g11) dr, on an ascending grid."""
    r = np.asarray(r_grid, dtype=float)
    if r.ndim != 1 or r.size == 0:
        raise FlowProfileError("r_grid must be a non-empty 1-D sequence")
    if np.any(np.diff(r) <= 0):
        raise FlowProfileError("r_grid must be strictly increasing")
    if r_ref is None:
        r_ref = float(r[0])

    def stretch(x):
        g00, g01, g11 = covariant_block(profile, epsilon, x)
        return math.sqrt(float(g01 * g01 - g00 * g11))

    offset, _ = quad(stretch, r_ref, float(r[0]))
    segments = [quad(stretch, lo, hi)[0] for lo, hi in zip(r[:-1], r[1:])]
    return offset + np.concatenate(([0.0], np.cumsum(segments)))


def metric_profile(profile: FlowProfile, epsilon: float, r_grid: Sequence[float],
                   exclusion: float = HORIZON_EXCLUSION) -> pd.DataFrame:
    """
    Metric components along r: r, g00, g01, g11, g00_static, g_rr_static.

    The static columns are NaN inside the horizon-exclusion band.
    """
    r = np.asarray(r_grid, dtype=float)
    g00, g01, g11 = covariant_block(profile, epsilon, r)
    g00_static = np.where(np.abs(g00) > exclusion, g00, np.nan)
    with np.errstate(divide='ignore', invalid='ignore'):
        g_rr_static = -(g01 * g01 - g00 * g11) / g00_static
    return pd.DataFrame({
        'r': r,
        'g00': g00,
        'g01': g01,
        'g11': g11,
        'g00_static': g00_static,
        'g_rr_static': g_rr_static,
    })
