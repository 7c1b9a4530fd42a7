"""
Dielectric Horizons
===================

For a radial flow the covariant g_00 of the Gordon metric vanishes where the
medium moves at the speed of light in the medium, beta^2 = 1 / eps. For radial
flows this ergo-surface is the apparent horizon; the flow is taken to be
eternally stationary, so it is also the event horizon.

An inward flow makes a black hole (nothing escapes), an outward flow a white
hole (nothing enters).

Surface gravity and temperature:
    kappa = |d beta / dr|_h / (1 - beta_h^2)
    T     = kappa hbar c / (4 pi k_B)
    T    ~ hbar c / (k_B n R)           (order of magnitude, n = sqrt(eps))
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import brentq

from ..core.constants import (
    BOLTZMANN,
    BRACKET_SAMPLES,
    HAWKING_DENOMINATOR,
    HBAR,
    HBAR_C_OVER_KB,
    ROOT_RTOL,
    SINGULAR_DENOMINATOR,
)
from ..core.errors import (
    FlowProfileError,
    MetricError,
    NoHorizonError,
    SingularHorizonError,
    ValidationError,
)
from .profiles import FlowDirection, FlowProfile


logger = logging.getLogger(__name__)


class HorizonKind(Enum):
    BLACK = 'black'
    WHITE = 'white'
    NONE = 'none'


@dataclass
class HorizonReport:
    """
    Where the horizon is and what it radiates.

    Lengths in units of r0; kappa in 1/r0; temperatures in kelvin once a
    physical length scale for r0 is supplied.
    """
    kind: HorizonKind
    epsilon: float
    radius: Optional[float] = None
    beta_h: Optional[float] = None
    kappa: Optional[float] = None
    temperature: Optional[float] = None
    estimate: Optional[float] = None
    length_scale_m: Optional[float] = None
    roots: Tuple[float, ...] = field(default_factory=tuple)

    @property
    def has_horizon(self) -> bool:
        return self.kind is not HorizonKind.NONE

    def to_dict(self) -> dict:
        """JSON-ready dict; every quantity carries its unit."""
        def quantity(value, unit):
            return {'value': value, 'unit': unit}

        return {
            'kind': self.kind.value,
            'epsilon': quantity(self.epsilon, '1'),
            'radius': quantity(self.radius, 'r0'),
            'beta_h': quantity(self.beta_h, 'c'),
            'kappa': quantity(self.kappa, '1/r0'),
            'temperature': quantity(self.temperature, 'K'),
            'estimate': quantity(self.estimate, 'K'),
            'length_scale': quantity(self.length_scale_m, 'm'),
            'roots': quantity(list(self.roots), 'r0'),
        }


# =============================================================================
# HORIZON FINDING
# =============================================================================

def _check_epsilon(epsilon: float):
    if not math.isfinite(epsilon) or epsilon < 1.0:
        raise MetricError(f"epsilon must be finite and >= 1, got {epsilon}")


def horizon_radii(profile: FlowProfile, epsilon: float,
                  samples: int = BRACKET_SAMPLES, rtol: float = ROOT_RTOL) -> List[float]:
    """
    Every root of beta(r) - 1/sqrt(eps) on the profile's domain, ascending.

    A uniform bracket scan is followed by Brent's bisection/secant polish.
    """
    _check_epsilon(epsilon)
    if epsilon == 1.0:
        return []

    target = 1.0 / math.sqrt(epsilon)
    r = np.linspace(profile.r_min, profile.r_max, samples)
    f = np.asarray(profile.speed(r), dtype=float) - target

    roots: List[float] = []
    for i in range(samples - 1):
        if f[i] == 0.0:
            roots.append(float(r[i]))
        elif f[i] * f[i + 1] < 0.0:
            root = brentq(lambda x: float(profile.speed(x)) - target, r[i], r[i + 1],
                          xtol=rtol * abs(r[i]) * 1e-3, rtol=rtol * 1e-3)
            roots.append(float(root))
    if f[-1] == 0.0:
        roots.append(float(r[-1]))
    return roots


def classify(profile: FlowProfile, epsilon: float) -> HorizonKind:
    """
    Black hole for inward flow, white hole for outward flow.

    Refuses (NoHorizonError) when the profile has no horizon.
    """
    if not horizon_radii(profile, epsilon):
        raise NoHorizonError(f"profile has no horizon at eps = {epsilon}")
    return HorizonKind.BLACK if profile.direction is FlowDirection.INWARD else HorizonKind.WHITE


def find_ergosurface(profile: FlowProfile, epsilon: float) -> HorizonReport:
    """
    Locate the ergo-surface beta^2 = 1/eps, reported as the horizon.

    With nested horizons every root is listed, a warning is logged and the
    outermost one is taken as the horizon radius.
    """
    roots = horizon_radii(profile, epsilon)
    if not roots:
        return HorizonReport(kind=HorizonKind.NONE, epsilon=epsilon)
    if len(roots) > 1:
        logger.warning("nested horizons at r = %s; reporting the outermost",
                       ", ".join(f"{r:.10g}" for r in roots))

    radius = roots[-1]
    kind = HorizonKind.BLACK if profile.direction is FlowDirection.INWARD else HorizonKind.WHITE
    return HorizonReport(
        kind=kind,
        epsilon=epsilon,
        radius=radius,
        beta_h=float(profile.speed(radius)),
        roots=tuple(roots),
    )


def _require_horizon(profile: FlowProfile, epsilon: float,
                     radius: Optional[float]) -> float:
    if radius is not None:
        if not profile.contains(radius):
            raise FlowProfileError(f"horizon radius {radius} outside the profile domain")
        return radius
    report = find_ergosurface(profile, epsilon)
    if not report.has_horizon:
        raise NoHorizonError(f"profile has no horizon at eps = {epsilon}")
    return report.radius


# =============================================================================
# SURFACE GRAVITY
# =============================================================================

def sonic_surface_gravity(profile: FlowProfile, epsilon: float,
                          radius: Optional[float] = None) -> float:
    """|d beta / dr| at the horizon, the non-relativistic (sonic) value."""
    r_h = _require_horizon(profile, epsilon, radius)
    return abs(float(profile.slope(r_h)))


def surface_gravity(profile: FlowProfile, epsilon: float,
                    radius: Optional[float] = None) -> float:
    """
    kappa = |d beta / dr|_h / (1 - beta_h^2) with beta_h^2 = 1/eps.

    The sign distinguishing black from white holes lives in HorizonReport.kind.
    """
    _check_epsilon(epsilon)
    denominator = 1.0 - 1.0 / epsilon
    if denominator < SINGULAR_DENOMINATOR:
        raise SingularHorizonError(f"1 - beta_h^2 = {denominator} is singular (eps -> 1)")
    return sonic_surface_gravity(profile, epsilon, radius) / denominator


# =============================================================================
# TEMPERATURE
# =============================================================================

def hawking_temperature(kappa: float, length_scale: float,
                        denominator: float = HAWKING_DENOMINATOR) -> float:
    """
    T = kappa hbar c / (4 pi k_B) in kelvin.

    kappa is in units of 1/length_scale, length_scale in meters. Pass
    denominator=CONVENTIONAL_HAWKING_DENOMINATOR for the 2 pi convention.
    """
    if kappa < 0:
        raise ValidationError(f"kappa must be >= 0, got {kappa}")
    if length_scale <= 0:
        raise ValidationError(f"length_scale must be > 0, got {length_scale}")
    return kappa / length_scale * HBAR_C_OVER_KB / denominator


def temperature_estimate(n: float, R: float) -> float:
    """T ~ hbar c / (k_B n R), with R the horizon radius in meters."""
    if n < 1:
        raise ValidationError(f"refractive index must be >= 1, got {n}")
    if R <= 0:
        raise ValidationError(f"R must be > 0, got {R}")
    return HBAR_C_OVER_KB / (n * R)


def planck_spectrum(T: float, omega_grid: Sequence[float]) -> np.ndarray:
    """
    Thermal occupation 1 / (exp(hbar omega / k_B T) - 1) per angular frequency.

    Points whose occupation underflows come back as 0.
    """
    if not T > 0:
        raise ValidationError(f"temperature must be > 0, got {T}")
    omega = np.asarray(omega_grid, dtype=float)
    x = HBAR * omega / (BOLTZMANN * T)
    occupation = np.zeros_like(x)
    live = x < 700.0
    with np.errstate(divide='ignore'):
        occupation[live] = 1.0 / np.expm1(x[live])
    return occupation


# =============================================================================
# FULL REPORT
# =============================================================================

def analyze(profile: FlowProfile, epsilon: float,
            length_scale_m: Optional[float] = None) -> HorizonReport:
    """Horizon location, classification, surface gravity and temperatures."""
    report = find_ergosurface(profile, epsilon)
    report.length_scale_m = length_scale_m
    if not report.has_horizon:
        return report

    report.kappa = surface_gravity(profile, epsilon, report.radius)
    if length_scale_m is not None:
        report.temperature = hawking_temperature(report.kappa, length_scale_m)
        report.estimate = temperature_estimate(math.sqrt(epsilon), report.radius * length_scale_m)
    return report
