"""
Radial Flow Profiles
====================

The medium flows radially, beta(r) r_hat, inward or outward. A profile gives
the speed beta(r) >= 0 and its slope d(beta)/dr on a domain [r_min, r_max];
lengths are in units of the reference radius r0.

Families:
- PowerLawFlow   beta = beta0 (r0 / r)^p
- TanhStepFlow   smooth step from beta_near (small r) to beta_far (large r)
- LinearFlow     beta = beta_ref + slope (r - r_ref)
- TabulatedFlow  (r, beta) samples joined by a monotone cubic (PCHIP)

All evaluators accept floats or numpy arrays.
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence, Tuple

import numpy as np
from scipy.interpolate import PchipInterpolator

from ..core.constants import PROFILE_CHECK_SAMPLES
from ..core.errors import FlowProfileError


class FlowDirection(Enum):
    """Radial direction of the medium."""
    INWARD = 'inward'
    OUTWARD = 'outward'

    @property
    def sign(self) -> float:
        return -1.0 if self is FlowDirection.INWARD else 1.0

    def reversed(self) -> 'FlowDirection':
        if self is FlowDirection.INWARD:
            return FlowDirection.OUTWARD
        return FlowDirection.INWARD


@dataclass(frozen=True)
class FlowProfile(ABC):
    """
    Base class for radial flows.

    Subclasses set their own parameters and implement speed() and slope();
    validate() runs after construction and checks 0 <= beta < 1 on the domain.
    """
    direction: FlowDirection
    r_min: float
    r_max: float

    def __post_init__(self):
        if not isinstance(self.direction, FlowDirection):
            object.__setattr__(self, 'direction', FlowDirection(self.direction))
        if not (np.isfinite(self.r_min) and np.isfinite(self.r_max)):
            raise FlowProfileError("domain bounds must be finite")
        if not 0.0 < self.r_min < self.r_max:
            raise FlowProfileError(
                f"domain must satisfy 0 < r_min < r_max, got [{self.r_min}, {self.r_max}]"
            )
        self.check_parameters()
        self.validate()

    def check_parameters(self):
        """Family-specific parameter checks."""

    @property
    def family(self) -> str:
        raise NotImplementedError

    @abstractmethod
    def speed(self, r):
        """beta(r) >= 0."""

    @abstractmethod
    def slope(self, r):
        """d(beta)/dr."""

    def velocity(self, r):
        """Signed radial velocity, outward positive."""
        return self.direction.sign * self.speed(r)

    def velocity_slope(self, r):
        return self.direction.sign * self.slope(r)

    @property
    def domain(self) -> Tuple[float, float]:
        return (self.r_min, self.r_max)

    @property
    def size(self) -> float:
        return self.r_max - self.r_min

    def contains(self, r: float) -> bool:
        return self.r_min <= r <= self.r_max

    def sample_grid(self, n: int = PROFILE_CHECK_SAMPLES) -> np.ndarray:
        return np.linspace(self.r_min, self.r_max, n)

    def validate(self):
        """Raise FlowProfileError unless 0 <= beta < 1 on the whole domain."""
        r = self.sample_grid()
        beta = np.asarray(self.speed(r), dtype=float)
        if not np.all(np.isfinite(beta)):
            raise FlowProfileError(f"{self.family} profile is not finite on its domain")
        if beta.min() < 0.0:
            raise FlowProfileError(
                f"{self.family} profile has beta = {beta.min()} < 0 on its domain"
            )
        if beta.max() >= 1.0:
            worst = r[int(np.argmax(beta))]
            raise FlowProfileError(
                f"{self.family} profile reaches beta = {beta.max()} >= 1 at r = {worst}"
            )

    def reversed(self) -> 'FlowProfile':
        """Same speed profile flowing the other way."""
        from dataclasses import replace
        return replace(self, direction=self.direction.reversed())

    def describe(self) -> dict:
        """Parameters as a plain dict (JSON-ready)."""
        from dataclasses import asdict
        data = asdict(self)
        data['direction'] = self.direction.value
        data['family'] = self.family
        return data


# =============================================================================
# FAMILIES
# =============================================================================

@dataclass(frozen=True)
class PowerLawFlow(FlowProfile):
    """beta(r) = beta0 (r0 / r)^p."""
    beta0: float = 0.8
    r0: float = 1.0
    exponent: float = 1.0

    @property
    def family(self) -> str:
        return 'power_law'

    def check_parameters(self):
        if self.exponent <= 0:
            raise FlowProfileError(f"power-law exponent must be > 0, got {self.exponent}")
        if self.r0 <= 0:
            raise FlowProfileError(f"power-law r0 must be > 0, got {self.r0}")
        if self.beta0 < 0:
            raise FlowProfileError(f"power-law beta0 must be >= 0, got {self.beta0}")

    def speed(self, r):
        return self.beta0 * (self.r0 / np.asarray(r, dtype=float)) ** self.exponent

    def slope(self, r):
        r = np.asarray(r, dtype=float)
        return -self.exponent * self.beta0 * (self.r0 / r) ** self.exponent / r


@dataclass(frozen=True)
class TanhStepFlow(FlowProfile):
    """beta(r) = beta_near + (beta_far - beta_near) (1 + tanh((r - r_center) / width)) / 2."""
    beta_far: float = 0.2
    beta_near: float = 0.8
    r_center: float = 2.0
    width: float = 0.5

    @property
    def family(self) -> str:
        return 'tanh_step'

    def check_parameters(self):
        if self.width <= 0:
            raise FlowProfileError(f"tanh-step width must be > 0, got {self.width}")

    def speed(self, r):
        x = (np.asarray(r, dtype=float) - self.r_center) / self.width
        return self.beta_near + (self.beta_far - self.beta_near) * 0.5 * (1.0 + np.tanh(x))

    def slope(self, r):
        x = (np.asarray(r, dtype=float) - self.r_center) / self.width
        return (self.beta_far - self.beta_near) * 0.5 / (self.width * np.cosh(x) ** 2)


@dataclass(frozen=True)
class LinearFlow(FlowProfile):
    """beta(r) = beta_ref + slope_value (r - r_ref). Zero slope gives a uniform flow."""
    beta_ref: float = 0.5
    slope_value: float = 0.0
    r_ref: float = 1.0

    @property
    def family(self) -> str:
        return 'linear'

    def speed(self, r):
        return self.beta_ref + self.slope_value * (np.asarray(r, dtype=float) - self.r_ref)

    def slope(self, r):
        return np.full_like(np.asarray(r, dtype=float), self.slope_value)


@dataclass(frozen=True)
class TabulatedFlow(FlowProfile):
    """
    Sampled profile joined by a monotone cubic (PCHIP).

    The domain defaults to the table span; radii must be strictly increasing.
    """
    radii: Tuple[float, ...] = field(default_factory=tuple)
    speeds: Tuple[float, ...] = field(default_factory=tuple)

    @property
    def family(self) -> str:
        return 'tabulated'

    def check_parameters(self):
        radii = np.asarray(self.radii, dtype=float)
        speeds = np.asarray(self.speeds, dtype=float)
        if radii.ndim != 1 or radii.shape != speeds.shape:
            raise FlowProfileError("radii and speeds must be 1-D and the same length")
        if radii.size < 2:
            raise FlowProfileError("a tabulated profile needs at least 2 samples")
        if np.any(np.diff(radii) <= 0):
            raise FlowProfileError("tabulated radii must be strictly increasing")
        if self.r_min < radii[0] or self.r_max > radii[-1]:
            raise FlowProfileError(
                f"domain [{self.r_min}, {self.r_max}] exceeds the table span "
                f"[{radii[0]}, {radii[-1]}]"
            )
        object.__setattr__(self, 'radii', tuple(float(r) for r in radii))
        object.__setattr__(self, 'speeds', tuple(float(b) for b in speeds))
        interpolant = PchipInterpolator(radii, speeds, extrapolate=True)
        object.__setattr__(self, '_interpolant', interpolant)
        object.__setattr__(self, '_derivative', interpolant.derivative())

    @classmethod
    def from_samples(cls, radii: Sequence[float], speeds: Sequence[float],
                     direction: FlowDirection) -> 'TabulatedFlow':
        return cls(direction=direction, r_min=float(radii[0]), r_max=float(radii[-1]),
                   radii=tuple(radii), speeds=tuple(speeds))

    @classmethod
    def from_profile(cls, profile: FlowProfile, n_samples: int = 4001) -> 'TabulatedFlow':
        """Tabulate another profile on a uniform grid over its domain."""
        r = profile.sample_grid(n_samples)
        return cls.from_samples(r, np.asarray(profile.speed(r), dtype=float), profile.direction)

    def speed(self, r):
        return self._interpolant(np.asarray(r, dtype=float))

    def slope(self, r):
        return self._derivative(np.asarray(r, dtype=float))

    def describe(self) -> dict:
        return {
            'family': self.family,
            'direction': self.direction.value,
            'r_min': self.r_min,
            'r_max': self.r_max,
            'radii': list(self.radii),
            'speeds': list(self.speeds),
        }


FAMILIES = {
    'power_law': PowerLawFlow,
    'tanh_step': TanhStepFlow,
    'linear': LinearFlow,
    'tabulated': TabulatedFlow,
}
