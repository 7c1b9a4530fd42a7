"""
Radial Null Geodesics
=====================

Light rays of the effective metric in the radial (t, r) sector, traced in
Hamiltonian form.

Conventions:
- p_mu is the gradient of the wave phase k r - omega t, so with signature
  (+,-,-,-) the tangent is dx^mu/dlambda = -g^{mu nu} p_nu. These are
  Hamilton's equations for H = -1/2 g^{mu nu} p_mu p_nu; the null shell H = 0
  is the same as for +1/2 g p p.
- dp_r/dlambda = +1/2 (d g^{mu nu}/dr) p_mu p_nu; p_t is conserved.
- |p_t| = 1 and dt/dlambda > 0. p_t = -1 where the Killing energy is positive,
  p_t = +1 for the trapped branch inside an ergo-region. The marginal ray on
  the horizon has p_t = 0 and keeps dt/dlambda = 1.
- Branches (outward/inward) are taken in the local medium frame; the lab-frame
  speed is the relativistic sum (v +- 1/n) / (1 +- v/n).

The integrator re-times the flow by coordinate time t and carries lambda as
a state component. Fixed-step RK4; the step is halved over the whole
trajectory until the relative null drift stays below the tolerance.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from ..core.constants import (
    ESCAPE_BAND,
    NULL_DRIFT_TOL,
    RAY_MAX_TIME,
    RAY_STALL_SPEED,
    RAY_STEP,
    STEP_COLLAPSE,
)
from ..core.errors import FlowProfileError, StepCollapseError, ValidationError
from ..flow.coords import covariant_block, radial_inverse_block, radial_inverse_derivative
from ..flow.profiles import FlowProfile


logger = logging.getLogger(__name__)


class RayDirection(Enum):
    """Ray branch, as seen in the local medium frame."""
    OUTWARD = 'outward'
    INWARD = 'inward'

    @property
    def sign(self) -> float:
        return 1.0 if self is RayDirection.OUTWARD else -1.0


class Termination(Enum):
    ESCAPED = 'escaped'          # reached the outer edge
    CAPTURED = 'captured'        # reached the inner edge
    BOUNDARY = 'boundary'        # stalled against a horizon
    MAX_STEPS = 'max-steps'      # coordinate-time budget used up


class EscapeClass(Enum):
    ESCAPED = 'escaped'
    CAPTURED = 'captured'
    UNDECIDED = 'undecided'


# =============================================================================
# VALUE TYPES
# =============================================================================

@dataclass(frozen=True)
class PhasePoint:
    """Position (t, r) and covariant momentum (p_t, p_r) of a ray."""
    t: float
    r: float
    p_t: float
    p_r: float

    def __post_init__(self):
        for name in ('t', 'r', 'p_t', 'p_r'):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ValidationError(f"phase point {name} must be finite, got {value}")
            object.__setattr__(self, name, value)

    @property
    def position(self) -> Tuple[float, float]:
        return (self.t, self.r)

    @property
    def momentum(self) -> Tuple[float, float]:
        return (self.p_t, self.p_r)


@dataclass(frozen=True)
class RayTraceSettings:
    """
    Step control for integrate_null.

    step and max_time are in units of r0 (coordinate time). With halve=False
    the first step is used as is, whatever the drift.
    """
    step: float = RAY_STEP
    max_time: float = RAY_MAX_TIME
    drift_tol: float = NULL_DRIFT_TOL
    stall_speed: float = RAY_STALL_SPEED
    collapse: float = STEP_COLLAPSE
    halve: bool = True

    def __post_init__(self):
        if not self.step > 0:
            raise ValidationError(f"step must be > 0, got {self.step}")
        if not self.max_time > 0:
            raise ValidationError(f"max_time must be > 0, got {self.max_time}")
        if not self.drift_tol > 0:
            raise ValidationError(f"drift_tol must be > 0, got {self.drift_tol}")


@dataclass
class Trajectory:
    """Ray samples ordered by the affine parameter, plus how the ray ended."""
    lam: np.ndarray
    t: np.ndarray
    r: np.ndarray
    p_t: np.ndarray
    p_r: np.ndarray
    null_residual: np.ndarray
    termination: Termination
    step: float

    def __post_init__(self):
        if self.lam.size > 1 and np.any(np.diff(self.lam) <= 0):
            raise ValidationError("affine parameter must be strictly increasing")

    def __len__(self) -> int:
        return int(self.lam.size)

    @property
    def final(self) -> PhasePoint:
        return PhasePoint(self.t[-1], self.r[-1], self.p_t[-1], self.p_r[-1])

    @property
    def max_drift(self) -> float:
        return float(np.max(self.null_residual))

    def to_frame(self) -> pd.DataFrame:
        """Samples as columns lambda, t, r, p_t, p_r, null_residual."""
        return pd.DataFrame({
            'lambda': self.lam,
            't': self.t,
            'r': self.r,
            'p_t': self.p_t,
            'p_r': self.p_r,
            'null_residual': self.null_residual,
        })


@dataclass
class RayOutcome:
    """One entry of a ray sweep."""
    index: int
    radius: float
    direction: RayDirection
    termination: Termination
    classification: EscapeClass
    final_r: float
    max_drift: float
    trajectory: Optional[Trajectory] = field(default=None, repr=False)

    def to_dict(self) -> dict:
        return {
            'index': self.index,
            'radius': self.radius,
            'direction': self.direction.value,
            'termination': self.termination.value,
            'classification': self.classification.value,
            'final_r': self.final_r,
            'max_drift': self.max_drift,
        }


# =============================================================================
# LAUNCH
# =============================================================================

def _check_epsilon(epsilon: float):
    if not math.isfinite(epsilon) or epsilon < 1.0:
        raise ValidationError(f"epsilon must be finite and >= 1, got {epsilon}")


def ray_speed(profile: FlowProfile, epsilon: float, r, direction: Union[RayDirection, str]):
    """Lab-frame dr/dt of a ray branch, vectorised over r."""
    _check_epsilon(epsilon)
    direction = RayDirection(direction)
    v = np.asarray(profile.velocity(np.asarray(r, dtype=float)), dtype=float)
    c_medium = direction.sign / math.sqrt(epsilon)
    return (v + c_medium) / (1.0 + v * c_medium)


def null_residual(profile: FlowProfile, epsilon: float, r, p_t, p_r):
    """
    |g^{mu nu} p_mu p_nu| relative to |g| |p|^2.

    |g| is |g^tt| + 2 |g^tr| + |g^rr| and |p|^2 = p_t^2 + p_r^2, so the measure
    stays finite on the horizon (g^rr = p_t = 0) and does not depend on how
    the momentum is normalized.
    """
    g_tt, g_tr, g_rr = radial_inverse_block(profile, epsilon, r)
    value = g_tt * p_t * p_t + 2.0 * g_tr * p_t * p_r + g_rr * p_r * p_r
    scale = (np.abs(g_tt) + 2.0 * np.abs(g_tr) + np.abs(g_rr)) * (p_t * p_t + p_r * p_r)
    return np.abs(value) / scale


def null_momentum(profile: FlowProfile, epsilon: float, r: float,
                  direction: Union[RayDirection, str], t: float = 0.0) -> PhasePoint:
    """
    Null phase point launched at r on the given branch.

    p_mu = -g_{mu nu} k^nu with k = (1, w) the lab-frame tangent; the null
    condition holds to rounding for |beta| < 1 and eps >= 1, so there is no
    no-real-root case.
    """
    if not profile.contains(r):
        raise FlowProfileError(f"launch radius {r} outside the profile domain {profile.domain}")
    w = float(ray_speed(profile, epsilon, r, direction))
    g00, g01, g11 = (float(c) for c in covariant_block(profile, epsilon, r))
    p_t = -(g00 + g01 * w)
    p_r = -(g01 + g11 * w)
    assert math.isfinite(p_t) and math.isfinite(p_r)

    # Marginal ray on the horizon: p_t vanishes, keep dt/dlambda = 1
    if abs(p_t) > 1e-12 * max(1.0, abs(p_r)):
        scale = abs(p_t)
        p_t, p_r = p_t / scale, p_r / scale
    return PhasePoint(t, r, p_t, p_r)


# =============================================================================
# INTEGRATION
# =============================================================================

def _hamilton(profile: FlowProfile, epsilon: float, r: float, p_t: float, p_r: float):
    """(dt/dlambda, dr/dlambda, dp_r/dlambda)."""
    g_tt, g_tr, g_rr = (float(c) for c in radial_inverse_block(profile, epsilon, r))
    d_tt, d_tr, d_rr = (float(c) for c in radial_inverse_derivative(profile, epsilon, r))
    t_dot = -(g_tt * p_t + g_tr * p_r)
    r_dot = -(g_tr * p_t + g_rr * p_r)
    p_dot = 0.5 * (d_tt * p_t * p_t + 2.0 * d_tr * p_t * p_r + d_rr * p_r * p_r)
    return t_dot, r_dot, p_dot


def _rhs(profile: FlowProfile, epsilon: float, y: np.ndarray) -> np.ndarray:
    """d/dt of the state [lambda, r, p_t, p_r]."""
    t_dot, r_dot, p_dot = _hamilton(profile, epsilon, y[1], y[2], y[3])
    return np.array([1.0 / t_dot, r_dot / t_dot, 0.0, p_dot / t_dot])


def _rk4_step(profile: FlowProfile, epsilon: float, y: np.ndarray, h: float) -> np.ndarray:
    k1 = h * _rhs(profile, epsilon, y)
    k2 = h * _rhs(profile, epsilon, y + k1 / 2)
    k3 = h * _rhs(profile, epsilon, y + k2 / 2)
    k4 = h * _rhs(profile, epsilon, y + k3)
    return y + (k1 + 2 * k2 + 2 * k3 + k4) / 6


def _trace(profile: FlowProfile, epsilon: float, initial: PhasePoint,
           h: float, settings: RayTraceSettings) -> Trajectory:
    """One fixed-step pass."""
    y = np.array([0.0, initial.r, initial.p_t, initial.p_r])
    t = initial.t
    t_end = initial.t + settings.max_time
    rows = [(y[0], t, y[1], y[2], y[3])]
    termination = Termination.MAX_STEPS

    # stop short of a sliver step left over from summing h
    while t_end - t > 1e-9 * h:
        t_dot, r_dot, _ = _hamilton(profile, epsilon, y[1], y[2], y[3])
        speed = r_dot / t_dot
        if abs(speed) < settings.stall_speed:
            termination = Termination.BOUNDARY
            break
        # RK4 stages move r by at most h (lab-frame ray speeds are below 1);
        # a ray near an edge but heading away from it keeps going
        if speed > 0 and y[1] >= profile.r_max - h:
            termination = Termination.ESCAPED
            break
        if speed < 0 and y[1] <= profile.r_min + h:
            termination = Termination.CAPTURED
            break

        dt = min(h, t_end - t)
        y = _rk4_step(profile, epsilon, y, dt)
        t += dt
        rows.append((y[0], t, y[1], y[2], y[3]))

    data = np.array(rows)
    residual = null_residual(profile, epsilon, data[:, 2], data[:, 3], data[:, 4])
    return Trajectory(
        lam=data[:, 0],
        t=data[:, 1],
        r=data[:, 2],
        p_t=data[:, 3],
        p_r=data[:, 4],
        null_residual=np.atleast_1d(residual),
        termination=termination,
        step=h,
    )


def integrate_null(profile: FlowProfile, epsilon: float, initial: PhasePoint,
                   settings: Optional[RayTraceSettings] = None) -> Trajectory:
    """
    Trace a null ray until it leaves the domain, stalls or runs out of time.

    The whole trajectory is redone with half the step until the worst relative
    null drift is within settings.drift_tol. StepCollapseError once the step
    would fall below settings.collapse times the domain size.
    """
    settings = settings or RayTraceSettings()
    _check_epsilon(epsilon)
    if not profile.contains(initial.r):
        raise FlowProfileError(f"initial radius {initial.r} outside the profile domain")
    launch_drift = float(null_residual(profile, epsilon, initial.r, initial.p_t, initial.p_r))
    if launch_drift > settings.drift_tol:
        raise ValidationError(f"initial momentum is not null (relative residual {launch_drift:.3e})")

    h = settings.step
    floor = settings.collapse * profile.size
    while True:
        trajectory = _trace(profile, epsilon, initial, h, settings)
        if not settings.halve or trajectory.max_drift <= settings.drift_tol:
            logger.debug("ray from r = %.6g: %s after %d samples (h = %.3g, drift %.2e)",
                         initial.r, trajectory.termination.value, len(trajectory),
                         h, trajectory.max_drift)
            return trajectory
        logger.debug("null drift %.2e at h = %.3g; halving", trajectory.max_drift, h)
        h /= 2.0
        if h < floor:
            raise StepCollapseError(
                f"ray from r = {initial.r} needs a step below {floor:.3e}"
            )


def classify_escape(trajectory: Trajectory, r_h: float,
                    band: float = ESCAPE_BAND) -> EscapeClass:
    """
    Escaped or captured relative to the horizon, with a hysteresis band.

    Rays that reached a domain edge are classified by that edge. Otherwise the
    final radius decides, and a ray ending within band * r_h of the horizon
    (the marginal ray, or one stalled against it) is undecided.
    """
    if trajectory.termination is Termination.ESCAPED:
        return EscapeClass.ESCAPED
    if trajectory.termination is Termination.CAPTURED:
        return EscapeClass.CAPTURED
    final_r = float(trajectory.r[-1])
    if final_r < (1.0 - band) * r_h:
        return EscapeClass.CAPTURED
    if final_r > (1.0 + band) * r_h:
        return EscapeClass.ESCAPED
    return EscapeClass.UNDECIDED


# =============================================================================
# SWEEPS
# =============================================================================

def sweep_rays(profile: FlowProfile, epsilon: float, radii: Sequence[float],
               directions: Sequence[Union[RayDirection, str]], r_h: float,
               settings: Optional[RayTraceSettings] = None,
               max_workers: Optional[int] = None,
               keep_trajectories: bool = False) -> List[RayOutcome]:
    """
    Launch every (radius, direction) pair concurrently.

    Results come back ordered by launch index: radius-major, direction-minor.
    """
    settings = settings or RayTraceSettings()
    launches = [(float(r), RayDirection(d)) for r in radii for d in directions]

    def trace(index: int) -> RayOutcome:
        radius, direction = launches[index]
        initial = null_momentum(profile, epsilon, radius, direction)
        trajectory = integrate_null(profile, epsilon, initial, settings)
        return RayOutcome(
            index=index,
            radius=radius,
            direction=direction,
            termination=trajectory.termination,
            classification=classify_escape(trajectory, r_h),
            final_r=float(trajectory.r[-1]),
            max_drift=trajectory.max_drift,
            trajectory=trajectory if keep_trajectories else None,
        )

    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        outcomes = list(pool.map(trace, range(len(launches))))
    logger.info("traced %d rays on a %s flow", len(outcomes), profile.direction.value)
    return outcomes
