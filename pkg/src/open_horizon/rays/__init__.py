"""Radial light rays of the effective metric."""

from .geodesic import (
    RayDirection,
    Termination,
    EscapeClass,
    PhasePoint,
    Trajectory,
    RayTraceSettings,
    null_momentum,
    integrate_null,
    classify_escape,
    sweep_rays,
)
