"""
Numerical and Physical Constants
================================

Tolerances, defaults and CODATA values shared across open-horizon.

Library internals use natural units (c = 1) with the flow's reference radius
r0 as the length unit. SI constants only enter through the temperature
conversions in `flow.horizon`.
"""

import math

from scipy import constants as _codata


# =============================================================================
# CODATA 2018 (SI)
# =============================================================================

HBAR = _codata.hbar            # J s
SPEED_OF_LIGHT = _codata.c     # m / s
BOLTZMANN = _codata.k          # J / K

# hbar * c / k_B, the length-temperature product [m K]
HBAR_C_OVER_KB = HBAR * SPEED_OF_LIGHT / BOLTZMANN

# Denominator of the Hawking temperature formula T = kappa hbar c / (4 pi k_B).
# The conventional relation uses 2 pi; callers may pass it explicitly.
HAWKING_DENOMINATOR = 4.0 * math.pi
CONVENTIONAL_HAWKING_DENOMINATOR = 2.0 * math.pi


# =============================================================================
# SPACETIME
# =============================================================================

# Minkowski signature (+,-,-,-)
SIGNATURE = (1.0, -1.0, -1.0, -1.0)

# u_mu u^mu = 1 tolerance for four-velocities
NORMALIZATION_TOL = 1e-12

# MetricTensor symmetry tolerance
SYMMETRY_TOL = 1e-14

# Relative size below which the non-dominant eigenvalues of (g - eta) count as
# zero, so the determinant lemma applies
RANK_ONE_TOL = 1e-12


# =============================================================================
# MEDIUM
# =============================================================================

# |Omega^2 - omega^2| must exceed this fraction of Omega^2
RESONANCE_GUARD = 1e-6


# =============================================================================
# HORIZON FINDING
# =============================================================================

BRACKET_SAMPLES = 512
ROOT_RTOL = 1e-10

# Profiles are checked for 0 <= beta < 1 on this many points
PROFILE_CHECK_SAMPLES = 2048

# 1 - beta_h^2 below this is treated as singular (epsilon -> 1)
SINGULAR_DENOMINATOR = 1e-12


# =============================================================================
# COORDINATES
# =============================================================================

# |g00| at or below this is inside the horizon-exclusion band
HORIZON_EXCLUSION = 1e-6


# =============================================================================
# RAY TRACING
# =============================================================================

NULL_DRIFT_TOL = 1e-8
RAY_STEP = 0.05                  # initial coordinate-time step [r0]
RAY_MAX_TIME = 500.0             # coordinate-time budget [r0]
RAY_STALL_SPEED = 1e-9           # |dr/dt| below this: stalled on a horizon
STEP_COLLAPSE = 1e-12            # minimum step as a fraction of the domain size
ESCAPE_BAND = 0.01               # hysteresis band around r_h (fraction)


# =============================================================================
# WAVE SOLVER
# =============================================================================

MIN_CELLS = 16
CFL_FACTOR = 0.5
SPONGE_FRACTION = 0.1            # sponge width per side, fraction of domain
SPONGE_STRENGTH = 40.0           # peak damping rate [1 / r0]
INSTABILITY_GROWTH = 1e6
PACKET_SUPPORT_WIDTHS = 4.0
