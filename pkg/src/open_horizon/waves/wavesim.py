"""
Curved-Space Wave Solver
========================

A massless scalar field obeying box_eff phi = 0 with the Gordon metric,
restricted to the radial (t, r) sector. sqrt(-g) = sqrt(eps) is constant and
drops out, leaving the first-order conservative system

    d_t psi + d_r (b psi - a pi)       = 0      psi = d_r phi
    d_t pi  + d_r (b pi - eps a psi)   = 0      pi  = g^tt d_t phi + g^tr d_r phi

with a = 1 / g^tt and b = g^tr / g^tt. Characteristic speeds are
(g^tr -+ sqrt(eps)) / g^tt; the stationary form keeps every coefficient
regular across the horizon.

(psi, pi) are advanced with the two-step (Richtmyer) Lax-Wendroff scheme on
cell centres with one ghost cell per side; phi follows from
d_t phi = a pi - b psi with the trapezoidal rule. Sponge layers at both ends
damp the field multiplicatively.

In 1+1 dimensions phi is constant along characteristics, so packet amplitudes
carry straight through a horizon while the packet is stretched or squeezed.
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from ..core.constants import (
    CFL_FACTOR,
    INSTABILITY_GROWTH,
    MIN_CELLS,
    PACKET_SUPPORT_WIDTHS,
    SPONGE_FRACTION,
    SPONGE_STRENGTH,
)
from ..core.errors import CFLError, FlowProfileError, InstabilityError, SupportError, ValidationError
from ..flow.coords import radial_inverse_block
from ..flow.profiles import FlowProfile


logger = logging.getLogger(__name__)


class PacketDirection(Enum):
    """Initial propagation direction in the local medium frame."""
    OUTWARD = 'outward'
    INWARD = 'inward'
    STANDING = 'standing'


# =============================================================================
# GRID
# =============================================================================

@dataclass(frozen=True)
class Grid1D:
    """
    Uniform cell-centred radial grid.

    Sponge layers of width sponge_width sit inside [r_min, r_max] at both ends.
    """
    r_min: float
    r_max: float
    n_cells: int
    dt: float
    sponge_width: float = 0.0

    def __post_init__(self):
        if not 0.0 < self.r_min < self.r_max:
            raise ValidationError(f"grid needs 0 < r_min < r_max, got [{self.r_min}, {self.r_max}]")
        if int(self.n_cells) != self.n_cells or self.n_cells < MIN_CELLS:
            raise ValidationError(f"n_cells must be an integer >= {MIN_CELLS}, got {self.n_cells}")
        if not (math.isfinite(self.dt) and self.dt > 0):
            raise ValidationError(f"dt must be finite and > 0, got {self.dt}")
        if self.sponge_width < 0 or 2.0 * self.sponge_width >= self.r_max - self.r_min:
            raise ValidationError(
                f"sponge width {self.sponge_width} leaves no physical region"
            )

    @classmethod
    def for_profile(cls, profile: FlowProfile, epsilon: float, n_cells: int,
                    cfl_factor: float = CFL_FACTOR,
                    sponge_fraction: float = SPONGE_FRACTION,
                    r_min: Optional[float] = None,
                    r_max: Optional[float] = None) -> 'Grid1D':
        """Grid on the profile domain with dt at the CFL limit."""
        r_min = profile.r_min if r_min is None else r_min
        r_max = profile.r_max if r_max is None else r_max
        dr = (r_max - r_min) / n_cells
        centers = r_min + (np.arange(n_cells) + 0.5) * dr
        faces = r_min + np.arange(n_cells + 1) * dr
        speed = max(_max_speed(profile, epsilon, centers), _max_speed(profile, epsilon, faces))
        return cls(r_min, r_max, n_cells, cfl_factor * dr / speed,
                   sponge_fraction * (r_max - r_min))

    @property
    def dr(self) -> float:
        return (self.r_max - self.r_min) / self.n_cells

    @property
    def centers(self) -> np.ndarray:
        return self.r_min + (np.arange(self.n_cells) + 0.5) * self.dr

    @property
    def faces(self) -> np.ndarray:
        return self.r_min + np.arange(self.n_cells + 1) * self.dr

    @property
    def physical(self) -> Tuple[float, float]:
        """The region between the sponges."""
        return (self.r_min + self.sponge_width, self.r_max - self.sponge_width)

    def interior_mask(self) -> np.ndarray:
        lo, hi = self.physical
        r = self.centers
        return (r >= lo) & (r <= hi)

    def sponge_rate(self, strength: float = SPONGE_STRENGTH) -> np.ndarray:
        """Damping rate, quadratic in the depth into each sponge layer."""
        if self.sponge_width == 0.0:
            return np.zeros(self.n_cells)
        lo, hi = self.physical
        r = self.centers
        depth = np.maximum(lo - r, 0.0) + np.maximum(r - hi, 0.0)
        return strength * (depth / self.sponge_width) ** 2


@dataclass(frozen=True, eq=False)
class MetricCoefficients:
    """a = 1/g^tt and b = g^tr/g^tt at cell centres and faces."""
    epsilon: float
    a: np.ndarray
    b: np.ndarray
    a_face: np.ndarray
    b_face: np.ndarray

    @property
    def g_tt(self) -> np.ndarray:
        return 1.0 / self.a

    @property
    def g_tr(self) -> np.ndarray:
        return self.b / self.a

    @property
    def g_rr(self) -> np.ndarray:
        # g^tt g^rr - (g^tr)^2 = -eps in the radial block
        return (self.g_tr ** 2 - self.epsilon) / self.g_tt


def _coefficients_at(profile: FlowProfile, epsilon: float, r: np.ndarray):
    g_tt, g_tr, _ = radial_inverse_block(profile, epsilon, r)
    return 1.0 / g_tt, g_tr / g_tt


def _max_speed(profile: FlowProfile, epsilon: float, r: np.ndarray) -> float:
    a, b = _coefficients_at(profile, epsilon, r)
    return float(np.max(np.abs(b) + math.sqrt(epsilon) * a))


def coefficients(profile: FlowProfile, epsilon: float, grid: Grid1D) -> MetricCoefficients:
    """Sample the metric on the grid; the grid must lie inside the profile domain."""
    if grid.r_min < profile.r_min or grid.r_max > profile.r_max:
        raise FlowProfileError(
            f"grid [{grid.r_min}, {grid.r_max}] exceeds the profile domain {profile.domain}"
        )
    a, b = _coefficients_at(profile, epsilon, grid.centers)
    a_face, b_face = _coefficients_at(profile, epsilon, grid.faces)
    return MetricCoefficients(float(epsilon), a, b, a_face, b_face)


def characteristic_speeds(coeffs: MetricCoefficients) -> Tuple[np.ndarray, np.ndarray]:
    """(lambda_minus, lambda_plus) = (g^tr -+ sqrt(eps)) / g^tt at cell centres."""
    root = math.sqrt(coeffs.epsilon)
    return coeffs.b - root * coeffs.a, coeffs.b + root * coeffs.a


def check_cfl(grid: Grid1D, coeffs: MetricCoefficients, cfl_factor: float = CFL_FACTOR):
    """CFLError unless dt <= cfl_factor * dr / max characteristic speed."""
    root = math.sqrt(coeffs.epsilon)
    speed = max(float(np.max(np.abs(coeffs.b) + root * coeffs.a)),
                float(np.max(np.abs(coeffs.b_face) + root * coeffs.a_face)))
    limit = cfl_factor * grid.dr / speed
    if grid.dt > limit * (1.0 + 1e-12):
        raise CFLError(f"dt = {grid.dt:.6g} exceeds the CFL limit {limit:.6g}")


# =============================================================================
# FIELD
# =============================================================================

@dataclass
class WaveField:
    """phi, its gradient psi and the conjugate density pi on cell centres."""
    phi: np.ndarray
    pi: np.ndarray
    psi: np.ndarray
    t: float = 0.0

    def __post_init__(self):
        self.phi = np.asarray(self.phi, dtype=float)
        self.pi = np.asarray(self.pi, dtype=float)
        self.psi = np.asarray(self.psi, dtype=float)
        if not (self.phi.shape == self.pi.shape == self.psi.shape) or self.phi.ndim != 1:
            raise ValidationError("phi, pi and psi must be 1-D arrays of one length")
        for name in ('phi', 'pi', 'psi'):
            if not np.all(np.isfinite(getattr(self, name))):
                raise InstabilityError(f"{name} is not finite at t = {self.t}")

    @classmethod
    def zeros(cls, grid: Grid1D) -> 'WaveField':
        n = grid.n_cells
        return cls(np.zeros(n), np.zeros(n), np.zeros(n))

    def copy(self) -> 'WaveField':
        return WaveField(self.phi.copy(), self.pi.copy(), self.psi.copy(), self.t)

    def __add__(self, other: 'WaveField') -> 'WaveField':
        return WaveField(self.phi + other.phi, self.pi + other.pi,
                         self.psi + other.psi, self.t)

    @property
    def amplitude(self) -> float:
        return float(np.max(np.abs(self.phi))) if self.phi.size else 0.0

    def to_frame(self, grid: Grid1D) -> pd.DataFrame:
        return pd.DataFrame({'r': grid.centers, 'phi': self.phi, 'pi': self.pi})


def init_packet(grid: Grid1D, center: float, width: float, wavenumber: float,
                direction: Union[PacketDirection, str], epsilon: float = 1.0,
                amplitude: float = 1.0) -> WaveField:
    """
    Gaussian packet phi = A exp(-(r-c)^2 / 2w^2) cos(k (r-c)).

    pi = -+ sqrt(eps) psi makes the packet purely outward (inward) in the local
    medium frame, whatever the flow; a standing start has pi = 0.
    """
    direction = PacketDirection(direction)
    if not width > 0:
        raise ValidationError(f"packet width must be > 0, got {width}")
    if epsilon < 1.0:
        raise ValidationError(f"epsilon must be >= 1, got {epsilon}")
    lo, hi = grid.physical
    reach = PACKET_SUPPORT_WIDTHS * width
    if center - reach < lo or center + reach > hi:
        raise SupportError(
            f"packet [{center - reach:.6g}, {center + reach:.6g}] overlaps a sponge "
            f"(physical region [{lo:.6g}, {hi:.6g}])"
        )

    x = grid.centers - center
    envelope = amplitude * np.exp(-x * x / (2.0 * width * width))
    phi = envelope * np.cos(wavenumber * x)
    psi = envelope * (-x / width ** 2 * np.cos(wavenumber * x) - wavenumber * np.sin(wavenumber * x))
    if direction is PacketDirection.STANDING:
        pi = np.zeros_like(phi)
    else:
        sign = 1.0 if direction is PacketDirection.OUTWARD else -1.0
        pi = -sign * math.sqrt(epsilon) * psi
    return WaveField(phi, pi, psi)


# =============================================================================
# TIME STEPPING
# =============================================================================

def _flux(a, b, epsilon, psi, pi):
    return b * psi - a * pi, b * pi - epsilon * a * psi


def time_derivative(field: WaveField, coeffs: MetricCoefficients) -> np.ndarray:
    """d_t phi = a pi - b psi."""
    return coeffs.a * field.pi - coeffs.b * field.psi


def step(field: WaveField, grid: Grid1D, coeffs: MetricCoefficients,
         dt: Optional[float] = None, bound: Optional[float] = None,
         sponge: Optional[np.ndarray] = None) -> WaveField:
    """
    Advance one time step (grid.dt unless a shorter dt is given).

    InstabilityError when max |phi| exceeds bound or the field stops being finite.
    """
    dt = grid.dt if dt is None else dt
    if dt > grid.dt * (1.0 + 1e-12):
        raise CFLError(f"dt = {dt} is longer than the grid step {grid.dt}")
    eps = coeffs.epsilon
    nu = dt / grid.dr

    psi = np.pad(field.psi, 1, mode='edge')
    pi = np.pad(field.pi, 1, mode='edge')
    a = np.pad(coeffs.a, 1, mode='edge')
    b = np.pad(coeffs.b, 1, mode='edge')

    # Predictor on the n + 1 faces
    f_psi, f_pi = _flux(a, b, eps, psi, pi)
    psi_half = 0.5 * (psi[:-1] + psi[1:]) - 0.5 * nu * (f_psi[1:] - f_psi[:-1])
    pi_half = 0.5 * (pi[:-1] + pi[1:]) - 0.5 * nu * (f_pi[1:] - f_pi[:-1])

    # Corrector
    g_psi, g_pi = _flux(coeffs.a_face, coeffs.b_face, eps, psi_half, pi_half)
    psi_new = field.psi - nu * (g_psi[1:] - g_psi[:-1])
    pi_new = field.pi - nu * (g_pi[1:] - g_pi[:-1])

    rate_old = time_derivative(field, coeffs)
    rate_new = coeffs.a * pi_new - coeffs.b * psi_new
    phi_new = field.phi + 0.5 * dt * (rate_old + rate_new)

    if sponge is None:
        sponge = grid.sponge_rate()
    damping = np.exp(-sponge * dt)
    phi_new *= damping
    psi_new *= damping
    pi_new *= damping

    if not (np.all(np.isfinite(phi_new)) and np.all(np.isfinite(pi_new))):
        raise InstabilityError(f"field stopped being finite at t = {field.t + dt:.6g}")
    if bound is not None and np.max(np.abs(phi_new)) > bound:
        raise InstabilityError(
            f"max |phi| = {np.max(np.abs(phi_new)):.3e} exceeds {bound:.3e} at t = {field.t + dt:.6g}"
        )
    return WaveField(phi_new, pi_new, psi_new, field.t + dt)


# =============================================================================
# DIAGNOSTICS
# =============================================================================

def energy_density(field: WaveField, coeffs: MetricCoefficients) -> np.ndarray:
    """1/2 g^tt (d_t phi)^2 - 1/2 g^rr psi^2, the density conserved by stationarity."""
    rate = time_derivative(field, coeffs)
    return 0.5 * coeffs.g_tt * rate ** 2 - 0.5 * coeffs.g_rr * field.psi ** 2


def energy_diagnostic(field: WaveField, grid: Grid1D, coeffs: MetricCoefficients,
                      interior: bool = True) -> float:
    """Discrete energy, between the sponges unless interior=False."""
    density = energy_density(field, coeffs)
    if interior:
        density = density[grid.interior_mask()]
    return float(np.sum(density) * grid.dr)


def centroid(field: WaveField, grid: Grid1D, coeffs: MetricCoefficients) -> float:
    """Energy-weighted packet position; NaN for a field with no energy."""
    weight = np.abs(energy_density(field, coeffs))
    total = float(np.sum(weight))
    if total == 0.0:
        return math.nan
    return float(np.sum(weight * grid.centers) / total)


# =============================================================================
# RUNS
# =============================================================================

@dataclass
class WaveRun:
    """Probe time series, energy history, snapshots and the final field."""
    probe_radii: Tuple[float, ...]
    times: np.ndarray
    probe_phi: np.ndarray          # shape (len(times), len(probe_radii))
    energies: np.ndarray
    final: WaveField
    snapshots: List[WaveField] = field(default_factory=list)

    def probe_frame(self) -> pd.DataFrame:
        """Long format: one row per (t, probe_r)."""
        n_probes = len(self.probe_radii)
        return pd.DataFrame({
            't': np.repeat(self.times, n_probes),
            'probe_r': np.tile(np.asarray(self.probe_radii, dtype=float), self.times.size),
            'phi': self.probe_phi.reshape(-1),
        })

    def probe_peak(self, index: int) -> float:
        return float(np.max(np.abs(self.probe_phi[:, index]))) if self.times.size else 0.0


def sample_probes(field: WaveField, grid: Grid1D, probes: Sequence[float]) -> np.ndarray:
    """phi at the probe radii, linear between cell centres."""
    return np.interp(np.asarray(probes, dtype=float), grid.centers, field.phi)


def run(grid: Grid1D, profile: FlowProfile, epsilon: float, initial: WaveField,
        t_final: float, probes: Sequence[float] = (), sample_every: int = 1,
        snapshot_every: int = 0, cfl_factor: float = CFL_FACTOR) -> WaveRun:
    """
    Evolve initial to t_final, sampling probes every sample_every steps.

    snapshot_every > 0 keeps a copy of the field at that step cadence (the
    initial field included). The last step is shortened to land on t_final.
    """
    if not (math.isfinite(t_final) and t_final >= 0):
        raise ValidationError(f"t_final must be finite and >= 0, got {t_final}")
    if sample_every < 1:
        raise ValidationError(f"sample_every must be >= 1, got {sample_every}")
    for r in probes:
        if not grid.r_min <= r <= grid.r_max:
            raise ValidationError(f"probe r = {r} is outside the grid")
    if initial.phi.size != grid.n_cells:
        raise ValidationError(f"field has {initial.phi.size} cells, grid has {grid.n_cells}")

    coeffs = coefficients(profile, epsilon, grid)
    check_cfl(grid, coeffs, cfl_factor)
    sponge = grid.sponge_rate()
    bound = INSTABILITY_GROWTH * initial.amplitude

    field_now = initial.copy()
    field_now.t = 0.0
    times = [0.0]
    samples = [sample_probes(field_now, grid, probes)]
    energies = [energy_diagnostic(field_now, grid, coeffs)]
    snapshots = [field_now.copy()] if snapshot_every > 0 else []

    n_steps = int(math.ceil(t_final / grid.dt - 1e-12)) if t_final > 0 else 0
    for index in range(1, n_steps + 1):
        dt = min(grid.dt, t_final - field_now.t)
        field_now = step(field_now, grid, coeffs, dt=dt, bound=bound, sponge=sponge)
        if index % sample_every == 0 or index == n_steps:
            times.append(field_now.t)
            samples.append(sample_probes(field_now, grid, probes))
            energies.append(energy_diagnostic(field_now, grid, coeffs))
        if snapshot_every > 0 and index % snapshot_every == 0:
            snapshots.append(field_now.copy())

    logger.info("wave run: %d steps to t = %.6g on %d cells", n_steps, field_now.t, grid.n_cells)
    return WaveRun(
        probe_radii=tuple(float(r) for r in probes),
        times=np.asarray(times),
        probe_phi=np.asarray(samples).reshape(len(times), len(probes)),
        energies=np.asarray(energies),
        final=field_now,
        snapshots=snapshots,
    )
