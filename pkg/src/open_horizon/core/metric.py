"""
Effective Gordon Metric
=======================

Light in a dielectric of permittivity epsilon moving with four-velocity u
propagates as in the curved spacetime

    g^{mu nu}_eff = eta^{mu nu} + (eps - 1) u^mu u^nu          (contravariant)
    g_{mu nu}^eff = eta_{mu nu} - ((eps - 1) / eps) u_mu u_nu    (covariant)

with eta = diag(+1, -1, -1, -1). |det g^{mu nu}_eff| = eps is constant, so the
volume factor sqrt(-g) can be scaled away; `volume_factor` documents it and
the stored components are left untouched.

The Lagrangian of the macroscopic field has three equivalent forms:
    rest frame    L = (eps E^2 - B^2) / 2
    covariant     L = -F F / 4 - ((eps - 1) / 2) F_{mu nu} u^nu F^{mu lambda} u_lambda
    geometric     L = -F_{mu nu} g^{mu rho} g^{nu sigma} F_{rho sigma} / 4
Indices of F are raised and lowered with eta, never with the effective metric.
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence, Tuple

import numpy as np

from .constants import NORMALIZATION_TOL, RANK_ONE_TOL, SIGNATURE, SYMMETRY_TOL
from .errors import MetricError, SuperluminalError


MINKOWSKI = np.diag(SIGNATURE)

# Levi-Civita symbol in three dimensions
_LEVI_CIVITA = np.zeros((3, 3, 3))
for _i, _j, _k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
    _LEVI_CIVITA[_i, _j, _k] = 1.0
    _LEVI_CIVITA[_i, _k, _j] = -1.0


def lower_index(vector: Sequence[float]) -> np.ndarray:
    """Lower a four-vector index with the Minkowski metric."""
    return MINKOWSKI @ np.asarray(vector, dtype=float)


def minkowski_norm(vector: Sequence[float]) -> float:
    """v_mu v^mu."""
    v = np.asarray(vector, dtype=float)
    return float(v @ MINKOWSKI @ v)


# =============================================================================
# VALUE TYPES
# =============================================================================

@dataclass(frozen=True)
class FourVelocity:
    """Medium four-velocity u^mu, normalized to u_mu u^mu = 1."""
    components: Tuple[float, float, float, float]

    def __post_init__(self):
        comps = tuple(float(c) for c in self.components)
        if len(comps) != 4:
            raise MetricError(f"four-velocity needs 4 components, got {len(comps)}")
        object.__setattr__(self, 'components', comps)
        norm = minkowski_norm(comps)
        if abs(norm - 1.0) > NORMALIZATION_TOL * max(1.0, comps[0] ** 2):
            raise MetricError(f"u_mu u^mu = {norm!r}, expected 1")
        if comps[0] < 1.0 - NORMALIZATION_TOL:
            raise MetricError(f"u^0 = {comps[0]!r} must be >= 1")

    @property
    def vector(self) -> np.ndarray:
        return np.array(self.components)

    @property
    def covector(self) -> np.ndarray:
        """u_mu."""
        return lower_index(self.components)

    @property
    def gamma(self) -> float:
        return self.components[0]

    @property
    def beta(self) -> np.ndarray:
        """Three-velocity."""
        return np.array(self.components[1:]) / self.components[0]


REST = FourVelocity((1.0, 0.0, 0.0, 0.0))


class Variance(Enum):
    """Index position of a MetricTensor."""
    CONTRAVARIANT = 'contravariant'
    COVARIANT = 'covariant'


@dataclass(frozen=True, eq=False)
class MetricTensor:
    """Symmetric 4x4 metric with its index position."""
    components: np.ndarray
    variance: Variance

    def __post_init__(self):
        comps = np.array(self.components, dtype=float)
        if comps.shape != (4, 4):
            raise MetricError(f"metric must be 4x4, got shape {comps.shape}")
        if not np.all(np.isfinite(comps)):
            raise MetricError("metric components must be finite")
        scale = max(1.0, float(np.abs(comps).max()))
        if np.abs(comps - comps.T).max() > SYMMETRY_TOL * scale:
            raise MetricError("metric must be symmetric")
        comps.setflags(write=False)
        object.__setattr__(self, 'components', comps)

    def signature(self) -> Tuple[int, int]:
        """(number of positive, number of negative) eigenvalues."""
        eigenvalues = np.linalg.eigvalsh(self.components)
        return int(np.sum(eigenvalues > 0)), int(np.sum(eigenvalues < 0))

    def is_lorentzian(self) -> bool:
        return self.signature() == (1, 3)

    def __getitem__(self, index):
        return self.components[index]


@dataclass(frozen=True)
class FieldStrength:
    """Macroscopic electric and magnetic fields."""
    electric: Tuple[float, float, float]
    magnetic: Tuple[float, float, float]

    def __post_init__(self):
        for name in ('electric', 'magnetic'):
            values = tuple(float(v) for v in getattr(self, name))
            if len(values) != 3 or not all(math.isfinite(v) for v in values):
                raise MetricError(f"{name} field must be 3 finite reals")
            object.__setattr__(self, name, values)

    def tensor(self) -> np.ndarray:
        """F_{mu nu} with F_{0i} = E_i and F_{ij} = -eps_ijk B_k."""
        E = np.array(self.electric)
        B = np.array(self.magnetic)
        F = np.zeros((4, 4))
        F[0, 1:] = E
        F[1:, 0] = -E
        F[1:, 1:] = -np.einsum('ijk,k->ij', _LEVI_CIVITA, B)
        return F


# =============================================================================
# CONSTRUCTION
# =============================================================================

def four_velocity(beta: Sequence[float]) -> FourVelocity:
    """u^mu = (1, beta) / sqrt(1 - beta^2)."""
    b = np.asarray(beta, dtype=float)
    if b.shape != (3,):
        raise SuperluminalError(f"beta must have 3 components, got shape {b.shape}")
    beta_sq = float(b @ b)
    if not beta_sq < 1.0:
        raise SuperluminalError(f"|beta| = {math.sqrt(beta_sq)} must be < 1")
    gamma = 1.0 / math.sqrt(1.0 - beta_sq)
    return FourVelocity((gamma, *(gamma * b)))


def _check_epsilon(epsilon: float):
    if not math.isfinite(epsilon) or epsilon < 1.0:
        raise MetricError(f"epsilon must be finite and >= 1, got {epsilon}")


def contravariant_metric(epsilon: float, u: FourVelocity) -> MetricTensor:
    """g^{mu nu} = eta^{mu nu} + (eps - 1) u^mu u^nu."""
    _check_epsilon(epsilon)
    vec = u.vector
    return MetricTensor(MINKOWSKI + (epsilon - 1.0) * np.outer(vec, vec),
                        Variance.CONTRAVARIANT)


def covariant_metric(epsilon: float, u: FourVelocity) -> MetricTensor:
    """g_{mu nu} = eta_{mu nu} - ((eps - 1) / eps) u_mu u_nu."""
    _check_epsilon(epsilon)
    co = u.covector
    return MetricTensor(MINKOWSKI - ((epsilon - 1.0) / epsilon) * np.outer(co, co),
                        Variance.COVARIANT)


def volume_factor(epsilon: float) -> float:
    """sqrt(-g_eff) = sqrt(eps), the constant removed by rescaling x or A."""
    _check_epsilon(epsilon)
    return math.sqrt(epsilon)


# =============================================================================
# IDENTITIES
# =============================================================================

def metric_determinant(g: MetricTensor) -> float:
    """
    Determinant of a metric.

    A Gordon metric differs from Minkowski by a rank-one term lambda v v^T, so
    det = det(eta) (1 + lambda v^T eta v) exactly; LU loses digits to
    cancellation there once gamma is large. Other metrics go through LU.
    """
    deviation = g.components - MINKOWSKI
    eigenvalues, eigenvectors = np.linalg.eigh(deviation)
    dominant = int(np.argmax(np.abs(eigenvalues)))
    lam = eigenvalues[dominant]
    rest = np.delete(eigenvalues, dominant)

    if lam == 0.0:
        return float(np.prod(SIGNATURE))
    if np.abs(rest).max() <= RANK_ONE_TOL * abs(lam):
        v = eigenvectors[:, dominant]
        return float(np.prod(SIGNATURE)) * (1.0 + lam * minkowski_norm(v))
    return float(np.linalg.det(g.components))


def inverse_residual(g_up: MetricTensor, g_down: MetricTensor) -> float:
    """
    max |g^{mu a} g_{a nu} - delta| scaled by the operand magnitudes.

    Rounding of the stored components alone limits the absolute residual to
    about 1e-16 * |g^| * |g_|, which is 1e-11 at eps = 100 and |beta| = 0.99.
    """
    product = g_up.components @ g_down.components
    scale = np.abs(g_up.components).max() * np.abs(g_down.components).max()
    return float(np.abs(product - np.eye(4)).max() / scale)


# =============================================================================
# LAGRANGIAN DENSITIES
# =============================================================================

def lagrangian_rest(F: FieldStrength, epsilon: float) -> float:
    """L = (eps E^2 - B^2) / 2 in the medium rest frame."""
    E = np.array(F.electric)
    B = np.array(F.magnetic)
    return 0.5 * (epsilon * float(E @ E) - float(B @ B))


def lagrangian_covariant(F: FieldStrength, u: FourVelocity, epsilon: float) -> float:
    """L = -F_{mu nu} F^{mu nu} / 4 - ((eps - 1) / 2) F_{mu nu} u^nu F^{mu l} u_l."""
    lower = F.tensor()
    upper = MINKOWSKI @ lower @ MINKOWSKI
    maxwell = -0.25 * float(np.einsum('mn,mn->', lower, upper))
    # F_{mu nu} u^nu and F^{mu lambda} u_lambda
    electric_lower = lower @ u.vector
    electric_upper = upper @ u.covector
    coupling = float(electric_lower @ electric_upper)
    return maxwell - 0.5 * (epsilon - 1.0) * coupling


def lagrangian_geometric(F: FieldStrength, g: MetricTensor) -> float:
    """L = -F_{mu nu} g^{mu rho} g^{nu sigma} F_{rho sigma} / 4."""
    if g.variance is not Variance.CONTRAVARIANT:
        raise MetricError("lagrangian_geometric needs the contravariant metric")
    lower = F.tensor()
    return -0.25 * float(np.einsum('mn,mr,ns,rs->', lower, g.components, g.components, lower))


def lagrangian_magnitude(F: FieldStrength, g: MetricTensor) -> float:
    """
    The geometric contraction with every term taken in absolute value.

    Its terms of order (eps gamma^2)^2 cancel exactly, so rounding in the
    stored g leaves errors relative to this size, not to L itself.
    """
    lower = np.abs(F.tensor())
    comps = np.abs(g.components)
    return 0.25 * float(np.einsum('mn,mr,ns,rs->', lower, comps, comps, lower))
