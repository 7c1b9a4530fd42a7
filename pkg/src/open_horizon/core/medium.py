"""
Dielectric Medium Model
=======================

The medium seen two ways:
- microscopically, as a bath of localized harmonic oscillators coupled to the
  electric field (couplings chi, fundamental frequencies Omega)
- macroscopically, through its permittivity epsilon, static or dispersive

Integrating the oscillators out leaves the response
    eps(omega) = 1 + sum chi^2 / (Omega^2 - omega^2)
whose low-frequency expansion in local operators
    eps(omega) = 1 + sum (chi^2 / Omega^2) sum_k (omega^2 / Omega^2)^k
starts with the static value 1 + sum chi^2 / Omega^2. Keeping only that first
term is the non-dispersive effective theory the rest of the package builds on.

Couplings are scalar magnitudes (isotropic medium); natural units, c = 1.
"""

import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence, Tuple, Union

import numpy as np

from .constants import RESONANCE_GUARD
from .errors import DivergenceError, MediumError, ResonanceError


@dataclass(frozen=True)
class OscillatorMode:
    """One vibration mode of the medium."""
    coupling: float     # chi, >= 0
    frequency: float    # Omega, > 0

    def __post_init__(self):
        if not math.isfinite(self.coupling) or self.coupling < 0:
            raise MediumError(f"coupling must be finite and >= 0, got {self.coupling}")
        if not math.isfinite(self.frequency) or self.frequency <= 0:
            raise MediumError(f"frequency must be finite and > 0, got {self.frequency}")

    @property
    def strength(self) -> float:
        """Static contribution chi^2 / Omega^2."""
        return self.coupling ** 2 / self.frequency ** 2


@dataclass(frozen=True)
class MediumModel:
    """
    Medium described by oscillator modes or by a direct permittivity.

    Exactly one description is used: a direct model carries no modes. An
    empty mode list is vacuum (epsilon = 1).

    Usage:
        glass = MediumModel.from_permittivity(2.25)
        bath = MediumModel.from_modes([(1.0, 1.0), (0.5, 3.0)])
    """
    modes: Tuple[OscillatorMode, ...] = field(default_factory=tuple)
    direct_permittivity: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, 'modes', tuple(self.modes))
        if self.direct_permittivity is not None:
            if self.modes:
                raise MediumError("give either oscillator modes or a direct permittivity, not both")
            eps = self.direct_permittivity
            if not math.isfinite(eps) or eps < 1.0:
                raise MediumError(f"permittivity must be finite and >= 1, got {eps}")

    @classmethod
    def vacuum(cls) -> 'MediumModel':
        return cls()

    @classmethod
    def from_permittivity(cls, epsilon: float) -> 'MediumModel':
        return cls(direct_permittivity=float(epsilon))

    @classmethod
    def from_modes(cls, pairs: Iterable[Union[OscillatorMode, Sequence[float]]]) -> 'MediumModel':
        """Build from OscillatorMode objects or (chi, Omega) pairs."""
        modes = []
        for pair in pairs:
            if isinstance(pair, OscillatorMode):
                modes.append(pair)
            else:
                chi, omega = pair
                modes.append(OscillatorMode(float(chi), float(omega)))
        return cls(modes=tuple(modes))

    @property
    def is_direct(self) -> bool:
        return self.direct_permittivity is not None

    @property
    def min_frequency(self) -> float:
        """Lowest resonance, or +inf when there is none."""
        if not self.modes:
            return math.inf
        return min(mode.frequency for mode in self.modes)


# =============================================================================
# PERMITTIVITY
# =============================================================================

def static_permittivity(model: MediumModel) -> float:
    """epsilon = 1 + sum chi^2 / Omega^2, or the stored value for direct models."""
    if model.is_direct:
        return model.direct_permittivity
    return 1.0 + math.fsum(mode.strength for mode in model.modes)


def dispersive_permittivity(model: MediumModel, omega: float,
                            guard: float = RESONANCE_GUARD) -> float:
    """
    Frequency-domain response eps(omega) = 1 + sum chi^2 / (Omega^2 - omega^2).

    Raises ResonanceError when omega sits within the guard band
    |Omega^2 - omega^2| <= guard * Omega^2 of any mode.
    """
    if omega < 0 or not math.isfinite(omega):
        raise MediumError(f"omega must be finite and >= 0, got {omega}")
    if model.is_direct:
        return model.direct_permittivity

    terms = []
    for mode in model.modes:
        gap = mode.frequency ** 2 - omega ** 2
        if abs(gap) <= guard * mode.frequency ** 2:
            raise ResonanceError(
                f"omega = {omega} is at the resonance Omega = {mode.frequency}"
            )
        terms.append(mode.coupling ** 2 / gap)
    return 1.0 + math.fsum(terms)


def truncated_permittivity(model: MediumModel, omega: float, n_terms: int) -> float:
    """
    Local-operator expansion of eps(omega) kept up to order n_terms.

    n_terms = 0 is the static permittivity. Only valid below the lowest
    resonance; DivergenceError otherwise.
    """
    if n_terms < 0:
        raise MediumError(f"n_terms must be >= 0, got {n_terms}")
    if omega < 0 or not math.isfinite(omega):
        raise MediumError(f"omega must be finite and >= 0, got {omega}")
    if model.is_direct:
        return model.direct_permittivity
    if omega >= model.min_frequency:
        raise DivergenceError(
            f"expansion diverges for omega = {omega} >= min Omega = {model.min_frequency}"
        )

    orders = np.arange(n_terms + 1)
    terms = []
    for mode in model.modes:
        ratio = (omega / mode.frequency) ** 2
        terms.append(mode.strength * math.fsum(ratio ** orders))
    return 1.0 + math.fsum(terms)


def permittivity_curve(model: MediumModel, omegas: Sequence[float],
                       guard: float = RESONANCE_GUARD) -> np.ndarray:
    """eps(omega) over a frequency grid."""
    return np.array([dispersive_permittivity(model, float(w), guard) for w in omegas])


def refractive_index(model: MediumModel) -> float:
    """n = sqrt(epsilon)."""
    return math.sqrt(static_permittivity(model))


def light_speed(model: MediumModel) -> float:
    """Phase speed of light in the medium at rest, c / n."""
    return 1.0 / refractive_index(model)
