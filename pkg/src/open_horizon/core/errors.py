"""
open-horizon Exceptions
=======================

Two families:
- ValidationError: bad input or a violated precondition (CLI exit code 2)
- NumericalError: a computation broke down (CLI exit code 3)
"""

from typing import List, Sequence, Tuple


class OpenHorizonError(Exception):
    """Base class for every open-horizon error."""


# =============================================================================
# VALIDATION
# =============================================================================

class ValidationError(OpenHorizonError, ValueError):
    """Input outside a documented precondition."""


class MediumError(ValidationError):
    """Invalid oscillator mode or permittivity."""


class SuperluminalError(ValidationError):
    """Medium three-velocity with |beta| >= 1."""


class MetricError(ValidationError):
    """Malformed metric tensor or epsilon < 1."""


class FlowProfileError(ValidationError):
    """Flow profile violating 0 <= beta < 1 or with a bad domain/table."""


class CFLError(ValidationError):
    """Time step larger than the CFL limit of the grid."""


class SupportError(ValidationError):
    """Wave packet overlapping a sponge layer."""


class ScenarioParseError(ValidationError):
    """Scenario text that is not well-formed JSON."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class ScenarioError(ValidationError):
    """
    Scenario that parsed but failed validation.

    Carries every issue found, not just the first.
    """

    def __init__(self, issues: Sequence[Tuple[str, str]]):
        self.issues: List[Tuple[str, str]] = list(issues)
        lines = [f"{path}: {message}" for path, message in self.issues]
        super().__init__("; ".join(lines))


# =============================================================================
# NUMERICAL
# =============================================================================

class NumericalError(OpenHorizonError, ArithmeticError):
    """A numerical procedure could not deliver a valid result."""


class ResonanceError(NumericalError):
    """Frequency inside the guard band of an oscillator resonance."""


class DivergenceError(NumericalError):
    """Local-operator expansion evaluated outside its radius of convergence."""


class NoHorizonError(NumericalError):
    """Operation needs a horizon but the profile has none."""


class SingularHorizonError(NumericalError):
    """Surface gravity denominator 1 - beta_h^2 vanishes (epsilon -> 1)."""


class HorizonSingularityError(NumericalError):
    """Static-form transform requested inside the horizon-exclusion band."""


class StepCollapseError(NumericalError):
    """Ray integrator needed a step below the collapse threshold."""


class InstabilityError(NumericalError):
    """Wave field grew beyond the instability bound."""
