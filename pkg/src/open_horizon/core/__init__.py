"""
Core physics for open-horizon.

- Constants and tolerances
- Exception hierarchy
- Oscillator medium and its permittivity
- Gordon metric, four-velocities and the field Lagrangian
"""

from .constants import *
from .errors import (
    OpenHorizonError,
    ValidationError,
    NumericalError,
)
from .medium import (
    OscillatorMode,
    MediumModel,
    static_permittivity,
    dispersive_permittivity,
    truncated_permittivity,
    refractive_index,
)
from .metric import (
    FourVelocity,
    MetricTensor,
    FieldStrength,
    four_velocity,
    contravariant_metric,
    covariant_metric,
)
