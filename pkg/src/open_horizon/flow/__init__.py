"""
Radial flows and their horizons.

Provides flow speed profiles, the horizon finder with surface gravity and
temperature, and the stationary/static coordinate forms of the metric.
"""

from .profiles import (
    FlowDirection,
    FlowProfile,
    PowerLawFlow,
    TanhStepFlow,
    LinearFlow,
    TabulatedFlow,
    FAMILIES,
)

from .horizon import (
    HorizonKind,
    HorizonReport,
    find_ergosurface,
    classify,
    surface_gravity,
    hawking_temperature,
    analyze,
)

from .coords import (
    RadialMetricComponents,
    radial_block,
    static_form,
    interval_check,
)
