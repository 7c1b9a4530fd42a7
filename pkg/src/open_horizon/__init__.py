"""
open-horizon: Dielectric black-hole analogue toolkit
====================================================

Light in a moving dielectric follows the effective (Gordon) metric of the
medium. A radial flow that outruns the light speed c/n in the medium makes a
horizon: a black hole for inward flow, a white hole for outward flow.

Modules:
- core: constants, errors, the oscillator medium and the Gordon metric
- flow: radial flow profiles, horizons and coordinate forms
- rays: radial null geodesics
- waves: scalar waves on the effective metric
- cli: scenario files, outputs and the command line
"""

__version__ = "0.1.0"
__author__ = "open-horizon contributors"

# Core physics
from .core import MediumModel, FourVelocity, MetricTensor

# Flows and horizons
from .flow import FlowDirection, PowerLawFlow, HorizonReport, analyze

__all__ = [
    'MediumModel',
    'FourVelocity',
    'MetricTensor',
    'FlowDirection',
    'PowerLawFlow',
    'HorizonReport',
    'analyze',
]
