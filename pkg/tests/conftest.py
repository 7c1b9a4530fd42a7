"""
Shared fixtures.
Run with: python3 -m pytest tests/
"""

import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', 'src'))

import pytest

from open_horizon.flow.profiles import FlowDirection, PowerLawFlow


@pytest.fixture
def black_hole():
    """Inward flow beta = 0.8 r0 / r; with eps = 4 the horizon sits at 1.6 r0."""
    return PowerLawFlow(direction=FlowDirection.INWARD, r_min=0.85, r_max=8.0, beta0=0.8)


@pytest.fixture
def white_hole(black_hole):
    return black_hole.reversed()
