"""Scalar waves on the effective metric, 1+1 radial sector."""

from .wavesim import (
    PacketDirection,
    Grid1D,
    WaveField,
    init_packet,
    step,
    run,
    energy_diagnostic,
)
