"""Homodyne tomography of photon-subtracted / heralded two-photon states.

Closed-form Wigner functions for states conditioned on 0, 1 or 2 detector
clicks, an exact Gaussian-mixture derivation of the same states, a homodyne
record simulator, and three reconstruction methods (filtered back-projection,
maximum likelihood, quadrature moments).
"""

from .model import PhysicalParams, ReducedParams, reduce
from .homodyne import RecordSet, SimConfig, sample
from .tomography import (
    critical_values,
    histogram,
    maxlik_reconstruct,
    moment_estimate,
    radon_reconstruct,
)

__version__ = "0.1.0"

__all__ = [
    "PhysicalParams",
    "ReducedParams",
    "RecordSet",
    "SimConfig",
    "critical_values",
    "histogram",
    "maxlik_reconstruct",
    "moment_estimate",
    "radon_reconstruct",
    "reduce",
    "sample",
]
