"""besselspec - spectral and scattering theory of perturbed Bessel operators.

This package computes, for -d^2/dx^2 + l(l+1)/x^2 + q(x) on (0, b):
- Regular and non-principal solutions
- Jost functions, phase shifts and bound states
- The singular Weyl m-function and the spectral measure
- The Liouville transform onto a Krein string and its limit order
"""

__version__ = "0.1.0"

from besselspec.models.base import (
    AngularMomentum,
    ComplexEnergy,
    GridSpec,
    MRoute,
    MSample,
    ScatteringData,
    SpectralData,
    StringModel,
    WaveSample,
)
from besselspec.models.potential import PotentialSpec, load_potential
from besselspec.utils.config import Settings

__all__ = [
    "__version__",
    "AngularMomentum",
    "ComplexEnergy",
    "GridSpec",
    "MRoute",
    "MSample",
    "ScatteringData",
    "SpectralData",
    "StringModel",
    "WaveSample",
    "PotentialSpec",
    "load_potential",
    "Settings",
]
