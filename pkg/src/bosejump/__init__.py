"""Temperature jump and Kapitsa resistance of a condensed Bose gas.

Evaluates the analytic half-space solution for the temperature jump at a
wall bounding a degenerate Bose gas whose excitations follow the general
two-branch dispersion law: weighted moment integrals, the 2x2 dispersion
matrix and kernel of the characteristic system, the successive
approximation series for the jump coefficient, and the resulting
resistance and parameter sweeps.
"""

from .errors import DispersionDegeneracyError, OscillatoryIntegralError, QuadratureError
from .spectrum import SpectrumParams, alpha, bose_weight, energy, group_velocity
from .moments import (
    DEFAULT_CONFIG,
    J_moment,
    MomentIndex,
    QuadratureConfig,
    ScalarMoments,
    T_moment,
    angular_factor,
    c_cutoff,
    scalar_moments,
)

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_CONFIG",
    "DispersionDegeneracyError",
    "J_moment",
    "MomentIndex",
    "OscillatoryIntegralError",
    "QuadratureConfig",
    "QuadratureError",
    "ScalarMoments",
    "SpectrumParams",
    "T_moment",
    "alpha",
    "angular_factor",
    "bose_weight",
    "c_cutoff",
    "energy",
    "group_velocity",
    "scalar_moments",
    "__version__",
]
