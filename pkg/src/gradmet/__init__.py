"""Precision limits of magnetic-field-gradient estimation.

Compares an N-atom W-state probe against two uncorrelated Ramsey probes of
the same physical extent, in closed form and against exact density-matrix
simulation, with and without local dephasing/dissipation.
"""

from .model import (
    ChainConfig,
    ConfigError,
    NoiseRates,
    PrecisionPoint,
    Scheme,
    load_config,
    noise_from_physical,
    omega_profile,
    theta1_from_physical,
)

__version__ = "0.1.0"

__all__ = [
    "ChainConfig",
    "ConfigError",
    "NoiseRates",
    "PrecisionPoint",
    "Scheme",
    "load_config",
    "noise_from_physical",
    "omega_profile",
    "theta1_from_physical",
    "__version__",
]
