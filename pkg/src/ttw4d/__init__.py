"""ttw4d — verification engine for a 4D quantum superintegrable oscillator family.

Exact (rational / polynomial-in-w) operator algebra on the quantum-number
lattice, jet-based numeric checks of the differential realizations, and a
curvature engine for the underlying non-conformally-flat metric.
"""

from .model import (QuantumState, SpectralData, SystemParams,
                    degeneracy_classes, spectral_chain, wavefunction)
from .numcore import Jet, OmegaPoly, Rational, opoly_eval, pochhammer

__version__ = "0.1.0"

__all__ = [
    "Jet", "OmegaPoly", "QuantumState", "Rational", "SpectralData",
    "SystemParams", "degeneracy_classes", "opoly_eval", "pochhammer",
    "spectral_chain", "wavefunction", "__version__",
]
