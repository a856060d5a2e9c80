"""PT-symmetric two-level systems: spectra, biorthogonal structure, flavor
transitions, exceptional points and the passive-PT reading of meson mixing."""

from .errors import (
    AlphaOutOfRange,
    DegenerateMixing,
    EPHasNoMetric,
    NearEP,
    NonConvergence,
    NonDiagonalizablePath,
    NonzeroPhi,
    NotBrokenPhase,
    NotDecomposable,
    NumericalError,
    PT2Error,
    ValidationError,
    WidthNotPositive,
)
from .hamiltonian import (
    Broken,
    DerivedBrokenParams,
    ExceptionalPoint,
    PTParams,
    Symmetric,
    build,
    classify,
    eigenvalues,
)

__version__ = "0.1.0"

__all__ = [
    "AlphaOutOfRange",
    "Broken",
    "DegenerateMixing",
    "DerivedBrokenParams",
    "EPHasNoMetric",
    "ExceptionalPoint",
    "NearEP",
    "NonConvergence",
    "NonDiagonalizablePath",
    "NonzeroPhi",
    "NotBrokenPhase",
    "NotDecomposable",
    "NumericalError",
    "PT2Error",
    "PTParams",
    "Symmetric",
    "ValidationError",
    "WidthNotPositive",
    "build",
    "classify",
    "eigenvalues",
]
