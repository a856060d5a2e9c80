"""Exception hierarchy.

Two families: ``ValidationError`` for inputs outside a formula's domain and
``NumericalError`` for situations where the arithmetic itself breaks down
(normalizations diverging near an exceptional point, a non-converging series).
The CLI maps them to exit codes 1 and 2 respectively.
"""


class PT2Error(Exception):
    """Base class for every error raised by this package."""


class ValidationError(PT2Error, ValueError):
    pass


class NumericalError(PT2Error, ArithmeticError):
    pass


class NonDiagonalizablePath(ValidationError):
    """sigma == 0: the rapidity/angle of the phase is undefined."""


class NonzeroPhi(ValidationError):
    """Off-diagonal phase other than 0; the closed forms assume phi = 0."""


class AlphaOutOfRange(ValidationError):
    pass


class NotDecomposable(ValidationError):
    """Meson Hamiltonian has no passive-PT (PT + global decay) decomposition."""


class NotBrokenPhase(ValidationError):
    pass


class WidthNotPositive(ValidationError):
    """chi <= gamma gives a non-positive decay width Gamma_1."""


class NonConvergence(NumericalError):
    pass


class NearEP(NumericalError):
    """Eigenvector normalization diverges (sin(alpha) or sinh(alpha') ~ 0)."""


class EPHasNoMetric(NumericalError):
    pass


class DegenerateMixing(NumericalError):
    """p*q == 0 so the meson mixing parameter kappa is undefined."""
