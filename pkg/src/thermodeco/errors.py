"""Exception types shared across the package."""


class SingularModeError(ValueError):
    """Raised when a quantity that diverges at k = 0 is requested for the conserved mode."""


class DimensionMismatchError(ValueError):
    """Raised when a lattice field's dimension disagrees with the medium parameters."""


class GridMismatchError(ValueError):
    """Raised when two histories or fields do not share the same grid."""


class InsufficientDataError(ValueError):
    """Raised when an estimator is given too few samples or too short a window."""


class NonHermitianError(ValueError):
    """Raised when a spectral field lacks the Hermitian symmetry of a real field."""
