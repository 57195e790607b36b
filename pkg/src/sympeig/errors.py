"""Exception types shared across the package."""


class SympeigError(Exception):
    """Base class for all package-specific errors."""


class InvalidInputError(SympeigError):
    """Malformed input: wrong shape, non-finite entries, bad parameters."""


class NonSymplecticError(InvalidInputError):
    """Matrix failed the symplectic conditions.

    Carries the largest violation norm so callers can report how far the
    input is from the symplectic group.
    """

    def __init__(self, message, violation):
        super().__init__(message)
        self.violation = float(violation)


class InvalidPairingError(SympeigError):
    """Overlap requested between states that do not share a source or flavor."""


class DeltaSupportedStateError(SympeigError):
    """State has a lower-dimensional support and no pointwise wavefunction."""


class NotRepresentableError(SympeigError):
    """Requested closed form does not exist for these inputs."""


class QuadratureError(SympeigError):
    """Numerical integration failed its self-consistency check.

    The best available estimate is kept on the exception.
    """

    def __init__(self, message, estimate=None):
        super().__init__(message)
        self.estimate = estimate


class InternalInconsistencyError(SympeigError):
    """A quantity that is guaranteed by the theory came out wrong numerically.

    Seeing this error means an upstream bug (or a wildly inappropriate rank
    tolerance), not a property of the input.
    """
