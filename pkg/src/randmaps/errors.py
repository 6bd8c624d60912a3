"""Exception hierarchy shared by the samplers, map builders and verifiers."""


class RandMapsError(Exception):
    """Base class for every error raised by the package."""


class SizeCapError(RandMapsError, ValueError):
    """An exhaustive enumeration was asked for a size beyond its cap."""


class TreeOverflowError(RandMapsError):
    """A Galton-Watson sample grew past the configured node cap."""

    def __init__(self, node_cap):
        super().__init__(f"Galton-Watson tree exceeded node_cap={node_cap}")
        self.node_cap = node_cap


class RetryLimitError(RandMapsError):
    """Rejection sampling gave up."""

    def __init__(self, attempts, message=None):
        super().__init__(message or f"no acceptable sample after {attempts} attempts")
        self.attempts = attempts


class InfeasibleConditioningError(RetryLimitError):
    """No tree of the requested size has positive probability.

    Raised before any attempt is made, so ``attempts`` is 0.
    """

    def __init__(self, n_vertices):
        super().__init__(0, f"offspring law gives zero mass to trees with {n_vertices} vertices")
        self.n_vertices = n_vertices


class MapValidationError(RandMapsError, ValueError):
    """Rotation data does not describe a valid map."""


class InvolutionError(MapValidationError):
    pass


class RotationError(MapValidationError):
    pass


class DisconnectedMapError(MapValidationError):
    pass


class CorruptedMapError(MapValidationError):
    """Euler characteristic does not give a nonnegative integer genus."""


class BijectionViolation(RandMapsError):
    """An exhaustive bijection check found a witness against it."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NumericalError(RandMapsError, ArithmeticError):
    pass
