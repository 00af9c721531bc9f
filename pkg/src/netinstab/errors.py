"""Exception types shared across the package."""


class NetinstabError(Exception):
    """Base class for all package errors."""


class MalformedModel(NetinstabError):
    """Model file or graph data violates a structural requirement."""


class BadNode(NetinstabError):
    """Node index outside the graph."""


class BadParameter(NetinstabError):
    """Argument outside its documented domain."""


class BadMatrix(NetinstabError):
    """Matrix input is non-square or contains non-finite entries."""


class NumericalFailure(NetinstabError):
    """An eigenvalue computation failed to converge or failed verification."""


class TooLarge(NetinstabError):
    """Graph exceeds the exact-enumeration guard."""


class DivergedTraining(NetinstabError):
    """Training produced a non-finite loss.

    Carries the iteration index at which divergence was detected.
    """

    def __init__(self, iteration: int, message: str | None = None):
        self.iteration = iteration
        super().__init__(message or f"training loss became non-finite at iteration {iteration}")
