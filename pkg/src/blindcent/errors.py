"""Exception types raised by numerical and degeneracy guards."""


class BlindCentError(Exception):
    """Base class for errors raised by this package."""


class NotConnectedError(BlindCentError):
    """The graph has more than one connected component."""


class DegenerateLeadingEigenvalueError(BlindCentError):
    """The top adjacency eigenvalue is not numerically simple."""


class NonFiniteError(BlindCentError):
    """An input matrix contains NaN or infinite entries."""


class SingleEigenvalueError(BlindCentError):
    """An eigengap was requested for a one-element spectrum."""


class DegenerateSpectrumError(BlindCentError):
    """The spectrum has (numerically) zero range and cannot be rescaled."""


class AmbiguousIndexError(BlindCentError):
    """The filtered top eigenvalue ties another value, so its rank is undefined."""


class ZeroVectorError(BlindCentError):
    """A direction was requested for a (numerically) zero vector."""


class ZeroEigengapError(BlindCentError):
    """A bound that divides by the eigengap received delta <= 0."""


class ZeroEntryError(BlindCentError):
    """A bound that divides by centrality entries received a zero entry."""
