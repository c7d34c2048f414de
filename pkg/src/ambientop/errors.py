"""Exception types shared across the package."""


class AmbientOpError(Exception):
    """Base class for parameter and truncation errors."""


class PoleError(AmbientOpError, ZeroDivisionError):
    """A Gamma pole in a coefficient formula that does not cancel."""


class ParityError(AmbientOpError, ValueError):
    """Dimension hypothesis violated (n even with k too large)."""


class TruncationError(AmbientOpError, ValueError):
    """A jet does not carry enough rho/epsilon orders for the request."""


class WeightMismatchError(AmbientOpError, ValueError):
    """An ambient function has the wrong homogeneity weight for an operator."""
