"""Exception types shared across the package."""


class EntrofuncError(Exception):
    """Base class for library errors."""


class SpecError(EntrofuncError, ValueError):
    """A flow description or argument is malformed."""


class ResourceLimitError(EntrofuncError):
    """A configured size ceiling was exceeded; nothing was approximated."""


class NotFiniteToOneError(EntrofuncError, ValueError):
    """A preimage was requested through an infinite fiber."""


class InapplicableError(EntrofuncError):
    """A law or bridge precondition does not hold for the given input."""


class ContractivityError(EntrofuncError, AssertionError):
    """A flow flagged contractive increased a norm."""


class BridgeFailure(EntrofuncError, AssertionError):
    """A per-step bridge identity failed; carries the witnessing step."""

    def __init__(self, message: str, n: int | None = None):
        super().__init__(message)
        self.n = n
