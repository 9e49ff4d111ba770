"""Exception types raised for inputs outside the physical domain."""


class DomainError(ValueError):
    """An argument is outside the range where the quantity is defined."""


class AmbiguousStateError(DomainError):
    """The requested state is not unique (degenerate top eigenvalue)."""
