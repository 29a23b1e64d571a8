"""Exception types shared across the package."""


class LayersimError(Exception):
    """Base class for all package-specific errors."""


class InvalidParameterError(LayersimError, ValueError):
    """A parameter violates an operation's precondition."""


class TieError(LayersimError):
    """Two adjacent vertices carry the same age; callers should resample."""

    def __init__(self, u, v):
        super().__init__(f"age tie on edge ({u}, {v})")
        self.edge = (u, v)


class SizeError(LayersimError, ValueError):
    """Input too large for an exact (enumerative) oracle."""


class InvalidModeError(LayersimError, ValueError):
    """Requested adjacency or evaluation mode does not apply to the input."""


class UnsupportedInputError(LayersimError, ValueError):
    """Input shape is valid but not supported by this operation."""
