"""Exception types shared across the toolkit."""


class ToolkitError(Exception):
    """Base class for every error raised by this package."""


class InvalidParameterError(ToolkitError, ValueError):
    """An argument is outside its allowed range or malformed."""


class InvalidStateError(ToolkitError, ValueError):
    """A covariance matrix violates symmetry, positivity or the uncertainty bound."""


class DomainError(ToolkitError, ValueError):
    """Inputs are individually valid but jointly unphysical."""


class ModelValidityError(DomainError):
    """A result left the regime where the model approximation holds."""


class InsufficientDataError(ToolkitError):
    """Not enough data for the requested computation."""


class DataFormatError(ToolkitError, ValueError):
    """A CSV or config file failed to parse; the message carries the offending line."""
