"""Exception taxonomy shared across the package."""


class ChancapError(Exception):
    """Base class for package errors."""


class ConfigError(ChancapError):
    """Invalid run configuration; message carries the offending field path."""


class NumericalError(ChancapError):
    """A numerical routine failed to produce a trustworthy result."""


class StepSizeError(NumericalError):
    """Volterra step size too large; the recursion became unstable."""
