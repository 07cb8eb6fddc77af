"""Exception hierarchy shared across the package.

Validation-style errors (bad files, bad parameters, unsupported metric
pairings) derive from :class:`ValidationError` so the CLI and the HTTP
service can map them to exit code 2 / status 4xx uniformly.
"""

from __future__ import annotations


class PatredError(Exception):
    """Base class for all package errors."""


class ValidationError(PatredError):
    """Input failed a precondition (bad file, bad shape, bad parameter)."""


class DataFormatError(ValidationError):
    """A CSV or JSON input could not be parsed into the expected shape."""


class CapabilityError(ValidationError):
    """Metric and redundancy configuration cannot be combined.

    Point-pairing metrics (Manhattan, Euclidean, Pearson) compare vectors
    element by element and therefore require both inputs to keep the same
    number of points in the same order. Area-line and cloud redundancy
    break that pairing, so those combinations are rejected.
    """


class DegenerateComparisonError(PatredError):
    """An information quantity is undefined for this input.

    Raised when a marginal occupancy entropy is zero (fully empty or
    fully occupied grid), which leaves NMI without a defined value.
    """
