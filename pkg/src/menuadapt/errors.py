"""Exception hierarchy shared by the loader, the model and the CLI."""

from __future__ import annotations


class MenuAdaptError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(MenuAdaptError, ValueError):
    """Input data violates a structural or numeric invariant."""


class MenuValidationError(ValidationError):
    def __init__(self, message: str, label: str | None = None):
        super().__init__(message)
        self.label = label


class UnknownNodeError(ValidationError, KeyError):
    def __init__(self, key):
        super().__init__(f"unknown menu node: {key!r}")
        self.key = key

    def __str__(self) -> str:
        return self.args[0]


class DistributionError(ValidationError):
    pass


class DistributionKeyError(DistributionError):
    """A distribution entry names something that is not a leaf of the menu."""

    def __init__(self, label: str, reason: str = "is not a leaf of the menu"):
        super().__init__(f"distribution key {label!r} {reason}")
        self.label = label


class DistributionSumError(DistributionError):
    def __init__(self, total: float, tolerance: float):
        super().__init__(
            f"probabilities sum to {total!r}, outside 1 +/- {tolerance:g} "
            "(pass renormalize=True to rescale)"
        )
        self.total = total


class BundleError(ValidationError):
    pass


class BundleNotFoundError(BundleError, FileNotFoundError):
    pass


class BundleSchemaError(BundleError):
    pass


class InvariantViolation(MenuAdaptError, AssertionError):
    """Two independent computations disagreed; indicates a bug, not bad input."""
