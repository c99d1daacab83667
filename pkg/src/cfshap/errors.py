"""Exception types shared across the package."""


class CfShapError(Exception):
    """Base class for all package-specific errors."""


class DatasetError(CfShapError):
    """Raised when a dataset cannot be loaded or fails validation."""


class NotContrastiveError(CfShapError):
    """Raised when the desired class equals the predicted class."""


class NoCounterfactualError(CfShapError):
    """Raised when neither mutation nor the nearest-desired fallback can
    produce a point of the desired class."""


class ModelFormatError(CfShapError):
    """Raised when a serialized model file has the wrong version or is
    otherwise unreadable."""
