"""Exception types raised across the package."""


class LbpxError(Exception):
    """Base class for all lbpx errors."""


class PgmFormatError(LbpxError):
    """Malformed or unsupported PGM data."""


class BoundsError(LbpxError):
    """Coordinate or rectangle outside the valid range."""


class ParameterError(LbpxError):
    """Invalid operator parameter or incompatible argument combination."""


class CorruptMapError(LbpxError):
    """Label map contains values outside its declared label space."""


class TrainingError(LbpxError):
    """Template construction received unusable training input."""


class ModelFormatError(LbpxError):
    """Model file cannot be parsed into a valid model."""


class ModelMismatchError(LbpxError):
    """Query or scene configuration disagrees with the model."""


class ManifestError(LbpxError):
    """Malformed dataset manifest."""


class EvaluationError(LbpxError):
    """Evaluation pipeline failure (unreadable entry, unknown test label)."""
