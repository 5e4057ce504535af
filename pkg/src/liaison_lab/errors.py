"""Exception hierarchy shared by every layer of the toolkit."""


class LiaisonLabError(Exception):
    """Base class for all toolkit errors."""


class DivisionByZero(LiaisonLabError, ZeroDivisionError):
    pass


class UnsupportedField(LiaisonLabError):
    pass


class FieldTooSmall(LiaisonLabError):
    pass


class AmbientMismatch(LiaisonLabError, ValueError):
    pass


class InconsistentDegrees(LiaisonLabError, ValueError):
    pass


class DegreeOutOfRange(LiaisonLabError, ValueError):
    pass


class ResampleExhausted(LiaisonLabError):
    pass


class NotEnoughCurves(LiaisonLabError):
    pass


class NotAPointScheme(LiaisonLabError, ValueError):
    """Raised when a zero-dimensional scheme was expected (e.g. the unit ideal was given)."""


class ConfigInvalid(LiaisonLabError, ValueError):
    pass


class ParseError(LiaisonLabError, ValueError):
    pass
