"""Exception hierarchy shared by every module."""


class ChoiconeError(Exception):
    """Base class for all library errors."""


class DimMismatch(ChoiconeError, ValueError):
    pass


class BadDims(ChoiconeError, ValueError):
    pass


class NotHermitian(ChoiconeError, ValueError):
    pass


class NoConvergence(ChoiconeError, ArithmeticError):
    pass


class NotCompletelyPositive(ChoiconeError, ValueError):
    pass


class NotDualPair(ChoiconeError, ValueError):
    pass


class SingularTheta(ChoiconeError, ArithmeticError):
    pass


class SingularAd(ChoiconeError, ArithmeticError):
    pass


class ZeroVector(ChoiconeError, ValueError):
    pass


class NotHermiticityPreserving(ChoiconeError, ValueError):
    pass


class FormatError(ChoiconeError, ValueError):
    """Malformed JSON input."""
