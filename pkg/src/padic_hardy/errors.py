"""Exception hierarchy shared by every module of the package."""


class PAdicHardyError(Exception):
    """Base class for all errors raised by padic_hardy."""


class PrimeMismatch(PAdicHardyError, ValueError):
    pass


class PrecisionError(PAdicHardyError, ArithmeticError):
    """An operation needed p-adic digits that the operands do not carry."""


class DimensionMismatch(PAdicHardyError, ValueError):
    pass


class DivergentNorm(PAdicHardyError, ArithmeticError):
    pass


class DivergentIntegral(PAdicHardyError, ArithmeticError):
    pass


class InvalidExponent(PAdicHardyError, ValueError):
    pass


class InvalidEpsilon(PAdicHardyError, ValueError):
    pass


class UnsupportedTail(PAdicHardyError, ValueError):
    pass


class UnrepresentableTail(PAdicHardyError, ValueError):
    pass


class NonIntegrableAtZero(PAdicHardyError, ArithmeticError):
    pass


class NonIntegrableAtInfinity(PAdicHardyError, ArithmeticError):
    pass


class NegativeInput(PAdicHardyError, ValueError):
    pass


class InadmissibleParameters(PAdicHardyError, ValueError):
    pass


class ZeroInput(PAdicHardyError, ValueError):
    pass


class NonconvergedIteration(PAdicHardyError, RuntimeError):
    pass
