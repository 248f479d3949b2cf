"""Exception types raised across the package."""


class BandsampError(Exception):
    """Base class for all package errors."""


class DataError(BandsampError, ValueError):
    """Bad input data: malformed files, inconsistent shapes, invalid arguments."""


class PGMError(DataError):
    """Malformed or unsupported PGM file.

    ``offset`` is the byte offset in the file where parsing failed.
    """

    def __init__(self, message, offset):
        super().__init__(f"{message} (at byte offset {offset})")
        self.offset = offset


class PGMHeaderError(PGMError):
    pass


class PGMTruncatedError(PGMError):
    pass


class PGMMaxvalError(PGMError):
    pass


class DimensionMismatchError(DataError):
    pass


class NumericalError(BandsampError, ArithmeticError):
    """A computation could not produce a trustworthy result."""


class UnderdeterminedError(NumericalError):
    pass


class RankDeficientError(NumericalError):
    def __init__(self, message, rank=None, n_unknowns=None, condition=None):
        super().__init__(message)
        self.rank = rank
        self.n_unknowns = n_unknowns
        self.condition = condition


class AliasingError(NumericalError):
    def __init__(self, message, leaked_energy):
        super().__init__(message)
        self.leaked_energy = leaked_energy
