"""Exception types raised across the package."""


class DtwMergeError(Exception):
    pass


class InvalidSeries(DtwMergeError, ValueError):
    """A series is empty or holds non-finite values."""


class InvalidIndex(DtwMergeError, IndexError):
    pass


class InvalidInput(DtwMergeError, ValueError):
    pass


class InvalidDataset(DtwMergeError, ValueError):
    pass


class OracleTooLarge(DtwMergeError, ValueError):
    pass


class BandInfeasible(DtwMergeError, ValueError):
    """No warping path fits inside the requested band."""


class DatasetMismatch(DtwMergeError, ValueError):
    pass


class ParseError(DtwMergeError, ValueError):
    def __init__(self, message, row=None, column=None):
        where = []
        if row is not None:
            where.append(f"row {row}")
        if column is not None:
            where.append(f"column {column}")
        if where:
            message = f"{message} ({', '.join(where)})"
        super().__init__(message)
        self.row = row
        self.column = column


class MissingValueUnsupported(ParseError):
    pass


class EmptySeries(ParseError):
    pass
