"""Exception hierarchy shared by all modules."""


class FcaDepthError(Exception):
    """Base class for every error raised by this package."""


class DimensionError(FcaDepthError, ValueError):
    """A set or measure was built against a different universe size."""


class SizeLimitError(FcaDepthError):
    """An exhaustive enumeration would exceed the configured cap."""

    def __init__(self, what, size, cap):
        super().__init__(f"{what}: size {size} exceeds cap {cap}")
        self.what = what
        self.size = size
        self.cap = cap


class IngestionError(FcaDepthError, ValueError):
    """Raw input could not be turned into a table, context or measure.

    ``row`` and ``column`` locate the offending cell when known.
    """

    def __init__(self, message, row=None, column=None):
        where = []
        if row is not None:
            where.append(f"row {row}")
        if column is not None:
            where.append(f"column {column!r}")
        if where:
            message = f"{message} ({', '.join(where)})"
        super().__init__(message)
        self.row = row
        self.column = column


class ScaleTypeError(IngestionError, TypeError):
    """A value has the wrong type for the scaling directive of its column."""


class ValidationError(FcaDepthError, ValueError):
    """A structural precondition does not hold (poset axioms, tree shape, ...)."""


class UnknownDepthFunction(FcaDepthError, KeyError):
    def __str__(self):
        return f"unknown depth function {self.args[0]!r}"
