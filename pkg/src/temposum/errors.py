"""Exception hierarchy.

Everything raised on purpose derives from :class:`TemposumError`.  Errors
caused by the input data (as opposed to bad arguments) also derive from
:class:`DataError`; the CLI maps those to exit code 3.
"""


class TemposumError(Exception):
    pass


class DataError(TemposumError, ValueError):
    pass


# ingest
class MissingColumn(DataError):
    pass


class UnparseableValue(DataError):
    def __init__(self, row, column, value):
        self.row = row
        self.column = column
        self.value = value
        super().__init__(f"row {row}, column {column!r}: cannot parse {value!r}")


class EmptySeries(DataError):
    pass


class EmptyCohort(DataError):
    pass


class CohortTooSmall(DataError):
    pass


# discretize / mining / fuzzy
class DegenerateSeries(DataError):
    pass


class LengthMismatch(TemposumError, ValueError):
    pass


class TooFewTuples(DataError):
    pass


class EmptyQuery(DataError):
    pass


class OutOfRange(TemposumError, ValueError):
    pass


# protoform generation; the pipeline treats these as "no summary"
class Suppressed(DataError):
    pass


class NoCompleteWindow(Suppressed):
    pass


class IncompleteWindow(Suppressed):
    pass


class EmptyQualifierSubset(Suppressed):
    pass


class TooFewOccurrences(Suppressed):
    pass


class TooShort(Suppressed):
    pass


class OrphanWindow(Suppressed):
    pass


class SingleAttribute(Suppressed):
    pass


class MissingGoal(DataError):
    pass


class MissingGuideline(DataError):
    pass
