"""Exceptions raised by slicekit

Everything a caller can trigger with bad input derives from ValueError,
so plain ``except ValueError`` keeps working. Internal cross-checks that
can only fail on a bug raise InconsistencyError.
"""
from typing import Optional


class ParseError(ValueError):
    def __init__(self, message: str, line: int = 1, column: int = 1):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class DomainTooLargeError(ValueError):
    def __init__(self, message: str, required: int, limit: int):
        super().__init__(f"{message}: {required} exceeds the limit {limit}")
        self.required = required
        self.limit = limit


class DegreeError(ValueError):
    pass


class NotAValuedError(ValueError):
    def __init__(self, message: str, point: Optional[int] = None):
        super().__init__(message)
        self.point = point


class ConstructionError(ValueError):
    pass


class NoCounterexampleError(ValueError):
    pass


class InconsistencyError(RuntimeError):
    pass
