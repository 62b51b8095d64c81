"""Exception types shared across the package.

The CLI maps ``InputError`` subclasses to exit code 2 and ``BudgetError``
subclasses to exit code 3.
"""


class ZPDError(Exception):
    pass


class InputError(ZPDError, ValueError):
    """Bad arguments, violated preconditions, malformed files."""


class DomainError(InputError):
    pass


class PreconditionError(InputError):
    pass


class TableParseError(InputError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class CacheError(InputError):
    pass


class CacheVersionError(CacheError):
    pass


class CacheChecksumError(CacheError):
    pass


class BudgetError(ZPDError):
    """A numerical target could not be reached with the available resources."""


class IncompleteTableError(BudgetError):
    def __init__(self, message: str, required_height: float | None = None):
        super().__init__(message)
        self.required_height = required_height


class CompletenessError(BudgetError):
    def __init__(self, message: str, interval: tuple[float, float] | None = None):
        super().__init__(message)
        self.interval = interval


class QuadratureError(BudgetError):
    def __init__(self, message: str, estimate: complex | None = None, error: float | None = None):
        super().__init__(message)
        self.estimate = estimate
        self.error = error
