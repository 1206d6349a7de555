"""Exception hierarchy shared by the library and the experiment runner."""


class LabError(Exception):
    """Base class for every error raised on purpose by the lab."""


class ContextMismatchError(LabError, ValueError):
    """Operands live in different groups F_p^n."""


class EmptySetError(LabError, ValueError):
    """An operation that needs a nonempty set received the empty set."""


class DimensionMismatchError(LabError, ValueError):
    """A matrix or table does not have the shape the group requires."""


class BudgetExceededError(LabError, RuntimeError):
    """An enumeration would exceed its configured budget.

    Attributes:
        estimate: Number of work items the operation would need
        budget: The configured limit
    """

    def __init__(self, what: str, estimate: int, budget: int):
        self.what = what
        self.estimate = estimate
        self.budget = budget
        super().__init__(
            f"{what}: needs {estimate} items, budget is {budget}"
        )


class NumericalDisagreementError(LabError, ArithmeticError):
    """Two independent computations of the same quantity disagree."""


class FileFormatError(LabError, ValueError):
    """A set or function file is malformed."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)
