class PoleAtPoint(ZeroDivisionError):
    """A denominator vanished at an exact evaluation point."""

    def __init__(self, message, denominator=None):
        super().__init__(message)
        self.denominator = denominator


class UnsupportedOperation(ValueError):
    pass


class BudgetExceeded(RuntimeError):
    """An expression or linear system grew past its configured size budget."""


class InconsistentSystem(ArithmeticError):
    pass


class DegenerateParameters(ValueError):
    """Parameters hit a resonance where a closed-form denominator vanishes."""


class PoleEncountered(ArithmeticError):
    def __init__(self, message, t=None):
        super().__init__(message)
        self.t = t
