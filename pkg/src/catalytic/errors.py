"""Exception hierarchy shared by every stage of the pipeline."""


class CatalyticError(Exception):
    """Base class; ``stage`` is filled in by the pipeline when re-raised."""

    stage: str | None = None


# exact algebra
class DivisibilityFailure(CatalyticError):
    pass


class ZeroInput(CatalyticError):
    pass


# series
class NotAUnit(CatalyticError):
    pass


class DividedDifferenceFailure(CatalyticError):
    def __init__(self, order: int, message: str = ""):
        self.order = order
        super().__init__(message or f"inexact division at x^{order}")


# equation front end
class EquationSyntaxError(CatalyticError):
    def __init__(self, message: str, position: int):
        self.position = position
        super().__init__(f"{message} at position {position}")


class UnknownSymbol(EquationSyntaxError):
    pass


class NonPolynomialDenominator(CatalyticError):
    pass


class EquationFileError(CatalyticError):
    pass


# solvers
class NoContraction(CatalyticError):
    def __init__(self, order: int):
        self.order = order
        super().__init__(f"fixed-point map does not gain an order at x^{order}")


class NonUniqueOrder(CatalyticError):
    def __init__(self, order: int):
        self.order = order
        super().__init__(f"linear system at x^{order} has no unique solution")


class InconsistentOrder(CatalyticError):
    def __init__(self, order: int):
        self.order = order
        super().__init__(f"linear system at x^{order} is inconsistent")


class SolverDisagreement(CatalyticError):
    pass


# guessing
class NoGuess(CatalyticError):
    pass


class InsufficientOrder(CatalyticError):
    pass


# verification / holonomic
class SharedFactor(CatalyticError):
    pass


class DegenerateDerivative(CatalyticError):
    pass


class NotFirstOrder(CatalyticError):
    pass


class TamperDetected(CatalyticError):
    pass
