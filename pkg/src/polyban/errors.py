"""Exception hierarchy shared by all modules.

DomainError subclasses carry a stable ``name`` used in CLI reports and
mapped to exit code 2; InputError covers file/formula parsing (exit 1).
"""


class PolybanError(Exception):
    pass


class DomainError(PolybanError):
    @property
    def name(self) -> str:
        return type(self).__name__


class InputError(PolybanError):
    pass


# geometry / LP
class UnboundedPolytope(DomainError):
    pass


class DegenerateSystem(DomainError):
    pass


class DimensionCapExceeded(DomainError):
    pass


# spaces
class NotSymmetric(DomainError):
    pass


class NotFullDimensional(DomainError):
    pass


class EmptyInput(DomainError):
    pass


class DimensionMismatch(DomainError):
    pass


# colimits
class NormTooLarge(DomainError):
    pass


class NotEpsCommutative(DomainError):
    pass


class StageOutOfRange(DomainError):
    pass


# purity
class NotAnIsometry(DomainError):
    pass


class SquareNotCommuting(DomainError):
    pass


class PreconditionViolated(DomainError):
    pass


class IsActuallyIdeal(DomainError):
    pass


class AssignmentNotInSubspace(DomainError):
    pass


# logic parsing
class FormulaSyntaxError(InputError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class ScopeError(InputError):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        super().__init__(message)
        self.line = line
        self.column = column
