"""Exception hierarchy. Input problems subclass ValueError, numeric ones ArithmeticError."""


class WplsError(Exception):
    pass


class ShapeError(WplsError, ValueError):
    """Operand dimensions are inconsistent."""


class InvalidInputError(WplsError, ValueError):
    """Non-finite entries, negative weights, asymmetric Gram matrix, ..."""


class NumericalError(WplsError, ArithmeticError):
    pass


class NotPositiveSemidefiniteError(NumericalError):
    def __init__(self, index, value, tol):
        self.index = index
        self.value = value
        self.tol = tol
        super().__init__(
            f"pivot {index} is {value:.3e}, below -tol = {-tol:.3e}; matrix is not positive semi-definite"
        )


class SingularFactorError(NumericalError):
    """A triangular factor has a zero or negative diagonal entry."""


class RankZeroError(NumericalError):
    """A generalized Cholesky factor has no nonzero row."""


class ConvergenceError(NumericalError):
    pass


class GenerationError(WplsError):
    def __init__(self, message, attempts_used):
        self.attempts_used = attempts_used
        super().__init__(message)


class MatrixMarketError(WplsError, ValueError):
    def __init__(self, path, lineno, message):
        self.path = path
        self.lineno = lineno
        where = f"{path}:{lineno}" if lineno else str(path)
        super().__init__(f"{where}: {message}")
