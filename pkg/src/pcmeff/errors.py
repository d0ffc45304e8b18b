"""Exception types shared across the package."""


class PcmError(ValueError):
    """Base class for matrix validation failures."""


class NotSquareError(PcmError):
    pass


class NonPositiveEntryError(PcmError):
    """Entry (i, j) is not a positive finite real."""

    def __init__(self, i: int, j: int, value: float):
        self.i = i
        self.j = j
        self.value = value
        super().__init__(f"entry ({i}, {j}) = {value!r} is not a positive finite real")


class ReciprocityViolationError(PcmError):
    """a_ij * a_ji deviates from 1 beyond tolerance."""

    def __init__(self, i: int, j: int, product: float):
        self.i = i
        self.j = j
        self.product = product
        super().__init__(f"entries ({i}, {j}) and ({j}, {i}) multiply to {product!r}, expected 1")


class InvalidCaseError(PcmError):
    """Perturbation structure incompatible with the matrix order."""


class IncompatibleOrderError(InvalidCaseError):
    """Generator family incompatible with the requested order."""


class DegenerateParametersError(PcmError):
    """delta or gamma equals 1; the closed forms do not apply."""


class NoConvergenceError(RuntimeError):
    """Power iteration failed to reach the residual tolerance."""

    def __init__(self, max_iter: int, residual: float):
        self.max_iter = max_iter
        self.residual = residual
        super().__init__(f"no convergence after {max_iter} iterations (residual {residual:.3e})")


class RootNotBracketedError(RuntimeError):
    """Upper bound computation failed to bracket the dominant root."""


class ImprovementFailedError(RuntimeError):
    """An inefficiency certificate did not yield a dominating vector (bug)."""


class HypothesisViolatedError(ValueError):
    """Sample does not satisfy the precondition of the requested check."""


class ParseError(ValueError):
    """Matrix file could not be parsed."""

    def __init__(self, message: str, line: int, column: int = 1):
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}")
