"""Exception hierarchy.

Validation problems (bad input, malformed files, precondition failures)
derive from :class:`ValidationError`; numerical breakdowns (solver
non-convergence, finite-difference blowups) derive from
:class:`NumericalError`.  The CLI maps the two families to exit codes 1
and 2.
"""


class ValidationError(ValueError):
    pass


class NumericalError(ArithmeticError):
    pass


class GeometryError(ValidationError):
    pass


class InvalidBoxError(GeometryError):
    pass


class NormalizationError(GeometryError):
    pass


class InconsistencyError(GeometryError):
    pass


class ClassificationError(GeometryError):
    pass


class LaminationError(ValidationError):
    """Invalid lamination data; ``leaves`` names the offending leaf indices."""

    def __init__(self, message, leaves=()):
        super().__init__(message)
        self.leaves = tuple(leaves)


class ConvergenceError(NumericalError):
    def __init__(self, message, residual=float("nan")):
        super().__init__(message)
        self.residual = residual


class NumericalBreakdownError(NumericalError):
    pass
