"""Exception hierarchy shared across the package."""


class ProbkinError(Exception):
    """Base class for all errors raised by probkin."""


class InvariantViolation(ProbkinError):
    """A domain object was constructed with data violating its invariants."""


class UndefinedOperation(ProbkinError):
    """The requested operation is mathematically undefined for the inputs.

    Examples: Bayesian conditioning with l(complement(E)) = 1, revising on a
    focal element of prior probability zero, Dempster combination under total
    conflict, relative information without absolute continuity.
    """


class Infeasible(UndefinedOperation):
    """A linear program (credal set, revision polytope) has no feasible point.

    Carries a Farkas-style certificate when one is available.
    """

    def __init__(self, message, certificate=None):
        super().__init__(message)
        self.certificate = certificate


class DocumentError(ProbkinError):
    """A document failed to parse or violated a load-time invariant."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
