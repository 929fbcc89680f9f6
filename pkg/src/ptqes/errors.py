"""Exception hierarchy shared by all modules."""


class PTQESError(Exception):
    """Base class for every error raised by the package."""


class DegreeOverflow(PTQESError, ValueError):
    pass


class PoleAtPoint(PTQESError, ZeroDivisionError):
    def __init__(self, x, modulus):
        super().__init__(f"denominator vanishes at x={x!r} (|den|={modulus:.3e})")
        self.x = x
        self.modulus = modulus


class ConstraintViolated(PTQESError):
    """A sufficient reality condition does not hold for the supplied parameters."""

    def __init__(self, which, residual):
        super().__init__(f"constraint on {which!r} violated, residual={residual:.6g}")
        self.which = which
        self.residual = residual


class DomainError(PTQESError, ValueError):
    pass


class NoRoot(PTQESError):
    pass


class DegenerateImaginaryPart(PTQESError, ValueError):
    pass


class NotConstantDifference(PTQESError):
    def __init__(self, degree):
        super().__init__(f"difference is not constant (residual degree {degree})")
        self.degree = degree


class GridTooCoarse(PTQESError, ValueError):
    def __init__(self, value):
        super().__init__(f"h^2 * max|V| = {value:.3e} exceeds 0.01")
        self.value = value


class NonConvergence(PTQESError, ArithmeticError):
    pass


class NewtonDiverged(PTQESError, ArithmeticError):
    pass


class PoleOnContour(PTQESError, ValueError):
    pass


class OverflowDespiteRenormalization(PTQESError, OverflowError):
    pass


class ContourError(PTQESError, ValueError):
    """Contour or boundary data violate their invariants (e.g. the decay guard)."""
