"""Exception types raised across the package."""


class QRacahError(Exception):
    """Base class for all package errors."""


class DivisionByZero(QRacahError, ZeroDivisionError):
    pass


class NonHalfIntegerExponent(QRacahError):
    """Exact backend got an exponent outside (1/4)Z (q-powers) or (1/2)Z (q-numbers)."""


class NegativeArgument(QRacahError):
    pass


class DenominatorVanishesAtUnity(QRacahError):
    """q->1 evaluation hit a pole: the reduced denominator vanishes at t=1."""


class PoleInRatio(QRacahError):
    """A gamma-ratio / weight evaluation hit a pole (zero q-number in a denominator)."""


class GammaProductUnbalanced(QRacahError):
    """A product of gamma-tilde factors does not telescope to q-Pochhammer products."""


class PoleBeforeTermination(QRacahError):
    """A denominator series parameter vanishes before the terminating index."""


class NonTerminating(QRacahError):
    """No numerator parameter terminates the series."""


class PoleInClosedForm(QRacahError):
    pass


class DegenerateLatticePoint(QRacahError):
    """A lattice difference in a denominator vanishes at the requested point."""


class BoundaryConditionViolated(QRacahError):
    pass


class DegreeOutOfRange(QRacahError):
    """Operation restricted to the finite orthogonality range 0 <= n <= b-a-1."""


class InadmissibleParams(QRacahError):
    pass


class TriangleViolation(QRacahError):
    """Six-j entries violate a triangle/interval constraint."""


class NegativeUnderRadical(QRacahError):
    """A weight/norm ratio that must be a square came out negative."""


class UnknownSuite(QRacahError):
    pass
