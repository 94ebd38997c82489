"""Exception hierarchy shared by all dahlres modules."""


class DahlresError(Exception):
    """Base class for every error raised by this package."""


class PoleAtPoint(DahlresError, ZeroDivisionError):
    """The evaluation point is (numerically) a pole of the rational function."""


class SeriesAtPole(DahlresError, ZeroDivisionError):
    """A Maclaurin series was requested but the denominator vanishes at 0."""


class UnknownBuiltin(DahlresError, KeyError):
    pass


class BadParams(DahlresError, ValueError):
    pass


class DegenerateSystem(DahlresError, ArithmeticError):
    pass


class ZeroArgument(DahlresError, ValueError):
    pass


class ZeroMu(ZeroArgument):
    pass


class ZeroStart(ZeroArgument):
    pass


class ZeroLambda(ZeroArgument):
    pass


class SingularTarget(DahlresError, ValueError):
    """The interpolant would have to pass through zero."""


class SingularInRange(DahlresError, ValueError):
    pass


class InconsistentMethod(DahlresError, ValueError):
    """R(0) != 1, so the method is not consistent with y' = lambda*y."""


class NoFeasibleControl(DahlresError, ValueError):
    pass


class EmptyLevels(DahlresError, ValueError):
    pass


class IoFailure(DahlresError, OSError):
    pass
