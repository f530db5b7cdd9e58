"""Exception hierarchy for wcospec."""


class WcoError(Exception):
    """Base class of all errors raised by this package."""


class InvalidInputError(WcoError, ValueError):
    """An argument violates a documented precondition."""


class NotInvertibleError(WcoError, ArithmeticError):
    """A bounded analytic function has no bounded analytic reciprocal.

    ``reason`` is one of ``"zeros_in_disk"``, ``"zeros_on_shilov"`` or
    ``"singular_inner"``.
    """

    def __init__(self, msg, reason):
        super().__init__(msg)
        self.reason = reason


class EvaluationNearBoundaryError(WcoError, ValueError):
    """Point evaluation requested too close to the unit circle."""


class FiniteOrderError(WcoError):
    """The elliptic map has finite order; spectra are not computed here."""

    def __init__(self, msg, order):
        super().__init__(msg)
        self.order = order


class NonEllipticError(WcoError):
    """The Mobius map is parabolic or hyperbolic."""

    def __init__(self, msg, kind):
        super().__init__(msg)
        self.kind = kind
