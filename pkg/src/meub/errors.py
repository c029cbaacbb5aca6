"""Exception hierarchy shared by every module."""


class MeubError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(MeubError, ValueError):
    """An argument lies outside the domain of the function."""


class InvalidMixtureError(MeubError, ValueError):
    """Mixture parameters violate the Gaussian mixture invariants."""


class MixtureParseError(MeubError, ValueError):
    """A mixture file could not be parsed."""


class NonFiniteMoment(MeubError, ArithmeticError):
    """A closed-form moment evaluation produced a non-finite intermediate."""

    def __init__(self, order: int, detail: str = "non-finite intermediate"):
        self.order = order
        self.detail = detail
        super().__init__(f"order {order}: {detail}")


class ConvergenceError(MeubError, ArithmeticError):
    """A numerical procedure stopped before meeting its tolerance."""


class EmptySeriesError(MeubError, ArithmeticError):
    """No order of a bound series produced a finite value."""
