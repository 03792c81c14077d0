"""Shared exception types."""


class EitfluctError(Exception):
    """Base class for errors raised by this package."""


class DomainError(EitfluctError, ValueError):
    """A parameter lies outside the physical domain of an operation."""


class SingularityError(EitfluctError, ZeroDivisionError):
    """Evaluation requested at an exact pole of a response function."""


class UnsupportedRegimeError(EitfluctError, ValueError):
    """The closed form is not valid here; use the langevin solver instead."""


class ConsistencyError(EitfluctError, RuntimeError):
    """An internal cross-check failed beyond tolerance."""
