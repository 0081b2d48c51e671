"""
Exceptions for qcthermo

"""
from __future__ import absolute_import

__all__ = [
    "DomainError",
    "InfeasibleStep",
    "Invalid",
    "InvalidSpectrum",
    "InvalidState",
    "Missing",
    "MissingLevel",
    "NumericalError",
    "NotFittable",
    "ResourceLimit",
    "SolverFailure",
    "TheoryMismatch",
]


class Invalid(TypeError):
    """
    The value in this field is not valid.

    """


class InvalidSpectrum(Invalid):
    """
    A spectrum is empty or carries non-finite energies or particle numbers.

    """


class InvalidState(Invalid):
    """
    A probability vector is negative, unnormalized, or the wrong length.

    """


class Missing(KeyError, AttributeError):
    """
    A thing that should be here... is not.

    """


class MissingLevel(Missing):
    """
    A battery spectrum lacks an energy level an operation needs.

    """


class DomainError(ValueError):
    """
    An argument lies outside the domain of the operation (eps, t, alpha, n).

    """


class TheoryMismatch(ValueError):
    """
    States from resource theories with different (beta, mu) were combined.

    """


class InfeasibleStep(ValueError):
    """
    A level-swap step would push a probability below zero.

    """


class NotFittable(ValueError):
    """
    A grand-canonical fit cannot be attempted: zero probabilities, or a
    rank-deficient (E, n, 1) design.

    """


class ResourceLimit(RuntimeError):
    """
    An enumeration (type classes, brute-force subsets) would be too large.

    """


class SolverFailure(RuntimeError):
    """
    The LP solver gave up: iteration cap exceeded or numerical breakdown.

    """


class NumericalError(ArithmeticError):
    """
    A quantity that must be nonnegative came out clearly negative.

    """
