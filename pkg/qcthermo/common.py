"""
Utility functions for qcthermo

"""
from __future__ import absolute_import, division

import numbers
import re

__all__ = [
    "INFINITY",
    "Infinity",
    "NULLISH",
    "dedunder",
    "is_infinite",
    "nullish",
    "read_only",
]


DUNDER_MATCH = re.compile(r'_.+?__')  # python's privacy prefix "_Foo__"


def dedunder(name):
    """
    Strip Python's double-underscore privacy prefix from a name.

    Lets schemas declare fields whose JSON key is a reserved word.

    "_Foo__my_attr" -> "my_attr"

    Args:
        name (str): a name that may or may not have the prefix

    Returns:
        the name stripped of the privacy prefix, if it had one.
    """
    if DUNDER_MATCH.match(name):
        return DUNDER_MATCH.sub('', name)
    return name


# Types that are falsey, but not False itself.
NULLISH = (None, {}, [], tuple())


def nullish(value, implicit_nulls=True):
    """
    Kwargs:
        implicit_nulls (bool): accept empty containers as well as None
    """
    if implicit_nulls:
        if hasattr(value, 'is_empty'):
            return value.is_empty

        try:
            return value in NULLISH
        except ValueError:  # numpy arrays refuse truthiness
            return False

    return value is None


class Infinity(object):
    """
    An explicit +infinity for entropies and work values.

    Returned where b_eps = 0 so that a float special never leaves the API.
    Compares above every real number, survives division by a positive real,
    and serializes as "inf".
    """
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super(Infinity, cls).__new__(cls)
        return cls._instance

    def __repr__(self):
        return "inf"

    __str__ = __repr__

    def __eq__(self, other):
        return other is self

    def __ne__(self, other):
        return other is not self

    def __hash__(self):
        return hash("qcthermo-infinity")

    def __gt__(self, other):
        return other is not self

    def __ge__(self, other):
        return True

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return other is self

    def __truediv__(self, other):
        if isinstance(other, numbers.Real) and other > 0:
            return self
        raise ValueError("inf can only be scaled by a positive real")

    def __mul__(self, other):
        if isinstance(other, numbers.Real) and other > 0:
            return self
        raise ValueError("inf can only be scaled by a positive real")

    __rmul__ = __mul__

    def __add__(self, other):
        if other is self or isinstance(other, numbers.Real):
            return self
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, numbers.Real):
            return self
        return NotImplemented


INFINITY = Infinity()


def is_infinite(value):
    return value is INFINITY


def read_only(array):
    """
    Freeze a numpy array in place and hand it back.

    """
    array.flags.writeable = False
    return array
