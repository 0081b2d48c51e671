"""
Interfaces for qcthermo

Two families live here: the declarative schema machinery used for state
files, settings and reports, and the weighted-pair protocol shared by every
object that carries a probability vector against its Gibbs vector.
"""
from __future__ import absolute_import

from abc import ABCMeta, abstractmethod, abstractproperty
from six import add_metaclass

from .common import dedunder

__all__ = [
    "FieldInterface",
    "MappingInterface",
    "SchemaInterface",
    "TransformationInterface",
    "WeightedPairs",
]


@add_metaclass(ABCMeta)
class FieldInterface(object):
    """
    Descriptor that declares one entry of a Schema.

    """
    @abstractmethod
    def validate(self, value):
        """
        Validate a value for this field.

        """

    @abstractmethod
    def serialize(self, value, implicit_nulls=True):
        """
        Serialize a value of this field.

        """


@add_metaclass(ABCMeta)
class TransformationInterface(object):
    """
    Descriptor that computes one entry of a Mapping's target.

    """
    @abstractmethod
    def function(self, whole_obj, *call_args, **kwargs):
        """
        The function that is called to produce the entry.

        """


class HasFieldsMeta(ABCMeta):
    """
    Metaclass for classes that declare fields or transformations.

    Collects them, in sorted name order, into `_fields` / `_field_names`.
    """
    def __new__(metaclass, classname, bases, attributes, *args, **kwargs):
        new_class = super(HasFieldsMeta, metaclass).__new__(
            metaclass, classname, bases, attributes, *args, **kwargs
        )
        setattr(new_class, '_fields', {})
        setattr(new_class, '_field_names', [])
        for name in dir(new_class):
            attribute = getattr(new_class, name)
            if not isinstance(attribute,
                              (FieldInterface, TransformationInterface)):
                continue
            name = dedunder(name)
            new_class._fields[name] = attribute
            new_class._field_names.append(name)
            attribute.field_name = name
        return new_class


@add_metaclass(HasFieldsMeta)
class SchemaInterface(object):
    """
    Interface for a Schema class.

    """
    @abstractmethod
    def validate(self):
        """
        Validate the schema instance.

        """

    @abstractmethod
    def serialize(self, implicit_nulls=True):
        """
        Serialize the schema instance.

        """

    @abstractproperty
    def is_empty(self):
        """
        Is the schema instance empty?

        """


@add_metaclass(HasFieldsMeta)
class MappingInterface(object):
    """
    Interface for a Mapping class.

    """
    @property
    def source_schema(self):
        """
        Optionally declare the source schema for this mapping.

        """

    @property
    def target_schema(self):
        """
        Optionally declare the target schema for this mapping.

        """

    @abstractmethod
    def apply(self, blob):
        """
        Apply the mapping to an object.

        """


@add_metaclass(ABCMeta)
class WeightedPairs(object):
    """
    A list of (r-weight, g-weight) pairs under one resource theory.

    Everything the Lorenz curve, the hypothesis test and the divergences
    need. `QCState` gives one pair per energy level; `TypedState` gives one
    pair per type class of an i.i.d. power.
    """
    @abstractproperty
    def theory(self):
        """
        The TheoryParams the weights were computed under.

        """

    @abstractproperty
    def probs(self):
        """
        Read-only array of r-weights.

        """

    @abstractproperty
    def gibbs(self):
        """
        Read-only array of g-weights.

        """

    @abstractproperty
    def log_gibbs(self):
        """
        ln g per entry.

        """

    @abstractproperty
    def log_ratios(self):
        """
        ln(r/g) per entry, -inf where r = 0.

        """
