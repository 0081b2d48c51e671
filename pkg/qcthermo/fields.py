"""
Fields that can go on Schemas

State files, settings and result reports are declared as schemas made of
these fields. Numeric fields check finiteness; array fields report the index
of the first bad element so errors read like `levels[2].E: ...`.
"""
from __future__ import absolute_import

import math
import numbers

import numpy as np
import six

from .common import INFINITY, nullish
from .exceptions import Invalid
from .interfaces import FieldInterface, SchemaInterface

__all__ = [
    "ArrayField",
    "BooleanField",
    "Field",
    "IntegerField",
    "MatrixField",
    "NumberField",
    "Subschema",
    "UnicodeField",
]


class Field(FieldInterface):
    """
    Base class for a field.

    Custom fields inherit this and implement `serialize` and `validate`
    as desired.
    """
    def __init__(self, required=True, default=None):
        """
        Initialize the field.

        Args:
            required (Bool) - is this a required field in the schema?
            default - value (or zero-argument callable) used when unset
        """
        self.required = required
        self.default = default

    def __get__(self, instance, cls=None):
        if instance is None:
            return self

        value = instance.__dict__.get(self.field_name)
        if value is not None:
            return value
        else:
            default = self.default
            instance.__dict__[self.field_name] = default
            return default

    def __set__(self, instance, value):
        instance.__dict__[self.field_name] = value

    def serialize(self, value, **kwargs):
        return value

    def validate(self, value):
        if self.required and value is None:
            raise Invalid("%s: a value is required" % self.field_name)
        return True

    @property
    def field_name(self):
        return getattr(self, "_field_name", "unnamed")

    @field_name.setter
    def field_name(self, value):
        self._field_name = value

    @property
    def default(self):
        return self._default() if callable(self._default) else self._default

    @default.setter
    def default(self, value):
        self._default = value


class Subschema(Field):
    """
    A field that embeds another schema:

        class Level(Schema):
            E = NumberField()

        class Report(Schema):
            level = Subschema(Level)

    """
    def __init__(self, subschema_class, *args, **kwargs):
        super(Subschema, self).__init__(*args, **kwargs)
        self.subschema_class = subschema_class

    def __set__(self, instance, value):
        if isinstance(value, dict):
            instance.__dict__[self.field_name] = self.subschema_class(**value)
        else:
            instance.__dict__[self.field_name] = value

    def serialize(self, value, implicit_nulls=True):
        if hasattr(value, "serialize"):
            value = value.serialize(implicit_nulls=implicit_nulls)

        if value is None:
            value = {}

        return value

    def validate(self, value):
        super(Subschema, self).validate(value)
        if not self.required and nullish(value):
            return True

        if not hasattr(value, 'validate'):
            value = self.subschema_class(value)

        try:
            value.validate()
        except Invalid as e:
            raise Invalid("%s.%s" % (self.field_name, e))
        return True


class SimpleTypeField(Field):
    """
    Base class for fields that simply validate a type.

    Expects a class attribute 'field_type'.
    """
    def _valid(self, value):
        if value is None and not self.required:
            return True
        return isinstance(value, self.field_type)

    def validate(self, value):
        super(SimpleTypeField, self).validate(value)
        if not self._valid(value):
            raise Invalid("%s: %r is not a valid %s" % (
                self.field_name, value, self.type_name))
        return True

    @property
    def type_name(self):
        return getattr(self.field_type, "__name__", str(self.field_type))


class BooleanField(SimpleTypeField):
    """
    A field that should contain a boolean.

    """
    field_type = bool


class IntegerField(SimpleTypeField):
    """
    A field that should contain an integer (booleans excluded).

    """
    field_type = numbers.Integral

    def _valid(self, value):
        if isinstance(value, bool):
            return False
        return super(IntegerField, self)._valid(value)


class NumberField(SimpleTypeField):
    """
    A field that should contain a finite real number.

    JSON integers are accepted; booleans, NaN and infinities are not.

    Kwargs:
        allow_infinite (bool): accept the INFINITY sentinel and serialize it
            as the string "inf"
    """
    field_type = numbers.Real

    def __init__(self, allow_infinite=False, **kwargs):
        super(NumberField, self).__init__(**kwargs)
        self.allow_infinite = allow_infinite

    def _valid(self, value):
        if value is None and not self.required:
            return True
        if value is INFINITY:
            return self.allow_infinite
        if isinstance(value, bool) or not isinstance(value, numbers.Real):
            return False
        return math.isfinite(value)

    @property
    def type_name(self):
        return "finite number"

    def serialize(self, value, **kwargs):
        if value is INFINITY:
            return "inf"
        if isinstance(value, numbers.Real) and not isinstance(value, bool):
            return float(value)
        return value


class UnicodeField(SimpleTypeField):
    """
    A field that contains text.

    """
    field_type = six.string_types

    @property
    def type_name(self):
        return "string"


class ArrayField(SimpleTypeField):
    """
    A field that contains an array of things of type `array_type`:

        class StateFile(Schema):
            levels = ArrayField(Level)
            probs = ArrayField(NumberField())

    `array_type` is a Schema class, a Field instance used to validate each
    element, or a plain type. Numpy arrays are accepted and serialize as
    lists.
    """
    field_type = (list, tuple, np.ndarray)

    def __init__(self, array_type=None, min_length=0, **kwargs):
        """
        Kwargs:
            array_type (Schema class, Field or type)
            min_length (int): reject shorter arrays
        """
        super(ArrayField, self).__init__(**kwargs)
        self.array_type = array_type
        self.min_length = min_length

    @property
    def is_schema_type(self):
        return (isinstance(self.array_type, type)
                and issubclass(self.array_type, SchemaInterface))

    def __set__(self, instance, value):
        if not self.is_schema_type or not isinstance(value, (list, tuple)):
            instance.__dict__[self.field_name] = value
            return

        # dicts in a schema-typed array are taken to be trying to fit it
        instance.__dict__[self.field_name] = [
            self.array_type(**i) if isinstance(i, dict) else i
            for i in value]

    def _validate_item(self, index, val):
        where = "%s[%d]" % (self.field_name, index)
        if self.is_schema_type:
            if isinstance(val, SchemaInterface) and not isinstance(
                    val, self.array_type):
                raise Invalid("%s: %r is not a %s" % (
                    where, val, self.array_type.__name__))
            if not isinstance(val, self.array_type):
                if not isinstance(val, dict):
                    raise Invalid("%s: expected an object, got %r" % (
                        where, val))
                val = self.array_type(val)
            try:
                val.validate()
            except Invalid as e:
                raise Invalid("%s.%s" % (where, e))

        elif isinstance(self.array_type, FieldInterface):
            try:
                self.array_type.validate(val)
            except Invalid as e:
                # element fields are unnamed; splice in the position
                raise Invalid(str(e).replace(
                    self.array_type.field_name, where, 1))

        elif self.array_type is not None:
            if not isinstance(val, self.array_type):
                raise Invalid("%s: %r is not a %s" % (
                    where, val, self.array_type))

    def validate(self, items):
        super(ArrayField, self).validate(items)
        if not self.required and items is None:
            return True

        if len(items) < self.min_length:
            raise Invalid("%s: needs at least %d entries, got %d" % (
                self.field_name, self.min_length, len(items)))

        for index, val in enumerate(items):
            self._validate_item(index, val)

        return True

    def _flatten(self, value, implicit_nulls=True):
        if hasattr(value, 'serialize'):
            return value.serialize(implicit_nulls=implicit_nulls)
        if isinstance(self.array_type, FieldInterface):
            return self.array_type.serialize(value)
        if isinstance(value, np.generic):
            return value.item()
        return value

    def serialize(self, value, implicit_nulls=True):
        if isinstance(value, self.field_type):
            return [self._flatten(i, implicit_nulls=implicit_nulls)
                    for i in value]
        return value


class MatrixField(ArrayField):
    """
    A two-dimensional array of finite reals, serialized as rows.

    """
    def __init__(self, **kwargs):
        super(MatrixField, self).__init__(
            array_type=ArrayField(NumberField()), **kwargs)

    def serialize(self, value, implicit_nulls=True):
        if isinstance(value, np.ndarray):
            return [[float(x) for x in row] for row in value]
        return super(MatrixField, self).serialize(
            value, implicit_nulls=implicit_nulls)
