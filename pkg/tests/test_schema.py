from unittest import TestCase

from qcthermo import GenericSchema, Mapping, Schema
from qcthermo.exceptions import Invalid
from qcthermo.fields import (
    ArrayField,
    IntegerField,
    NumberField,
    Subschema,
    UnicodeField,
)
from qcthermo.transformations import Const, Do, Get


class Bath(Schema):
    beta = NumberField()
    mu = NumberField(default=0.0)
    label = UnicodeField(required=False)


class Level(Schema):
    E = NumberField()
    n = NumberField(default=0.0)


class Reservoir(Schema):
    name = UnicodeField()
    bath = Subschema(Bath)


class Ladder(Schema):
    counts = ArrayField(IntegerField())
    levels = ArrayField(Level)


class TestSchemas(TestCase):
    def test_can_make_empty_schema(self):
        s = Bath()
        assert s.beta is None
        assert s.label is None
        self.assertEqual(0.0, s.mu)

    def test_can_assign_and_retrieve(self):
        s = Bath()
        s.beta = 2.0
        s.label = u"cold"
        self.assertEqual(2.0, s.beta)
        self.assertEqual(u"cold", s.label)

    def test_can_initialize_with_dict(self):
        blob = {"beta": 2.0, "mu": 0.5, "label": u"cold"}
        self.assertEqual(blob, Bath(blob).serialize())

    def test_can_nest_subschema(self):
        s = Reservoir()
        s.bath.beta = 1.5
        self.assertEqual(1.5, s.bath.beta)
        self.assertEqual(0.0, s.bath.mu)

    def test_can_initialize_subschema_with_dict(self):
        s = Reservoir(name=u"hot", bath={"beta": 0.5})
        self.assertIsInstance(s.bath, Bath)
        self.assertEqual(0.5, s.bath.beta)

    def test_can_init_arrays_with_dicts(self):
        s = Ladder(levels=[{"E": 0.0}, {"E": 1.0, "n": 1}])
        self.assertIsInstance(s.levels[1], Level)
        self.assertEqual(
            {"counts": None,
             "levels": [{"E": 0.0, "n": 0.0}, {"E": 1.0, "n": 1.0}]},
            s.serialize())

    def test_implicit_nulls_true(self):
        self.assertEqual({}, Ladder().serialize(implicit_nulls=True))
        self.assertEqual({"counts": [1, 2]},
                         Ladder(counts=[1, 2]).serialize(implicit_nulls=True))

    def test_implicit_nulls_false(self):
        self.assertEqual({"counts": None, "levels": None},
                         Ladder().serialize(implicit_nulls=False))

    def test_false_is_not_null(self):
        result = Bath(beta=1.0, label=False).serialize(implicit_nulls=True)
        self.assertEqual({"beta": 1.0, "mu": 0.0, "label": False}, result)

    def test_subschema_nulls(self):
        s = Reservoir(name=u"x")
        self.assertEqual({"name": u"x", "bath": {"mu": 0.0}},
                         s.serialize(implicit_nulls=True))
        self.assertEqual(
            {"name": u"x", "bath": {"beta": None, "mu": 0.0, "label": None}},
            s.serialize(implicit_nulls=False))

    def test_validation_names_the_location(self):
        s = Reservoir(name=u"x", bath={"beta": "hot"})
        with self.assertRaises(Invalid) as cm:
            s.validate()
        self.assertEqual("bath.beta: 'hot' is not a valid finite number",
                         str(cm.exception))

        s = Ladder(counts=[1], levels=[{"E": 0.0}, {"E": "x"}])
        with self.assertRaises(Invalid) as cm:
            s.validate()
        self.assertEqual("levels[1].E: 'x' is not a valid finite number",
                         str(cm.exception))

    def test_non_finite_numbers_are_invalid(self):
        for bad in (float("nan"), float("inf"), True):
            with self.assertRaises(Invalid):
                Bath(beta=bad).validate()
        assert Bath(beta=3).validate()

    def test_extra_keys(self):
        s = Bath({"beta": 1.0, "gamma": 2, "temperature": 4})
        self.assertEqual(["gamma", "temperature"], s.extra_keys)
        self.assertEqual([], Bath(beta=1.0).extra_keys)

    def test_schemas_can_inherit(self):
        class ColdBath(Bath):
            label = UnicodeField(default=u"cold")

        self.assertEqual({"beta": 5.0, "mu": 0.0, "label": u"cold"},
                         ColdBath(beta=5.0).serialize())
        self.assertEqual({"beta": 5.0, "mu": 0.0, "label": None},
                         Bath(beta=5.0).serialize())


class TestGenericSchema(TestCase):
    def test_can_make_a_generic_schema(self):
        s = GenericSchema(beta=1.0, note=None)
        self.assertEqual(1.0, s.beta)
        assert s.anything is None
        assert s.validate()

    def test_can_serialize_generic(self):
        s = GenericSchema(beta=1.0, note=None, levels=[Level(E=1.0)])
        self.assertEqual({"beta": 1.0, "levels": [{"E": 1.0, "n": 0.0}]},
                         s.serialize(implicit_nulls=True))
        self.assertEqual(
            {"beta": 1.0, "note": None, "levels": [{"E": 1.0, "n": 0.0}]},
            s.serialize())


class BathToLevel(Mapping):
    source_schema = Bath
    target_schema = Level

    E = Do(lambda beta: 1.0 / beta, Get("beta"))
    n = Get("mu")


class TestMappings(TestCase):
    def test_simple_mapping(self):
        result = BathToLevel().apply({"beta": 2.0, "mu": 0.5})
        self.assertIsInstance(result, Level)
        self.assertEqual({"E": 0.5, "n": 0.5}, result.serialize())

    def test_source_schema_instances_pass_through(self):
        result = BathToLevel().apply(Bath(beta=4.0))
        self.assertEqual({"E": 0.25, "n": 0.0}, result.serialize())

    def test_dont_even_need_schemas(self):
        class Loose(Mapping):
            temperature = Do(lambda beta: 1.0 / beta, Get("beta"))
            tag = Const(u"bath")

        result = Loose().apply({"beta": 4.0})
        self.assertIsInstance(result, GenericSchema)
        self.assertEqual({"temperature": 0.25, "tag": u"bath"},
                         result.serialize())

    def test_path_to_none(self):
        class Deep(Mapping):
            beta = Get("bath", "beta")

        self.assertEqual({}, Deep().apply({"name": "x"}).serialize(
            implicit_nulls=True))

    def test_mappings_can_inherit(self):
        class Shifted(BathToLevel):
            n = Const(1.0)

        result = Shifted().apply({"beta": 2.0, "mu": 0.5})
        self.assertEqual({"E": 0.5, "n": 1.0}, result.serialize())
