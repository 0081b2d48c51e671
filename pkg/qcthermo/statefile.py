"""
State files and result documents.

A state file is a JSON object::

    {"beta": 1.0, "mu": 0.0,
     "levels": [{"E": 0.0, "n": 0, "p": 0.7}, {"E": 1.0, "n": 1, "p": 0.3}]}

`n` defaults to 0 and `mu` to 0. Leave out every `p` to ask for the Gibbs
state of the spectrum. Files are validated against `StateFileSchema` and
then mapped onto a QCState; errors name the offending location, e.g.
`levels[2].E: 'x' is not a valid finite number`.

Results leave through report schemas, so every number is a finite float or
the string "inf".
"""
from __future__ import absolute_import

import csv
import json
import logging
import numbers

import numpy as np

from .common import INFINITY
from .config import PositiveNumberField
from .exceptions import Invalid
from .fields import (
    ArrayField,
    BooleanField,
    IntegerField,
    MatrixField,
    NumberField,
    UnicodeField,
)
from .schema import Mapping, Schema
from .states import QCState, Spectrum, TheoryParams, gibbs_state
from .transformations import Const, Do, Get, ManySubmap, Num
from .work import UNITS_NOTE

__all__ = [
    "LevelSchema",
    "LorenzSchema",
    "StateFileSchema",
    "StateFileToState",
    "StateToFile",
    "WitnessSchema",
    "WorkReportSchema",
    "dump_state",
    "load_state",
    "lorenz_document",
    "parse_state",
    "to_json",
    "witness_document",
    "work_report_document",
    "write_csv",
]

log = logging.getLogger(__name__)


class LevelSchema(Schema):
    """
    One joint (E, n) level and, optionally, its probability.

    """
    E = NumberField()
    n = NumberField(default=0.0)
    p = NumberField(required=False)


class StateFileSchema(Schema):
    """
    A quasiclassical state on disk.

    """
    beta = PositiveNumberField()
    mu = NumberField(default=0.0)
    levels = ArrayField(LevelSchema, min_length=1)

    def validate(self):
        super(StateFileSchema, self).validate()
        given = [level.p is not None for level in self.levels]
        if any(given) and not all(given):
            missing = given.index(False)
            raise Invalid("levels[%d].p: give p for every level or for none"
                          % missing)
        return True


def _spectrum(levels):
    return Spectrum.from_arrays([level.E for level in levels],
                                [level.n for level in levels])


def _probs(levels):
    if levels[0].p is None:
        return None
    return [level.p for level in levels]


class StateFileToState(Mapping):
    """
    StateFileSchema -> the pieces of a QCState.

    """
    source_schema = StateFileSchema

    theory = Do(TheoryParams, Num(Get("beta")), Num(Get("mu")))
    spectrum = Do(_spectrum, Get("levels"))
    probs = Do(_probs, Get("levels"))


class LevelToFile(Mapping):
    target_schema = LevelSchema

    E = Num(Get("energy"))
    n = Num(Get("particles"))
    p = Num(Get("p"))


class _Level(object):
    def __init__(self, level, p):
        self.energy = level.energy
        self.particles = level.particles
        self.p = p


class StateToFile(Mapping):
    """
    QCState -> StateFileSchema.

    """
    target_schema = StateFileSchema

    beta = Get("theory", "beta")
    mu = Get("theory", "mu")
    levels = ManySubmap(LevelToFile, Do(
        lambda spectrum, probs: [_Level(level, float(p))
                                 for level, p in zip(spectrum, probs)],
        Get("spectrum"), Get("probs")))


def _warn_extra(schema, where):
    for key in schema.extra_keys:
        log.warning("%s: ignoring unknown key %r", where, key)


def parse_state(blob, where="<state>"):
    """
    A QCState from a decoded state-file object.

    Raises:
        Invalid, with `where` and the failing location in the message
    """
    if not isinstance(blob, dict):
        raise Invalid("%s: a state file must be a JSON object" % where)
    document = StateFileSchema(blob)
    try:
        document.validate()
        _warn_extra(document, where)
        for index, level in enumerate(document.levels):
            _warn_extra(level, "%s: levels[%d]" % (where, index))

        pieces = StateFileToState().apply(document)
        if pieces.probs is None:
            return gibbs_state(pieces.spectrum, pieces.theory)
        return QCState(pieces.spectrum, pieces.probs, pieces.theory)
    except Invalid as e:
        raise type(e)("%s: %s" % (where, e))


def load_state(path):
    """
    Read and validate a state file.

    Raises:
        Invalid on malformed JSON (with line and column) or bad content
        IOError / OSError when the file cannot be read
    """
    with open(path) as fh:
        text = fh.read()
    try:
        blob = json.loads(text)
    except ValueError as e:
        line = getattr(e, "lineno", None)
        column = getattr(e, "colno", None)
        if line is not None:
            raise Invalid("%s: line %d column %d: %s"
                          % (path, line, column, getattr(e, "msg", e)))
        raise Invalid("%s: %s" % (path, e))
    state = parse_state(blob, where=path)
    log.debug("loaded %r from %s", state, path)
    return state


def dump_state(state):
    """
    The state-file object of a QCState.

    Floats keep their shortest round-trip form once passed to `to_json`.
    """
    return StateToFile().apply(state).serialize()


class WorkReportSchema(Schema):
    w_gain = NumberField(allow_infinite=True)
    w_cost_lower = NumberField()
    w_cost_upper = NumberField()
    eps = NumberField()
    asymptotic_rate = NumberField()
    units = UnicodeField()


class WorkReportToSchema(Mapping):
    target_schema = WorkReportSchema

    w_gain = Get("w_gain")
    w_cost_lower = Get("w_cost_lower")
    w_cost_upper = Get("w_cost_upper")
    eps = Get("eps")
    asymptotic_rate = Get("asymptotic_rate")
    units = Const(UNITS_NOTE)


class WitnessSchema(Schema):
    """
    A stochastic witness, row-major; `found` is false and the matrix empty
    when no witness exists.

    """
    found = BooleanField()
    rows = IntegerField(required=False)
    cols = IntegerField(required=False)
    data = MatrixField(required=False)


class LorenzSchema(Schema):
    t = ArrayField(NumberField())
    L = ArrayField(NumberField())
    permutation = ArrayField(IntegerField())


class CurveToSchema(Mapping):
    target_schema = LorenzSchema

    t = Do(list, Get("t"))
    L = Do(list, Get("L"))
    permutation = Do(lambda p: [int(i) for i in p], Get("permutation"))


def work_report_document(report):
    document = WorkReportToSchema().apply(report)
    document.validate()
    return document.serialize()


def witness_document(witness_json):
    """
    `witness_to_json` output, or None, as a validated document.

    """
    if witness_json is None:
        document = WitnessSchema(found=False)
    else:
        document = WitnessSchema(found=True, **witness_json)
    document.validate()
    return document.serialize(implicit_nulls=True)


def lorenz_document(curve):
    document = CurveToSchema().apply(curve)
    return document.serialize()


def _plain(value):
    if value is INFINITY:
        return "inf"
    if isinstance(value, dict):
        return dict((k, _plain(v)) for k, v in value.items())
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return [_plain(v) for v in value.tolist()]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, numbers.Integral):
        return int(value)
    if isinstance(value, numbers.Real):
        return float(value)
    return value


def to_json(document):
    """
    JSON text for a result document; INFINITY becomes "inf", numpy scalars
    become plain numbers, and NaN or float infinities are refused.

    Raises:
        ValueError on a non-finite float
    """
    return json.dumps(_plain(document), sort_keys=True, allow_nan=False)


def write_csv(path, header, rows):
    """
    Write `rows` under `header`; floats in shortest round-trip form.

    """
    with open(path, "w") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([repr(float(x)) if isinstance(x, float) else x
                             for x in row])
    log.info("wrote %d rows to %s", len(rows), path)
