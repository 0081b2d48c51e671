"""
Numerical settings for qcthermo.

Tolerances and resource limits are declared once, as a schema with defaults.
Operations that take `tol=None` read the active settings at call time.
"""
from __future__ import absolute_import

import json
import logging

from .exceptions import Invalid
from .fields import IntegerField, NumberField
from .schema import Schema

__all__ = [
    "Settings",
    "configure",
    "load_settings",
    "settings",
]

log = logging.getLogger(__name__)


class PositiveNumberField(NumberField):
    """
    A finite, strictly positive real.

    """
    def validate(self, value):
        super(PositiveNumberField, self).validate(value)
        if value is not None and value <= 0:
            raise Invalid("%s: %r must be positive" % (self.field_name, value))
        return True


class Settings(Schema):
    """
    Tolerances and limits.

    dominance_tol: slack on L-values when comparing Lorenz curves
    witness_tol: max-norm slack when verifying a stochastic witness
    lp_tol: simplex feasibility / optimality tolerance
    lp_max_iter: simplex pivot cap before SolverFailure
    grouping_tol: absolute tolerance on E and n when grouping sectors
    normalize_tol: probability vectors off by at most this are renormalized
    battery_tol: absolute tolerance when matching battery energies
    max_type_classes: cap on type classes enumerated for i.i.d. powers
    default_eps: smoothing parameter used when none is given
    """
    dominance_tol = PositiveNumberField(default=1e-12)
    witness_tol = PositiveNumberField(default=1e-8)
    lp_tol = PositiveNumberField(default=1e-9)
    lp_max_iter = IntegerField(default=1000000)
    grouping_tol = PositiveNumberField(default=1e-9)
    normalize_tol = PositiveNumberField(default=1e-9)
    battery_tol = PositiveNumberField(default=1e-9)
    max_type_classes = IntegerField(default=10000000)
    default_eps = PositiveNumberField(default=0.05)


_active = Settings()


def settings():
    """
    The active Settings.

    """
    return _active


def configure(**overrides):
    """
    Replace the active settings with the defaults plus `overrides`.

    Returns:
        the new Settings

    Raises:
        Invalid
    """
    global _active
    candidate = Settings(**overrides)
    for key in candidate.extra_keys:
        log.warning("ignoring unknown setting %r", key)
    candidate.validate()
    _active = candidate
    log.debug("settings now %s", candidate.serialize())
    return candidate


def load_settings(path):
    """
    Read a JSON object of settings and make it active.

    """
    with open(path) as fh:
        blob = json.load(fh)
    if not isinstance(blob, dict):
        raise Invalid("%s: settings must be a JSON object" % path)
    return configure(**blob)
