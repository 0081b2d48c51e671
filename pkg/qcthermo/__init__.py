"""
qcthermo: grand-potential resource theory for quasiclassical states.

"""
from __future__ import absolute_import

import logging

from . import exceptions
from . import fields
from . import transformations

from .asymptotics import (
    SecondOrderExpansion,
    aep_check,
    gaussian_cdf,
    inv_gaussian_cdf,
    normal_approx_dh,
    second_order_gaps,
    sweep,
)
from .common import INFINITY
from .config import configure, settings
from .divergences import (
    Hinge,
    Renyi,
    XLogX,
    f_divergence,
    grand_potential,
    hinge_divergence,
    rel_entropy_variance,
    relative_entropy,
    renyi_divergence,
)
from .lorenz import (
    build_lorenz,
    dh_entropy,
    dominates,
    equimajorizes,
    eval_lorenz,
    optimal_test,
    type2_error,
)
from .lp import (
    LPProblem,
    bruteforce_type2_error,
    dual_certificate,
    find_witness,
    solve_lp,
    verify_witness,
)
from .schema import GenericSchema, Mapping, Schema
from .statefile import dump_state, load_state, parse_state
from .states import (
    QCState,
    Spectrum,
    TheoryParams,
    battery_state,
    compose,
    fit_gibbs,
    gibbs_state,
    iid_power,
    uniform_eigensubspace_check,
)
from .work import (
    build_extraction_channel,
    conversion_rate,
    formation_feasible,
    work_cost_bounds,
    work_gain,
)

from .version import __version__
assert __version__

logging.getLogger(__name__).addHandler(logging.NullHandler())

__all__ = [
    "GenericSchema",
    "Hinge",
    "INFINITY",
    "LPProblem",
    "Mapping",
    "QCState",
    "Renyi",
    "Schema",
    "SecondOrderExpansion",
    "Spectrum",
    "TheoryParams",
    "XLogX",
    "aep_check",
    "battery_state",
    "bruteforce_type2_error",
    "build_extraction_channel",
    "build_lorenz",
    "compose",
    "configure",
    "conversion_rate",
    "dh_entropy",
    "dominates",
    "dual_certificate",
    "dump_state",
    "equimajorizes",
    "eval_lorenz",
    "exceptions",
    "f_divergence",
    "fields",
    "find_witness",
    "fit_gibbs",
    "formation_feasible",
    "gaussian_cdf",
    "gibbs_state",
    "grand_potential",
    "hinge_divergence",
    "iid_power",
    "inv_gaussian_cdf",
    "load_state",
    "normal_approx_dh",
    "optimal_test",
    "parse_state",
    "rel_entropy_variance",
    "relative_entropy",
    "renyi_divergence",
    "second_order_gaps",
    "settings",
    "solve_lp",
    "sweep",
    "transformations",
    "type2_error",
    "uniform_eigensubspace_check",
    "verify_witness",
    "work_cost_bounds",
    "work_gain",
]
