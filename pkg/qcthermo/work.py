"""
One-shot work accounting against an energy-eigenstate battery.

The eps-work value of R is D_H^eps(r || g) / beta. The eps-work cost is only
bracketed:

    max_delta [D_H^{1-eps-delta} - ln(1/delta)] / beta
        <= W_cost <= [D_H^{1-eps} - ln((1-eps)/eps)] / beta

Both sides of the extraction protocol are constructed explicitly: the
channel that charges the battery from E to E + W with the optimal test, and
the smoothed state r~ that a battery discharge of the upper-bound work can
form exactly.

Energies are in units of 1/beta unless beta carries units.
"""
from __future__ import absolute_import, division

import logging
import math
from collections import namedtuple

import numpy as np

from .common import is_infinite, read_only
from .divergences import hinge_divergence, relative_entropy
from .exceptions import DomainError, TheoryMismatch
from .lorenz import (
    SortedPairs,
    dh_entropy,
    equimajorizes,
    optimal_test,
)
from .lp import dual_certificate
from .states import (
    PureLevelState,
    Spectrum,
    battery_spectrum as make_battery_spectrum,
    compose,
)

__all__ = [
    "ExtractionChannel",
    "KFunction",
    "WorkReport",
    "apply_channel",
    "battery_reduction_check",
    "build_extraction_channel",
    "conversion_rate",
    "formation_feasible",
    "formation_reduction_check",
    "formation_state",
    "k_function",
    "work_cost_bounds",
    "work_gain",
    "work_report",
]

log = logging.getLogger(__name__)

UNITS_NOTE = "energy units of 1/beta unless beta carries units"

# relative entropies at or below this count as zero
ZERO_ENTROPY = 1e-14


WorkReport = namedtuple("WorkReport", [
    "w_gain", "w_cost_lower", "w_cost_upper", "eps", "asymptotic_rate"])
WorkReport.__doc__ = """
One-shot work figures of a state at smoothing eps.

asymptotic_rate is D(r || g) / beta, the per-copy limit of both.
"""


def _check_open_eps(eps):
    if not 0 < eps < 1:
        raise DomainError("eps must lie in (0, 1), got %r" % (eps,))


def work_gain(state, eps):
    """
    W_gain^eps(R) = D_H^eps(r || g) / beta.

    At equilibrium this is -ln(1 - eps) / beta > 0 for eps > 0: a protocol
    allowed to fail with probability eps is credited with apparent work.

    Returns:
        float, or INFINITY when b_eps = 0

    Raises:
        DomainError for eps outside [0, 1)
    """
    return dh_entropy(state, eps) / state.theory.beta


def _delta_candidates(pairs, eps):
    """
    delta values at which max_delta [ln delta - ln b_{1-eps-delta}] is
    attained: the Lorenz breakpoints R_k in (eps, 1], as delta = R_k - eps.

    On each linear piece b = a + c delta the objective has derivative
    a / (delta (a + c delta)), so it is monotone on the piece and the
    maximum sits at a piece end; delta -> 0 is never a maximizer.
    """
    cum_probs = pairs.cum_probs
    ends = cum_probs[cum_probs > eps] - eps
    return np.unique(np.append(ends, 1.0 - eps))


def work_cost_bounds(state, eps):
    """
    Lower and upper bounds on the eps-work cost of forming R.

    The upper bound is nonnegative since b_{1-eps} <= eps. The lower bound
    is an exact maximization over delta in (0, 1 - eps].

    Returns:
        (lower, upper)

    Raises:
        DomainError for eps outside (0, 1)
    """
    _check_open_eps(eps)
    beta = state.theory.beta
    pairs = SortedPairs(state)
    log_b = float(pairs.log_type2_errors([1.0 - eps])[0])
    upper = (-log_b - math.log((1.0 - eps) / eps)) / beta

    deltas = _delta_candidates(pairs, eps)
    deltas = deltas[deltas > 0]
    smoothing = np.clip(1.0 - eps - deltas, 0.0, 1.0)
    values = np.log(deltas) - pairs.log_type2_errors(smoothing)
    lower = float(values.max()) / beta
    log.debug("work cost bounds at eps=%g: [%g, %g]", eps, lower, upper)
    return lower, upper


class ExtractionChannel(object):
    """
    A column-stochastic map from system (x) battery to battery.

    Column j is (1 - Q_j) g~' + Q_j e_{E+W}, where Q is the optimal test on
    r (x) e_E and g~' = (g' - w e_{E+W}) / (1 - w) with w = g'_{E+W}. It
    sends g (x) g' to g' and r (x) e_E to weight >= 1 - eps on E + W.

    Attributes:
        matrix: d_B x (d_R d_B) read-only array
        g_tilde: the modified battery vector g~'
        source_index, target_index: battery levels E and E + W
        work: W
        source, battery: the composite input state and the battery spectrum
    """
    def __init__(self, matrix, g_tilde, source_index, target_index, work,
                 source, battery):
        self.matrix = read_only(np.asarray(matrix, dtype=float))
        self.g_tilde = read_only(np.asarray(g_tilde, dtype=float))
        self.source_index = source_index
        self.target_index = target_index
        self.work = work
        self.source = source
        self.battery = battery

    @property
    def shape(self):
        return self.matrix.shape

    def __repr__(self):
        return "ExtractionChannel(%d x %d, W=%r)" % (
            self.matrix.shape + (self.work,))


def apply_channel(channel, vector):
    """
    The battery vector produced from a composite input vector.

    """
    vector = np.asarray(vector, dtype=float)
    if vector.shape != (channel.matrix.shape[1],):
        raise DomainError("channel takes vectors of length %d, got %s"
                          % (channel.matrix.shape[1], vector.shape))
    return channel.matrix.dot(vector)


def build_extraction_channel(state, eps, battery_spectrum, E, tol=None):
    """
    The extraction channel charging a battery from E to E + W, with
    W = D_H^eps(r || g) / beta.

    Args:
        state (QCState): the work system
        eps (float): failure probability in [0, 1)
        battery_spectrum (Spectrum or energies): must contain E and E + W
        E (float): initial battery energy

    Returns:
        (ExtractionChannel, W)

    Raises:
        MissingLevel when E or E + W is not a battery level
        DomainError for eps outside [0, 1) or a one-level battery
    """
    work = work_gain(state, eps)
    if is_infinite(work):
        raise DomainError("b_eps vanishes; no finite battery level to charge")
    if not isinstance(battery_spectrum, Spectrum):
        battery_spectrum = make_battery_spectrum(battery_spectrum)
    theory = state.theory
    source_index = battery_spectrum.level_index(E, 0.0, tol=tol)
    target_index = battery_spectrum.level_index(E + work, 0.0, tol=tol)

    battery = PureLevelState(battery_spectrum, theory, source_index)
    source = compose(state, battery)
    test = optimal_test(source, eps)

    gibbs = battery.gibbs
    weight = gibbs[target_index]
    if weight >= 1.0:
        raise DomainError("battery needs at least two levels")
    g_tilde = gibbs.copy()
    g_tilde[target_index] = 0.0
    g_tilde /= 1.0 - weight

    matrix = np.outer(g_tilde, 1.0 - test.q)
    matrix[target_index] += test.q
    log.info("extraction channel built: W=%g from battery level %d to %d",
             work, source_index, target_index)
    channel = ExtractionChannel(matrix, g_tilde, source_index, target_index,
                                work, source, battery_spectrum)
    return channel, work


class KFunction(object):
    """
    K_R(a) = sum_i max(0, r_i - g_i a): hinge divergences as a function of
    the hinge point.

    K_R(a) = 1 - a for a <= 0, K_R(0) = 1, and K_R is convex and
    non-increasing.
    """
    def __init__(self, state):
        self.state = state

    def __call__(self, a):
        return hinge_divergence(self.state, a)

    def log_point(self, log_a):
        """
        K_R(e^{log_a}), without overflow for large arguments.

        """
        with np.errstate(over="ignore"):
            scaled = np.exp(np.asarray(self.state.log_gibbs) + log_a)
        return float(np.sum(np.maximum(
            0.0, np.asarray(self.state.probs) - scaled)))


def k_function(state, a):
    return KFunction(state)(a)


def formation_feasible(state, W, E, battery_spectrum=None, tol=None):
    """
    Can a battery dropping from E + W to E form R exactly?

    The battery on its own has K_in(a) = (1 - a g'_{E+W})_+, which vanishes
    at a = 1 / g'_{E+W}; the composite output has
    K_out(a) = sum_i (r_i - g_i g'_E a)_+. Both are 1 at a = 0 and K_out is
    convex, so K_in >= K_out everywhere iff K_out(1 / g'_{E+W}) = 0. At that
    point g'_E a = e^{beta W}.

    Args:
        battery_spectrum: defaults to the two levels {E, E + W}

    Raises:
        MissingLevel
    """
    if battery_spectrum is None:
        battery_spectrum = make_battery_spectrum([E, E + W])
    elif not isinstance(battery_spectrum, Spectrum):
        battery_spectrum = make_battery_spectrum(battery_spectrum)
    low = battery_spectrum.level_index(E, 0.0, tol=tol)
    high = battery_spectrum.level_index(E + W, 0.0, tol=tol)
    exponents = state.theory.exponents(battery_spectrum)
    log_a = exponents[low] - exponents[high]
    return KFunction(state).log_point(log_a) <= 1e-12


def formation_state(state, eps):
    """
    The smoothed state r~ and work W of the work-cost upper bound.

    From an optimal dual pair (mu, tau) of b_{1-eps}(r || g),
    r'_k = r_k g_k / (g_k + tau_k) and r~ = r' / sum r'. Then
    mu (sum r') r~ <= g, so a battery discharge of W with
    e^{beta W} = (eps / (1 - eps)) e^{D_H^{1-eps}(r || g)} forms r~ exactly,
    and r~ lies within trace distance eps of r.

    Returns:
        (QCState, W)

    Raises:
        DomainError for eps outside (0, 1)
    """
    _check_open_eps(eps)
    certificate = dual_certificate(state, 1.0 - eps)
    probs = np.asarray(state.probs)
    gibbs = np.asarray(state.gibbs)
    shrunk = probs * gibbs / (gibbs + certificate.tau)
    smoothed = state.with_probs(shrunk / shrunk.sum())
    _, upper = work_cost_bounds(state, eps)
    log.debug("formation state at eps=%g keeps mass %g", eps, shrunk.sum())
    return smoothed, upper


def conversion_rate(source, target):
    """
    The asymptotic conversion rate D(r || g_R) / D(s || g_S).

    Raises:
        TheoryMismatch
        DomainError when S is at equilibrium (the rate is infinite)
    """
    if source.theory != target.theory:
        raise TheoryMismatch("%r vs %r" % (source.theory, target.theory))
    denominator = relative_entropy(target)
    if denominator <= ZERO_ENTROPY:
        raise DomainError("target is an equilibrium state: infinite rate")
    return relative_entropy(source) / denominator


def _battery(spectrum, theory, energy, tol):
    if not isinstance(spectrum, Spectrum):
        spectrum = make_battery_spectrum(spectrum)
    return PureLevelState(spectrum, theory,
                          spectrum.level_index(energy, 0.0, tol=tol))


def battery_reduction_check(state, W, E, battery_spectrum, tol=None):
    """
    Compare R + B_E -> B_W + B_E with R -> B_W.

    Both batteries live on `battery_spectrum`, which must contain E and W.
    The two verdicts always agree; the check returns whether they do.

    Raises:
        MissingLevel
    """
    theory = state.theory
    charged = _battery(battery_spectrum, theory, W, tol)
    held = _battery(battery_spectrum, theory, E, tol)
    combined = equimajorizes(compose(state, held), compose(charged, held))
    reduced = equimajorizes(state, charged)
    log.debug("battery reduction at W=%g: %s / %s", W, combined, reduced)
    return combined == reduced


def formation_reduction_check(state, W, E, battery_spectrum, tol=None):
    """
    Compare B_W + B_E -> R + B_E with B_W -> R.

    """
    theory = state.theory
    charged = _battery(battery_spectrum, theory, W, tol)
    held = _battery(battery_spectrum, theory, E, tol)
    combined = equimajorizes(compose(charged, held), compose(state, held))
    reduced = equimajorizes(charged, state)
    return combined == reduced


def work_report(state, eps):
    """
    Work gain, work cost bounds and the asymptotic rate at smoothing eps.

    Raises:
        DomainError for eps outside (0, 1)
    """
    _check_open_eps(eps)
    lower, upper = work_cost_bounds(state, eps)
    return WorkReport(
        w_gain=work_gain(state, eps),
        w_cost_lower=lower,
        w_cost_upper=upper,
        eps=eps,
        asymptotic_rate=relative_entropy(state) / state.theory.beta,
    )
