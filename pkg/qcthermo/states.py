"""
Theories, spectra and quasiclassical states.

A grand-potential resource theory is fixed by an inverse temperature `beta`
and a chemical potential `mu`. A quasiclassical state is a probability
vector over joint (energy, particle-number) levels; its free partner is the
grand-canonical Gibbs vector g_i = exp(-beta (E_i - mu n_i)) / Z on the same
levels.

Everything here is an immutable value: arrays handed out are read-only and
every operation returns a new object.

Units: k_B = 1, temperatures are 1/beta and every entropy is in nats.
"""
from __future__ import absolute_import, division

import itertools
import logging
import math
from collections import namedtuple

import numpy as np
from scipy.special import comb, gammaln, logsumexp

from .common import read_only
from .config import settings
from .exceptions import (
    DomainError,
    InfeasibleStep,
    InvalidSpectrum,
    InvalidState,
    MissingLevel,
    NotFittable,
    ResourceLimit,
    TheoryMismatch,
)
from .interfaces import WeightedPairs

__all__ = [
    "EnergyLevel",
    "GibbsFit",
    "PureLevelState",
    "QCState",
    "Spectrum",
    "TheoryParams",
    "TypedState",
    "battery_spectrum",
    "battery_state",
    "compose",
    "equilibrium",
    "fit_gibbs",
    "gibbs_state",
    "iid_power",
    "level_swap_step",
    "pump_to_fixed_point",
    "pure_level_state",
    "trace_distance",
    "uniform_eigensubspace_check",
]

log = logging.getLogger(__name__)


def _finite(value):
    try:
        return math.isfinite(value)
    except TypeError:
        return False


class TheoryParams(object):
    """
    The bath parameters (beta, mu) of one grand-potential theory.

    Args:
        beta (float): inverse temperature, strictly positive and finite
        mu (float): chemical potential (energy per particle)

    Raises:
        DomainError
    """
    __slots__ = ("_beta", "_mu")

    def __init__(self, beta, mu=0.0):
        if not _finite(beta) or beta <= 0:
            raise DomainError("beta must be positive and finite, got %r"
                              % (beta,))
        if not _finite(mu):
            raise DomainError("mu must be finite, got %r" % (mu,))
        self._beta = float(beta)
        self._mu = float(mu)

    @property
    def beta(self):
        return self._beta

    @property
    def mu(self):
        return self._mu

    @property
    def temperature(self):
        return 1.0 / self._beta

    def exponents(self, spectrum):
        """
        -beta (E_i - mu n_i) for every level of `spectrum`.

        """
        return -self._beta * (spectrum.energies
                              - self._mu * spectrum.particles)

    def __eq__(self, other):
        return (isinstance(other, TheoryParams)
                and self._beta == other._beta and self._mu == other._mu)

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        return hash((self._beta, self._mu))

    def __repr__(self):
        return "TheoryParams(beta=%r, mu=%r)" % (self._beta, self._mu)


class EnergyLevel(namedtuple("EnergyLevel", ["energy", "particles"])):
    """
    One joint eigenlevel: energy E_i and particle number n_i.

    Particle numbers are integer-valued by convention but stored as reals.
    """
    __slots__ = ()

    def __new__(cls, energy, particles=0.0):
        if not (_finite(energy) and _finite(particles)):
            raise InvalidSpectrum("level (%r, %r) is not finite"
                                  % (energy, particles))
        return super(EnergyLevel, cls).__new__(
            cls, float(energy), float(particles))


class Spectrum(object):
    """
    An ordered list of EnergyLevels, d >= 1. Degenerate levels are allowed.

    Build one from pairs::

        Spectrum([(0, 0), (1, 0), (1, 1)])

    or from arrays with `Spectrum.from_arrays(energies, particles)`.
    """
    def __init__(self, levels):
        parsed = []
        for level in levels:
            if isinstance(level, EnergyLevel):
                parsed.append(level)
            elif isinstance(level, (tuple, list)):
                parsed.append(EnergyLevel(*level))
            else:
                parsed.append(EnergyLevel(level))
        if not parsed:
            raise InvalidSpectrum("a spectrum needs at least one level")

        self._levels = tuple(parsed)
        self._energies = read_only(
            np.array([l.energy for l in parsed], dtype=float))
        self._particles = read_only(
            np.array([l.particles for l in parsed], dtype=float))

    @classmethod
    def from_arrays(cls, energies, particles=None):
        energies = list(energies)
        if particles is None:
            particles = [0.0] * len(energies)
        particles = list(particles)
        if len(particles) != len(energies):
            raise InvalidSpectrum("%d energies but %d particle numbers"
                                  % (len(energies), len(particles)))
        return cls(zip(energies, particles))

    @property
    def levels(self):
        return self._levels

    @property
    def energies(self):
        return self._energies

    @property
    def particles(self):
        return self._particles

    def __len__(self):
        return len(self._levels)

    def __iter__(self):
        return iter(self._levels)

    def __getitem__(self, index):
        return self._levels[index]

    def __eq__(self, other):
        return isinstance(other, Spectrum) and self._levels == other._levels

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        return hash(self._levels)

    def __repr__(self):
        return "Spectrum(%r)" % ([tuple(l) for l in self._levels],)

    def compose(self, other):
        """
        The product spectrum: level (i, j) sits at index i * len(other) + j
        with energies and particle numbers added.

        """
        energies = np.add.outer(self._energies, other.energies).ravel()
        particles = np.add.outer(self._particles, other.particles).ravel()
        return Spectrum.from_arrays(energies, particles)

    def level_index(self, energy, particles=0.0, tol=None):
        """
        Index of the first level at (energy, particles), within `tol`.

        Raises:
            MissingLevel
        """
        tol = settings().battery_tol if tol is None else tol
        hits = np.nonzero((np.abs(self._energies - energy) <= tol)
                          & (np.abs(self._particles - particles) <= tol))[0]
        if not len(hits):
            raise MissingLevel("no level at E=%r, n=%r" % (energy, particles))
        return int(hits[0])


def _log_gibbs(spectrum, theory):
    exponents = theory.exponents(spectrum)
    log_z = logsumexp(exponents)
    if not math.isfinite(log_z):
        raise InvalidSpectrum("partition function is not finite")
    return exponents - log_z, float(log_z)


def _check_probs(probs, d, normalize_tol):
    try:
        probs = np.array(probs, dtype=float)
    except (TypeError, ValueError):
        raise InvalidState("probabilities must be real numbers")
    if probs.ndim != 1 or len(probs) != d:
        raise InvalidState("expected %d probabilities, got shape %s"
                           % (d, probs.shape))
    if not np.all(np.isfinite(probs)):
        raise InvalidState("probabilities must be finite")
    if np.any(probs < 0):
        raise InvalidState("probabilities must be nonnegative")
    total = math.fsum(probs)
    if abs(total - 1.0) > normalize_tol:
        raise InvalidState("probabilities sum to %r" % total)
    if total != 1.0:
        if abs(total - 1.0) > 1e-12:
            log.warning("renormalizing probabilities that sum to %r", total)
        probs = probs / total
    return probs


class QCState(WeightedPairs):
    """
    A quasiclassical state R = (r, H, N) under a theory (beta, mu).

    Args:
        spectrum (Spectrum): the joint (E, n) levels
        probs (array-like): probability vector r, one entry per level
        theory (TheoryParams): the bath

    Vectors summing to within `normalize_tol` (1e-9) of one are renormalized;
    anything further off raises InvalidState.

    Derived, read-only: `gibbs` (the free vector g), `log_gibbs`, `log_z`,
    `log_ratios` (ln r_i/g_i, -inf where r_i = 0).
    """
    def __init__(self, spectrum, probs, theory, normalize_tol=None):
        if not isinstance(spectrum, Spectrum):
            spectrum = Spectrum(spectrum)
        if not isinstance(theory, TheoryParams):
            raise TypeError("theory must be TheoryParams, got %r" % (theory,))
        normalize_tol = (settings().normalize_tol if normalize_tol is None
                         else normalize_tol)

        self._spectrum = spectrum
        self._theory = theory
        self._probs = read_only(_check_probs(probs, len(spectrum),
                                             normalize_tol))

        log_gibbs, log_z = _log_gibbs(spectrum, theory)
        gibbs = np.exp(log_gibbs)
        if np.any(gibbs <= 0):
            raise InvalidSpectrum(
                "Gibbs weights underflow; beta*(E - mu n) spread too large")
        self._log_gibbs = read_only(log_gibbs)
        self._gibbs = read_only(gibbs)
        self._log_z = log_z

        with np.errstate(divide="ignore"):
            self._log_ratios = read_only(np.log(self._probs) - log_gibbs)

    @property
    def spectrum(self):
        return self._spectrum

    @property
    def theory(self):
        return self._theory

    @property
    def probs(self):
        return self._probs

    @property
    def gibbs(self):
        return self._gibbs

    @property
    def log_gibbs(self):
        return self._log_gibbs

    @property
    def log_z(self):
        return self._log_z

    @property
    def log_ratios(self):
        return self._log_ratios

    @property
    def dimension(self):
        return len(self._spectrum)

    @property
    def is_pure(self):
        return bool(np.count_nonzero(self._probs) == 1)

    def with_probs(self, probs):
        """
        A new state on the same spectrum and theory.

        """
        return QCState(self._spectrum, probs, self._theory)

    def __repr__(self):
        return "QCState(%r, probs=%r, %r)" % (
            self._spectrum, self._probs.tolist(), self._theory)


class PureLevelState(QCState):
    """
    The state e_i: all weight on one level. Batteries occupy these.

    """
    def __init__(self, spectrum, theory, index):
        if not isinstance(spectrum, Spectrum):
            spectrum = Spectrum(spectrum)
        if not 0 <= index < len(spectrum):
            raise DomainError("level %r outside a %d-level spectrum"
                              % (index, len(spectrum)))
        probs = np.zeros(len(spectrum))
        probs[index] = 1.0
        super(PureLevelState, self).__init__(spectrum, probs, theory)
        self._index = index

    @property
    def index(self):
        return self._index

    @property
    def level(self):
        return self.spectrum[self._index]


class TypedState(WeightedPairs):
    """
    R^{(x)n} aggregated by type class.

    One entry per class (classes with equal r/g ratio merged), carrying the
    class's total r-weight and total g-weight. Lorenz curves, hypothesis
    tests and divergences depend only on these pairs, so every function that
    accepts a QCState's weights accepts a TypedState too.

    Entries are sorted by non-increasing ratio. Weights are kept in log
    space; `probs` and `gibbs` are their exponentials.
    """
    def __init__(self, base, n, log_probs, log_gibbs, classes):
        self._base = base
        self._n = n
        self._classes = classes
        self._log_probs = read_only(log_probs)
        self._log_gibbs = read_only(log_gibbs)
        self._probs = read_only(np.exp(log_probs))
        self._gibbs = read_only(np.exp(log_gibbs))
        with np.errstate(invalid="ignore"):
            ratios = np.where(np.isneginf(log_probs), -np.inf,
                              log_probs - log_gibbs)
        self._log_ratios = read_only(ratios)

    @property
    def base(self):
        return self._base

    @property
    def n(self):
        return self._n

    @property
    def classes(self):
        """
        Number of type classes before merging.

        """
        return self._classes

    @property
    def theory(self):
        return self._base.theory

    @property
    def probs(self):
        return self._probs

    @property
    def gibbs(self):
        return self._gibbs

    @property
    def log_probs(self):
        return self._log_probs

    @property
    def log_gibbs(self):
        return self._log_gibbs

    @property
    def log_ratios(self):
        return self._log_ratios

    @property
    def dimension(self):
        return len(self._probs)

    def __repr__(self):
        return "TypedState(n=%d, entries=%d, classes=%d)" % (
            self._n, self.dimension, self._classes)


GibbsFit = namedtuple("GibbsFit", ["beta", "mu", "residual"])
GibbsFit.__doc__ = """
A grand-canonical fit of a probability vector.

`mu` is None when every level has the same particle number, since the
chemical potential then only shifts ln Z.
"""


def _require_same_theory(*states):
    theory = states[0].theory
    for other in states[1:]:
        if other.theory != theory:
            raise TheoryMismatch("%r vs %r" % (theory, other.theory))
    return theory


def gibbs_state(spectrum, theory):
    """
    The free state of `spectrum` under `theory`.

    Z is computed in log space with the largest exponent shifted out, so
    |beta E| up to ~700 does not overflow.

    Raises:
        InvalidSpectrum
    """
    if not isinstance(spectrum, Spectrum):
        spectrum = Spectrum(spectrum)
    log_gibbs, _ = _log_gibbs(spectrum, theory)
    return QCState(spectrum, np.exp(log_gibbs), theory)


def equilibrium(state):
    """
    G_R: the free state on R's spectrum.

    """
    return state.with_probs(state.gibbs)


def pure_level_state(spectrum, theory, index):
    return PureLevelState(spectrum, theory, index)


def compose(first, second):
    """
    R + S: the composite of two states of one theory.

    Level (i, j) of the product lands at index i * d_S + j; probabilities are
    the flattened outer product, and so are the Gibbs weights.

    Raises:
        TheoryMismatch
    """
    theory = _require_same_theory(first, second)
    spectrum = first.spectrum.compose(second.spectrum)
    probs = np.outer(first.probs, second.probs).ravel()
    return QCState(spectrum, probs, theory)


def battery_spectrum(energies):
    """
    A battery: levels at the given energies, no particles.

    """
    return Spectrum.from_arrays(energies)


def battery_state(spectrum, theory, energy, tol=None):
    """
    The battery B_E: `spectrum` occupied at the level with energy `energy`.

    The regime beta*E >> 1 is not enforced.

    Raises:
        MissingLevel
    """
    if not isinstance(spectrum, Spectrum):
        spectrum = battery_spectrum(spectrum)
    return PureLevelState(spectrum, theory,
                          spectrum.level_index(energy, 0.0, tol=tol))


def _type_counts(n, d):
    if d == 1:
        return np.array([[n]], dtype=np.int64)
    cuts = np.array(list(itertools.combinations(range(n + d - 1), d - 1)),
                    dtype=np.int64)
    edges = np.hstack([
        np.full((len(cuts), 1), -1, dtype=np.int64),
        cuts,
        np.full((len(cuts), 1), n + d - 1, dtype=np.int64),
    ])
    return np.diff(edges, axis=1) - 1


def _weighted_log(counts, log_weights):
    # 0 * -inf must count as 0: a level with zero weight that never occurs
    terms = np.where(counts > 0, counts * log_weights[np.newaxis, :], 0.0)
    return terms.sum(axis=1)


def _merge_equal_ratios(log_probs, log_gibbs, rtol=1e-12):
    with np.errstate(invalid="ignore"):
        ratios = np.where(np.isneginf(log_probs), -np.inf,
                          log_probs - log_gibbs)
    order = np.argsort(-ratios, kind="stable")
    ratios = ratios[order]
    log_probs = log_probs[order]
    log_gibbs = log_gibbs[order]

    with np.errstate(invalid="ignore"):
        gaps = np.abs(np.diff(ratios))
        scale = np.maximum(1.0, np.abs(ratios[1:]))
        same = (gaps <= rtol * scale) | (np.isneginf(ratios[1:])
                                          & np.isneginf(ratios[:-1]))
    starts = np.concatenate([[0], np.nonzero(~same)[0] + 1])
    merged_probs = np.logaddexp.reduceat(log_probs, starts)
    merged_gibbs = np.logaddexp.reduceat(log_gibbs, starts)
    return merged_probs, merged_gibbs


def iid_power(state, n, max_classes=None):
    """
    R^{(x)n} as a TypedState.

    Each multiset of outcomes k (a type class) has r-weight
    multinomial(n; k) * prod r_i^k_i and the analogous g-weight; all of its
    sequences share the ratio prod (r_i/g_i)^k_i.

    Args:
        state (QCState)
        n (int): number of copies, n >= 1
        max_classes (int): refuse to enumerate more classes than this

    Raises:
        DomainError, ResourceLimit
    """
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise DomainError("n must be a positive integer, got %r" % (n,))
    n = int(n)
    max_classes = (settings().max_type_classes if max_classes is None
                   else max_classes)
    d = state.dimension
    classes = int(comb(n + d - 1, d - 1, exact=True))
    if classes > max_classes:
        raise ResourceLimit("%d type classes for d=%d, n=%d exceeds %d"
                            % (classes, d, n, max_classes))
    log.debug("enumerating %d type classes (d=%d, n=%d)", classes, d, n)

    counts = _type_counts(n, d)
    log_multinomial = gammaln(n + 1) - gammaln(counts + 1).sum(axis=1)
    with np.errstate(divide="ignore"):
        log_r = np.log(state.probs)
    log_probs = log_multinomial + _weighted_log(counts, log_r)
    log_gibbs = log_multinomial + _weighted_log(counts, state.log_gibbs)

    merged_probs, merged_gibbs = _merge_equal_ratios(log_probs, log_gibbs)
    return TypedState(state, n, merged_probs, merged_gibbs, classes)


def trace_distance(first, second):
    """
    1/2 sum_i |r_i - r2_i|.

    Raises:
        DomainError on a length mismatch
    """
    first = np.asarray(first, dtype=float)
    second = np.asarray(second, dtype=float)
    if first.shape != second.shape:
        raise DomainError("cannot compare vectors of shapes %s and %s"
                          % (first.shape, second.shape))
    return 0.5 * float(np.abs(first - second).sum())


def fit_gibbs(state, tol):
    """
    Test whether `state` is grand canonical for some (beta, mu).

    Fits ln r_i ~ -beta E_i + alpha n_i + c by least squares and reports
    mu = alpha / beta. When all particle numbers agree, only beta is fitted.

    Args:
        state (QCState): strictly positive probabilities
        tol (float): max-norm bound on the log-space residual

    Returns:
        GibbsFit, or None when the residual exceeds `tol` or the fitted
        beta is not positive

    Raises:
        NotFittable: a zero probability ("zero-probabilities"), or a design
            whose columns are rank deficient ("underdetermined")
    """
    probs = state.probs
    if np.any(probs <= 0):
        error = NotFittable("zero probabilities cannot be fitted in log space")
        error.reason = "zero-probabilities"
        raise error

    energies = state.spectrum.energies
    particles = state.spectrum.particles
    ones = np.ones_like(energies)
    fit_mu = np.ptp(particles) > 0
    if fit_mu:
        design = np.column_stack([-energies, particles, ones])
    else:
        design = np.column_stack([-energies, ones])

    if np.linalg.matrix_rank(design) < design.shape[1]:
        error = NotFittable("(E, n, 1) design is rank deficient")
        error.reason = "underdetermined"
        raise error

    target = np.log(probs)
    coefficients = np.linalg.lstsq(design, target, rcond=None)[0]
    residual = float(np.max(np.abs(design.dot(coefficients) - target)))
    beta = float(coefficients[0])
    mu = float(coefficients[1] / beta) if fit_mu and beta != 0 else None
    log.debug("gibbs fit beta=%r mu=%r residual=%r", beta, mu, residual)

    # a beta whose whole effect on ln r stays below tol is no fit at all
    if residual > tol or beta * np.ptp(energies) <= tol:
        return None
    return GibbsFit(beta, mu, residual)


def _sectors(spectrum, tol):
    energies = spectrum.energies
    particles = spectrum.particles
    parent = list(range(len(spectrum)))

    def root(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i, j in itertools.combinations(range(len(spectrum)), 2):
        if (abs(energies[i] - energies[j]) <= tol
                and abs(particles[i] - particles[j]) <= tol):
            parent[root(j)] = root(i)

    groups = {}
    for i in range(len(spectrum)):
        groups.setdefault(root(i), []).append(i)
    return list(groups.values())


def uniform_eigensubspace_check(state, tol):
    """
    True iff r is constant on every (E, n) sector.

    Levels are grouped when both E and n agree within `grouping_tol`
    (1e-9); within a group all r_i must agree within `tol`.
    """
    grouping_tol = settings().grouping_tol
    probs = state.probs
    for group in _sectors(state.spectrum, grouping_tol):
        weights = probs[group]
        if weights.max() - weights.min() > tol:
            return False
    return True


def level_swap_step(probs, j, p1, pj):
    """
    One pump step against a non-Boltzmann free state.

    Moves delta = r_1 p_j - r_j p_1 of weight from the first level to level
    j (index 0 is the first level); every other entry is unchanged.

    Raises:
        DomainError on invalid (p1, pj) or j
        InfeasibleStep if an entry would go negative
    """
    probs = np.array(probs, dtype=float)
    if not 0 < j < len(probs):
        raise DomainError("j must index a level other than the first")
    if p1 < 0 or pj < 0 or p1 + pj > 1:
        raise DomainError("need p1, pj >= 0 and p1 + pj <= 1")

    delta = probs[0] * pj - probs[j] * p1
    probs[j] += delta
    probs[0] -= delta
    if probs[0] < 0 or probs[j] < 0 or probs[0] > 1 or probs[j] > 1:
        raise InfeasibleStep("step by %r leaves [0, 1]" % delta)
    return read_only(probs)


def pump_to_fixed_point(probs, j, p1, pj, tol=1e-12, max_steps=1000000):
    """
    Iterate `level_swap_step` until r_j p_1 and r_1 p_j agree within `tol`.

    Returns:
        (probs, steps)
    """
    probs = np.asarray(probs, dtype=float)
    for step in range(max_steps + 1):
        if abs(probs[j] * p1 - probs[0] * pj) <= tol:
            return probs, step
        probs = level_swap_step(probs, j, p1, pj)
    raise DomainError("no fixed point within %d steps" % max_steps)
