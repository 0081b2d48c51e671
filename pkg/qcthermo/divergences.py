"""
Monotones of the equimajorization quasiorder.

Every convex f gives an f-divergence phi_f(R) = sum_i g_i f(r_i / g_i) that
never increases under equilibrating operations. The named families here are
the relative entropy (f = x ln x), the Renyi divergences, and the hinge
functions f_a(x) = max(0, x - a), which together with the Lorenz curve form
a complete set. The grand potential closes the loop with thermodynamics:
Phi(R) - Phi(G_R) = D(r || g_R) / beta.

All functions accept a QCState or a TypedState; natural logarithms
throughout.
"""
from __future__ import absolute_import, division

import logging
import math

import numpy as np
from scipy.special import logsumexp

from .exceptions import DomainError, NumericalError, TheoryMismatch

__all__ = [
    "ConvexFunctionSpec",
    "Custom",
    "Hinge",
    "NegLog",
    "Renyi",
    "XLogX",
    "convexity_diagnostic",
    "equilibrium_grand_potential",
    "f_divergence",
    "grand_potential",
    "hinge_divergence",
    "hinge_dominates",
    "rel_entropy_variance",
    "relative_entropy",
    "renyi_divergence",
    "shannon_entropy",
]

log = logging.getLogger(__name__)


class ConvexFunctionSpec(object):
    """
    A convex function f on [0, inf) together with its value at 0.

    Subclasses implement `evaluate` on strictly positive arrays and set
    `at_zero`, the limit of f(x) as x -> 0+.
    """
    at_zero = 0.0

    def evaluate(self, x):
        raise NotImplementedError

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = np.empty_like(x)
        positive = x > 0
        out[~positive] = self.at_zero
        out[positive] = self.evaluate(x[positive])
        return out


class XLogX(ConvexFunctionSpec):
    """
    f(x) = x ln x; gives the relative entropy.

    """
    def evaluate(self, x):
        return x * np.log(x)

    def __repr__(self):
        return "XLogX()"


class NegLog(ConvexFunctionSpec):
    """
    f(x) = -ln x; infinite wherever r vanishes.

    """
    at_zero = math.inf

    def evaluate(self, x):
        return -np.log(x)

    def __repr__(self):
        return "NegLog()"


class Renyi(ConvexFunctionSpec):
    """
    f(x) = sign(alpha - 1) x^alpha, for alpha > 0, alpha != 1.

    The sign keeps f convex for alpha < 1.
    """
    def __init__(self, alpha):
        if not alpha > 0 or alpha == 1:
            raise DomainError("Renyi order must be > 0 and != 1")
        self.alpha = float(alpha)

    def evaluate(self, x):
        return math.copysign(1.0, self.alpha - 1) * x ** self.alpha

    def __repr__(self):
        return "Renyi(%r)" % self.alpha


class Hinge(ConvexFunctionSpec):
    """
    f_a(x) = max(0, x - a).

    """
    def __init__(self, a):
        self.a = float(a)
        self.at_zero = max(0.0, -self.a)

    def evaluate(self, x):
        return np.maximum(0.0, x - self.a)

    def __repr__(self):
        return "Hinge(%r)" % self.a


class Custom(ConvexFunctionSpec):
    """
    A user-supplied convex function, taken on trust.

    Args:
        function: callable on positive numpy arrays
        at_zero (float): the declared limit f(0+)

    Construction runs `convexity_diagnostic` and logs a warning when it
    fails; monotonicity is only promised for the named families.
    """
    def __init__(self, function, at_zero):
        self.function = function
        self.at_zero = float(at_zero)
        if not convexity_diagnostic(self):
            log.warning("%r failed the sampled midpoint-convexity check",
                        function)

    def evaluate(self, x):
        return np.asarray(self.function(x), dtype=float)

    def __repr__(self):
        return "Custom(%r)" % (self.function,)


def convexity_diagnostic(f, grid=None, tol=1e-12):
    """
    Sampled midpoint convexity: f((x+y)/2) <= (f(x)+f(y))/2 on a grid.

    A diagnostic, not a proof.
    """
    if grid is None:
        grid = np.concatenate([np.linspace(1e-6, 1, 25),
                               np.linspace(1, 50, 25)[1:]])
    grid = np.asarray(grid, dtype=float)
    x, y = np.meshgrid(grid, grid)
    mid = f((x + y).ravel() / 2)
    ends = (f(x.ravel()) + f(y.ravel())) / 2
    return bool(np.all(mid <= ends + tol * np.maximum(1, np.abs(ends))))


def f_divergence(state, f):
    """
    phi_f(R) = sum_i g_i f(r_i / g_i), with f(0) the declared limit.

    Raises:
        DomainError when the sum is not finite
    """
    gibbs = np.asarray(state.gibbs)
    ratios = np.asarray(state.probs) / gibbs
    with np.errstate(invalid="ignore", over="ignore"):
        value = float(np.sum(gibbs * f(ratios)))
    if not math.isfinite(value):
        raise DomainError("%r gives a non-finite divergence" % (f,))
    return value


def relative_entropy(state):
    """
    D(r || g) = sum over r_i > 0 of r_i ln(r_i / g_i), with 0 ln 0 = 0.

    """
    probs = np.asarray(state.probs)
    support = probs > 0
    value = float(np.sum(probs[support] * state.log_ratios[support]))
    return max(value, 0.0)


def renyi_divergence(state, alpha):
    """
    D_alpha(r || g) = ln(sum_i r_i^alpha g_i^(1 - alpha)) / (alpha - 1).

    Order 0 gives -ln of the Gibbs weight on r's support.

    Raises:
        DomainError for alpha < 0 or alpha == 1 (use relative_entropy)
    """
    if not alpha >= 0:
        raise DomainError("Renyi order must be >= 0, got %r" % (alpha,))
    if alpha == 1:
        raise DomainError("order 1 is the relative entropy; "
                          "call relative_entropy")
    probs = np.asarray(state.probs)
    support = probs > 0
    log_terms = (np.asarray(state.log_gibbs)[support]
                 + alpha * np.asarray(state.log_ratios)[support])
    return float(logsumexp(log_terms) / (alpha - 1))


def hinge_divergence(state, a):
    """
    phi_{f_a}(R) = sum_i max(0, r_i - a g_i); equals 1 - a for a <= 0.

    """
    return float(np.sum(np.maximum(
        0.0, np.asarray(state.probs) - a * np.asarray(state.gibbs))))


def _kinks(state):
    probs = np.asarray(state.probs)
    with np.errstate(over="ignore"):
        ratios = np.exp(np.asarray(state.log_ratios)[probs > 0])
    return ratios[np.isfinite(ratios)]


def hinge_dominates(source, target, tol=1e-12):
    """
    Is phi_{f_a}(R) >= phi_{f_a}(S) for every real a?

    a -> phi_{f_a} is piecewise linear with kinks only at the ratios r_i/g_i,
    and both sides equal 1 - a for a <= 0, so checking at the union of both
    ratio sets is exact.

    Raises:
        TheoryMismatch
    """
    if source.theory != target.theory:
        raise TheoryMismatch("%r vs %r" % (source.theory, target.theory))
    grid = np.union1d(_kinks(source), _kinks(target))
    grid = np.union1d(grid, [0.0])
    return all(hinge_divergence(source, a) >= hinge_divergence(target, a) - tol
               for a in grid)


def rel_entropy_variance(state):
    """
    V(r || g) = sum_i r_i (ln r_i - ln g_i)^2 - D^2 and s = sqrt(V).

    Tiny negative V from rounding is clamped to 0.

    Returns:
        (V, s)

    Raises:
        NumericalError if V < -1e-12, relative to the second moment
    """
    probs = np.asarray(state.probs)
    support = probs > 0
    log_ratios = np.asarray(state.log_ratios)[support]
    weights = probs[support]
    mean = float(np.sum(weights * log_ratios))
    second = float(np.sum(weights * log_ratios ** 2))
    variance = second - mean ** 2
    if variance < -1e-12 * max(1.0, second):
        raise NumericalError("relative entropy variance %r < 0" % variance)
    variance = max(variance, 0.0)
    return variance, math.sqrt(variance)


def shannon_entropy(probs):
    """
    -sum over r_i > 0 of r_i ln r_i.

    """
    probs = np.asarray(probs, dtype=float)
    support = probs[probs > 0]
    return max(float(-np.sum(support * np.log(support))), 0.0)


def grand_potential(state):
    """
    Phi(R) = <E> - S(r) / beta - mu <N>, with the standard-sign entropy.

    """
    theory = state.theory
    probs = state.probs
    energy = float(np.dot(probs, state.spectrum.energies))
    particles = float(np.dot(probs, state.spectrum.particles))
    return (energy - shannon_entropy(probs) / theory.beta
            - theory.mu * particles)


def equilibrium_grand_potential(state):
    """
    Phi(G_R) = -ln(Z) / beta.

    """
    return -state.log_z / state.theory.beta
