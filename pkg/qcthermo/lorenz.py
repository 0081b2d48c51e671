"""
Rescaled Lorenz curves and optimal hypothesis tests.

Sort the levels of R by non-increasing ratio r_i/g_i and accumulate: the
points (G_k, R_k) of cumulative Gibbs weight against cumulative probability
trace a concave curve from (0, 0) to (1, 1). R can be turned into S by an
equilibrating operation exactly when R's curve lies on or above S's.

The same sorted partial sums give the optimal Type II error
b_eps(r || g) = min {q.g : q.r >= 1 - eps, 0 <= q <= 1}: for 1 - eps between
R_m and R_{m+1} the optimal test accepts the first m levels and a fraction
of level m + 1, so b_eps = G_m + lambda g_{pi(m+1)}.
"""
from __future__ import absolute_import, division

import logging
import math

import numpy as np

from .common import INFINITY, read_only
from .config import settings
from .exceptions import DomainError, TheoryMismatch

__all__ = [
    "LorenzCurve",
    "TestVector",
    "build_lorenz",
    "dh_entropy",
    "dominates",
    "equimajorizes",
    "eval_lorenz",
    "log_type2_error",
    "lorenz_rows",
    "optimal_test",
    "type2_error",
]

log = logging.getLogger(__name__)


class LorenzCurve(object):
    """
    Breakpoints (t_k, L_k), k = 0..d, of a rescaled Lorenz curve.

    Attributes:
        t: cumulative g-weight, from 0 to 1
        L: cumulative r-weight, from 0 to 1
        slopes: r/g of each segment, non-increasing
        permutation: the stable sorting permutation pi
    """
    def __init__(self, t, L, slopes, permutation):
        self.t = read_only(np.asarray(t, dtype=float))
        self.L = read_only(np.asarray(L, dtype=float))
        self.slopes = read_only(np.asarray(slopes, dtype=float))
        self.permutation = read_only(np.asarray(permutation, dtype=int))

    def __len__(self):
        return len(self.t)

    def __repr__(self):
        return "LorenzCurve(%d breakpoints)" % len(self.t)


class TestVector(object):
    """
    The diagonal POVM element Q of a two-outcome test, 0 <= q_i <= 1.

    """
    __test__ = False  # keep test collectors away

    def __init__(self, q):
        q = np.asarray(q, dtype=float)
        if np.any(q < 0) or np.any(q > 1):
            raise DomainError("test entries must lie in [0, 1]")
        self.q = read_only(q)

    def acceptance(self, probs):
        """
        q.r: the probability of accepting the null hypothesis.

        """
        return float(np.dot(self.q, probs))

    def type2_error(self, gibbs):
        return float(np.dot(self.q, gibbs))


class SortedPairs(object):
    """
    A state's weights in ratio order with their partial sums.

    """
    def __init__(self, state):
        order = np.argsort(-np.asarray(state.log_ratios), kind="stable")
        probs = np.asarray(state.probs)[order]
        self.order = order
        self.probs = probs
        self.gibbs = np.asarray(state.gibbs)[order]
        self.log_gibbs = np.asarray(state.log_gibbs)[order]
        self.log_ratios = np.asarray(state.log_ratios)[order]
        # zero-probability levels sort last
        self.support = int(np.count_nonzero(probs > 0))

        cum_probs = np.concatenate([[0.0], np.cumsum(probs)])
        cum_probs[self.support:] = 1.0
        self.cum_probs = np.minimum(cum_probs, 1.0)
        # tail[m] = r_m + ... + r_{d-1}; 1 - R_m cancels when r_m is tiny
        self.tail = np.cumsum(probs[::-1])[::-1]
        cum_gibbs = np.concatenate([[0.0], np.cumsum(self.gibbs)])
        cum_gibbs[-1] = 1.0
        self.cum_gibbs = np.minimum(cum_gibbs, 1.0)
        # ln G_m, m = 0..d
        self.log_cum_gibbs = np.concatenate(
            [[-np.inf], np.logaddexp.accumulate(self.log_gibbs)])

    def _locate(self, eps):
        """
        Segment index m and the fraction of level m a test accepts, for an
        array of eps: the m supported levels before it carry more than eps
        of tail mass.

        """
        eps = np.asarray(eps, dtype=float)
        heavier = np.searchsorted(-self.tail[:self.support], -eps,
                                  side="left")
        m = np.clip(heavier, 1, self.support) - 1
        fraction = np.clip((self.tail[m] - eps) / self.probs[m], 0.0, 1.0)
        return m, fraction

    def log_type2_errors(self, eps):
        """
        ln b_eps for an array of eps in [0, 1]; -inf where eps = 1.

        """
        eps = np.asarray(eps, dtype=float)
        m, fraction = self._locate(eps)
        with np.errstate(divide="ignore"):
            log_tail = np.log(fraction) + self.log_gibbs[m]
        log_b = np.logaddexp(self.log_cum_gibbs[m], log_tail)
        return np.where(eps >= 1, -np.inf, log_b)

    def segment(self, eps):
        """
        (m, lambda) with R_m < 1 - eps <= R_{m+1}, or None when eps = 1.

        """
        if eps >= 1:
            return None
        m, fraction = self._locate(eps)
        return int(m), float(fraction)


def _check_eps(eps, upper_open=False):
    if not (0 <= eps <= 1) or (upper_open and eps == 1):
        raise DomainError("eps must lie in [0, 1%s, got %r"
                          % (")" if upper_open else "]", eps))


def build_lorenz(state):
    """
    The rescaled Lorenz curve of a QCState or TypedState.

    Ties in ratio keep the original level order; tied levels produce
    collinear segments, so nothing downstream depends on the tie-break.
    """
    pairs = SortedPairs(state)
    with np.errstate(over="ignore"):
        slopes = np.exp(pairs.log_ratios)
    return LorenzCurve(pairs.cum_gibbs, pairs.cum_probs, slopes, pairs.order)


def eval_lorenz(curve, t):
    """
    L(t) by linear interpolation between breakpoints.

    Raises:
        DomainError for t outside [0, 1]
    """
    if not 0 <= t <= 1:
        raise DomainError("t must lie in [0, 1], got %r" % (t,))
    return float(np.interp(t, curve.t, curve.L))


def dominates(first, second, tol=None):
    """
    Does curve `first` lie on or above curve `second` everywhere?

    Both curves are piecewise linear, so comparing at the union of their
    breakpoint abscissae is exact.
    """
    tol = settings().dominance_tol if tol is None else tol
    ts = np.union1d(first.t, second.t)
    upper = np.interp(ts, first.t, first.L)
    lower = np.interp(ts, second.t, second.L)
    return bool(np.all(upper >= lower - tol))


def equimajorizes(source, target, tol=None):
    """
    Does R equimajorize S, i.e. can an equilibrating operation map R to S?

    Spectra may differ; the theories may not.

    Raises:
        TheoryMismatch
    """
    if source.theory != target.theory:
        raise TheoryMismatch("%r vs %r" % (source.theory, target.theory))
    return dominates(build_lorenz(source), build_lorenz(target), tol=tol)


def log_type2_error(state, eps):
    """
    ln b_eps(r || g), -inf when b_eps = 0.

    Accumulated in log space so that i.i.d. powers with b ~ e^{-n D} keep
    full relative precision.
    """
    _check_eps(eps)
    return float(SortedPairs(state).log_type2_errors([eps])[0])


def type2_error(state, eps):
    """
    b_eps(r || g): the least Type II error of a test whose Type I error is
    at most eps.

    b_1 = 0 and b_0 is the Gibbs weight of r's support.

    Raises:
        DomainError for eps outside [0, 1]
    """
    return math.exp(log_type2_error(state, eps))


def optimal_test(state, eps):
    """
    A Neyman-Pearson test attaining b_eps: 1 on the highest-ratio levels,
    fractional on at most one level, 0 elsewhere.

    Returns:
        TestVector, indexed like the state's levels
    """
    _check_eps(eps)
    pairs = SortedPairs(state)
    q = np.zeros(len(pairs.probs))
    segment = pairs.segment(eps)
    if segment is not None:
        m, fraction = segment
        q[pairs.order[:m]] = 1.0
        q[pairs.order[m]] = fraction
    return TestVector(q)


def dh_entropy(state, eps):
    """
    The hypothesis-testing relative entropy D_H^eps(r || g) = -ln b_eps.

    Returns:
        float, or INFINITY when b_eps = 0

    Raises:
        DomainError for eps outside [0, 1)
    """
    _check_eps(eps, upper_open=True)
    log_b = log_type2_error(state, eps)
    if np.isneginf(log_b):
        return INFINITY
    # max() guards -0.0 and rounding just above ln 1
    return max(-log_b, 0.0)


def lorenz_rows(curve):
    """
    (t, L) rows for CSV export.

    """
    return [(float(t), float(L)) for t, L in zip(curve.t, curve.L)]
