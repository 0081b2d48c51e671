"""
Many-copy behaviour of the one-shot quantities.

For R^{(x)n}, D_H^eps = n D + sqrt(n) s Phi^{-1}(eps) + O(ln n), where D and
s^2 are the relative entropy and its variance. Exact values come from the
type-class representation of the i.i.d. power, so n in the hundreds is
cheap for a handful of levels.
"""
from __future__ import absolute_import, division

import logging
import math
from collections import namedtuple
from concurrent.futures import ThreadPoolExecutor

import numpy as np
from scipy.special import erfc

from .divergences import rel_entropy_variance, relative_entropy
from .exceptions import DomainError, ResourceLimit
from .lorenz import dh_entropy
from .states import iid_power
from .work import work_cost_bounds, work_gain

__all__ = [
    "SecondOrderExpansion",
    "SecondOrderGaps",
    "aep_check",
    "aep_envelope",
    "gaussian_cdf",
    "inv_gaussian_cdf",
    "normal_approx_dh",
    "second_order_gaps",
    "sweep",
    "sweep_rows",
]

log = logging.getLogger(__name__)

# rational approximation to the normal quantile, central and tail pieces
_A = (-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
      1.383577518672690e+02, -3.066479806614716e+01, 2.506628277459239e+00)
_B = (-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
      6.680131188771972e+01, -1.328068155288572e+01)
_C = (-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
      -2.549732539343734e+00, 4.374664141464968e+00, 2.938163982698783e+00)
_D = (7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
      3.754408661907416e+00)
_P_LOW = 0.02425

_SQRT2 = math.sqrt(2.0)
_SQRT2PI = math.sqrt(2.0 * math.pi)


def gaussian_cdf(z):
    """
    Standard normal CDF via erfc, accurate in both tails.

    """
    return 0.5 * float(erfc(-z / _SQRT2))


def _horner(coefficients, x):
    value = 0.0
    for c in coefficients:
        value = value * x + c
    return value


def _rough_quantile(p):
    # p <= 1/2 here
    if p < _P_LOW:
        q = math.sqrt(-2.0 * math.log(p))
        return _horner(_C, q) / (_horner(_D, q) * q + 1.0)
    q = p - 0.5
    r = q * q
    return _horner(_A, r) * q / (_horner(_B, r) * r + 1.0)


def inv_gaussian_cdf(eps):
    """
    Phi^{-1}(eps), the standard normal quantile, to about 1e-15.

    A rational first guess is polished by one Newton step against
    `gaussian_cdf`. Upper-half arguments use Phi^{-1}(eps) = -Phi^{-1}(1-eps)
    so both tails get full relative precision.

    Raises:
        DomainError for eps outside (0, 1)
    """
    if not 0 < eps < 1:
        raise DomainError("quantile needs eps in (0, 1), got %r" % (eps,))
    if eps > 0.5:
        return -inv_gaussian_cdf(1.0 - eps)
    z = _rough_quantile(eps)
    density = math.exp(-0.5 * z * z) / _SQRT2PI
    return z - (gaussian_cdf(z) - eps) / density


class SecondOrderExpansion(namedtuple("SecondOrderExpansion", [
        "n", "eps", "leading", "correction", "exact", "residual"])):
    """
    n D + sqrt(n) s Phi^{-1}(eps) against the exact D_H^eps of n copies.

    `exact` and `residual` are None when the type classes were too many to
    enumerate.
    """
    __slots__ = ()

    @property
    def approximation(self):
        return self.leading + self.correction

    @property
    def has_exact(self):
        return self.exact is not None


def normal_approx_dh(state, n, eps, max_classes=None):
    """
    The second-order expansion of D_H^eps(r^n || g^n), with the exact value
    when the type classes of R^{(x)n} can be enumerated.

    Raises:
        DomainError for n < 1 or eps outside (0, 1)
    """
    quantile = inv_gaussian_cdf(eps)
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise DomainError("n must be a positive integer, got %r" % (n,))
    n = int(n)
    divergence = relative_entropy(state)
    _, spread = rel_entropy_variance(state)
    leading = n * divergence
    correction = math.sqrt(n) * spread * quantile

    try:
        typed = iid_power(state, n, max_classes=max_classes)
    except ResourceLimit as e:
        log.info("n=%d: exact term skipped (%s)", n, e)
        return SecondOrderExpansion(n, eps, leading, correction, None, None)
    exact = float(dh_entropy(typed, eps))
    return SecondOrderExpansion(n, eps, leading, correction, exact,
                                exact - leading - correction)


def aep_check(state, eps, n_max, ns=None, max_classes=None):
    """
    (n, D_H^eps(r^n || g^n) / n) for n = 1..n_max, or the given ns.

    The sequence tends to D(r || g) for every eps in (0, 1). It stops early,
    with a log message, at the first n whose type classes are too many.
    """
    if not 0 < eps < 1:
        raise DomainError("eps must lie in (0, 1), got %r" % (eps,))
    ns = range(1, int(n_max) + 1) if ns is None else ns
    rows = []
    for n in ns:
        try:
            typed = iid_power(state, n, max_classes=max_classes)
        except ResourceLimit as e:
            log.info("AEP sequence truncated before n=%d: %s", n, e)
            break
        rows.append((n, float(dh_entropy(typed, eps)) / n))
    return rows


def aep_envelope(state, eps, n):
    """
    (s |Phi^{-1}(eps)| + 1) / sqrt(n): the size of the gap between the
    per-copy D_H^eps and D to expect at n copies. A heuristic, not a bound.

    """
    _, spread = rel_entropy_variance(state)
    return (spread * abs(inv_gaussian_cdf(eps)) + 1.0) / math.sqrt(n)


SecondOrderGaps = namedtuple("SecondOrderGaps", [
    "gain_gap", "cost_gap_lower", "cost_gap_upper"])
SecondOrderGaps.__doc__ = """
[n D / beta - W_gain] / sqrt(n) and [W_cost bounds - n D / beta] / sqrt(n)
for n copies; all tend to s Phi^{-1}(1 - eps) / beta.
"""


def second_order_gaps(state, eps, n, max_classes=None):
    """
    Normalized gaps between the one-shot work figures of R^{(x)n} and the
    asymptotic n D / beta.

    Raises:
        ResourceLimit when R^{(x)n} cannot be enumerated
        DomainError for eps outside (0, 1)
    """
    if not 0 < eps < 1:
        raise DomainError("eps must lie in (0, 1), got %r" % (eps,))
    typed = iid_power(state, n, max_classes=max_classes)
    beta = state.theory.beta
    asymptote = n * relative_entropy(state) / beta
    root = math.sqrt(n)
    lower, upper = work_cost_bounds(typed, eps)
    return SecondOrderGaps(
        gain_gap=(asymptote - work_gain(typed, eps)) / root,
        cost_gap_lower=(lower - asymptote) / root,
        cost_gap_upper=(upper - asymptote) / root,
    )


def sweep(state, eps, ns, workers=None, max_classes=None):
    """
    normal_approx_dh for every n in `ns`, returned in the order of `ns`.

    Each n is independent; with `workers` > 1 they run on a thread pool.
    """
    ns = list(ns)

    def expand(n):
        log.debug("sweep: n=%d", n)
        return normal_approx_dh(state, n, eps, max_classes=max_classes)

    if not workers or workers <= 1:
        return [expand(n) for n in ns]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(expand, ns))


def sweep_rows(expansions):
    """
    (n, exact, leading, correction, residual) rows; missing exact terms are
    NaN.

    """
    return [(e.n,
             np.nan if e.exact is None else e.exact,
             e.leading,
             e.correction,
             np.nan if e.residual is None else e.residual)
            for e in expansions]
