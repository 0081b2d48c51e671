"""
Linear programs behind equimajorization.

R equimajorizes S exactly when a column-stochastic M maps r to s and g_R to
g_S. `find_witness` looks for such an M with a small dense simplex solver and
verifies it before handing it out; `dual_certificate` reads off an optimal
solution of the dual of the Type II error program from the Lorenz ordering;
`bruteforce_type2_error` enumerates the vertices of the primal program and
serves as a reference for small dimensions.
"""
from __future__ import absolute_import, division

import logging
import math
from collections import namedtuple

import numpy as np

from .common import read_only
from .config import settings
from .exceptions import (
    DomainError,
    ResourceLimit,
    SolverFailure,
    TheoryMismatch,
)
from .lorenz import SortedPairs, _check_eps

__all__ = [
    "DualCertificate",
    "LPProblem",
    "LPResult",
    "MAX_LP_VARIABLES",
    "StochasticWitness",
    "bruteforce_type2_error",
    "dual_certificate",
    "dual_value",
    "find_witness",
    "is_dual_feasible",
    "solve_lp",
    "verify_witness",
    "witness_to_json",
]

log = logging.getLogger(__name__)

MAX_LP_VARIABLES = 5000
MAX_BRUTEFORCE_LEVELS = 14

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


LPResult = namedtuple("LPResult", ["status", "x", "value", "iterations"])
LPResult.__doc__ = """
Outcome of `solve_lp`.

`status` is "optimal", "infeasible" or "unbounded"; `x` and `value` are
None unless the status is "optimal".
"""


class LPProblem(object):
    """
    minimize c.x subject to A_eq x = b_eq, A_ub x <= b_ub, lower <= x <= upper.

    Args:
        c (array-like): objective, length n
        A_eq, b_eq: equality rows, optional
        A_ub, b_ub: inequality rows, optional
        bounds: sequence of (lower, upper) per variable, None meaning
            unbounded on that side; default (0, None) for every variable

    Raises:
        DomainError on inconsistent shapes
        ResourceLimit when n exceeds MAX_LP_VARIABLES
    """
    def __init__(self, c, A_eq=None, b_eq=None, A_ub=None, b_ub=None,
                 bounds=None):
        self.c = np.asarray(c, dtype=float).ravel()
        n = len(self.c)
        if n > MAX_LP_VARIABLES:
            raise ResourceLimit("%d variables exceeds the dense solver's "
                                "limit of %d" % (n, MAX_LP_VARIABLES))
        self.A_eq, self.b_eq = self._rows(A_eq, b_eq, n, "equality")
        self.A_ub, self.b_ub = self._rows(A_ub, b_ub, n, "inequality")
        if bounds is None:
            bounds = [(0.0, None)] * n
        if len(bounds) != n:
            raise DomainError("expected %d bounds, got %d" % (n, len(bounds)))
        self.bounds = [self._bound(lower, upper) for lower, upper in bounds]

    @staticmethod
    def _rows(A, b, n, kind):
        if A is None and b is None:
            return np.zeros((0, n)), np.zeros(0)
        A = np.atleast_2d(np.asarray(A, dtype=float))
        b = np.asarray(b, dtype=float).ravel()
        if A.shape != (len(b), n):
            raise DomainError("%s constraints have shape %s for %d rows "
                              "and %d variables" % (kind, A.shape, len(b), n))
        return A, b

    @staticmethod
    def _bound(lower, upper):
        lower = -math.inf if lower is None else float(lower)
        upper = math.inf if upper is None else float(upper)
        if lower > upper:
            raise DomainError("empty bound (%r, %r)" % (lower, upper))
        return lower, upper

    @property
    def n(self):
        return len(self.c)


class _StandardForm(object):
    """
    The problem rewritten as min c.y, A y = b, y >= 0, b >= 0, with rows
    scaled to unit max-norm.

    Original variables are recovered as x = offset + recover.dot(y).
    """
    def __init__(self, problem):
        n = problem.n
        columns = []
        offset = np.zeros(n)
        extra_ub = []
        for j, (lower, upper) in enumerate(problem.bounds):
            unit = np.zeros(n)
            unit[j] = 1.0
            if math.isfinite(lower):
                offset[j] = lower
                columns.append(unit)
                if math.isfinite(upper):
                    extra_ub.append((len(columns) - 1, upper - lower))
            elif math.isfinite(upper):
                offset[j] = upper
                columns.append(-unit)
            else:
                columns.append(unit)
                columns.append(-unit)
        recover = np.array(columns).T
        self.offset = offset
        k = recover.shape[1]

        A_eq = problem.A_eq.dot(recover)
        b_eq = problem.b_eq - problem.A_eq.dot(offset)
        A_ub = problem.A_ub.dot(recover)
        b_ub = problem.b_ub - problem.A_ub.dot(offset)
        for column, width in extra_ub:
            row = np.zeros(k)
            row[column] = 1.0
            A_ub = np.vstack([A_ub, row])
            b_ub = np.append(b_ub, width)

        slacks = len(b_ub)
        A = np.vstack([
            np.hstack([A_eq, np.zeros((len(b_eq), slacks))]),
            np.hstack([A_ub, np.eye(slacks)]),
        ])
        b = np.concatenate([b_eq, b_ub])
        negative = b < 0
        A[negative] *= -1
        b[negative] *= -1

        scale = np.max(np.abs(np.hstack([A, b[:, np.newaxis]])), axis=1)
        scale[scale == 0] = 1.0
        self.A = A / scale[:, np.newaxis]
        self.b = b / scale
        self.c = np.concatenate([problem.c.dot(recover), np.zeros(slacks)])
        self.recover = np.hstack([recover, np.zeros((n, slacks))])

    def original(self, y):
        return self.offset + self.recover.dot(y)


def _pivot(T, basis, row, col):
    T[row] /= T[row, col]
    factors = T[:, col].copy()
    factors[row] = 0.0
    T -= np.outer(factors, T[row])
    basis[row] = col


def _bland(T, basis, tol, budget):
    """
    Run simplex pivots on tableau T until optimal or unbounded.

    Entering column: lowest index with negative reduced cost. Leaving row:
    minimum ratio, ties broken by lowest basic index. Returns
    (status, pivots used).
    """
    rows = T.shape[0] - 1
    pivots = 0
    while True:
        candidates = np.nonzero(T[-1, :-1] < -tol)[0]
        if not len(candidates):
            return OPTIMAL, pivots
        col = candidates[0]
        column = T[:rows, col]
        positive = np.nonzero(column > tol)[0]
        if not len(positive):
            return UNBOUNDED, pivots
        if pivots >= budget:
            raise SolverFailure("simplex did not finish within %d pivots"
                                % budget)
        ratios = T[positive, -1] / column[positive]
        best = ratios.min()
        ties = positive[ratios <= best + tol * max(1.0, abs(best))]
        row = ties[np.argmin(basis[ties])]
        _pivot(T, basis, row, col)
        pivots += 1


def solve_lp(problem, tol=None, max_iter=None):
    """
    Solve an LPProblem with the two-phase dense simplex method.

    Phase one minimizes the sum of artificial variables; a positive optimum
    certifies infeasibility. Phase two then minimizes the objective from the
    feasible basis. Bland's rule makes degenerate problems terminate.

    Returns:
        LPResult

    Raises:
        SolverFailure when the pivot cap is reached
    """
    tol = settings().lp_tol if tol is None else tol
    max_iter = settings().lp_max_iter if max_iter is None else max_iter
    form = _StandardForm(problem)
    m, k = form.A.shape

    # phase one: artificials in columns k..k+m
    T = np.zeros((m + 1, k + m + 1))
    T[:m, :k] = form.A
    T[:m, k:k + m] = np.eye(m)
    T[:m, -1] = form.b
    T[-1, :k] = -form.A.sum(axis=0)
    T[-1, -1] = -form.b.sum()
    basis = np.arange(k, k + m)

    status, used = _bland(T, basis, tol, max_iter)
    iterations = used
    if -T[-1, -1] > tol * max(1, m):
        log.debug("phase one residual %g: infeasible", -T[-1, -1])
        return LPResult(INFEASIBLE, None, None, iterations)

    # drive zero-valued artificials out of the basis; drop redundant rows
    keep = []
    for row in range(m):
        if basis[row] < k:
            keep.append(row)
            continue
        # the artificial is zero up to the phase-one residual; pivoting
        # on a zero right-hand side leaves every other basic value as is
        T[row, -1] = 0.0
        entries = np.abs(T[row, :k])
        col = int(np.argmax(entries)) if k else 0
        if k and entries[col] > tol:
            _pivot(T, basis, row, col)
            keep.append(row)
    T = np.vstack([T[keep][:, list(range(k)) + [-1]], np.zeros(k + 1)])
    basis = basis[keep]

    # phase two
    rows = len(keep)
    T[-1, :k] = form.c
    for row in range(rows):
        T[-1] -= form.c[basis[row]] * T[row]

    status, used = _bland(T, basis, tol, max_iter - iterations)
    iterations += used
    if status == UNBOUNDED:
        return LPResult(UNBOUNDED, None, None, iterations)

    y = np.zeros(k)
    y[basis] = T[:rows, -1]
    x = form.original(y)
    log.debug("simplex optimal after %d pivots", iterations)
    return LPResult(OPTIMAL, x, float(problem.c.dot(x)), iterations)


class StochasticWitness(object):
    """
    A column-stochastic d_S x d_R matrix mapping r to s and g_R to g_S.

    """
    def __init__(self, matrix, source_spectrum, target_spectrum):
        self.matrix = read_only(np.array(matrix, dtype=float))
        self.source_spectrum = source_spectrum
        self.target_spectrum = target_spectrum

    @property
    def shape(self):
        return self.matrix.shape

    def apply(self, vector):
        return self.matrix.dot(vector)

    def __repr__(self):
        return "StochasticWitness(%d x %d)" % self.matrix.shape


def _witness_problem(source, target):
    d_r, d_s = source.dimension, target.dimension
    n = d_r * d_s
    if n > MAX_LP_VARIABLES:
        raise ResourceLimit("witness LP needs %d variables, limit %d"
                            % (n, MAX_LP_VARIABLES))
    # variable i * d_r + j is M[i, j]
    eye_s = np.eye(d_s)
    A_eq = np.vstack([
        np.kron(eye_s, source.probs[np.newaxis, :]),
        np.kron(eye_s, source.gibbs[np.newaxis, :]),
        np.kron(np.ones((1, d_s)), np.eye(d_r)),
    ])
    b_eq = np.concatenate([target.probs, target.gibbs, np.ones(d_r)])
    return LPProblem(np.zeros(n), A_eq=A_eq, b_eq=b_eq)


def find_witness(source, target, tol=None):
    """
    A StochasticWitness for R -> S, or None when the LP is infeasible.

    A returned witness always passes `verify_witness`.

    Raises:
        TheoryMismatch, ResourceLimit
        SolverFailure if the solution found fails verification
    """
    if source.theory != target.theory:
        raise TheoryMismatch("%r vs %r" % (source.theory, target.theory))
    tol = settings().witness_tol if tol is None else tol
    result = solve_lp(_witness_problem(source, target))
    if result.status == INFEASIBLE:
        return None
    if result.status != OPTIMAL:
        raise SolverFailure("witness LP reported %s" % result.status)

    matrix = result.x.reshape(target.dimension, source.dimension)
    if matrix.min() < -tol:
        raise SolverFailure("witness entry %g is negative" % matrix.min())
    matrix = np.maximum(matrix, 0.0)
    witness = StochasticWitness(matrix, source.spectrum, target.spectrum)
    if not verify_witness(witness, source, target, tol=tol):
        raise SolverFailure("witness failed verification at tol %g" % tol)
    return witness


def verify_witness(witness, source, target, tol=None):
    """
    Check nonnegativity, unit column sums, M r = s and M g_R = g_S, each to
    within `tol` in max-norm.

    """
    tol = settings().witness_tol if tol is None else tol
    matrix = np.asarray(getattr(witness, "matrix", witness), dtype=float)
    if matrix.shape != (target.dimension, source.dimension):
        return False
    checks = [
        -matrix.min(),
        np.max(np.abs(matrix.sum(axis=0) - 1.0)),
        np.max(np.abs(matrix.dot(source.probs) - target.probs)),
        np.max(np.abs(matrix.dot(source.gibbs) - target.gibbs)),
    ]
    return bool(max(checks) <= tol)


def witness_to_json(witness):
    """
    {"rows": d_S, "cols": d_R, "data": [[...], ...]} with row-major data.

    """
    rows, cols = witness.shape
    return {
        "rows": rows,
        "cols": cols,
        "data": [[float(x) for x in row] for row in witness.matrix],
    }


class DualCertificate(object):
    """
    A feasible point (mu, tau) of the dual of the Type II error program:

        maximize (1 - eps) mu - sum tau
        subject to mu r_i - tau_i <= g_i, mu >= 0, tau >= 0
    """
    def __init__(self, mu, tau):
        self.mu = float(mu)
        self.tau = read_only(np.array(tau, dtype=float))

    def __repr__(self):
        return "DualCertificate(mu=%r, tau=%r)" % (self.mu, self.tau.tolist())


def dual_certificate(state, eps):
    """
    An optimal dual solution for b_eps(r || g).

    With the levels in ratio order and 1 - eps on segment m + 1,
    mu = g_{pi(m+1)} / r_{pi(m+1)} and tau_{pi(k)} = mu r_{pi(k)} - g_{pi(k)}
    for the m levels before it. Its value equals b_eps.

    Raises:
        DomainError for eps outside [0, 1]
    """
    _check_eps(eps)
    pairs = SortedPairs(state)
    tau = np.zeros(len(pairs.probs))
    segment = pairs.segment(eps)
    if segment is None:
        return DualCertificate(0.0, tau)
    m, _ = segment
    mu = pairs.gibbs[m] / pairs.probs[m]
    head = pairs.order[:m]
    tau[head] = np.maximum(mu * pairs.probs[:m] - pairs.gibbs[:m], 0.0)
    return DualCertificate(mu, tau)


def dual_value(certificate, eps):
    """
    (1 - eps) mu - sum tau. Both terms are of order mu, so the value is
    good to about mu times the machine epsilon.
    """
    return math.fsum([(1.0 - eps) * certificate.mu]
                     + [-t for t in certificate.tau.tolist()])


def is_dual_feasible(certificate, state, tol=1e-10):
    """
    mu >= 0, tau >= 0 and mu r_i - tau_i <= g_i for every level, each
    constraint to within `tol` relative to max(1, mu r_i).
    """
    if certificate.mu < 0 or np.any(certificate.tau < 0):
        return False
    load = certificate.mu * np.asarray(state.probs)
    slack = load - certificate.tau - np.asarray(state.gibbs)
    return bool(np.all(slack <= tol * np.maximum(1.0, load)))


def bruteforce_type2_error(state, eps):
    """
    b_eps by enumerating the vertices of {q.r >= 1 - eps, 0 <= q <= 1}:
    0/1 vectors, and 0/1 vectors with one fractional entry that makes the
    constraint tight.

    Raises:
        ResourceLimit beyond 14 levels
    """
    _check_eps(eps)
    probs = np.asarray(state.probs, dtype=float)
    gibbs = np.asarray(state.gibbs, dtype=float)
    d = len(probs)
    if d > MAX_BRUTEFORCE_LEVELS:
        raise ResourceLimit("brute force over %d levels exceeds %d"
                            % (d, MAX_BRUTEFORCE_LEVELS))
    masks = ((np.arange(2 ** d)[:, np.newaxis] >> np.arange(d)) & 1).astype(
        float)
    # summing the rejected mass keeps tiny r_i visible next to 1 - eps
    rejected = (1.0 - masks).dot(probs)
    cost = masks.dot(gibbs)

    candidates = [cost[rejected <= eps + 1e-12]]
    with np.errstate(divide="ignore", invalid="ignore"):
        fraction = (rejected - eps)[:, np.newaxis] / probs[np.newaxis, :]
    valid = ((masks == 0) & (probs[np.newaxis, :] > 0)
             & (fraction >= 0) & (fraction <= 1))
    candidates.append((cost[:, np.newaxis] + fraction * gibbs)[valid])
    return float(min(c.min() for c in candidates if len(c)))
