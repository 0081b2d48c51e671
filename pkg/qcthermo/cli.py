"""
Command-line front end.

    qcthermo [--config PATH] [-v] COMMAND STATE [STATE] [options]

Every command reads state files, calls the library, and writes one JSON
object to standard output. Exit status is 0 on success, 1 when the
computation itself is refused (a domain error, mismatched theories, a
resource limit), and 2 for usage, I/O and input-validation errors.
"""
from __future__ import absolute_import, print_function

import argparse
import logging
import sys

import numpy as np

from .asymptotics import (
    aep_envelope,
    inv_gaussian_cdf,
    second_order_gaps,
    sweep,
    sweep_rows,
)
from .config import load_settings, settings
from .divergences import (
    equilibrium_grand_potential,
    hinge_divergence,
    rel_entropy_variance,
    relative_entropy,
    renyi_divergence,
)
from .exceptions import (
    DomainError,
    InfeasibleStep,
    Invalid,
    MissingLevel,
    NotFittable,
    NumericalError,
    ResourceLimit,
    SolverFailure,
    TheoryMismatch,
)
from .lorenz import (
    build_lorenz,
    dh_entropy,
    equimajorizes,
    lorenz_rows,
    optimal_test,
    type2_error,
)
from .lp import dual_certificate, dual_value, find_witness, witness_to_json
from .statefile import (
    dump_state,
    load_state,
    lorenz_document,
    to_json,
    witness_document,
    work_report_document,
    write_csv,
)
from .states import (
    battery_spectrum,
    fit_gibbs,
    gibbs_state,
    trace_distance,
    uniform_eigensubspace_check,
)
from .version import __version__
from .work import (
    UNITS_NOTE,
    apply_channel,
    build_extraction_channel,
    conversion_rate,
    formation_feasible,
    formation_state,
    work_gain,
    work_report,
)

__all__ = ["main"]

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_USAGE = 2

DOMAIN_ERRORS = (
    DomainError,
    InfeasibleStep,
    MissingLevel,
    NotFittable,
    NumericalError,
    ResourceLimit,
    SolverFailure,
    TheoryMismatch,
)


def _energies(text):
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError("expected comma-separated energies")


def _eps(args):
    return settings().default_eps if args.eps is None else args.eps


def cmd_gibbs(args):
    state = load_state(args.state)
    free = gibbs_state(state.spectrum, state.theory)
    return {
        "state": dump_state(free),
        "log_z": free.log_z,
        "grand_potential": equilibrium_grand_potential(free),
    }


def cmd_lorenz(args):
    curve = build_lorenz(load_state(args.state))
    if args.csv:
        write_csv(args.csv, ["t", "L"], lorenz_rows(curve))
    return lorenz_document(curve)


def cmd_compare(args):
    first, second = load_state(args.state), load_state(args.other)
    return {
        "a_to_b": equimajorizes(first, second),
        "b_to_a": equimajorizes(second, first),
    }


def cmd_witness(args):
    first, second = load_state(args.state), load_state(args.other)
    witness = find_witness(first, second)
    log.info("witness %s", "found" if witness is not None else "not found")
    return witness_document(
        None if witness is None else witness_to_json(witness))


def cmd_b_eps(args):
    state, eps = load_state(args.state), _eps(args)
    return {
        "eps": eps,
        "b_eps": type2_error(state, eps),
        "dual_value": dual_value(dual_certificate(state, eps), eps),
        "test": optimal_test(state, eps).q,
    }


def cmd_dh(args):
    state, eps = load_state(args.state), _eps(args)
    variance, _ = rel_entropy_variance(state)
    result = {
        "eps": eps,
        "dh": dh_entropy(state, eps),
        "relative_entropy": relative_entropy(state),
        "variance": variance,
    }
    if args.alpha is not None:
        result["renyi"] = {"alpha": args.alpha,
                           "value": renyi_divergence(state, args.alpha)}
    if args.a is not None:
        result["hinge"] = {"a": args.a,
                           "value": hinge_divergence(state, args.a)}
    return result


def cmd_work_gain(args):
    state, eps = load_state(args.state), _eps(args)
    return {"eps": eps, "w_gain": work_gain(state, eps), "units": UNITS_NOTE}


def cmd_work_cost(args):
    state, eps = load_state(args.state), _eps(args)
    result = work_report_document(work_report(state, eps))
    smoothed, work = formation_state(state, eps)
    result["formation"] = {
        "W": work,
        "trace_distance": trace_distance(state.probs, smoothed.probs),
        "probs": smoothed.probs,
    }
    if args.W is not None:
        result["formation_feasible"] = formation_feasible(state, args.W, 0.0)
    return result


def _battery_energies(requested, energies):
    """
    `requested` plus any of `energies` it lacks within battery_tol.

    """
    tol = settings().battery_tol
    levels = list(requested)
    added = []
    for energy in energies:
        if not any(abs(energy - level) <= tol for level in levels):
            levels.append(energy)
            added.append(energy)
    for energy in added:
        log.warning("battery has no level at %r; adding one", energy)
    return sorted(levels), added


def cmd_channel(args):
    state, eps = load_state(args.state), _eps(args)
    work = work_gain(state, eps)
    requested = args.battery if args.battery is not None else [0.0]
    energies, added = _battery_energies(requested, [args.E, args.E + work])
    spectrum = battery_spectrum(energies)
    channel, work = build_extraction_channel(state, eps, spectrum, args.E)

    output = apply_channel(channel, channel.source.probs)
    residual = np.max(np.abs(apply_channel(channel, channel.source.gibbs)
                             - gibbs_state(spectrum, state.theory).gibbs))
    matrix = channel.matrix
    return {
        "eps": eps,
        "W": work,
        "units": UNITS_NOTE,
        "battery_energies": energies,
        "synthesized_levels": added,
        "source_level": channel.source_index,
        "target_level": channel.target_index,
        "success_weight": output[channel.target_index],
        "gibbs_residual": residual,
        "channel": {"rows": matrix.shape[0], "cols": matrix.shape[1],
                    "data": matrix},
    }


def cmd_rate(args):
    first, second = load_state(args.state), load_state(args.other)
    return {"rate": conversion_rate(first, second)}


def cmd_asymptotics(args):
    state, eps = load_state(args.state), _eps(args)
    if args.n is not None:
        ns = [args.n]
    else:
        ns = list(range(1, args.n_max + 1))
    if not ns or min(ns) < 1:
        raise DomainError("copy counts must be positive, got n=%r, "
                          "n-max=%r" % (args.n, args.n_max))
    largest = ns[-1]
    expansions = sweep(state, eps, ns, workers=args.workers)
    header = ["n", "exact", "leading", "correction", "residual"]
    rows = sweep_rows(expansions)
    if args.csv:
        write_csv(args.csv, header, rows)
    try:
        gaps = second_order_gaps(state, eps, largest)._asdict()
    except ResourceLimit as e:
        log.info("second-order gaps skipped: %s", e)
        gaps = None
    _, spread = rel_entropy_variance(state)
    return {
        "eps": eps,
        "relative_entropy": relative_entropy(state),
        "spread": spread,
        "quantile": inv_gaussian_cdf(eps),
        "envelope": aep_envelope(state, eps, largest),
        "gaps": gaps,
        "rows": [dict(zip(header, (e.n, e.exact, e.leading, e.correction,
                                   e.residual)))
                 for e in expansions],
    }


def cmd_fit_gibbs(args):
    state = load_state(args.state)
    fit = fit_gibbs(state, args.tol)
    if fit is None:
        return {"fitted": False}
    return {"fitted": True, "beta": fit.beta, "mu": fit.mu,
            "residual": fit.residual}


def cmd_check_free(args):
    state = load_state(args.state)
    distance = trace_distance(state.probs, state.gibbs)
    return {
        "free": distance <= args.tol,
        "trace_distance": distance,
        "uniform_sectors": uniform_eigensubspace_check(state, args.tol),
    }


def _add(subparsers, name, handler, help_text, states=1, eps=False):
    parser = subparsers.add_parser(name, help=help_text)
    parser.add_argument("state", help="state file (JSON)")
    if states == 2:
        parser.add_argument("other", help="second state file (JSON)")
    if eps:
        parser.add_argument("--eps", type=float, default=None,
                            help="smoothing / failure probability "
                                 "(default 0.05)")
    parser.set_defaults(handler=handler)
    return parser


def build_parser():
    parser = argparse.ArgumentParser(
        prog="qcthermo",
        description="Grand-potential resource theory for quasiclassical "
                    "states.")
    parser.add_argument("--version", action="version",
                        version="%(prog)s " + __version__)
    parser.add_argument("--config", metavar="PATH",
                        help="JSON object of numerical settings")
    parser.add_argument("-v", "--verbose", action="count", default=0,
                        help="-v for progress, -vv for solver detail")
    subparsers = parser.add_subparsers(dest="command", metavar="COMMAND")
    subparsers.required = True

    _add(subparsers, "gibbs", cmd_gibbs, "the Gibbs state of a spectrum")
    lorenz = _add(subparsers, "lorenz", cmd_lorenz, "rescaled Lorenz curve")
    lorenz.add_argument("--csv", metavar="PATH", help="write t,L rows")
    _add(subparsers, "compare", cmd_compare,
         "equimajorization in both directions", states=2)
    _add(subparsers, "witness", cmd_witness,
         "a stochastic matrix certifying A -> B", states=2)
    _add(subparsers, "b-eps", cmd_b_eps, "optimal Type II error", eps=True)
    dh = _add(subparsers, "dh", cmd_dh, "hypothesis-testing entropy and "
              "divergences", eps=True)
    dh.add_argument("--alpha", type=float, help="also report D_alpha")
    dh.add_argument("--a", type=float, help="also report the hinge at a")
    _add(subparsers, "work-gain", cmd_work_gain, "eps-work value", eps=True)
    cost = _add(subparsers, "work-cost", cmd_work_cost,
                "eps-work cost bounds", eps=True)
    cost.add_argument("--W", type=float,
                      help="also test exact formation from battery work W")
    channel = _add(subparsers, "channel", cmd_channel,
                   "build the work-extraction channel", eps=True)
    channel.add_argument("--E", type=float, default=0.0,
                         help="initial battery energy (default 0)")
    channel.add_argument("--battery", type=_energies,
                         help="comma-separated battery energies")
    _add(subparsers, "rate", cmd_rate, "asymptotic conversion rate A -> B",
         states=2)
    asymptotics = _add(subparsers, "asymptotics", cmd_asymptotics,
                       "n-copy sweep of D_H^eps", eps=True)
    asymptotics.add_argument("--n-max", type=int, default=50,
                             help="largest number of copies (default 50)")
    asymptotics.add_argument("--n", type=int,
                             help="a single number of copies instead")
    asymptotics.add_argument("--workers", type=int, default=1,
                             help="threads for the sweep (default 1)")
    asymptotics.add_argument("--csv", metavar="PATH",
                             help="write n,exact,leading,correction,residual")
    fit = _add(subparsers, "fit-gibbs", cmd_fit_gibbs,
               "fit (beta, mu) to a state")
    fit.add_argument("--tol", type=float, default=1e-9)
    free = _add(subparsers, "check-free", cmd_check_free,
                "is the state the theory's Gibbs state?")
    free.add_argument("--tol", type=float, default=1e-9)
    return parser


def _configure_logging(verbosity):
    level = {0: logging.WARNING, 1: logging.INFO}.get(verbosity,
                                                       logging.DEBUG)
    logging.basicConfig(level=level, stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")


def main(argv=None, stdout=None):
    """
    Run one command; returns the exit status.

    """
    stdout = sys.stdout if stdout is None else stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code

    _configure_logging(args.verbose)
    try:
        if args.config:
            load_settings(args.config)
        result = args.handler(args)
        text = to_json(result)
    except DOMAIN_ERRORS as e:
        print("qcthermo: error: %s" % (e,), file=sys.stderr)
        return EXIT_DOMAIN
    except (Invalid, EnvironmentError, ValueError) as e:
        print("qcthermo: error: %s" % (e,), file=sys.stderr)
        return EXIT_USAGE

    print(text, file=stdout)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
