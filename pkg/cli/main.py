import argparse
import csv
import io
import json
import logging
import os
from dataclasses import dataclass

from config.settings import (LOG_FILE, LOG_FORMAT, MIN_THETA_WINDOW, RESULTS_DIR, RESULTS_DIR_ENV,
                             SAMPLE_ABOVE, TABLE_TERMS, THETA_WINDOW, WORKERS)
from congruence.tate import (detect_congruences, tate_cycle, theta_vanishing_prime_candidates)
from forms.filtration import ModularFormModEll, compute_A_tilde, compute_B_tilde, filtration, sturm
from scanner.bounds import derived_remark_bound, proof_case, remark_bound, theorem_bound
from scanner.scanner import verify_theorem
from scanner.table import ROW_NAMES, table_rows, verify_table
from series.eisenstein import QuotientSpec, lift_weight, quotient_series, replacement_lift
from utils.command_handler import Command, OutputFormat, Report
from utils.errors import CongruenceError, PrecisionError
from utils.result_store import ResultStore

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CliConfig:
    """
    Options shared by every subcommand.

    Attributes:
        precision (int): Coefficient count override, None to use each command's minimum.
        results_dir (str): Directory of the result cache.
        workers (int): Threads used by prime sweeps.
        output (OutputFormat): Rendering of the report.
        debug (bool): Debug logging.
        save_logs (bool): Also log to LOG_FILE.
    """
    precision: int = None
    results_dir: str = RESULTS_DIR
    workers: int = WORKERS
    output: OutputFormat = OutputFormat.TABLE
    debug: bool = False
    save_logs: bool = False

    @classmethod
    def from_args(cls, args):
        results_dir = args.results_dir or os.environ.get(RESULTS_DIR_ENV) or RESULTS_DIR
        return cls(args.precision, results_dir, args.workers, OutputFormat(args.output),
                   bool(args.debug), bool(args.save_logs))

    def precision_for(self, minimum):
        """The override if it meets ``minimum``, else ``minimum``."""
        if self.precision is None:
            return minimum
        if self.precision < minimum:
            raise PrecisionError(f"--precision {self.precision} is below the required {minimum}")
        return self.precision


def _add_spec_arguments(parser):
    parser.add_argument("--r", type=int, default=0, help="Exponent of E2 (default: 0)")
    parser.add_argument("--s", type=int, default=0, help="Exponent of E4 (default: 0)")
    parser.add_argument("--t", type=int, default=0, help="Exponent of E6 (default: 0)")


def parse_args(argv=None):
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", choices=[f.value for f in OutputFormat], default="table",
                        help="Output format (default: table)")
    common.add_argument("--results-dir", default=None,
                        help=f"Result cache directory (default: ${RESULTS_DIR_ENV} or '{RESULTS_DIR}')")
    common.add_argument("--workers", type=int, default=WORKERS,
                        help=f"Threads for prime sweeps (default: {WORKERS})")
    common.add_argument("--precision", type=int, default=None,
                        help="Number of q-expansion terms; must meet each command's minimum")
    common.add_argument("--debug", type=int, choices=[0, 1], default=0,
                        help="Enable debug mode (default: 0 for off)")
    common.add_argument("--save_logs", type=int, choices=[0, 1], default=0,
                        help="Save logs to file (default: 0 for off)")

    parser = argparse.ArgumentParser(
        description="Simple congruences of quotients of Eisenstein series")
    commands = parser.add_subparsers(dest="command", required=True)

    expand = commands.add_parser(Command.EXPAND.value, parents=[common],
                                 help="q-expansion of E2^r E4^s E6^t")
    _add_spec_arguments(expand)
    expand.add_argument("--modulus", type=int, required=True)
    expand.add_argument("--terms", type=int, default=20)

    theta = commands.add_parser(Command.THETA.value, parents=[common],
                                help="Iterated Theta of a q-expansion")
    _add_spec_arguments(theta)
    theta.add_argument("--modulus", type=int, required=True)
    theta.add_argument("--terms", type=int, default=20)
    theta.add_argument("--iterations", type=int, default=1)

    for command, text in ((Command.FILTRATION, "Filtration of the lifted form"),
                          (Command.TATE_CYCLE, "Tate cycle of the lifted form")):
        sub = commands.add_parser(command.value, parents=[common], help=text)
        _add_spec_arguments(sub)
        sub.add_argument("--ell", type=int, required=True)

    find = commands.add_parser(Command.FIND_CONGRUENCES.value, parents=[common],
                               help="Simple congruences at one prime")
    _add_spec_arguments(find)
    find.add_argument("--ell", type=int, required=True)
    mode = find.add_mutually_exclusive_group()
    mode.add_argument("--rigorous", dest="rigorous", action="store_true", default=True)
    mode.add_argument("--heuristic", dest="rigorous", action="store_false")
    find.add_argument("--extended-lift", action="store_true",
                      help="Lift with a higher power when ell + s or ell + t is negative")

    theorem = commands.add_parser(Command.VERIFY_THEOREM.value, parents=[common],
                                  help="Sweep every prime up to the bound")
    _add_spec_arguments(theorem)
    theorem.add_argument("--remark", action="store_true", help="Sweep to the sharper bound")
    theorem.add_argument("--sample-above", type=int, default=SAMPLE_ABOVE)
    theorem.add_argument("--extended-lift", action="store_true")
    theorem.add_argument("--no-cache", action="store_true", help="Neither read nor write results")

    table = commands.add_parser(Command.VERIFY_TABLE.value, parents=[common],
                                help="Check the known prime-power congruences on a window")
    table.add_argument("--row", choices=list(ROW_NAMES) + ["all"], default="all")
    table.add_argument("--terms", type=int, default=TABLE_TERMS)

    for command, text in ((Command.A_TILDE, "E_{ell-1} as a polynomial in E4, E6"),
                          (Command.B_TILDE, "E_{ell+1} as a polynomial in E4, E6")):
        sub = commands.add_parser(command.value, parents=[common], help=text)
        sub.add_argument("--ell", type=int, required=True)

    bounds = commands.add_parser(Command.BOUNDS.value, parents=[common],
                                 help="Prime bounds and the offset case")
    _add_spec_arguments(bounds)
    bounds.add_argument("--ell", type=int, default=None)

    primes = commands.add_parser(Command.THETA_PRIMES.value, parents=[common],
                                 help="Primes where Theta f vanishes")
    _add_spec_arguments(primes)
    primes.add_argument("--terms", type=int, default=THETA_WINDOW)

    return parser.parse_args(argv)


def _spec(args):
    return QuotientSpec(args.r, args.s, args.t)


def _series_report(spec, series, extra):
    payload = dict(r=spec.r, s=spec.s, t=spec.t, **extra,
                   coefficients=[int(c) for c in series.coefficients()])
    rows = [[n, c] for n, c in enumerate(payload["coefficients"])]
    return Report(payload, ["n", "a(n)"], rows, text=str(series))


def _lifted_form(spec, ell, config, extra_weight):
    weight = lift_weight(spec, ell)
    precision = config.precision_for(sturm(weight + extra_weight) + 1)
    return ModularFormModEll.from_lift(replacement_lift(spec, ell, precision))


def _polynomial_report(polynomial):
    terms = [[a, b, c] for a, b, c in polynomial.coefficients]
    payload = {"ell": polynomial.prime, "weight": polynomial.weight, "terms": terms}
    return Report(payload, ["a", "b", "coefficient"], terms)


def _scan_rows(reports, above=False):
    return [[report.prime, report.proof_case, report.method.value,
             " ".join(str(c) for c in report.residues), "yes" if above else ""]
            for report in reports]


def handle_command(command, args, config):
    """Run one subcommand and return its Report."""
    if command == Command.EXPAND:
        spec = _spec(args)
        series = quotient_series(spec, args.modulus, config.precision_for(args.terms))
        return _series_report(spec, series, {"modulus": args.modulus})

    elif command == Command.THETA:
        spec = _spec(args)
        series = quotient_series(spec, args.modulus, config.precision_for(args.terms))
        return _series_report(spec, series.theta(args.iterations),
                              {"modulus": args.modulus, "iterations": args.iterations})

    elif command == Command.FILTRATION:
        spec = _spec(args)
        form = _lifted_form(spec, args.ell, config, 0)
        omega = filtration(form)
        payload = {"r": spec.r, "s": spec.s, "t": spec.t, "ell": args.ell,
                   "weight": form.weight, "filtration": omega}
        return Report(payload, ["weight", "filtration"], [[form.weight, omega]])

    elif command == Command.TATE_CYCLE:
        spec = _spec(args)
        ell = args.ell
        form = _lifted_form(spec, ell, config, (ell - 1) * (ell + 1))
        profile = tate_cycle(form)
        a, b = profile.key_bound_split()
        payload = {"r": spec.r, "s": spec.s, "t": spec.t, "ell": ell,
                   "weight": profile.base_weight, "filtration": profile.base_filtration,
                   "filtrations": list(profile.filtrations),
                   "high_points": list(profile.high_points),
                   "low_points": list(profile.low_points),
                   "falls": [list(fall) for fall in profile.falls],
                   "key_bound_split": [a, b], "key_bounds_hold": profile.key_bounds_hold()}
        return Report(payload, ["i", "filtration", "point", "fall"],
                      [list(row) for row in profile.rows()])

    elif command == Command.FIND_CONGRUENCES:
        report = detect_congruences(_spec(args), args.ell, rigorous=args.rigorous,
                                    precision=config.precision, extended_lift=args.extended_lift)
        payload = report.to_dict()
        return Report(payload, ["ell", "method", "residues"],
                      [[report.prime, report.method.value, " ".join(map(str, report.residues))]])

    elif command == Command.VERIFY_THEOREM:
        store = None if args.no_cache else ResultStore(config.results_dir)
        result = verify_theorem(_spec(args), use_remark=args.remark,
                                sample_above=args.sample_above, workers=config.workers,
                                store=store, extended_lift=args.extended_lift)
        rows = _scan_rows(result.reports) + _scan_rows(result.sampled_above, above=True)
        return Report(result.to_dict(), ["ell", "case", "method", "residues", "above bound"], rows)

    elif command == Command.VERIFY_TABLE:
        checks = verify_table(table_rows(args.row), terms=args.terms)
        payload = {"terms": args.terms, "rows": [check.to_dict() for check in checks]}
        rows = [[check.row.name, f"{check.row.residue} mod {check.row.step}",
                 check.row.modulus, check.checked, "pass"] for check in checks]
        return Report(payload, ["row", "n", "modulus", "checked", "result"], rows)

    elif command == Command.A_TILDE:
        return _polynomial_report(compute_A_tilde(args.ell))

    elif command == Command.B_TILDE:
        return _polynomial_report(compute_B_tilde(args.ell))

    elif command == Command.BOUNDS:
        spec = _spec(args)
        payload = {"r": spec.r, "s": spec.s, "t": spec.t, "offset": spec.weight_offset,
                   "theorem_bound": theorem_bound(spec), "remark_bound": remark_bound(spec),
                   "derived_remark_bound": derived_remark_bound(spec)}
        if args.ell is not None:
            payload["ell"] = args.ell
            payload["proof_case"] = proof_case(spec, args.ell).value
        return Report(payload, list(payload), [list(payload.values())])

    elif command == Command.THETA_PRIMES:
        terms = config.precision_for(args.terms)
        if terms < MIN_THETA_WINDOW:
            raise PrecisionError(f"theta-primes needs at least {MIN_THETA_WINDOW} terms, got {terms}")
        found = theta_vanishing_prime_candidates(_spec(args), terms)
        payload = {"r": found.spec.r, "s": found.spec.s, "t": found.spec.t,
                   "candidates": list(found.candidates), "confirmed": list(found.confirmed),
                   "every_prime": found.every_prime, "terms": found.precision}
        rows = [[p, "yes" if p in found.confirmed else "no"] for p in found.candidates]
        return Report(payload, ["ell", "theta vanishes"], rows)

    raise ValueError(f"unknown command {command}")


def render(report, output):
    if output == OutputFormat.JSON:
        return json.dumps(report.to_dict(), indent=2, sort_keys=True)
    if output == OutputFormat.CSV:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(report.header)
        writer.writerows(report.rows)
        return buffer.getvalue().rstrip("\n")
    if report.text is not None:
        return report.text
    cells = [[str(c) for c in row] for row in [report.header] + report.rows]
    widths = [max(len(row[i]) for row in cells) for i in range(len(report.header))]
    return "\n".join("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip() for row in cells)


def setup_logging(debug=False, save_logs=False):
    if debug:
        logging.basicConfig(level=logging.DEBUG)
    else:
        logging.basicConfig(level=logging.INFO)

    if save_logs:
        handler = logging.FileHandler(LOG_FILE)
        formatter = logging.Formatter(LOG_FORMAT)
        handler.setFormatter(formatter)
        logging.getLogger().addHandler(handler)


def main(argv=None):
    """
    Entry point for the command-line tool. Returns the exit code: 0 on success,
    1 on a counterexample, 2 on a usage error, 3 on a precision or storage error.
    """
    try:
        args = parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 2

    config = CliConfig.from_args(args)
    setup_logging(config.debug, config.save_logs)
    try:
        report = handle_command(Command(args.command), args, config)
    except CongruenceError as e:
        logger.error(f"{type(e).__name__}: {e}")
        return e.exit_code
    except ValueError as e:
        logger.error(f"Invalid arguments: {e}")
        return 2
    print(render(report, config.output))
    return 0


if __name__ == '__main__':
    raise SystemExit(main())
