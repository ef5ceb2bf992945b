import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from datetime import datetime, timezone

from sympy import nextprime, primerange

from config.settings import SAMPLE_ABOVE, VERSION, WORKERS
from congruence.tate import Method, detect_congruences
from scanner.bounds import derived_remark_bound, proof_case, remark_bound, theorem_bound
from utils.command_handler import Serializer
from utils.errors import CounterexampleError

logger = logging.getLogger(__name__)

BOUND_THEOREM = "theorem"
BOUND_REMARK = "remark"


@dataclass(frozen=True)
class ScanResult(Serializer):
    """
    Outcome of sweeping one quotient over every prime 5 <= ell <= bound.

    Attributes:
        spec (QuotientSpec): The quotient.
        bound_kind (str): "theorem" or "remark", the bound that was swept to.
        theorem_bound (int): 2r + 8|s| + 12|t| + 21.
        remark_bound (int): The sharper bound.
        reports (tuple): One CongruenceReport per prime up to the bound.
        sampled_above (tuple): Reports for the primes sampled above the bound.
        excluded_case (bool): True for r = s = t = 0, where the bound does not apply.
        started_at (str): ISO timestamp.
        finished_at (str): ISO timestamp.
        version (str): Version of the code that produced it.
        computed (int): Reports computed in this run.
        cache_hits (int): Reports read from the result store.
        open_questions (tuple): Sampled primes above the printed remark bound
            that carry congruences but lie within the derived bound.
    """
    spec: object
    bound_kind: str
    theorem_bound: int
    remark_bound: int
    reports: tuple
    sampled_above: tuple
    excluded_case: bool
    started_at: str
    finished_at: str
    version: str = VERSION
    computed: int = 0
    cache_hits: int = 0
    open_questions: tuple = ()

    @property
    def bound(self):
        return self.remark_bound if self.bound_kind == BOUND_REMARK else self.theorem_bound

    def congruences(self):
        """Reports below the bound that flag at least one residue, trivial primes excluded."""
        return [report for report in self.reports
                if report.residues and report.method is not Method.TRIVIAL_PRIME]

    def to_dict(self):
        def entry(report):
            return dict(report.to_dict(), proof_case=report.proof_case)

        return {
            "r": self.spec.r,
            "s": self.spec.s,
            "t": self.spec.t,
            "bound_kind": self.bound_kind,
            "bound": self.bound,
            "theorem_bound": self.theorem_bound,
            "remark_bound": self.remark_bound,
            "excluded_case": self.excluded_case,
            "reports": [entry(report) for report in self.reports],
            "sampled_above": [entry(report) for report in self.sampled_above],
            "started_at": self.started_at,
            "finished_at": self.finished_at,
            "version": self.version,
            "computed": self.computed,
            "cache_hits": self.cache_hits,
            "open_questions": list(self.open_questions),
        }


def primes_above(bound, count):
    primes = []
    current = bound
    for _ in range(count):
        current = nextprime(current)
        primes.append(int(current))
    return primes


def verify_theorem(spec, use_remark=False, sample_above=SAMPLE_ABOVE, workers=WORKERS,
                   store=None, extended_lift=False):
    """
    Decide the simple congruences of a quotient at every prime 5 <= ell <= bound
    and check that a few primes above the bound have none.

    Cached reports are taken from ``store``; new ones are written back by the
    calling thread once the sweep is complete. Cached size refusals are
    recomputed when ``extended_lift`` is set.

    The printed remark bound is known to be too small for some quotients, so
    in a remark sweep a congruence above it but within the derived bound is
    logged and recorded in ``open_questions`` instead of raised.

    Raises:
        CounterexampleError: if a sampled prime above the bound carries a
            congruence for a non-trivial quotient beyond the bound (the
            derived remark bound in a remark sweep).
    """
    started = datetime.now(timezone.utc).isoformat()
    bounds = {BOUND_THEOREM: theorem_bound(spec), BOUND_REMARK: remark_bound(spec)}
    bound_kind = BOUND_REMARK if use_remark else BOUND_THEOREM
    bound = bounds[bound_kind]
    primes = [int(p) for p in primerange(5, bound + 1)]
    sampled = primes_above(bound, sample_above)
    logger.info(f"Scanning {spec}: {len(primes)} primes up to the {bound_kind} bound {bound}, "
                f"sampling {sampled}")

    def decide(ell):
        cached = store.get(spec, ell) if store is not None else None
        if cached is not None and extended_lift and cached.method is Method.BELOW_BOUND_SIZE:
            logger.debug(f"Recomputing cached size refusal for {spec} at ell={ell}")
            cached = None
        if cached is not None:
            return replace(cached, proof_case=proof_case(spec, ell).value), True
        report = detect_congruences(spec, ell, extended_lift=extended_lift)
        logger.debug(f"{report}")
        return replace(report, proof_case=proof_case(spec, ell).value), False

    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        outcomes = list(pool.map(decide, primes + sampled))

    fresh = [report for report, hit in outcomes if not hit]
    hits = len(outcomes) - len(fresh)
    reports = tuple(report for report, _ in outcomes[:len(primes)])
    above = tuple(report for report, _ in outcomes[len(primes):])
    ceiling = max(bound, derived_remark_bound(spec)) if use_remark else bound
    flagged = [] if spec.is_trivial else [report for report in above if report.residues]
    open_questions = tuple(report.prime for report in flagged if report.prime <= ceiling)
    for ell in open_questions:
        logger.warning(f"Congruence at ell={ell} above the printed {bound_kind} bound {bound}, "
                       f"within the derived bound {ceiling}: recorded as an open question")
    result = ScanResult(spec, bound_kind, bounds[BOUND_THEOREM], bounds[BOUND_REMARK],
                        reports, above, spec.is_trivial, started,
                        datetime.now(timezone.utc).isoformat(), VERSION, len(fresh), hits,
                        open_questions)
    if store is not None:
        store.put_result(result, fresh)

    for report in result.congruences():
        logger.info(f"Congruence: {report}")
    if not spec.is_trivial:
        violations = [report for report in flagged if report.prime > ceiling]
        if violations:
            first = violations[0]
            logger.error(f"Congruence above the {bound_kind} bound {ceiling}: {first}")
            raise CounterexampleError(f"{spec} has simple congruences at ell={first.prime} "
                                      f"above the {bound_kind} bound {ceiling}",
                                      index=first.prime, value=list(first.residues))
        if not open_questions:
            logger.info(f"No congruences at the sampled primes {sampled}: consistent with the bound")
    return result
