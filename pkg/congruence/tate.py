import logging
from dataclasses import dataclass
from enum import Enum
from math import gcd

from sympy import legendre_symbol, primefactors

from config.settings import (HEURISTIC_WINDOW_FACTOR, SMALL_THETA_PRIMES, TATE_CYCLE_MAX_PRIME,
                             THETA_WINDOW, TRIVIAL_PRIMES)
from forms.filtration import ModularFormModEll, filtration, sturm
from series.constants import THETA_ELIMINATION_CONSTANT
from series.eisenstein import (QuotientSpec, can_lift, check_prime, lift_weight,
                               minimal_lift_power, quotient_series, replacement_lift)
from utils.command_handler import DeSerializer, Serializer
from utils.errors import InvariantViolation, PrecisionError, ZeroFormError

logger = logging.getLogger(__name__)


class Method(Enum):
    """How a set of flagged residues was obtained."""
    HEURISTIC = "heuristic"
    RIGOROUS = "rigorous"
    THETA_VANISHING = "theta-vanishing"
    TRIVIAL_PRIME = "trivial-prime"
    BELOW_BOUND_SIZE = "below-bound-size"


@dataclass(frozen=True)
class TateCycleProfile:
    """
    Filtrations along the Tate cycle Theta f, ..., Theta^(ell-1) f.

    Attributes:
        prime (int): ell.
        base_weight (int): Weight k of f.
        base_filtration (int): w(f).
        filtrations (tuple): w(Theta^i f) for i = 1, ..., ell - 1.
        high_points (tuple): Indices i with w(Theta^i f) = 0 mod ell.
        low_points (tuple): Successors of the high points, ell - 1 wrapping to 1.
        falls (tuple): (low point, s) pairs, the drop being s(ell - 1).
    """
    prime: int
    base_weight: int
    base_filtration: int
    filtrations: tuple
    high_points: tuple
    low_points: tuple
    falls: tuple

    def filtration_at(self, i):
        return self.filtrations[i - 1]

    def key_bound_split(self):
        """(A, B) with w(f) = A*ell + B."""
        return divmod(self.base_filtration, self.prime)

    def key_bounds_hold(self):
        ell = self.prime
        a, b = self.key_bound_split()
        return (ell + 1) // 2 <= b <= a + (ell + 3) // 2

    def rows(self):
        """One (i, w, mark, fall) tuple per index, mark being 'high', 'low' or ''."""
        falls = dict(self.falls)
        rows = []
        for i, weight in enumerate(self.filtrations, start=1):
            marks = [name for name, points in (("high", self.high_points), ("low", self.low_points))
                     if i in points]
            rows.append((i, weight, "/".join(marks), falls.get(i, "")))
        return rows


def tate_cycle(form, max_prime=TATE_CYCLE_MAX_PRIME):
    """
    Compute the Tate cycle of a form mod ell and check its classical shape.

    Each Theta^(i+1) f is searched downwards from w(Theta^i f) + ell + 1, the
    weight in which it is known to live.

    Raises:
        ValueError: if ell exceeds max_prime.
        ZeroFormError: if Theta f = 0 mod ell.
        PrecisionError: if fewer than sturm(k + (ell-1)(ell+1)) + 1 terms are known.
        InvariantViolation: if the cycle breaks the rise/fall or low-point rules.
    """
    ell = form.prime
    if ell > max_prime:
        raise ValueError(f"Tate cycles are profiled for ell <= {max_prime}, got {ell}")
    form.require_precision(form.weight + (ell - 1) * (ell + 1))
    current = form.theta()
    if current.is_zero():
        raise ZeroFormError(f"Theta f = 0 mod {ell}: the Tate cycle is trivial")

    base = filtration(form)
    weights = []
    for i in range(1, ell):
        current = current.retag(filtration(current))
        weights.append(current.weight)
        logger.debug("w(Theta^%d f) = %d mod %d", i, current.weight, ell)
        if i < ell - 1:
            current = current.theta()
    if not current.theta().series.agrees_with(form.theta().series):
        raise InvariantViolation(f"Theta^{ell} f and Theta f differ mod {ell}")

    high, low, falls = [], [], []
    for index, weight in enumerate(weights, start=1):
        successor = index % (ell - 1) + 1
        rise = weights[successor - 1] - weight
        if weight % ell:
            if rise != ell + 1:
                raise InvariantViolation(
                    f"w rose by {rise} instead of {ell + 1} after index {index} mod {ell}")
            continue
        fall, remainder = divmod(ell + 1 - rise, ell - 1)
        if remainder or fall < 1:
            raise InvariantViolation(f"high point {index} mod {ell} is followed by a rise of {rise}")
        high.append(index)
        low.append(successor)
        falls.append((successor, fall))

    if len(low) not in (1, 2):
        raise InvariantViolation(f"Tate cycle mod {ell} has {len(low)} low points")
    if len(low) == 1 and weights[low[0] - 1] % ell != 2:
        raise InvariantViolation(f"single low point mod {ell} has filtration {weights[low[0] - 1]}")
    return TateCycleProfile(ell, form.weight, base, tuple(weights), tuple(high),
                            tuple(sorted(low)), tuple(sorted(falls)))


def legendre(c, ell):
    check_prime(ell, minimum=3)
    return int(legendre_symbol(c % ell, ell))


def _congruence_sides(form):
    """Theta f and Theta^((ell+1)/2) f, after the precision and Theta f != 0 checks."""
    ell = form.prime
    form.require_precision(form.weight + (ell + 1) ** 2 // 2)
    theta_f = form.theta()
    if theta_f.is_zero():
        raise ZeroFormError(f"Theta f = 0 mod {ell}; every c != 0 is a simple congruence")
    return theta_f, form.theta((ell + 1) // 2)


def rigorous_simple_congruence(form, c):
    """
    Decide whether a(ell*n + c) = 0 mod ell for all n, for c != 0 mod ell.

    Holds exactly when Theta^((ell+1)/2) f = -(c/ell) Theta f mod ell; the two
    weights differ by a multiple of ell - 1, so agreement is certified through
    the Sturm bound of the larger one.
    """
    ell = form.prime
    if c % ell == 0:
        raise ValueError("c = 0 mod ell has no Theta criterion; use the constant term")
    theta_f, half = _congruence_sides(form)
    return half.congruent_to(theta_f.scale(-legendre(c, ell)))


def certified_residues(form):
    """All c != 0 mod ell passing the Theta criterion, sorted."""
    ell = form.prime
    theta_f, half = _congruence_sides(form)
    residues = []
    for sign in (1, -1):
        if half.congruent_to(theta_f.scale(-sign)):
            residues.extend(c for c in range(1, ell) if legendre(c, ell) == sign)
    return tuple(sorted(residues))


def heuristic_simple_congruences(series, ell):
    """
    Residues c with every known a(ell*n + c) = 0 mod ell.

    Only the finite window is inspected, so the answer is not a proof.
    """
    if series.modulus != ell:
        raise ValueError(f"series is mod {series.modulus}, expected mod {ell}")
    if not series.is_zero() and series.valuation < 0:
        raise ValueError("heuristic detection needs a series without negative powers of q")
    return {c for c in range(ell) if series.extract_progression(c, ell).is_zero()}


def theta_vanishes(spec, ell, precision=THETA_WINDOW):
    """Whether a(n) = 0 mod ell for every n < precision prime to ell."""
    check_prime(ell, minimum=2)
    return quotient_series(spec, ell, precision).theta().is_zero()


def closed_form_coefficients(spec):
    """The q and q^2 coefficients of E2^r E4^s E6^t as exact integers."""
    r, s, t = spec.exponents
    first = -24 * r + 240 * s - 504 * t
    second = (288 * r * r - 5760 * r * s + 12096 * r * t - 360 * r + 28800 * s * s
              - 120960 * s * t - 26640 * s + 127008 * t * t - 143640 * t)
    return first, second


def vanishing_gcd(spec):
    """
    gcd of the q coefficient, the q^2 coefficient and r + 4s + 6t. A prime
    ell >= 17 can have Theta f = 0 mod ell only if it divides this number;
    0 means no prime is excluded.
    """
    first, second = closed_form_coefficients(spec)
    return gcd(gcd(first, second), spec.weight_offset)


def theta_vanishing_possible(spec, ell):
    """
    False when Theta f = 0 mod ell is ruled out by the q and q^2 coefficients.
    Away from the primes dividing THETA_ELIMINATION_CONSTANT this needs
    r = s = t = 0 mod ell.
    """
    if ell in SMALL_THETA_PRIMES or THETA_ELIMINATION_CONSTANT % ell == 0:
        return True
    return all(e % ell == 0 for e in spec.exponents)


@dataclass(frozen=True)
class ThetaVanishingPrimes:
    """
    Attributes:
        spec (QuotientSpec): The quotient.
        candidates (tuple): Primes for which Theta f = 0 was not excluded.
        confirmed (tuple): Candidates on which Theta f vanished through ``precision``.
        every_prime (bool): True when no prime is excluded, i.e. f = 1.
        precision (int): Window used for confirmation.
    """
    spec: QuotientSpec
    candidates: tuple
    confirmed: tuple
    every_prime: bool
    precision: int


def theta_vanishing_prime_candidates(spec, precision=THETA_WINDOW):
    g = vanishing_gcd(spec)
    candidates = set(SMALL_THETA_PRIMES)
    if g:
        candidates.update(p for p in primefactors(g) if p >= 17)
    candidates = tuple(sorted(candidates))
    confirmed = tuple(p for p in candidates if theta_vanishes(spec, p, precision))
    logger.info("Theta-vanishing candidates for %s: %s, confirmed %s", spec, candidates, confirmed)
    return ThetaVanishingPrimes(spec, candidates, confirmed, g == 0, precision)


@dataclass(frozen=True)
class CongruenceReport(Serializer, DeSerializer):
    """
    Simple congruences of one quotient at one prime.

    Attributes:
        spec (QuotientSpec): The quotient E2^r E4^s E6^t.
        prime (int): ell.
        residues (tuple): Flagged c in [0, ell), sorted.
        method (Method): How the residues were decided.
        precision (int): Number of coefficients computed.
        weight (int): Weight of the lifted form, None when no form was built.
        proof_case (str): Which offset regime ell falls in, when known.
    """
    spec: QuotientSpec
    prime: int
    residues: tuple
    method: Method
    precision: int
    weight: int = None
    proof_case: str = None

    def __str__(self):
        return f"{self.spec} mod {self.prime}: {list(self.residues)} ({self.method.value})"

    def to_dict(self):
        return {
            "r": self.spec.r,
            "s": self.spec.s,
            "t": self.spec.t,
            "ell": self.prime,
            "method": self.method.value,
            "residues": [int(c) for c in self.residues],
            "weight": self.weight,
            "precision": self.precision,
        }

    @classmethod
    def from_dict(cls, data):
        return cls(
            spec=QuotientSpec(int(data["r"]), int(data["s"]), int(data["t"])),
            prime=int(data["ell"]),
            residues=tuple(sorted(int(c) for c in data["residues"])),
            method=Method(data["method"]),
            precision=int(data["precision"]),
            weight=None if data.get("weight") is None else int(data["weight"]),
        )


def rigorous_precision(spec, ell, power=1):
    """Terms needed for the Theta criterion on the lift: sturm(k + (ell+1)^2/2) + 2."""
    return sturm(lift_weight(spec, ell, power) + (ell + 1) ** 2 // 2) + 2


def detect_congruences(spec, ell, rigorous=True, precision=None, extended_lift=False):
    """
    Simple congruences of E2^r E4^s E6^t at ell.

    ell = 2, 3 are reported trivially. For ell >= 5 the rigorous path lifts the
    quotient to a modular form and applies the Theta criterion; primes with
    ell + s < 0 or ell + t < 0 are left to the size bound unless
    ``extended_lift`` raises the lifting power. c = 0 is never flagged since
    the constant term is 1.

    Raises:
        PrecisionError: if ``precision`` is below the required minimum (the
            Sturm-derived count, or 50 ell terms for the heuristic), or if
            Theta f vanished at a prime where that is impossible.
    """
    if ell in TRIVIAL_PRIMES:
        return CongruenceReport(spec, ell, tuple(range(1, ell)), Method.TRIVIAL_PRIME, 0)
    check_prime(ell)

    if not rigorous:
        window = HEURISTIC_WINDOW_FACTOR * ell
        if precision is not None:
            if precision < window:
                raise PrecisionError(f"heuristic window at ell={ell} needs at least {window} terms, "
                                     f"got {precision}")
            window = precision
        flagged = heuristic_simple_congruences(quotient_series(spec, ell, window), ell)
        weight = lift_weight(spec, ell) if can_lift(spec, ell) else None
        return CongruenceReport(spec, ell, tuple(sorted(flagged)), Method.HEURISTIC, window, weight)

    power = 1
    if not can_lift(spec, ell):
        if not extended_lift:
            logger.debug("%s at ell=%d is left to the size bound", spec, ell)
            return CongruenceReport(spec, ell, (), Method.BELOW_BOUND_SIZE, 0)
        power = minimal_lift_power(spec, ell)

    needed = rigorous_precision(spec, ell, power)
    if precision is not None and precision < needed:
        raise PrecisionError(f"{spec} at ell={ell} needs at least {needed} terms, got {precision}")
    precision = needed if precision is None else precision
    lift = replacement_lift(spec, ell, precision, power)
    form = ModularFormModEll.from_lift(lift)
    logger.debug("deciding %s at ell=%d: weight %d, %d terms", spec, ell, lift.weight, precision)

    if form.theta().is_zero():
        if not theta_vanishing_possible(spec, ell):
            raise PrecisionError(
                f"Theta f vanished for {spec} at ell={ell}, which the q and q^2 coefficients forbid")
        return CongruenceReport(spec, ell, tuple(range(1, ell)), Method.THETA_VANISHING,
                                precision, lift.weight)
    return CongruenceReport(spec, ell, certified_residues(form), Method.RIGOROUS,
                            precision, lift.weight)
