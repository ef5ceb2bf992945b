import logging
import threading
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from forms.linalg import solve_mod_p
from series.constants import WEIGHT_Q, WEIGHT_R
from series.eisenstein import check_prime, eisenstein_reduced, eisenstein_series
from series.ring import TruncatedSeries
from utils.errors import InvariantViolation, PrecisionError, ZeroFormError

logger = logging.getLogger(__name__)


def sturm(weight):
    """Level-one Sturm bound: forms of this weight agreeing on a(0..sturm) agree."""
    if weight < 0:
        raise ValueError(f"weight must be non-negative, got {weight}")
    return weight // 12


def monomial_exponents(weight):
    """All (a, b) with a, b >= 0 and 4a + 6b = weight, by decreasing a."""
    if weight < 0 or weight % 2:
        raise ValueError(f"weight must be even and non-negative, got {weight}")
    return [(a, (weight - WEIGHT_Q * a) // WEIGHT_R)
            for a in range(weight // WEIGHT_Q, -1, -1)
            if (weight - WEIGHT_Q * a) % WEIGHT_R == 0]


class PowerCache:
    """
    Powers E4^a and E6^b mod ell, grown on demand.

    One entry per (k, ell) holds the powers at the longest precision asked
    for so far; shorter requests are served by truncation. Lookups read an
    immutable (precision, powers) pair; extensions are serialized by a lock.
    """

    def __init__(self):
        self._powers = {}
        self._lock = threading.Lock()

    def power(self, k, exponent, ell, precision):
        stored, powers = self._powers.get((k, ell), (0, ()))
        if stored < precision or exponent >= len(powers):
            with self._lock:
                stored, powers = self._extend(k, exponent, ell, precision)
        return powers[exponent].truncate(precision)

    def _extend(self, k, exponent, ell, precision):
        stored, powers = self._powers.get((k, ell), (0, ()))
        if stored < precision:
            logger.debug("E%d powers mod %d regrown from %d to %d terms", k, ell, stored, precision)
            stored, powers = precision, ()
        powers = list(powers) or [TruncatedSeries.one(ell, stored)]
        base = eisenstein_series(k, ell, stored)
        while len(powers) <= exponent:
            powers.append(powers[-1] * base)
        self._powers[(k, ell)] = (stored, tuple(powers))
        return stored, powers


power_cache = PowerCache()


def monomial(a, b, ell, precision):
    return (power_cache.power(WEIGHT_Q, a, ell, precision)
            * power_cache.power(WEIGHT_R, b, ell, precision))


def monomial_basis(weight, ell, precision):
    """
    The q-expansions of E4^a E6^b mod ell over all (a, b) of the given weight.

    Returns:
        list: ((a, b), TruncatedSeries) pairs, by decreasing a.
    """
    return [((a, b), monomial(a, b, ell, precision)) for a, b in monomial_exponents(weight)]


@dataclass(frozen=True)
class IsobaricPolynomial:
    """
    A polynomial over F_ell in Q (weight 4) and R (weight 6) whose monomials
    all have the same weight.

    Attributes:
        prime (int): The characteristic.
        weight (int): Common weight 4a + 6b of every monomial.
        coefficients (tuple): (a, b, c) triples with 0 < c < prime, by decreasing a.
    """
    prime: int
    weight: int
    coefficients: tuple = ()

    def __post_init__(self):
        for a, b, c in self.coefficients:
            if WEIGHT_Q * a + WEIGHT_R * b != self.weight:
                raise ValueError(f"monomial Q^{a} R^{b} does not have weight {self.weight}")
            if not 0 < c < self.prime:
                raise ValueError(f"coefficient {c} is not a non-zero residue mod {self.prime}")

    @classmethod
    def from_mapping(cls, prime, weight, mapping):
        terms = [(a, b, int(c) % prime) for (a, b), c in mapping.items()]
        terms = sorted((term for term in terms if term[2]), key=lambda term: -term[0])
        return cls(prime, weight, tuple(terms))

    def as_dict(self):
        return {(a, b): c for a, b, c in self.coefficients}

    def coefficient(self, a, b):
        return self.as_dict().get((a, b), 0)

    def is_zero(self):
        return not self.coefficients

    def evaluate(self, precision):
        """Substitute Q = E4 and R = E6, giving a q-series mod prime."""
        result = TruncatedSeries.zero(self.prime, precision)
        for a, b, c in self.coefficients:
            result = result + monomial(a, b, self.prime, precision).scale(c)
        return result

    def __str__(self):
        parts = []
        for a, b, c in self.coefficients:
            factors = [name if e == 1 else f"{name}^{e}" for name, e in (("Q", a), ("R", b)) if e]
            monomial_text = "*".join(factors)
            if not monomial_text:
                parts.append(str(c))
            else:
                parts.append(monomial_text if c == 1 else f"{c}*{monomial_text}")
        return " + ".join(parts) if parts else "0"


@dataclass(frozen=True, eq=False)
class ModularFormModEll:
    """
    The reduction mod ell of a level-one modular form of the given weight.

    The caller guarantees that the series comes from M_k; every equality or
    vanishing decision is made through the Sturm bound of the weights involved.
    """
    prime: int
    weight: int
    series: TruncatedSeries

    def __post_init__(self):
        check_prime(self.prime)
        if self.weight < 0 or self.weight % 2:
            raise ValueError(f"weight must be even and non-negative, got {self.weight}")
        if self.series.modulus != self.prime:
            raise ValueError(f"series is mod {self.series.modulus}, expected mod {self.prime}")
        if self.series.valuation < 0:
            raise ValueError("a modular form has no negative powers of q")

    @classmethod
    def from_lift(cls, lift):
        return cls(lift.prime, lift.weight, lift.series)

    @property
    def precision(self):
        return self.series.precision

    def require_precision(self, weight):
        needed = sturm(weight) + 1
        if self.precision < needed:
            raise PrecisionError(
                f"weight {weight} decisions mod {self.prime} need {needed} terms, have {self.precision}")

    def theta(self, times=1):
        return ModularFormModEll(self.prime, self.weight + times * (self.prime + 1),
                                 self.series.theta(times))

    def scale(self, factor):
        return ModularFormModEll(self.prime, self.weight, self.series.scale(factor))

    def retag(self, weight):
        """The same reduction viewed in a congruent weight where it is known to live."""
        if (weight - self.weight) % (self.prime - 1):
            raise ValueError(f"weights {weight} and {self.weight} differ mod {self.prime - 1}")
        return ModularFormModEll(self.prime, weight, self.series)

    def is_zero(self):
        self.require_precision(self.weight)
        return not self.series.coefficients(0, sturm(self.weight) + 1).any()

    def congruent_to(self, other):
        """
        Decide f = g mod ell. Forms of weights incongruent mod ell - 1 are
        congruent only when both vanish.
        """
        if (self.weight - other.weight) % (self.prime - 1):
            return self.is_zero() and other.is_zero()
        top = max(self.weight, other.weight)
        self.require_precision(top)
        other.require_precision(top)
        return self.series.agrees_with(other.series, sturm(top) + 1)


def represent(form, weight):
    """
    Find c_{a,b} with sum c_{a,b} E4^a E6^b = form mod ell in the given weight.

    Agreement is checked through sturm(max(weight, form.weight)) which, after
    multiplying the lower-weight side by a power of E_{ell-1} = 1, certifies
    the congruence.

    Returns:
        IsobaricPolynomial or None: None when the form is not congruent to
        any form of this weight.
    """
    ell = form.prime
    if weight < 0 or weight % 2:
        raise ValueError(f"weight must be even and non-negative, got {weight}")
    if (weight - form.weight) % (ell - 1):
        logger.debug("weight %d is not congruent to %d mod %d", weight, form.weight, ell - 1)
        return None
    top = max(weight, form.weight)
    form.require_precision(top)
    rows = sturm(top) + 1

    basis = monomial_basis(weight, ell, rows)
    target = form.series.coefficients(0, rows)
    if basis:
        matrix = np.column_stack([series.coefficients(0, rows) for _, series in basis])
    else:
        matrix = np.zeros((rows, 0), dtype=np.int64)
    solution = solve_mod_p(matrix, target, ell)
    if solution is None:
        return None
    return IsobaricPolynomial.from_mapping(
        ell, weight, {pair: int(c) for (pair, _), c in zip(basis, solution)})


def filtration(form, start=None):
    """
    The filtration w(f): the least weight in which the reduction lives.

    Searches downwards from ``start`` (default: the form's weight) in steps of
    ell - 1 and stops at the first weight that fails, since representable
    weights are closed under adding ell - 1.

    Raises:
        ZeroFormError: if the form vanishes mod ell.
        InvariantViolation: if not even the starting weight represents it.
    """
    if form.is_zero():
        raise ZeroFormError(f"the filtration of 0 mod {form.prime} is undefined")
    ell = form.prime
    weight = form.weight if start is None else start
    if (weight - form.weight) % (ell - 1):
        raise ValueError(f"start weight {weight} is not congruent to {form.weight} mod {ell - 1}")
    lowest = None
    while weight >= 0:
        if represent(form, weight) is None:
            break
        lowest = weight
        weight -= ell - 1
    if lowest is None:
        logger.error("form of weight %d mod %d has no representable weight", form.weight, ell)
        raise InvariantViolation(f"no representable weight found for a weight-{form.weight} form")
    return lowest


@lru_cache(maxsize=None)
def compute_A_tilde(ell):
    """The weight ell-1 polynomial with A(E4, E6) = E_{ell-1} = 1 mod ell."""
    check_prime(ell)
    weight = ell - 1
    one = ModularFormModEll(ell, weight, eisenstein_reduced(weight, ell, sturm(weight) + 1))
    return _require_representation(one, weight, "E_{ell-1}")


@lru_cache(maxsize=None)
def compute_B_tilde(ell):
    """The weight ell+1 polynomial with B(E4, E6) = E_{ell+1} = E2 mod ell."""
    check_prime(ell)
    weight = ell + 1
    e2 = ModularFormModEll(ell, weight, eisenstein_reduced(weight, ell, sturm(weight) + 1))
    return _require_representation(e2, weight, "E_{ell+1}")


def _require_representation(form, weight, name):
    polynomial = represent(form, weight)
    if polynomial is None:
        logger.error("%s is not a polynomial in E4, E6 mod %d", name, form.prime)
        raise InvariantViolation(f"{name} has no representation mod {form.prime}")
    return polynomial
