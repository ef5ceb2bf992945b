import logging
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from sympy import divisor_sigma, isprime

from series.constants import EISENSTEIN_CONSTANTS, SUPPORTED_WEIGHTS
from series.ring import TruncatedSeries
from utils.errors import LiftRefusedError

logger = logging.getLogger(__name__)


def sigma(power, n):
    """
    Divisor power sum sigma_power(n) = sum of d^power over the divisors d of n.

    Args:
        power (int): Exponent m >= 0.
        n (int): Argument, n >= 1.

    Returns:
        int: The exact (unreduced) value.
    """
    if n < 1:
        raise ValueError(f"sigma is defined for n >= 1, got {n}")
    if power < 0:
        raise ValueError(f"sigma needs a non-negative power, got {power}")
    return int(divisor_sigma(n, power))


def divisor_power_sums(power, count, modulus):
    """sigma_power(n) mod modulus for 0 <= n < count by sieving over divisors; entry 0 is 0."""
    sums = np.zeros(max(count, 0), dtype=np.int64)
    for d in range(1, count):
        term = pow(d, power, modulus)
        sums[d::d] = (sums[d::d] - (modulus - term)) % modulus
    return sums


@lru_cache(maxsize=256)
def eisenstein_series(k, modulus, precision):
    """
    q-expansion of E_k = 1 + C_k sum sigma_{k-1}(n) q^n mod modulus for k in {2, 4, 6}.
    """
    if k not in EISENSTEIN_CONSTANTS:
        raise ValueError(f"E_{k} is not supported, weights are {SUPPORTED_WEIGHTS}")
    sums = TruncatedSeries(divisor_power_sums(k - 1, precision, modulus), modulus, 0, precision)
    return sums.scale(EISENSTEIN_CONSTANTS[k]) + 1


def check_prime(ell, minimum=5):
    if ell < minimum or not isprime(ell):
        raise ValueError(f"expected a prime >= {minimum}, got {ell}")


def eisenstein_reduced(k, ell, precision):
    """
    Reduction mod ell of E_{ell-1} or E_{ell+1}.

    E_{ell-1} reduces to 1 and E_{ell+1} to E_2; no Bernoulli number of
    general index is ever computed.
    """
    check_prime(ell)
    if k == ell - 1:
        return TruncatedSeries.one(ell, precision)
    if k == ell + 1:
        return eisenstein_series(2, ell, precision)
    raise ValueError(f"only E_{ell - 1} and E_{ell + 1} have known reductions mod {ell}, got E_{k}")


@dataclass(frozen=True)
class QuotientSpec:
    """Exponents of the quotient E2^r E4^s E6^t with r >= 0."""
    r: int
    s: int
    t: int

    def __post_init__(self):
        for name in ("r", "s", "t"):
            if not isinstance(getattr(self, name), (int, np.integer)):
                raise ValueError(f"{name} must be an integer")
        if self.r < 0:
            raise ValueError(f"r must be non-negative, got {self.r}")

    @property
    def exponents(self):
        return (self.r, self.s, self.t)

    @property
    def weight_offset(self):
        """r + 4s + 6t, the weight of the quotient."""
        return self.r + 4 * self.s + 6 * self.t

    @property
    def is_trivial(self):
        return self.r == self.s == self.t == 0

    def __str__(self):
        return f"E2^{self.r} E4^{self.s} E6^{self.t}"


def eisenstein_product(r, s, t, modulus, precision):
    """E2^r E4^s E6^t mod modulus for arbitrary integer exponents."""
    result = TruncatedSeries.one(modulus, precision)
    for k, exponent in ((2, r), (4, s), (6, t)):
        if exponent:
            result = result * eisenstein_series(k, modulus, precision) ** exponent
    return result


def quotient_series(spec, modulus, precision):
    return eisenstein_product(spec.r, spec.s, spec.t, modulus, precision)


def lift_weight(spec, ell, power=1):
    """Weight of E_{ell+1}^r E4^{j ell + s} E6^{j ell + t}: (r + 10j) ell + (r + 4s + 6t)."""
    return (spec.r + 10 * power) * ell + spec.weight_offset


def can_lift(spec, ell, power=1):
    return power * ell + spec.s >= 0 and power * ell + spec.t >= 0


def minimal_lift_power(spec, ell):
    """Least j >= 1 making both j*ell + s and j*ell + t non-negative."""
    return max(1, -(spec.s // ell), -(spec.t // ell))


@dataclass(frozen=True)
class LiftedForm:
    """
    A genuine level-one modular form mod ell sharing the simple congruences
    of a quotient: the quotient times (E4 E6)^(power * ell).
    """
    spec: QuotientSpec
    prime: int
    weight: int
    series: TruncatedSeries
    power: int = 1

    def __post_init__(self):
        if self.weight != lift_weight(self.spec, self.prime, self.power):
            raise ValueError(f"weight {self.weight} does not match the lift of {self.spec}")
        if not can_lift(self.spec, self.prime, self.power):
            raise LiftRefusedError(self.spec, self.prime)


def replacement_lift(spec, ell, precision, power=1):
    """
    Multiply the quotient by (E4 E6)^(power * ell) to obtain a modular form of
    weight (r + 10 power) ell + (r + 4s + 6t) with the same simple congruences.

    E_{ell+1} is realised by its reduction E2.

    Raises:
        LiftRefusedError: if power*ell + s < 0 or power*ell + t < 0.
    """
    check_prime(ell)
    if power < 1:
        raise ValueError(f"lift power must be positive, got {power}")
    if not can_lift(spec, ell, power):
        raise LiftRefusedError(spec, ell)
    series = eisenstein_product(spec.r, spec.s + power * ell, spec.t + power * ell, ell, precision)
    logger.debug("lifted %s at ell=%d to weight %d with %d terms",
                 spec, ell, lift_weight(spec, ell, power), precision)
    return LiftedForm(spec, ell, lift_weight(spec, ell, power), series, power)
