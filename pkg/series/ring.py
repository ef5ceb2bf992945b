import math

import numpy as np

from config.settings import MAX_MODULUS
from utils.errors import ModulusMismatchError, NotInvertibleError, PrecisionError

# Largest modulus whose residues can be multiplied in int64 without overflow.
_SAFE_PRODUCT_MODULUS = 3037000499
_INT64_LIMIT = 2**63


def _reduce(values, modulus):
    array = np.asarray(values)
    if array.dtype.kind not in "iu" or array.dtype == np.uint64:
        return np.array([int(v) % modulus for v in array.ravel()], dtype=np.int64)
    return np.mod(array.astype(np.int64), modulus)


def _addmod(a, b, modulus):
    difference = a - (modulus - b)
    return np.where(difference < 0, difference + modulus, difference)


def _mulmod(a, b, modulus):
    if modulus <= _SAFE_PRODUCT_MODULUS:
        return (a * b) % modulus
    product = (a.astype(object) * b.astype(object)) % modulus
    return product.astype(np.int64)


def _powmod(base, exponent, modulus):
    """Elementwise base**exponent mod modulus for an int64 vector of residues."""
    result = np.ones_like(base) % modulus
    while exponent:
        if exponent & 1:
            result = _mulmod(result, base, modulus)
        base = _mulmod(base, base, modulus)
        exponent >>= 1
    return result


def _convolve(a, b, modulus):
    """Exact Cauchy product of two residue vectors, reduced mod modulus."""
    if len(a) == 0 or len(b) == 0:
        return np.zeros(0, dtype=np.int64)
    if min(len(a), len(b)) * (modulus - 1) ** 2 < _INT64_LIMIT:
        return np.convolve(a, b) % modulus
    product = np.convolve(a.astype(object), b.astype(object)) % modulus
    return product.astype(np.int64)


def _invert(a, modulus, length):
    """Newton iteration g <- g(2 - ag) for the inverse of a unit power series."""
    g = np.array([pow(int(a[0]), -1, modulus)], dtype=np.int64)
    known = 1
    while known < length:
        known = min(2 * known, length)
        error = (-_convolve(a[:known], g, modulus)[:known]) % modulus
        error[0] = (error[0] + 2) % modulus
        g = _convolve(g, error, modulus)[:known]
    return g


class TruncatedSeries:
    """
    A Laurent series sum a(n) q^n with coefficients in Z/m.

    Coefficients are known for every exponent below ``precision``. The stored
    vector starts at ``valuation``, the lowest exponent with a non-zero
    coefficient; a series with no non-zero coefficient is stored with
    valuation 0 (or ``precision`` when that is negative).

    Attributes:
        modulus (int): The coefficient ring is Z/modulus.
        valuation (int): Exponent of coeffs[0].
        coeffs (ndarray): Read-only int64 residues in [0, modulus).
        precision (int): Every exponent below this is known.
    """

    __slots__ = ("modulus", "valuation", "coeffs", "precision")

    def __init__(self, coeffs, modulus, valuation=0, precision=None):
        modulus = int(modulus)
        if not 2 <= modulus < MAX_MODULUS:
            raise ValueError(f"modulus must lie in [2, 2^63), got {modulus}")
        array = _reduce(coeffs, modulus)
        valuation = int(valuation)
        if precision is None:
            precision = valuation + len(array)
        precision = int(precision)

        length = max(precision - valuation, 0)
        if len(array) > length:
            array = array[:length]
        elif len(array) < length:
            array = np.concatenate([array, np.zeros(length - len(array), dtype=np.int64)])

        nonzero = np.flatnonzero(array)
        if nonzero.size == 0:
            valuation = min(0, precision)
            array = np.zeros(precision - valuation, dtype=np.int64)
        elif nonzero[0]:
            valuation += int(nonzero[0])
            array = array[nonzero[0]:]

        array = np.ascontiguousarray(array, dtype=np.int64)
        array.setflags(write=False)
        self.modulus = modulus
        self.valuation = valuation
        self.coeffs = array
        self.precision = precision

    @classmethod
    def zero(cls, modulus, precision):
        return cls([], modulus, 0, precision)

    @classmethod
    def one(cls, modulus, precision):
        return cls.monomial(0, modulus, precision)

    @classmethod
    def monomial(cls, exponent, modulus, precision, coefficient=1):
        if exponent >= precision:
            return cls.zero(modulus, precision)
        return cls([coefficient], modulus, exponent, precision)

    # Inspection

    def is_zero(self):
        return not self.coeffs.any()

    def coefficient(self, n):
        if n >= self.precision:
            raise PrecisionError(f"coefficient of q^{n} requested, precision is {self.precision}")
        if n < self.valuation:
            return 0
        return int(self.coeffs[n - self.valuation])

    def coefficients(self, start=0, stop=None):
        """Dense residue vector for the exponents start, ..., stop - 1."""
        stop = self.precision if stop is None else stop
        if stop > self.precision:
            raise PrecisionError(f"coefficients up to q^{stop - 1} requested, precision is {self.precision}")
        return self._dense(start, stop)

    def _dense(self, start, stop):
        out = np.zeros(max(stop - start, 0), dtype=np.int64)
        lo = max(start, self.valuation)
        hi = min(stop, self.valuation + len(self.coeffs))
        if lo < hi:
            out[lo - start:hi - start] = self.coeffs[lo - self.valuation:hi - self.valuation]
        return out

    def agrees_with(self, other, precision=None):
        """True when both series have the same coefficients below the common precision."""
        self._check_ring(other)
        stop = min(self.precision, other.precision)
        if precision is not None:
            stop = min(stop, precision)
        start = min(self.valuation, other.valuation, stop)
        return bool(np.array_equal(self._dense(start, stop), other._dense(start, stop)))

    def truncate(self, precision):
        precision = min(precision, self.precision)
        return TruncatedSeries(self.coeffs, self.modulus, self.valuation, precision)

    # Ring operations

    def _check_ring(self, other):
        if self.modulus != other.modulus:
            raise ModulusMismatchError(
                f"cannot combine series mod {self.modulus} and mod {other.modulus}")

    def _coerce(self, other):
        if isinstance(other, TruncatedSeries):
            self._check_ring(other)
            return other
        if isinstance(other, (int, np.integer)):
            return TruncatedSeries.monomial(0, self.modulus, self.precision, int(other))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        start = min(self.valuation, other.valuation)
        stop = min(self.precision, other.precision)
        total = _addmod(self._dense(start, stop), other._dense(start, stop), self.modulus)
        return TruncatedSeries(total, self.modulus, start, stop)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries(-self.coeffs, self.modulus, self.valuation, self.precision)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, np.integer)):
            return self.scale(int(other))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        precision = min(self.precision + other.valuation, other.precision + self.valuation)
        valuation = self.valuation + other.valuation
        length = precision - valuation
        if length <= 0:
            return TruncatedSeries.zero(self.modulus, precision)
        product = _convolve(self.coeffs[:length], other.coeffs[:length], self.modulus)[:length]
        return TruncatedSeries(product, self.modulus, valuation, precision)

    __rmul__ = __mul__

    def scale(self, factor):
        factor = np.array([int(factor) % self.modulus], dtype=np.int64)
        return TruncatedSeries(_mulmod(self.coeffs, factor, self.modulus),
                               self.modulus, self.valuation, self.precision)

    def shift(self, exponent):
        """Multiply by q^exponent."""
        return TruncatedSeries(self.coeffs, self.modulus,
                               self.valuation + exponent, self.precision + exponent)

    def invert(self):
        """
        Multiplicative inverse to the same precision.

        Raises:
            NotInvertibleError: if the valuation is not 0 or the constant
                term is not a unit of Z/m.
        """
        if self.is_zero() or self.valuation != 0:
            raise NotInvertibleError("only series with a unit constant term can be inverted")
        constant = int(self.coeffs[0])
        if math.gcd(constant, self.modulus) != 1:
            raise NotInvertibleError(f"constant term {constant} is not a unit mod {self.modulus}")
        inverse = _invert(self.coeffs, self.modulus, self.precision)
        return TruncatedSeries(inverse, self.modulus, 0, self.precision)

    def __pow__(self, exponent):
        exponent = int(exponent)
        base = self
        if exponent < 0:
            base = self.invert()
            exponent = -exponent
        result = TruncatedSeries.one(self.modulus, self.precision - self.valuation)
        while exponent:
            if exponent & 1:
                result = result * base
            exponent >>= 1
            if exponent:
                base = base * base
        return result

    # Operators on coefficients

    def theta(self, times=1):
        """Apply q d/dq ``times`` times: a(n) becomes n^times a(n)."""
        if times < 0:
            raise ValueError("theta can only be iterated a non-negative number of times")
        exponents = np.arange(self.valuation, self.valuation + len(self.coeffs), dtype=np.int64)
        factors = _powmod(exponents % self.modulus, times, self.modulus)
        return TruncatedSeries(_mulmod(self.coeffs, factors, self.modulus),
                               self.modulus, self.valuation, self.precision)

    def extract_progression(self, residue, step):
        """The series sum a(step*n + residue) q^n over the known exponents."""
        if not 0 <= residue < step:
            raise ValueError(f"residue must lie in [0, {step}), got {residue}")
        first = -((residue - self.valuation) // step)
        precision = -((residue - self.precision) // step)
        exponents = step * np.arange(first, precision, dtype=np.int64) + residue
        values = self._dense(self.valuation, self.precision)[exponents - self.valuation]
        return TruncatedSeries(values, self.modulus, first, precision)

    def change_modulus(self, modulus):
        if modulus < 2 or self.modulus % modulus:
            raise ValueError(f"{modulus} does not divide {self.modulus}")
        return TruncatedSeries(self.coeffs % modulus, modulus, self.valuation, self.precision)

    # Comparison and display

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return (self.modulus == other.modulus and self.valuation == other.valuation
                and self.precision == other.precision
                and np.array_equal(self.coeffs, other.coeffs))

    __hash__ = None

    def terms(self):
        """(exponent, coefficient) pairs of the non-zero terms in ascending order."""
        return [(self.valuation + int(i), int(self.coeffs[i])) for i in np.flatnonzero(self.coeffs)]

    def __str__(self):
        parts = []
        for exponent, value in self.terms():
            if exponent == 0:
                parts.append(str(value))
                continue
            power = "q" if exponent == 1 else f"q^{exponent}"
            parts.append(power if value == 1 else f"{value}*{power}")
        return " + ".join(parts) if parts else "0"

    def __repr__(self):
        return f"TruncatedSeries({self} + O(q^{self.precision}) mod {self.modulus})"
