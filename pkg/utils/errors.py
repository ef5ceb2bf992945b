class CongruenceError(Exception):
    """Base class for every error raised by the library."""
    exit_code = 2


class ModulusMismatchError(CongruenceError, ValueError):
    """Two series over different coefficient rings were combined."""


class NotInvertibleError(CongruenceError, ArithmeticError):
    """A series with non-unit constant term or non-zero valuation was inverted."""


class PrecisionError(CongruenceError, ArithmeticError):
    """Not enough coefficients are known to decide the question that was asked."""
    exit_code = 3


class ZeroFormError(CongruenceError, ArithmeticError):
    """The form is congruent to zero where a non-zero form is required."""


class LiftRefusedError(CongruenceError, ValueError):
    """The weight-lifting power would need a negative exponent of E4 or E6."""

    def __init__(self, spec, prime):
        super().__init__(
            f"cannot lift {spec} at ell={prime}: ell+s and ell+t must be non-negative")
        self.spec = spec
        self.prime = prime


class InvariantViolation(CongruenceError):
    """A classical fact about reductions of modular forms failed to hold."""
    exit_code = 1


class CounterexampleError(CongruenceError):
    """A claimed congruence failed at an explicit coefficient."""
    exit_code = 1

    def __init__(self, message, index=None, value=None):
        super().__init__(message)
        self.index = index
        self.value = value


class StorageError(CongruenceError, OSError):
    """The results directory could not be read or written."""
    exit_code = 3
