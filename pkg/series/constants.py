from fractions import Fraction

# B_k from t/(e^t - 1) = sum B_k t^k / k!
BERNOULLI = {
    2: Fraction(1, 6),
    4: Fraction(-1, 30),
    6: Fraction(1, 42),
}

# E_k = 1 - (2k/B_k) sum sigma_{k-1}(n) q^n
EISENSTEIN_CONSTANTS = {k: int(-2 * k / b) for k, b in BERNOULLI.items()}

assert EISENSTEIN_CONSTANTS == {2: -24, 4: 240, 6: -504}

SUPPORTED_WEIGHTS = tuple(sorted(EISENSTEIN_CONSTANTS))

# Eliminating r and s from the q, q^2 and weight congruences of a
# Theta-vanishing quotient leaves THETA_ELIMINATION_CONSTANT * t = 0 mod ell.
THETA_ELIMINATION_CONSTANT = 8255520

# Weight of Q = E4 and R = E6 in the isobaric grading.
WEIGHT_Q = 4
WEIGHT_R = 6
