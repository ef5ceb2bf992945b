from enum import Enum


def _check_spec(spec):
    if spec.r < 0:
        raise ValueError(f"bounds need r >= 0, got r = {spec.r}")


def theorem_bound(spec):
    """Largest prime that can carry a simple congruence unless r = s = t = 0."""
    _check_spec(spec)
    return 2 * spec.r + 8 * abs(spec.s) + 12 * abs(spec.t) + 21


def _sharp_bound(spec, positive_t_weight):
    _check_spec(spec)
    r, s, t = spec.exponents
    size_terms = (abs(s) - 1, abs(t) - 1, 11)
    if spec.weight_offset > 0:
        return max(*size_terms, 2 * r + 8 * s + positive_t_weight * t - 1)
    return max(*size_terms, 21 - 8 * s - 12 * t)


def remark_bound(spec):
    """
    The sharper bound split on the sign of r + 4s + 6t. Its positive branch
    uses 2r + 8s + 6t - 1, not the 2r + 8s + 12t - 1 its derivation gives;
    E4 E6 has simple congruences at 19 although this bound is 13.
    """
    return _sharp_bound(spec, 6)


def derived_remark_bound(spec):
    """The sharper bound with the positive branch 2r + 8s + 12t - 1."""
    return _sharp_bound(spec, 12)


class ProofCase(Enum):
    LARGE_OFFSET = "large-offset"        # ell <= |r + 4s + 6t|
    POSITIVE_OFFSET = "positive-offset"  # 0 < r + 4s + 6t < ell
    ZERO_OFFSET = "zero-offset"          # r + 4s + 6t = 0
    NEGATIVE_OFFSET = "negative-offset"  # -ell < r + 4s + 6t < 0


def proof_case(spec, ell):
    offset = spec.weight_offset
    if offset == 0:
        return ProofCase.ZERO_OFFSET
    if abs(offset) >= ell:
        return ProofCase.LARGE_OFFSET
    return ProofCase.POSITIVE_OFFSET if offset > 0 else ProofCase.NEGATIVE_OFFSET
