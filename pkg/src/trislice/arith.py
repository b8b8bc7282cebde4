"""Small exact-arithmetic helpers shared across modules."""

from __future__ import annotations

from math import comb, isqrt

from .errors import ParameterError


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    for d in range(3, isqrt(p) + 1, 2):
        if p % d == 0:
            return False
    return True


def require_prime(p: int, what: str = "modulus") -> int:
    if not isinstance(p, int) or not is_prime(p):
        raise ParameterError(f"{what} must be prime, got {p!r}")
    return p


def binom_sum(top: int, s: int) -> int:
    """Return sum_{i=0}^{s} C(top, i).

    C(top, i) is 0 for i > top >= 0. A negative ``top`` is rejected: none of
    the bounds define that regime.
    """
    if top < 0:
        raise ParameterError(f"binomial top must be nonnegative, got {top}")
    if s < 0:
        raise ParameterError(f"summation limit must be nonnegative, got {s}")
    return sum(comb(top, i) for i in range(min(s, top) + 1))
