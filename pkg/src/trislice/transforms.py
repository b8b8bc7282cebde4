"""Complementing members and tracing a family onto one of its members."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DuplicationError, InvariantError, ParameterError, PreconditionError, VerificationError
from .family import SetFamily, Subset
from .profile import IntersectionProfile, is_valid, verify_family


def check_complement_preconditions(n: int, profile: IntersectionProfile) -> None:
    if not profile.is_modular:
        raise PreconditionError("complementing needs a modular profile")
    p = profile.modulus
    if n % p:
        raise PreconditionError(f"modulus must divide ground size ({p} does not divide {n})")
    if not profile.is_zero_then():
        raise PreconditionError(f"profile {profile} is not of shape (0,...,0,L)")
    if not profile.negation_closed():
        raise PreconditionError(f"last level of {profile} is not closed under negation mod {p}")


def complement_replace(
    family: SetFamily, i: int, profile: IntersectionProfile, verify: bool = True
) -> SetFamily:
    """Replace member ``i`` (0-based) by its complement in ``[n]``.

    For a valid family the result is valid again; with ``verify`` that is
    re-checked and a failure raises ``InvariantError``.
    """
    check_complement_preconditions(family.n, profile)
    if not 0 <= i < len(family):
        raise ParameterError(f"member index {i} out of range for {len(family)} members")
    comp = family[i].complement()
    for j, a in enumerate(family):
        if j != i and a.bits == comp.bits:
            raise DuplicationError(
                f"complement of member {i + 1} equals member {j + 1} ({comp})"
            )
    out = family.replace(i, comp)
    if verify and is_valid(family, profile) and not is_valid(out, profile):
        raise InvariantError(f"complementing member {i + 1} broke a valid family")
    return out


def shrink_small(family: SetFamily, profile: IntersectionProfile) -> SetFamily:
    """Complement, in index order, every member larger than n/2.

    The output must verify under ``profile``; if it does not (which can only
    happen when the input was not valid) ``VerificationError`` is raised.
    """
    check_complement_preconditions(family.n, profile)
    out = family
    for i, a in enumerate(family):
        if 2 * len(a) > family.n:
            out = complement_replace(out, i, profile, verify=False)
    report = verify_family(out, profile)
    if not report.valid:
        first = report.violations[0]
        raise VerificationError(f"shrunk family fails {profile}: {first}")
    return out


@dataclass(frozen=True)
class TraceResult:
    family: SetFamily
    profile: IntersectionProfile
    relabel: dict[int, int]


def disjoint_level(profile: IntersectionProfile) -> int | None:
    """Smallest 1-based t > 1 with L_t and L_{t+1} disjoint, or None."""
    for t in range(2, profile.k):
        if not profile.levels[t - 1] & profile.levels[t]:
            return t
    return None


def trace(
    family: SetFamily, gamma: int, profile: IntersectionProfile, verify: bool = True
) -> TraceResult:
    """Intersect every other member with member ``gamma`` (0-based).

    The traced sets live on the ground set ``A_gamma``, relabelled onto
    ``[|A_gamma|]`` preserving order, under the profile with its first level
    dropped.
    """
    if profile.k < 2:
        raise PreconditionError("tracing needs a profile with at least two levels")
    t = disjoint_level(profile)
    if t is None:
        raise PreconditionError(
            f"no t > 1 with L_t and L_(t+1) disjoint in {profile}; traces may collide"
        )
    if not family.n > t:
        raise PreconditionError(f"ground size {family.n} must exceed t = {t}")
    if not 0 <= gamma < len(family):
        raise ParameterError(f"member index {gamma} out of range for {len(family)} members")
    report = verify_family(family, profile, cap=1)
    if not report.valid:
        raise PreconditionError(f"family does not verify under {profile}: {report.violations[0]}")

    anchor = family[gamma]
    elems = anchor.elements()
    relabel = {e: j for j, e in enumerate(elems, 1)}
    m = len(elems)
    traced = []
    seen: dict[int, int] = {}
    for i, a in enumerate(family):
        if i == gamma:
            continue
        bits = 0
        for e in (a & anchor).elements():
            bits |= 1 << (m - relabel[e])
        if bits in seen:
            raise InvariantError(
                f"members {seen[bits] + 1} and {i + 1} have the same trace on member {gamma + 1}"
            )
        seen[bits] = i
        traced.append(Subset(m, bits))
    out = SetFamily(m, tuple(traced))
    shifted = profile.shifted()
    if verify and not is_valid(out, shifted):
        raise InvariantError(f"traced family fails {shifted}")
    return TraceResult(out, shifted, relabel)
