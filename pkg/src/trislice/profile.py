"""Intersection profiles and family verification.

A k-level profile ``(L_1, ..., L_k)`` constrains every i-wise intersection of
a family, for i = 1..k: its size (reduced mod p in modular mode) must lie in
``L_i``. Modular and exact mode are tagged explicitly and never inferred.

For two-level modular profiles built from the Snevily setting, level 1 holds
the allowed *sizes* (the set usually called K) and level 2 the allowed
*pairwise intersections* (the set L). See ``snevily_profile``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .arith import require_prime
from .errors import ContextError, ParameterError
from .family import SetFamily

DEFAULT_VIOLATION_CAP = 32


@dataclass(frozen=True)
class IntersectionProfile:
    levels: tuple[frozenset[int], ...]
    modulus: int | None = None

    def __post_init__(self) -> None:
        levels = tuple(frozenset(int(v) for v in lv) for lv in self.levels)
        object.__setattr__(self, "levels", levels)
        if not levels:
            raise ParameterError("a profile needs at least one level")
        for i, lv in enumerate(levels, 1):
            if not lv:
                raise ParameterError(f"level {i} is empty")
            if min(lv) < 0:
                raise ParameterError(f"level {i} has a negative value")
        if self.modulus is not None:
            require_prime(self.modulus)
            for i, lv in enumerate(levels, 1):
                if max(lv) >= self.modulus:
                    raise ParameterError(
                        f"level {i} has residue {max(lv)} >= modulus {self.modulus}"
                    )

    @classmethod
    def modular(cls, p: int, *levels: Iterable[int] | int) -> IntersectionProfile:
        return cls(tuple(_as_set(lv) for lv in levels), p)

    @classmethod
    def exact(cls, *levels: Iterable[int] | int) -> IntersectionProfile:
        return cls(tuple(_as_set(lv) for lv in levels), None)

    @property
    def k(self) -> int:
        return len(self.levels)

    @property
    def is_modular(self) -> bool:
        return self.modulus is not None

    def value(self, size: int) -> int:
        return size % self.modulus if self.modulus is not None else size

    def allows(self, level: int, size: int) -> bool:
        """Whether an intersection of ``level`` sets may have ``size`` elements (level is 1-based)."""
        return self.value(size) in self.levels[level - 1]

    def shifted(self) -> IntersectionProfile:
        """``(L_2, ..., L_k)``, same mode."""
        if self.k < 2:
            raise ParameterError("cannot drop the only level of a profile")
        return IntersectionProfile(self.levels[1:], self.modulus)

    def is_zero_then(self) -> bool:
        """True for modular profiles of shape (0, ..., 0, L)."""
        return self.is_modular and all(lv == {0} for lv in self.levels[:-1])

    def negation_closed(self, level: int | None = None) -> bool:
        """Whether ``L = -L`` mod p for the given level (default: last)."""
        if self.modulus is None:
            raise ParameterError("negation is only defined in modular mode")
        lv = self.levels[-1 if level is None else level - 1]
        return lv == frozenset((-v) % self.modulus for v in lv)

    def __str__(self) -> str:
        body = "|".join(",".join(map(str, sorted(lv))) for lv in self.levels)
        if self.modulus is None:
            return f"exact:{body}"
        return f"mod:{self.modulus}:{body}"


def _as_set(level: Iterable[int] | int) -> frozenset[int]:
    if isinstance(level, int):
        return frozenset((level,))
    return frozenset(level)


def parse_profile(text: str) -> IntersectionProfile:
    """Parse ``mod:p:L1|L2|...`` or ``exact:L1|L2|...``."""
    head, sep, rest = text.strip().partition(":")
    if not sep:
        raise ParameterError(f"profile must start with 'mod:' or 'exact:', got {text!r}")
    if head == "mod":
        p_text, sep, body = rest.partition(":")
        if not sep:
            raise ParameterError(f"modular profile needs 'mod:p:levels', got {text!r}")
        try:
            p = int(p_text)
        except ValueError as exc:
            raise ParameterError(f"bad modulus {p_text!r}") from exc
    elif head == "exact":
        p, body = None, rest
    else:
        raise ParameterError(f"unknown profile mode {head!r}")
    levels = []
    for chunk in body.split("|"):
        try:
            levels.append(frozenset(int(tok) for tok in chunk.split(",") if tok.strip()))
        except ValueError as exc:
            raise ParameterError(f"bad level {chunk!r} in {text!r}") from exc
    return IntersectionProfile(tuple(levels), p)


def snevily_profile(sizes: Iterable[int], meets: Iterable[int], p: int) -> IntersectionProfile:
    """Two-level profile: member sizes mod p in ``sizes``, pairwise meets mod p in ``meets``."""
    return IntersectionProfile((frozenset(sizes), frozenset(meets)), p)


@dataclass(frozen=True)
class Violation:
    """A failing index tuple; ``indices`` are 0-based, rendered 1-based."""

    indices: tuple[int, ...]
    level: int
    observed: int
    kind: str = "intersection"

    def __str__(self) -> str:
        if self.kind == "family too small":
            return f"family too small: {self.observed} members, profile needs {self.level}"
        idx = ",".join(str(i + 1) for i in self.indices)
        return f"{self.kind} at ({idx}), level {self.level}: observed {self.observed}"


@dataclass(frozen=True)
class VerificationReport:
    valid: bool
    violations: tuple[Violation, ...] = ()
    truncated: bool = False

    def __bool__(self) -> bool:
        return self.valid


def colex_combinations(m: int, r: int) -> Iterator[tuple[int, ...]]:
    """r-subsets of range(m) in colexicographic order."""
    if r == 0:
        yield ()
        return
    for last in range(r - 1, m):
        for rest in colex_combinations(last, r - 1):
            yield rest + (last,)


def verify_family(
    family: SetFamily,
    profile: IntersectionProfile,
    cap: int | None = DEFAULT_VIOLATION_CAP,
) -> VerificationReport:
    """Check every i-wise intersection of ``family`` against ``profile``.

    Stops collecting after ``cap`` violations (``cap=None`` lists them all);
    the report is ``truncated`` when it stopped early.
    """
    masks = family.masks
    m = len(masks)
    violations: list[Violation] = []
    if m < profile.k:
        violations.append(Violation((), profile.k, m, "family too small"))
    for level in range(1, min(profile.k, m) + 1):
        allowed = profile.levels[level - 1]
        for combo in colex_combinations(m, level):
            bits = masks[combo[0]]
            for j in combo[1:]:
                bits &= masks[j]
            observed = profile.value(bits.bit_count())
            if observed not in allowed:
                if cap is not None and len(violations) >= cap:
                    return VerificationReport(False, tuple(violations), truncated=True)
                violations.append(Violation(combo, level, observed))
    return VerificationReport(not violations, tuple(violations))


def is_valid(family: SetFamily, profile: IntersectionProfile) -> bool:
    return verify_family(family, profile, cap=0).valid


@dataclass(frozen=True)
class LiuConfiguration:
    """Paired families ``A_r ⊆ B_r`` with cross intersections in ``L``."""

    lower: SetFamily
    upper: SetFamily
    L: frozenset[int] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        object.__setattr__(self, "L", frozenset(self.L))
        if len(self.lower) != len(self.upper):
            raise ParameterError(
                f"lower has {len(self.lower)} members, upper has {len(self.upper)}"
            )
        if self.lower.n != self.upper.n:
            raise ContextError(f"ground sizes differ: {self.lower.n} vs {self.upper.n}")

    @property
    def n(self) -> int:
        return self.lower.n

    def __len__(self) -> int:
        return len(self.lower)

    def lex_sorted(self) -> LiuConfiguration:
        """Sort pairs by the lower member, moving upper members in tandem."""
        order = sorted(range(len(self)), key=lambda r: self.lower[r].bits)
        return LiuConfiguration(
            SetFamily(self.n, tuple(self.lower[r] for r in order)),
            SetFamily(self.n, tuple(self.upper[r] for r in order)),
            self.L,
        )


def verify_liu_config(
    cfg: LiuConfiguration, cap: int | None = DEFAULT_VIOLATION_CAP
) -> VerificationReport:
    violations: list[Violation] = []

    def add(v: Violation) -> bool:
        if cap is not None and len(violations) >= cap:
            return False
        violations.append(v)
        return True

    a, b = cfg.lower.masks, cfg.upper.masks
    m = len(a)
    for r in range(m):
        if a[r] & ~b[r]:
            if not add(Violation((r,), 1, (a[r] & ~b[r]).bit_count(), "containment")):
                return VerificationReport(False, tuple(violations), True)
        size = a[r].bit_count()
        if size in cfg.L:
            if not add(Violation((r,), 1, size, "own size in L")):
                return VerificationReport(False, tuple(violations), True)
    for r in range(m):
        for s in range(m):
            if r != s:
                size = (a[r] & b[s]).bit_count()
                if size not in cfg.L:
                    if not add(Violation((r, s), 2, size, "cross meet")):
                        return VerificationReport(False, tuple(violations), True)
    return VerificationReport(not violations, tuple(violations))

