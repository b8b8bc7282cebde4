"""Subsets of [n] as bit-vectors, and families of them.

A subset of ``[n] = {1, ..., n}`` is stored as a Python int with element 1 at
the most significant of the ``n`` positions and element ``n`` at bit 0. With
that layout, comparing the ints compares characteristic vectors
lexicographically from the left, so the lex order used by the triangular
constructions is a single integer comparison. Python ints have no width
ceiling, so there is no separate multi-word path.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from functools import total_ordering
from pathlib import Path
from typing import Iterable, Iterator, Sequence

from .arith import require_prime
from .errors import ContextError, DuplicationError, ParameterError, WidthError


def element_bit(i: int, n: int) -> int:
    """Bit mask of element ``i`` (1-based) in ground set ``[n]``."""
    if not 1 <= i <= n:
        raise WidthError(f"element {i} outside ground set [1..{n}]")
    return 1 << (n - i)


def full_mask(n: int) -> int:
    return (1 << n) - 1


@total_ordering
@dataclass(frozen=True)
class Subset:
    """A subset of ``[n]``; ordered lexicographically by characteristic vector."""

    n: int
    bits: int

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ParameterError(f"ground size must be nonnegative, got {self.n}")
        if self.bits < 0 or self.bits >> self.n:
            raise WidthError(f"bits {self.bits:#x} do not fit ground size {self.n}")

    @classmethod
    def from_elements(cls, elements: Iterable[int], n: int) -> Subset:
        bits = 0
        for i in elements:
            bits |= element_bit(i, n)
        return cls(n, bits)

    @classmethod
    def empty(cls, n: int) -> Subset:
        return cls(n, 0)

    @classmethod
    def full(cls, n: int) -> Subset:
        return cls(n, full_mask(n))

    def elements(self) -> tuple[int, ...]:
        return tuple(i for i in range(1, self.n + 1) if self.bits >> (self.n - i) & 1)

    def __contains__(self, i: int) -> bool:
        return 1 <= i <= self.n and bool(self.bits >> (self.n - i) & 1)

    def __len__(self) -> int:
        return self.bits.bit_count()

    def __iter__(self) -> Iterator[int]:
        return iter(self.elements())

    def _same_ground(self, other: Subset) -> None:
        if self.n != other.n:
            raise ContextError(f"ground sizes differ: {self.n} vs {other.n}")

    def __and__(self, other: Subset) -> Subset:
        self._same_ground(other)
        return Subset(self.n, self.bits & other.bits)

    def __or__(self, other: Subset) -> Subset:
        self._same_ground(other)
        return Subset(self.n, self.bits | other.bits)

    def complement(self) -> Subset:
        return Subset(self.n, full_mask(self.n) ^ self.bits)

    def issubset(self, other: Subset) -> bool:
        self._same_ground(other)
        return self.bits & ~other.bits == 0

    def __lt__(self, other: Subset) -> bool:
        self._same_ground(other)
        return self.bits < other.bits

    def __str__(self) -> str:
        return "{" + ",".join(map(str, self.elements())) + "}"


class Ordering(enum.IntEnum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


def char_vector(a: Subset, n: int | None = None) -> tuple[int, ...]:
    """Characteristic vector of ``a``: entry ``i-1`` is 1 iff ``i`` is in ``a``."""
    if n is None:
        n = a.n
    elems = a.elements()
    if elems and elems[-1] > n:
        raise WidthError(f"{a} does not fit ground size {n}")
    return tuple(int(i in a) for i in range(1, n + 1))


def lex_compare(x: Subset, y: Subset) -> Ordering:
    if x.n != y.n:
        raise ContextError(f"ground sizes differ: {x.n} vs {y.n}")
    if x.bits == y.bits:
        return Ordering.EQUAL
    return Ordering.LESS if x.bits < y.bits else Ordering.GREATER


def meet_size(sets: Sequence[Subset], modulus: int | None = None) -> int:
    """Size of the common intersection of ``sets``, reduced mod ``modulus`` if given."""
    if not sets:
        raise ParameterError("meet_size needs at least one set")
    n = sets[0].n
    bits = sets[0].bits
    for s in sets[1:]:
        if s.n != n:
            raise ContextError(f"ground sizes differ: {n} vs {s.n}")
        bits &= s.bits
    size = bits.bit_count()
    if modulus is not None:
        require_prime(modulus)
        size %= modulus
    return size


@dataclass(frozen=True)
class SetFamily:
    """An ordered list of distinct subsets of ``[n]``."""

    n: int
    members: tuple[Subset, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "members", tuple(self.members))
        seen: dict[int, int] = {}
        for idx, a in enumerate(self.members):
            if a.n != self.n:
                raise ContextError(f"member {a} has ground size {a.n}, family has {self.n}")
            if a.bits in seen:
                raise DuplicationError(
                    f"members {seen[a.bits] + 1} and {idx + 1} are both {a}"
                )
            seen[a.bits] = idx

    @classmethod
    def from_lists(cls, n: int, sets: Iterable[Iterable[int]]) -> SetFamily:
        return cls(n, tuple(Subset.from_elements(s, n) for s in sets))

    @classmethod
    def from_masks(cls, n: int, masks: Iterable[int]) -> SetFamily:
        return cls(n, tuple(Subset(n, b) for b in masks))

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[Subset]:
        return iter(self.members)

    def __getitem__(self, i: int) -> Subset:
        return self.members[i]

    @property
    def masks(self) -> tuple[int, ...]:
        return tuple(a.bits for a in self.members)

    def to_lists(self) -> list[list[int]]:
        return [list(a.elements()) for a in self.members]

    def replace(self, i: int, new: Subset) -> SetFamily:
        members = list(self.members)
        members[i] = new
        return SetFamily(self.n, tuple(members))

    def lex_sorted(self) -> SetFamily:
        return SetFamily(self.n, tuple(sorted(self.members)))

    def is_lex_sorted(self) -> bool:
        return all(a.bits < b.bits for a, b in zip(self.members, self.members[1:]))

    def __str__(self) -> str:
        return "{" + ",".join(str(a) for a in self.members) + "}"

    # canonical JSONL form: {"n": ..., "sets": [[...], ...]}
    def to_json(self) -> str:
        return json.dumps({"n": self.n, "sets": self.to_lists()})

    @classmethod
    def from_json(cls, line: str | dict) -> SetFamily:
        obj = json.loads(line) if isinstance(line, str) else line
        try:
            n = obj["n"]
            sets = obj["sets"]
        except (KeyError, TypeError) as exc:
            raise ParameterError(f"family object needs 'n' and 'sets': {obj!r}") from exc
        if not isinstance(n, int) or n < 0:
            raise ParameterError(f"'n' must be a nonnegative integer, got {n!r}")
        return cls.from_lists(n, sets)


def read_families(path: str | Path) -> list[SetFamily]:
    families = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                families.append(SetFamily.from_json(line))
            except json.JSONDecodeError as exc:
                raise ParameterError(f"{path}:{lineno}: malformed JSON ({exc.msg})") from exc
    return families


def write_families(path: str | Path, families: Iterable[SetFamily]) -> None:
    with open(path, "w") as fh:
        for fam in families:
            fh.write(fam.to_json() + "\n")


def parse_subset(text: str, n: int) -> Subset:
    """Parse the canonical text form ``{1,3,7}``."""
    body = text.strip()
    if not (body.startswith("{") and body.endswith("}")):
        raise ParameterError(f"subset text must look like '{{1,3}}', got {text!r}")
    inner = body[1:-1].strip()
    elems = [int(tok) for tok in inner.split(",")] if inner else []
    return Subset.from_elements(elems, n)


def all_subsets(n: int) -> Iterator[Subset]:
    """Every subset of ``[n]`` in ascending lex order."""
    for bits in range(1 << n):
        yield Subset(n, bits)
