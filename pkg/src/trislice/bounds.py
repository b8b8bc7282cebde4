"""Closed-form upper bounds on family sizes, and an aggregator.

Every evaluator is exact integer arithmetic. ``bound_report`` only lists a
bound after checking all of its hypotheses against the profile; each entry
records which hypotheses it checked.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb

from .arith import binom_sum, is_prime
from .errors import ParameterError
from .profile import IntersectionProfile


def snevily_bound(n: int, s: int) -> int:
    """sum_{i<=s} C(n-1, i): sizes and pairwise meets in disjoint residue sets, |meets| = s."""
    _check_n(n)
    if not 0 <= s <= n - 1:
        raise ParameterError(f"need 0 <= s <= n-1, got s={s}, n={n}")
    return binom_sum(n - 1, s)


def frankl_wilson_bound(n: int, s: int) -> int:
    """sum_{i<=s} C(n, i): pairwise meets take at most s distinct exact values."""
    _check_n(n)
    if not 0 <= s <= n:
        raise ParameterError(f"need 0 <= s <= n, got s={s}, n={n}")
    return binom_sum(n, s)


def fw_positive_L_bound(n: int, s: int) -> int:
    """The Frankl-Wilson refinement when every allowed meet size is positive."""
    return snevily_bound(n, s)


def snevily_conjecture_value(n: int, s: int) -> int:
    """C(n, s). Conjectured, not proven."""
    _check_n(n)
    if not 0 <= s <= n:
        raise ParameterError(f"need 0 <= s <= n, got s={s}, n={n}")
    return comb(n, s)


def sharper_bound(n: int, p: int, size_l: int) -> int:
    """Reverse odd-town type bound: sizes = 0 mod p, meets in a symmetric L."""
    _check_n(n)
    if not is_prime(p):
        raise ParameterError(f"modulus must be prime, got {p}")
    if size_l < 1:
        raise ParameterError(f"|L| must be at least 1, got {size_l}")
    if n % p == 0:
        if n < 2:
            raise ParameterError(f"need n >= 2 when p | n, got n={n}")
        return binom_sum(n - 2, size_l)
    return binom_sum(n - 1, size_l)


def generalized_rot_bound(n: int, p: int, k: int, size_l: int) -> int:
    """Bound for k-level profiles (0, ..., 0, L), k > 2."""
    _check_n(n)
    if not is_prime(p):
        raise ParameterError(f"modulus must be prime, got {p}")
    if k <= 2:
        raise ParameterError(f"k must exceed 2, got {k}")
    if size_l < 1:
        raise ParameterError(f"|L| must be at least 1, got {size_l}")
    halvings = k - 2 if n % p == 0 else k - 3
    top = n // 2**halvings - 2
    if top < 0:
        raise ParameterError(
            f"floor({n}/2^{halvings}) - 2 = {top} is negative; the bound is undefined here"
        )
    return binom_sum(top, size_l) + k - 2


def _check_n(n: int) -> None:
    if n < 1:
        raise ParameterError(f"ground size must be positive, got {n}")


@dataclass(frozen=True)
class BoundEntry:
    name: str
    value: int | None
    applicable: bool
    note: str
    hypotheses: tuple[str, ...] = ()
    proven: bool = True


@dataclass(frozen=True)
class BoundReport:
    n: int
    p: int | None
    profile: IntersectionProfile
    entries: tuple[BoundEntry, ...] = field(default_factory=tuple)

    @property
    def applicable(self) -> tuple[BoundEntry, ...]:
        return tuple(e for e in self.entries if e.applicable and e.proven)

    @property
    def tightest(self) -> int | None:
        vals = [e.value for e in self.applicable]
        return min(vals) if vals else None

    def value_of(self, name: str) -> int | None:
        for e in self.entries:
            if e.name == name and e.applicable:
                return e.value
        return None

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "p": self.p,
            "profile": str(self.profile),
            "entries": [
                {
                    "name": e.name,
                    "value": e.value,
                    "applicable": e.applicable,
                    "proven": e.proven,
                    "note": e.note,
                    "hypotheses": list(e.hypotheses),
                }
                for e in self.entries
            ],
            "tightest": self.tightest,
        }


SNEVILY = "snevily"
CONJECTURE = "snevily-conjecture"
SHARPER = "sharper"
GENERALIZED_ROT = "generalized-reverse-oddtown"
FRANKL_WILSON = "frankl-wilson"
FW_POSITIVE = "frankl-wilson-positive-L"


def bound_report(n: int, p: int | None, profile: IntersectionProfile) -> BoundReport:
    """All bounds whose hypotheses the profile satisfies, for ground size ``n``.

    ``p`` must agree with the profile's modulus when both are given.
    Inapplicable bounds are listed with ``applicable=False`` and a note.
    """
    _check_n(n)
    if p is not None and profile.modulus is not None and p != profile.modulus:
        raise ParameterError(f"p={p} disagrees with profile modulus {profile.modulus}")
    entries: list[BoundEntry] = []
    if profile.is_modular:
        entries.extend(_modular_entries(n, profile))
    else:
        entries.extend(_exact_entries(n, profile))
    return BoundReport(n, profile.modulus, profile, tuple(entries))


def _modular_entries(n: int, prof: IntersectionProfile) -> list[BoundEntry]:
    p = prof.modulus
    assert p is not None
    out: list[BoundEntry] = []
    if prof.k == 2:
        sizes, meets = prof.levels
        s = len(meets)
        if sizes & meets:
            out.append(BoundEntry(SNEVILY, None, False, "size and meet residues overlap"))
        else:
            hyps = ("p prime", "size residues disjoint from meet residues")
            # s may exceed n-1 for tiny n; C(n-1, i) = 0 for i > n-1 then
            out.append(BoundEntry(SNEVILY, binom_sum(n - 1, s), True, f"s = |L_2| = {s}", hyps))
            out.append(
                BoundEntry(
                    CONJECTURE,
                    comb(n, s),
                    True,
                    "conjectured, not a theorem",
                    hyps,
                    proven=False,
                )
            )
        if sizes == {0} and prof.negation_closed(2) and 0 not in meets:
            hyps = ("p prime", "sizes = 0 mod p", "L = -L", "0 not in L")
            if n % p == 0 and n < 2:
                out.append(BoundEntry(SHARPER, None, False, "needs n >= 2 when p | n"))
            else:
                note = "p | n branch" if n % p == 0 else "p does not divide n"
                out.append(BoundEntry(SHARPER, sharper_bound(n, p, s), True, note, hyps))
        else:
            out.append(BoundEntry(SHARPER, None, False, "needs sizes = {0}, L = -L, 0 not in L"))
    elif prof.k > 2:
        last = prof.levels[-1]
        if prof.is_zero_then() and prof.negation_closed() and 0 not in last:
            hyps = ("p prime", "levels 1..k-1 = {0}", "L = -L", "0 not in L", "k > 2")
            try:
                val = generalized_rot_bound(n, p, prof.k, len(last))
            except ParameterError as exc:
                out.append(BoundEntry(GENERALIZED_ROT, None, False, str(exc)))
            else:
                note = "p | n branch" if n % p == 0 else "p does not divide n"
                out.append(BoundEntry(GENERALIZED_ROT, val, True, note, hyps))
        else:
            out.append(
                BoundEntry(GENERALIZED_ROT, None, False, "needs shape (0,...,0,L), L = -L, 0 not in L")
            )
    return out


def _exact_entries(n: int, prof: IntersectionProfile) -> list[BoundEntry]:
    out: list[BoundEntry] = []
    if prof.k != 2:
        return out
    meets = prof.levels[1]
    s = len(meets)
    hyps = ("exact pairwise meets", f"|L| = {s}")
    out.append(BoundEntry(FRANKL_WILSON, binom_sum(n, s), True, f"s = |L_2| = {s}", hyps))
    if 0 in meets:
        out.append(BoundEntry(FW_POSITIVE, None, False, "0 in L"))
    else:
        out.append(
            BoundEntry(FW_POSITIVE, binom_sum(n - 1, s), True, "all meet sizes positive", hyps)
        )
    return out
