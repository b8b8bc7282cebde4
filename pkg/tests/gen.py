"""Random valid instances and independent brute-force oracles for the tests."""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations, permutations

from trislice.family import SetFamily, Subset
from trislice.profile import IntersectionProfile, LiuConfiguration


def _elements(bits: int, n: int) -> set[int]:
    return {i for i in range(1, n + 1) if bits >> (n - i) & 1}


def naive_ok(sets: list[set[int]], levels, p) -> bool:
    """Check every i-wise intersection directly on Python sets."""
    if len(sets) < len(levels):
        return False
    for i, allowed in enumerate(levels, 1):
        for combo in combinations(sets, i):
            size = len(set.intersection(*combo))
            if p is not None:
                size %= p
            if size not in allowed:
                return False
    return True


def greedy_family(rng: random.Random, n: int, levels, p, limit: int | None = None) -> list[set[int]]:
    """Shuffle all subsets and keep each one that leaves the family valid."""
    order = list(range(1 << n))
    rng.shuffle(order)
    chosen: list[set[int]] = []
    for bits in order:
        s = _elements(bits, n)
        trial = chosen + [s]
        ok = True
        for i, allowed in enumerate(levels, 1):
            for combo in combinations(chosen, i - 1):
                size = len(set.intersection(s, *combo))
                if p is not None:
                    size %= p
                if size not in allowed:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            chosen = trial
            if limit is not None and len(chosen) >= limit:
                break
    return chosen


def random_subset_of(rng: random.Random, pool: range | list[int]) -> set[int]:
    return {x for x in pool if rng.random() < 0.5}


def snevily_instance(rng: random.Random):
    """(family, L, p): sizes mod p avoid L, pairwise meets mod p lie in L."""
    while True:
        n = rng.randint(1, 10)
        p = rng.choice((2, 3))
        size_l = rng.randint(1, min(2, p - 1))
        L = set(rng.sample(range(p), size_l))
        K = set(range(p)) - L
        sets = greedy_family(rng, n, [K, L], p, limit=rng.randint(1, 40))
        if sets:
            return SetFamily.from_lists(n, sets), L, p


def fw_instance(rng: random.Random):
    """(family, L): exact pairwise meets in L."""
    while True:
        n = rng.randint(1, 8)
        L = set(rng.sample(range(n + 1), rng.randint(1, min(3, n + 1))))
        sets = greedy_family(rng, n, [set(range(n + 1)), L], None, limit=rng.randint(1, 30))
        if sets:
            return SetFamily.from_lists(n, sets), L


def liu_instance(rng: random.Random, tries: int = 300):
    """(LiuConfiguration) with A_r ⊆ B_r, |A_r| ∉ L, |A_r ∩ B_s| ∈ L for r ≠ s."""
    while True:
        n = rng.randint(1, 8)
        L = set(rng.sample(range(n + 1), rng.randint(1, min(3, n + 1))))
        pairs: list[tuple[set[int], set[int]]] = []
        for _ in range(tries):
            a = random_subset_of(rng, range(1, n + 1))
            b = a | random_subset_of(rng, range(1, n + 1))
            if len(a) in L or any(a == x for x, _ in pairs):
                continue
            if all(len(a & y) in L and len(x & b) in L for x, y in pairs):
                pairs.append((a, b))
        if pairs:
            lower = SetFamily.from_lists(n, [a for a, _ in pairs])
            upper = SetFamily.from_lists(n, [b for _, b in pairs]) if _distinct(pairs) else None
            if upper is not None:
                return LiuConfiguration(lower, upper, frozenset(L))


def _distinct(pairs) -> bool:
    bs = [frozenset(b) for _, b in pairs]
    return len(set(bs)) == len(bs)


def negation_closed_sets(p: int) -> list[set[int]]:
    out = []
    for r in range(1, p + 1):
        for combo in combinations(range(p), r):
            s = set(combo)
            if {(-x) % p for x in s} == s:
                out.append(s)
    return out


def complement_instance(rng: random.Random):
    """(family, profile, index) meeting every hypothesis of the complement operation."""
    while True:
        p = rng.choice((2, 3))
        n = p * rng.randint(1, 9 // p)
        k = rng.choice((2, 3))
        L = rng.choice(negation_closed_sets(p))
        levels = [{0}] * (k - 1) + [L]
        sets = greedy_family(rng, n, levels, p, limit=rng.randint(k, 12))
        if len(sets) < k:
            continue
        fam = SetFamily.from_lists(n, sets)
        full = (1 << n) - 1
        masks = set(fam.masks)
        idx = [i for i, m in enumerate(fam.masks) if full ^ m not in masks]
        if idx:
            return fam, IntersectionProfile.modular(p, *levels), rng.choice(idx)


def trace_instance(rng: random.Random):
    """(family, profile, gamma) with consecutive disjoint levels L_t, L_t+1 for some t > 1."""
    while True:
        p = rng.choice((2, 3, None))
        n = rng.randint(3, 9)
        k = rng.randint(3, 4)
        top = p if p is not None else n + 1
        levels = [set(rng.sample(range(top), rng.randint(1, max(1, top - 1)))) for _ in range(k)]
        t = rng.randint(2, k - 1)
        levels[t] = levels[t] - levels[t - 1] or {x for x in range(top) if x not in levels[t - 1]}
        if not levels[t] or n <= t:
            continue
        sets = greedy_family(rng, n, levels, p, limit=rng.randint(k, 10))
        if len(sets) < k:
            continue
        prof = (
            IntersectionProfile.modular(p, *levels)
            if p is not None
            else IntersectionProfile.exact(*levels)
        )
        return SetFamily.from_lists(n, sets), prof, rng.randrange(len(sets))


def naive_max_family(n: int, levels, p) -> int:
    """Largest valid subfamily by trying every subfamily, largest first."""
    cands = [_elements(b, n) for b in range(1 << n)]
    cands = [s for s in cands if (len(s) % p if p else len(s)) in levels[0]]
    for r in range(len(cands), len(levels) - 1, -1):
        for combo in combinations(cands, r):
            if naive_ok(list(combo), levels, p):
                return r
    return 0


def minor_rank(rows, p: int | None) -> int:
    """Rank as the largest order of a nonzero minor (Leibniz determinants)."""
    dim = len(rows)
    for r in range(dim, 0, -1):
        for ri in combinations(range(dim), r):
            for ci in combinations(range(dim), r):
                if _det([[rows[i][j] for j in ci] for i in ri], p):
                    return r
    return 0


def _det(m, p):
    size = len(m)
    total = 0
    for perm in permutations(range(size)):
        inv = sum(1 for i in range(size) for j in range(i + 1, size) if perm[i] > perm[j])
        term = Fraction(-1 if inv % 2 else 1)
        for i in range(size):
            term *= m[i][perm[i]]
        total += term
    if p is not None:
        return int(total) % p
    return total


def subset(n: int, *elems: int) -> Subset:
    return Subset.from_elements(elems, n)
