"""Exact maximum [n, p, alpha]-families by branch and bound.

Members are added in increasing lex order, so each family is reached along
exactly one path. Pairwise constraints are precomputed as an adjacency
bitset over the candidate sets (the subsets whose size passes level 1);
constraints of level three and up are checked incrementally against cached
meets of the current family. A branch is cut when the current size plus a
greedy colouring bound of the pairwise-compatibility graph on the remaining
candidates cannot beat the incumbent.

With ``workers=1`` the returned witness is the lex-least maximum family.

The optional canonical mode trades that guarantee for speed: at every node
the remaining candidates are split into orbits of the stabiliser of the
current family (two candidates are equivalent when they meet every Venn
cell of the family in the same number of points), and only one member per
orbit is branched on.
"""

from __future__ import annotations

import multiprocessing as mp
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations

from .bounds import bound_report
from .errors import DuplicationError, ParameterError, VerificationError
from .family import SetFamily, Subset
from .profile import IntersectionProfile, is_valid

CHECK_EVERY = 1024
WORKERS_ENV = "TRISLICE_WORKERS"


@dataclass(frozen=True)
class SearchBudget:
    max_nodes: int | None = None
    max_time: float | None = None  # seconds
    workers: int = 1

    def __post_init__(self) -> None:
        if self.workers < 1:
            raise ParameterError(f"workers must be at least 1, got {self.workers}")
        if self.max_nodes is not None and self.max_nodes < 1:
            raise ParameterError("max_nodes must be positive")
        if self.max_time is not None and self.max_time <= 0:
            raise ParameterError("max_time must be positive")


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, "1")))
    except ValueError:
        return 1


@dataclass(frozen=True)
class SearchOutcome:
    n: int
    profile: IntersectionProfile
    max_size: int
    witness: SetFamily | None
    exhausted: bool
    nodes_visited: int
    elapsed: float
    infeasible: bool = False
    bound_cutoff: bool = False
    notes: tuple[str, ...] = field(default_factory=tuple)


def extend_check(family: SetFamily, candidate: Subset, profile: IntersectionProfile) -> bool:
    """Whether ``family + [candidate]`` satisfies every constraint that involves ``candidate``."""
    if any(a.bits == candidate.bits for a in family):
        raise DuplicationError(f"{candidate} is already a member")
    if candidate.n != family.n:
        raise ParameterError(f"candidate has ground size {candidate.n}, family {family.n}")
    if not profile.allows(1, len(candidate)):
        return False
    masks = family.masks
    for level in range(2, profile.k + 1):
        for others in combinations(masks, level - 1):
            bits = candidate.bits
            for b in others:
                bits &= b
            if not profile.allows(level, bits.bit_count()):
                return False
    return True


class _Budget(Exception):
    pass


class _Cutoff(Exception):
    pass


class _Engine:
    """DFS state shared by serial and per-subtree parallel runs."""

    def __init__(
        self,
        n: int,
        profile: IntersectionProfile,
        max_nodes: int | None,
        deadline: float | None,
        cap: int | None,
    ) -> None:
        self.n = n
        self.profile = profile
        self.k = profile.k
        self.p = profile.modulus
        self.cands = [b for b in range(1 << n) if profile.allows(1, b.bit_count())]
        size = len(self.cands)
        self.all_mask = (1 << size) - 1
        if self.k >= 2:
            allowed2 = profile.levels[1]
            p = self.p
            adj = []
            for i, a in enumerate(self.cands):
                row = 0
                for j, b in enumerate(self.cands):
                    if i != j:
                        v = (a & b).bit_count()
                        if (v % p if p else v) in allowed2:
                            row |= 1 << j
                adj.append(row)
        else:
            adj = [self.all_mask ^ (1 << i) for i in range(size)]
        self.adj = adj
        self.higher_levels = [profile.levels[j] for j in range(2, self.k)]
        self.max_nodes = max_nodes
        self.deadline = deadline
        self.cap = cap
        self.nodes = 0
        self.best = 0
        self.best_family: tuple[int, ...] = ()
        self.best_from_dfs = True
        # parallel runs: shared incumbent size, pruned strictly
        self.shared_best = None
        self.shared_nodes = None

    # -- bookkeeping ---------------------------------------------------
    def seed(self, family: tuple[int, ...]) -> None:
        if len(family) > self.best:
            self.best = len(family)
            self.best_family = family
            self.best_from_dfs = False

    def _tick(self) -> None:
        self.nodes += 1
        if self.nodes % CHECK_EVERY:
            return
        total = self.nodes
        if self.shared_nodes is not None:
            with self.shared_nodes.get_lock():
                self.shared_nodes.value += CHECK_EVERY
                total = self.shared_nodes.value
        if self.max_nodes is not None and total >= self.max_nodes:
            raise _Budget
        if self.deadline is not None and time.monotonic() >= self.deadline:
            raise _Budget

    def _floor(self) -> tuple[int, bool]:
        """(incumbent size, whether a tie may be cut)."""
        best, strict_ok = self.best, self.best_from_dfs
        if self.shared_best is not None:
            shared = self.shared_best.value
            if shared > best:
                return shared - 1, True
        return best, strict_ok

    def _record(self, family: tuple[int, ...]) -> None:
        size = len(family)
        if size > self.best or (size == self.best and not self.best_from_dfs):
            self.best = size
            self.best_family = family
            self.best_from_dfs = True
            if self.shared_best is not None:
                with self.shared_best.get_lock():
                    if size > self.shared_best.value:
                        self.shared_best.value = size
            if self.cap is not None and size >= self.cap:
                raise _Cutoff

    # -- candidate filtering ------------------------------------------
    def child_candidates(
        self, v: int, pool: int, meets: list[list[int]], above: bool = True
    ) -> tuple[int, list[list[int]]]:
        """Candidates compatible with the family after adding candidate ``v``.

        ``meets[j]`` lists the meets of all (j+1)-subsets of the current
        family, for levels needed by constraints of order three and up.
        With ``above`` only candidates after ``v`` in lex order are kept.
        """
        pool &= self.adj[v]
        if above:
            pool &= ~((2 << v) - 1)
        vmask = self.cands[v]
        if not self.higher_levels:
            return pool, meets
        depth = len(self.higher_levels)
        # masks of the new tuples containing v, one list per constrained level (3, 4, ...)
        p = self.p
        checks = []
        for j in range(min(depth, len(meets))):
            uniq = {vmask & m for m in meets[j]}
            if uniq:
                checks.append((self.higher_levels[j], tuple(uniq)))
        if checks and pool:
            cands = self.cands
            keep = 0
            rest = pool
            while rest:
                low = rest & -rest
                rest ^= low
                cm = cands[low.bit_length() - 1]
                ok = True
                for allowed, masks in checks:
                    for m in masks:
                        w = (cm & m).bit_count()
                        if (w % p if p else w) not in allowed:
                            ok = False
                            break
                    if not ok:
                        break
                if ok:
                    keep |= low
            pool = keep
        return pool, self._grow(meets, vmask)

    def _grow(self, meets: list[list[int]], vmask: int) -> list[list[int]]:
        """Meets of the family enlarged by ``vmask``, as deep as the higher levels need."""
        grown = []
        for j in range(len(self.higher_levels)):
            cur = list(meets[j]) if j < len(meets) else []
            if j == 0:
                cur.append(vmask)
            elif j - 1 < len(meets):
                cur.extend(vmask & m for m in meets[j - 1])
            grown.append(cur)
        return grown

    # -- colouring bound ------------------------------------------------
    def _suffix_bounds(self, pool: int) -> list[tuple[int, int]]:
        """Vertices of ``pool`` ascending, each with a colour bound on itself and everything above it."""
        adj = self.adj
        colour: dict[int, int] = {}
        uncoloured = pool
        c = 0
        while uncoloured:
            c += 1
            q = uncoloured
            while q:
                v = q.bit_length() - 1
                colour[v] = c
                bit = 1 << v
                uncoloured ^= bit
                q &= ~adj[v] & ~bit
        out = []
        running = 0
        for v in sorted(colour, reverse=True):
            running = max(running, colour[v])
            out.append((v, running))
        out.reverse()
        return out

    def expand(self, family: tuple[int, ...], pool: int, meets: list[list[int]]) -> None:
        self._tick()
        size = len(family)
        floor, strict_ok = self._floor()
        total = size + pool.bit_count()
        if total < floor or (total == floor and strict_ok):
            return
        for v, bound in self._suffix_bounds(pool):
            floor, strict_ok = self._floor()
            total = size + bound
            if total < floor or (total == floor and strict_ok):
                break
            child = family + (v,)
            self._record(child)
            child_pool, child_meets = self.child_candidates(v, pool, meets)
            if child_pool:
                self.expand(child, child_pool, child_meets)

    def expand_orbits(self, family: tuple[int, ...], pool: int, meets: list[list[int]]) -> None:
        """Branch on one representative per orbit of the family's stabiliser.

        Permutations of [n] fixing every member as a set are exactly those
        preserving the Venn cells of the family, so two candidates share an
        orbit iff they meet every cell in the same number of points. The
        pool is a union of orbits; after an orbit is searched through its
        representative it is dropped from the pool for later siblings.
        """
        self._tick()
        size = len(family)
        floor, strict_ok = self._floor()
        total = size + pool.bit_count()
        if total < floor or (total == floor and strict_ok):
            return
        cells = [(1 << self.n) - 1]
        for i in family:
            m = self.cands[i]
            cells = [c for cell in cells for c in (cell & m, cell & ~m) if c]
        groups: dict[tuple[int, ...], list[int]] = {}
        rest = pool
        while rest:
            low = rest & -rest
            rest ^= low
            v = low.bit_length() - 1
            cm = self.cands[v]
            groups.setdefault(tuple((cm & c).bit_count() for c in cells), []).append(v)
        orbits = sorted(groups.values())
        # first-fit colouring from the last orbit backwards: colours used by
        # a suffix bound the largest compatible set inside it
        adj = self.adj
        classes: list[int] = []
        suffix: list[int] = [0] * len(orbits)
        for oi in range(len(orbits) - 1, -1, -1):
            for v in reversed(orbits[oi]):
                for ci, cls in enumerate(classes):
                    if not adj[v] & cls:
                        classes[ci] = cls | (1 << v)
                        break
                else:
                    classes.append(1 << v)
            suffix[oi] = len(classes)
        remaining = pool
        for oi, orbit in enumerate(orbits):
            floor, strict_ok = self._floor()
            total = size + suffix[oi]
            if total < floor or (total == floor and strict_ok):
                break
            rep = orbit[0]
            child = family + (rep,)
            self._record(child)
            child_pool, child_meets = self.child_candidates(rep, remaining, meets, above=False)
            if child_pool:
                self.expand_orbits(child, child_pool, child_meets)
            for v in orbit:
                remaining &= ~(1 << v)

    def greedy(self) -> tuple[int, ...]:
        family: tuple[int, ...] = ()
        pool = self.all_mask
        meets: list[list[int]] = []
        while pool:
            v = (pool & -pool).bit_length() - 1
            family += (v,)
            pool, meets = self.child_candidates(v, pool, meets)
        return family

    def root(self, v: int) -> None:
        """Search the subtree of families whose lex-least member is candidate ``v``."""
        self._record((v,))
        pool, meets = self.child_candidates(v, self.all_mask, [])
        if pool:
            self.expand((v,), pool, meets)

    def family_of(self, idx: tuple[int, ...]) -> SetFamily:
        return SetFamily.from_masks(self.n, sorted(self.cands[i] for i in idx))


def max_family(
    n: int,
    profile: IntersectionProfile,
    budget: SearchBudget | None = None,
    *,
    use_bounds: bool = False,
    canonical: bool = False,
    seed: SetFamily | None = None,
    greedy_seed: bool = True,
) -> SearchOutcome:
    """Largest family of subsets of ``[n]`` satisfying ``profile``.

    ``use_bounds`` stops as soon as the incumbent meets the tightest proven
    bound from ``bound_report`` (the result is then only as exact as that
    bound). ``canonical`` branches on one candidate per symmetry orbit
    at every node; the maximum is unchanged but the witness is no longer
    the lex-least one. ``seed`` supplies a known valid
    family as the starting incumbent.
    """
    if n < 1:
        raise ParameterError(f"ground size must be positive, got {n}")
    if n > 24:
        raise ParameterError(f"ground size {n} is beyond exhaustive search (candidate table is 2^n)")
    budget = budget or SearchBudget()
    start = time.monotonic()
    deadline = start + budget.max_time if budget.max_time else None
    cap = None
    notes: list[str] = []
    if use_bounds:
        cap = bound_report(n, profile.modulus, profile).tightest
        if cap is not None:
            notes.append(f"stops at proven bound {cap}")

    eng = _Engine(n, profile, budget.max_nodes, deadline, cap)
    exhausted = True
    cutoff = False
    if seed is not None:
        if seed.n != n or not is_valid(seed, profile):
            raise VerificationError("seed family does not verify under the profile")
        index = {b: i for i, b in enumerate(eng.cands)}
        eng.seed(tuple(sorted(index[b] for b in seed.masks)))
    try:
        if cap is not None and eng.best >= cap:
            raise _Cutoff
        if greedy_seed:
            g = eng.greedy()
            if len(g) >= profile.k:
                eng.seed(g)
                if cap is not None and eng.best >= cap:
                    raise _Cutoff
        if canonical:
            _canonical_search(eng)
        elif budget.workers > 1 and len(eng.cands) > 1:
            _parallel_search(eng, budget.workers)
        else:
            eng.expand((), eng.all_mask, [])
    except _Budget:
        exhausted = False
    except _Cutoff:
        cutoff = True
    elapsed = time.monotonic() - start

    size = eng.best
    infeasible = size < profile.k
    witness = None if infeasible else eng.family_of(eng.best_family)
    if witness is not None and not is_valid(witness, profile):
        raise VerificationError(f"search produced a family that fails {profile}: {witness}")
    if infeasible and exhausted:
        notes.append(f"no family with {profile.k} members exists; largest partial family has {size}")
    return SearchOutcome(
        n,
        profile,
        size,
        witness,
        exhausted,
        eng.nodes,
        elapsed,
        infeasible,
        cutoff,
        tuple(notes),
    )


def _canonical_search(eng: _Engine) -> None:
    eng.best_from_dfs = True
    eng.expand_orbits((), eng.all_mask, [])


# -- parallel ------------------------------------------------------------

_WORKER: _Engine | None = None


def _init_worker(n, profile, max_nodes, deadline, cap, shared_best, shared_nodes):
    global _WORKER
    eng = _Engine(n, profile, max_nodes, deadline, cap)
    eng.shared_best = shared_best
    eng.shared_nodes = shared_nodes
    _WORKER = eng


def _run_root(v: int):
    eng = _WORKER
    assert eng is not None
    eng.best, eng.best_family, eng.best_from_dfs, eng.nodes = 0, (), True, 0
    status = "done"
    try:
        eng.root(v)
    except _Budget:
        status = "budget"
    except _Cutoff:
        status = "cutoff"
    return v, eng.best, eng.best_family, eng.nodes, status


def _parallel_search(eng: _Engine, workers: int) -> None:
    ctx = mp.get_context("fork") if "fork" in mp.get_all_start_methods() else mp.get_context()
    shared_best = ctx.Value("i", eng.best)
    shared_nodes = ctx.Value("q", 0)
    results = []
    with ProcessPoolExecutor(
        max_workers=workers,
        mp_context=ctx,
        initializer=_init_worker,
        initargs=(eng.n, eng.profile, eng.max_nodes, eng.deadline, eng.cap, shared_best, shared_nodes),
    ) as pool:
        for res in pool.map(_run_root, range(len(eng.cands))):
            results.append(res)
    statuses = set()
    for v, best, fam, nodes, status in sorted(results):
        eng.nodes += nodes
        statuses.add(status)
        if best > eng.best or (best == eng.best and not eng.best_from_dfs and best):
            eng.best, eng.best_family, eng.best_from_dfs = best, fam, True
    if "cutoff" in statuses:
        raise _Cutoff
    if "budget" in statuses:
        raise _Budget


def certify(outcome: SearchOutcome, profile: IntersectionProfile | None = None) -> bool:
    """Re-verify an outcome's witness independently of the search."""
    profile = profile or outcome.profile
    if outcome.witness is None:
        return outcome.infeasible
    return len(outcome.witness) == outcome.max_size and is_valid(outcome.witness, profile)
