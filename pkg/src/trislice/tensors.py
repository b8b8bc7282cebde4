"""The 2-tensors behind the triangular slice-rank arguments, as explicit matrices.

Rows and columns are indexed by family members in the order the argument
needs (lex order, or size order). Each builder checks the theorem's
hypotheses first; ``force=True`` skips that and builds anyway, so the
certificate shows which structural claim breaks.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import comb
from typing import Callable, Iterable, Mapping, Sequence, Union

from .arith import require_prime
from .errors import HypothesisError, OrderError, ParameterError
from .family import SetFamily
from .linalg import (
    ExactMatrix,
    ResidueMatrix,
    TriangularityCertificate,
    rank,
    triangularity,
)
from .profile import LiuConfiguration, verify_liu_config


@dataclass(frozen=True)
class ProofTensor:
    matrix: ResidueMatrix | ExactMatrix
    certificate: TriangularityCertificate

    def rank(self) -> int:
        return rank(self.matrix)

    @property
    def dim(self) -> int:
        return self.matrix.dim


def _first_bit(n: int) -> int:
    return 1 << (n - 1) if n else 0


def _shifted_meet_product(x: int, y: int, first: int, rest: int, ls: Sequence[int]) -> int:
    # prod_i (x_1 + sum_{j>=2} x_j y_j - l_i): y_1 is replaced by 1
    inner = (1 if x & first else 0) + (x & y & rest).bit_count()
    out = 1
    for l in ls:
        out *= inner - l
    return out


def snevily_matrix(
    family: SetFamily, L: Iterable[int], p: int, force: bool = False
) -> ProofTensor:
    """Modified Snevily tensor over GF(p) on a lex-sorted family.

    Hypotheses: every size mod p avoids ``L`` and every pairwise meet mod p
    lies in ``L``. Under them the matrix is lower-triangular with nonzero
    diagonal in lex order.
    """
    require_prime(p)
    ls = sorted({v % p for v in L})
    if not ls:
        raise ParameterError("L must be nonempty")
    if not family.is_lex_sorted():
        raise OrderError("family must be sorted ascending in lex order")
    masks = family.masks
    if not force:
        for r, a in enumerate(masks):
            if a.bit_count() % p in ls:
                raise HypothesisError(
                    f"member {r + 1} has size {a.bit_count()} = {a.bit_count() % p} mod {p}, in L"
                )
        for r in range(len(masks)):
            for s in range(r + 1, len(masks)):
                v = (masks[r] & masks[s]).bit_count() % p
                if v not in ls:
                    raise HypothesisError(
                        f"members ({r + 1},{s + 1}) meet in {v} mod {p}, not in L"
                    )
    first = _first_bit(family.n)
    rest = (1 << family.n) - 1 ^ first
    rows = tuple(
        tuple(_shifted_meet_product(x, y, first, rest, ls) % p for y in masks) for x in masks
    )
    mat = ResidueMatrix(p, rows)
    return ProofTensor(mat, triangularity(mat))


def snevily_full_matrix(family: SetFamily, L: Iterable[int], p: int) -> ResidueMatrix:
    """The unmodified tensor prod_i (<x, y> - l_i) mod p."""
    require_prime(p)
    ls = sorted({v % p for v in L})
    masks = family.masks
    rows = []
    for x in masks:
        row = []
        for y in masks:
            v = 1
            for l in ls:
                v *= (x & y).bit_count() - l
            row.append(v % p)
        rows.append(tuple(row))
    return ResidueMatrix(p, tuple(rows))


def is_size_sorted(family: SetFamily) -> bool:
    sizes = [len(a) for a in family]
    return all(a <= b for a, b in zip(sizes, sizes[1:]))


def size_sorted(family: SetFamily) -> SetFamily:
    """Stable sort by member size; equal sizes keep input order."""
    return SetFamily(family.n, tuple(sorted(family.members, key=len)))


def frankl_wilson_matrix(
    family: SetFamily, L: Iterable[int], force: bool = False
) -> ProofTensor:
    """Integer tensor prod_i (<x, y> - l_i + [l_i == |Y|]) on a size-sorted family."""
    ls = sorted(set(L))
    if not ls:
        raise ParameterError("L must be nonempty")
    if any(v < 0 for v in ls):
        raise ParameterError("L must hold nonnegative integers")
    if not is_size_sorted(family):
        raise OrderError("family must be sorted by nondecreasing size")
    masks = family.masks
    if not force:
        for r in range(len(masks)):
            for s in range(r + 1, len(masks)):
                v = (masks[r] & masks[s]).bit_count()
                if v not in ls:
                    raise HypothesisError(f"members ({r + 1},{s + 1}) meet in {v}, not in L")
    rows = []
    for x in masks:
        row = []
        for y in masks:
            meet, ysize = (x & y).bit_count(), y.bit_count()
            v = 1
            for l in ls:
                v *= meet - l + (1 if l == ysize else 0)
            row.append(v)
        rows.append(tuple(row))
    mat = ExactMatrix(tuple(rows))
    return ProofTensor(mat, triangularity(mat))


def liu_matrix(cfg: LiuConfiguration, force: bool = False) -> ProofTensor:
    """Rows from the lower family, columns from the upper family, lower lex-sorted."""
    if not cfg.L:
        raise ParameterError("L must be nonempty")
    if not cfg.lower.is_lex_sorted():
        raise OrderError("lower family must be sorted ascending in lex order")
    if not force:
        report = verify_liu_config(cfg, cap=1)
        if not report.valid:
            raise HypothesisError(f"configuration invalid: {report.violations[0]}")
    ls = sorted(cfg.L)
    first = _first_bit(cfg.n)
    rest = (1 << cfg.n) - 1 ^ first
    rows = tuple(
        tuple(_shifted_meet_product(x, y, first, rest, ls) for y in cfg.upper.masks)
        for x in cfg.lower.masks
    )
    mat = ExactMatrix(rows)
    return ProofTensor(mat, triangularity(mat))


Scalar = Union[int, Fraction]
Vector = tuple[int, ...]
Shift = Union[Callable[[Vector], Scalar], Mapping[Vector, Scalar], Scalar]


@dataclass(frozen=True)
class SliceTerm:
    """One rank-1 summand g_S(x) * y_S. ``monomial`` holds 1-based indices."""

    monomial: frozenset[int]
    coefficients: Mapping[Vector, Scalar]

    def __call__(self, x: Vector, y: Vector) -> Scalar:
        if all(y[t - 1] for t in self.monomial):
            return self.coefficients.get(tuple(x), 0)
        return 0


@dataclass(frozen=True)
class SliceDecomposition:
    terms: tuple[SliceTerm, ...]
    l: int
    m: int

    @property
    def bound(self) -> int:
        return sum(comb(self.m, i) for i in range(self.l + 1))

    def evaluate(self, x: Vector, y: Vector) -> Scalar:
        return sum((t(x, y) for t in self.terms), 0)


def _shift_value(f: Shift, x: Vector) -> Scalar:
    if callable(f):
        return f(x)
    if isinstance(f, Mapping):
        return f[x]
    return f


def slice_decompose(
    l: int,
    m: int,
    shifts: Sequence[Shift],
    rows: Iterable[Vector] | None = None,
) -> SliceDecomposition:
    """Expand prod_{i=1}^{l} (<x, y> + f_i(x)) into monomials y_S with |S| <= l.

    ``shifts`` holds the l functions f_i, each a callable, a table keyed by
    row vector, or a constant. ``rows`` is the row domain (default: all of
    {0,1}^m). Uses y_j^2 = y_j; terms whose coefficient vanishes on every
    row are dropped.
    """
    if l < 0 or m < 0:
        raise ParameterError("l and m must be nonnegative")
    if l > m:
        raise ParameterError(f"product length l={l} exceeds dimension m={m}")
    if len(shifts) != l:
        raise ParameterError(f"need {l} shifts, got {len(shifts)}")
    domain = [tuple(r) for r in (product((0, 1), repeat=m) if rows is None else rows)]
    tables: dict[frozenset[int], dict[Vector, Scalar]] = {}
    for x in domain:
        if len(x) != m:
            raise ParameterError(f"row {x} has length {len(x)}, expected {m}")
        support = [j + 1 for j in range(m) if x[j]]
        poly: dict[frozenset[int], Scalar] = {frozenset(): 1}
        for f in shifts:
            c = _shift_value(f, x)
            nxt: dict[frozenset[int], Scalar] = {}
            for s, coef in poly.items():
                nxt[s] = nxt.get(s, 0) + coef * c
                for j in support:
                    key = s | {j}
                    nxt[key] = nxt.get(key, 0) + coef
            poly = nxt
        for s, coef in poly.items():
            if coef:
                tables.setdefault(s, {})[x] = coef
    order = sorted(tables, key=lambda s: (len(s), sorted(s)))
    terms = tuple(SliceTerm(s, tables[s]) for s in order)
    return SliceDecomposition(terms, l, m)


def product_tensor(x: Vector, y: Vector, shifts: Sequence[Shift]) -> Scalar:
    """Direct evaluation of prod_i (<x, y> + f_i(x))."""
    inner = sum(a * b for a, b in zip(x, y))
    out: Scalar = 1
    for f in shifts:
        out *= inner + _shift_value(f, tuple(x))
    return out
