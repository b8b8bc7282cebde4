"""Exact dense linear algebra over GF(p) and over the rationals.

No floating point anywhere: GF(p) elimination works on reduced Python ints,
rational rank goes through fraction-free (Bareiss) elimination on an integer
matrix obtained by clearing denominators row by row.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence, Union

from .arith import require_prime
from .errors import ParameterError


@dataclass(frozen=True)
class ResidueMatrix:
    """Square matrix over GF(p), entries stored reduced."""

    p: int
    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        require_prime(self.p)
        rows = tuple(tuple(int(x) % self.p for x in r) for r in self.rows)
        _check_square(rows)
        object.__setattr__(self, "rows", rows)

    @property
    def dim(self) -> int:
        return len(self.rows)

    def __getitem__(self, rc: tuple[int, int]) -> int:
        r, c = rc
        return self.rows[r][c]


@dataclass(frozen=True)
class ExactMatrix:
    """Square matrix over Q."""

    rows: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self) -> None:
        rows = tuple(tuple(Fraction(x) for x in r) for r in self.rows)
        _check_square(rows)
        object.__setattr__(self, "rows", rows)

    @property
    def dim(self) -> int:
        return len(self.rows)

    def __getitem__(self, rc: tuple[int, int]) -> Fraction:
        r, c = rc
        return self.rows[r][c]


Matrix = Union[ResidueMatrix, ExactMatrix]


def _check_square(rows: Sequence[Sequence]) -> None:
    for i, r in enumerate(rows):
        if len(r) != len(rows):
            raise ParameterError(f"row {i} has {len(r)} entries, expected {len(rows)}")


def rank_mod_p(m: ResidueMatrix) -> int:
    if m.p == 2:
        return _rank_gf2([sum(bit << j for j, bit in enumerate(r)) for r in m.rows])
    return rank_rows_mod_p([list(r) for r in m.rows], m.p)


def _rank_gf2(rows: list[int]) -> int:
    rank = 0
    rows = [r for r in rows if r]
    while rows:
        pivot = rows.pop()
        low = pivot & -pivot
        rank += 1
        rows = [r ^ pivot if r & low else r for r in rows]
        rows = [r for r in rows if r]
    return rank


def rank_rows_mod_p(rows: list[list[int]], p: int) -> int:
    """Rank of a (not necessarily square) matrix over GF(p). Mutates ``rows``."""
    require_prime(p)
    if not rows:
        return 0
    ncols = len(rows[0])
    rank = 0
    for col in range(ncols):
        pivot = next((r for r in range(rank, len(rows)) if rows[r][col] % p), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        prow = rows[rank]
        inv = pow(prow[col], -1, p)
        prow[:] = [(x * inv) % p for x in prow]
        for r in range(rank + 1, len(rows)):
            f = rows[r][col] % p
            if f:
                row = rows[r]
                rows[r] = [(a - f * b) % p for a, b in zip(row, prow)]
        rank += 1
        if rank == len(rows):
            break
    return rank


def rank_exact(m: ExactMatrix) -> int:
    return rank_rows_exact([list(r) for r in m.rows])


def rank_rows_exact(rows: Sequence[Sequence[Fraction | int]]) -> int:
    """Rank over Q of a (not necessarily square) matrix."""
    ints = []
    for r in rows:
        fr = [Fraction(x) for x in r]
        scale = lcm(*(x.denominator for x in fr)) if fr else 1
        ints.append([int(x * scale) for x in fr])
    return _bareiss_rank(ints)


def _bareiss_rank(a: list[list[int]]) -> int:
    if not a:
        return 0
    nrows, ncols = len(a), len(a[0])
    prev = 1
    rank = 0
    for col in range(ncols):
        pivot = next((r for r in range(rank, nrows) if a[r][col]), None)
        if pivot is None:
            continue
        a[rank], a[pivot] = a[pivot], a[rank]
        pv = a[rank][col]
        prow = a[rank]
        for r in range(rank + 1, nrows):
            row = a[r]
            f = row[col]
            # Bareiss step: exact division by the previous pivot
            a[r] = [(pv * x - f * y) // prev for x, y in zip(row, prow)]
        prev = pv
        rank += 1
        if rank == nrows:
            break
    return rank


def rank(m: Matrix) -> int:
    return rank_mod_p(m) if isinstance(m, ResidueMatrix) else rank_exact(m)


class Shape(enum.Enum):
    LOWER = "LowerTriangular"
    UPPER = "UpperTriangular"
    DIAGONAL = "Diagonal"
    NONE = "None"


@dataclass(frozen=True)
class TriangularityCertificate:
    """Structural facts about a matrix under a total order of its indices.

    ``lower_witness`` / ``upper_witness`` are the first entries (row, col),
    0-based and in matrix coordinates, that break lower / upper triangularity.
    """

    shape: Shape
    diagonal_all_nonzero: bool
    lower_witness: tuple[int, int] | None = None
    upper_witness: tuple[int, int] | None = None

    @property
    def witness(self) -> tuple[int, int] | None:
        return self.lower_witness if self.shape is Shape.NONE else None

    @property
    def is_lower(self) -> bool:
        return self.shape in (Shape.LOWER, Shape.DIAGONAL)

    @property
    def is_upper(self) -> bool:
        return self.shape in (Shape.UPPER, Shape.DIAGONAL)

    @property
    def triangular_nonsingular(self) -> bool:
        return self.shape is not Shape.NONE and self.diagonal_all_nonzero


def triangularity(m: Matrix, order: Iterable[int] | None = None) -> TriangularityCertificate:
    """Classify ``m`` against the index order ``order``.

    ``order`` lists the indices from least to greatest (default: natural
    order). Lower-triangular means entry (u, v) vanishes whenever u comes
    strictly before v, i.e. everything above the diagonal is zero once rows and
    columns are arranged by ``order``.
    """
    dim = m.dim
    seq = list(range(dim)) if order is None else list(order)
    if sorted(seq) != list(range(dim)):
        raise ParameterError(f"order {seq} is not a permutation of 0..{dim - 1}")
    rows = m.rows
    lower_w = upper_w = None
    for a in range(dim):
        u = seq[a]
        for b in range(a + 1, dim):
            v = seq[b]
            if lower_w is None and rows[u][v]:
                lower_w = (u, v)
            if upper_w is None and rows[v][u]:
                upper_w = (v, u)
        if lower_w is not None and upper_w is not None:
            break
    if lower_w is None and upper_w is None:
        shape = Shape.DIAGONAL
    elif lower_w is None:
        shape = Shape.LOWER
    elif upper_w is None:
        shape = Shape.UPPER
    else:
        shape = Shape.NONE
    diag = all(rows[i][i] for i in range(dim))
    return TriangularityCertificate(shape, diag, lower_w, upper_w)


def dump_matrix(m: Matrix) -> str:
    """Debug text: a header line, then one row per line."""
    if isinstance(m, ResidueMatrix):
        header = f"{m.dim} mod {m.p}"
        body = [" ".join(str(x) for x in r) for r in m.rows]
    else:
        header = f"{m.dim}"
        body = [" ".join(_fmt_fraction(x) for x in r) for r in m.rows]
    return "\n".join([header, *body]) + "\n"


def _fmt_fraction(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_matrix(text: str) -> Matrix:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ParameterError("empty matrix dump")
    head = lines[0].split()
    try:
        dim = int(head[0])
        if len(head) == 3 and head[1] == "mod":
            p = int(head[2])
        elif len(head) == 1:
            p = None
        else:
            raise ValueError
    except ValueError as exc:
        raise ParameterError(f"bad matrix header {lines[0]!r}") from exc
    body = lines[1:]
    if len(body) != dim:
        raise ParameterError(f"header says {dim} rows, found {len(body)}")
    try:
        if p is None:
            return ExactMatrix(tuple(tuple(Fraction(t) for t in ln.split()) for ln in body))
        return ResidueMatrix(p, tuple(tuple(int(t) for t in ln.split()) for ln in body))
    except ValueError as exc:
        raise ParameterError(f"bad matrix entry: {exc}") from exc
