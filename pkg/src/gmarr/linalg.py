"""Fraction-free exact linear algebra.

Works over two coefficient domains — plain ``Fraction`` and ``MultiPoly`` —
using Bareiss elimination: every intermediate entry is a minor of the input
matrix, and each step divides exactly by the previous pivot, so entries stay
in the domain (no rational functions until back-substitution).

Pivoting is deterministic: columns are processed left to right and the first
row with a nonzero entry is chosen, so results are reproducible.
"""

from __future__ import annotations

from typing import Sequence

from .exact import MultiPoly, RatFunc, poly_exact_div


def _exact_div(a, b):
    if isinstance(a, MultiPoly):
        return poly_exact_div(a, b)
    return a / b


def _to_field(x):
    """Lift a domain entry into its fraction field."""
    if isinstance(x, MultiPoly):
        return RatFunc(x)
    return x


class EchelonResult:
    __slots__ = ("rows", "pivots", "sign")

    def __init__(self, rows, pivots, sign):
        self.rows = rows          # echelon form, Bareiss-scaled
        self.pivots = pivots      # list of (row, col)
        self.sign = sign          # parity of row swaps

    @property
    def rank(self) -> int:
        return len(self.pivots)


def fraction_free_echelon(matrix: Sequence[Sequence], ncols: int | None = None) -> EchelonResult:
    """Bareiss row echelon form. ``ncols`` limits pivoting to the first
    columns (useful for augmented systems); elimination always updates every
    column."""
    m = [list(row) for row in matrix]
    nr = len(m)
    width = len(m[0]) if nr else 0
    if ncols is None:
        ncols = width
    pivots: list[tuple[int, int]] = []
    sign = 1
    prev = None
    pr = 0
    for c in range(ncols):
        piv = next((i for i in range(pr, nr) if m[i][c]), None)
        if piv is None:
            continue
        if piv != pr:
            m[pr], m[piv] = m[piv], m[pr]
            sign = -sign
        p = m[pr][c]
        for i in range(pr + 1, nr):
            row = m[i]
            f = row[c]
            for j in range(c + 1, width):
                e = p * row[j] - f * m[pr][j]
                if prev is not None:
                    e = _exact_div(e, prev)
                row[j] = e
            row[c] = p - p  # domain zero
        prev = p
        pivots.append((pr, c))
        pr += 1
        if pr == nr:
            break
    return EchelonResult(m, pivots, sign)


def rank(matrix: Sequence[Sequence]) -> int:
    if not matrix:
        return 0
    return fraction_free_echelon(matrix).rank


def det(matrix: Sequence[Sequence]):
    """Exact determinant of a square matrix (Bareiss: the final pivot)."""
    n = len(matrix)
    if n == 0:
        raise ValueError("empty matrix has no determinant")
    if any(len(r) != n for r in matrix):
        raise ValueError("matrix is not square")
    ech = fraction_free_echelon(matrix)
    sample = matrix[0][0]
    if ech.rank < n:
        return sample - sample  # domain zero
    r, c = ech.pivots[-1]
    return ech.rows[r][c] if ech.sign == 1 else -ech.rows[r][c]


class SolveResult:
    __slots__ = ("rank", "consistent", "solution", "bad_row")

    def __init__(self, rank, consistent, solution, bad_row=None):
        self.rank = rank
        self.consistent = consistent
        self.solution = solution  # k x r field entries, or None
        self.bad_row = bad_row    # first inconsistent row index, if any


def solve_all(A: Sequence[Sequence], B: Sequence[Sequence]) -> SolveResult:
    """Solve A·X = B column by column over the fraction field of the domain.

    A is m×k, B is m×r.  Free variables (columns of A without a pivot) are
    set to zero.  When some column of B is not in the column span of A the
    result is flagged inconsistent and carries the offending row.
    """
    nr = len(A)
    k = len(A[0]) if nr else 0
    r = len(B[0]) if nr else 0
    if nr == 0 or k == 0:
        return SolveResult(0, True, [])
    aug = [list(A[i]) + list(B[i]) for i in range(nr)]
    ech = fraction_free_echelon(aug, ncols=k)
    # rows below the last pivot have an all-zero A part; any nonzero B part
    # there witnesses inconsistency
    for i in range(ech.rank, nr):
        for j in range(k, k + r):
            if ech.rows[i][j]:
                return SolveResult(ech.rank, False, None, bad_row=i)
    # back-substitution over the field
    zero_dom = aug[0][0] - aug[0][0]
    zero = _to_field(zero_dom)
    X = [[zero for _ in range(r)] for _ in range(k)]
    for idx in range(ech.rank - 1, -1, -1):
        pr, pc = ech.pivots[idx]
        pivot = _to_field(ech.rows[pr][pc])
        for j in range(r):
            acc = _to_field(ech.rows[pr][k + j])
            for c2 in range(pc + 1, k):
                e = ech.rows[pr][c2]
                if e and X[c2][j]:
                    acc = acc - _to_field(e) * X[c2][j]
            X[pc][j] = acc / pivot
    return SolveResult(ech.rank, True, X)


def mat_mul(A: Sequence[Sequence], B: Sequence[Sequence]):
    """Plain matrix product (entries must share a common arithmetic)."""
    if not A or not B:
        return []
    k = len(B)
    assert all(len(row) == k for row in A), "inner dimensions disagree"
    cols = len(B[0])
    out = []
    for row in A:
        orow = []
        for j in range(cols):
            acc = None
            for s in range(k):
                a = row[s]
                b = B[s][j]
                if not a or not b:
                    continue
                term = a * b
                acc = term if acc is None else acc + term
            if acc is None:
                # every term was skipped, so row[0] or B[0][j] is falsy and
                # this product is the zero of the right type
                acc = row[0] * B[0][j]
            orow.append(acc)
        out.append(orow)
    return out
