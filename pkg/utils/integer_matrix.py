"""
Integer matrix utilities.
Handles exact Smith normal form with unimodular transforms.

Matrices are lists of rows of Python ints, so entries never overflow.
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence

Matrix = List[List[int]]

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SnfResult:
    """
    Smith normal form of an integer matrix m.

    left * m * right is diagonal with entries diagonal[0] | diagonal[1] | ...
    (nonzero entries first). right_inverse is right^-1.
    """

    diagonal: tuple
    left: tuple
    right: tuple
    right_inverse: tuple
    rows: int
    cols: int

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d != 0)

    @property
    def determinant_abs(self) -> int:
        """|det m| for square m; 0 for non-square or singular m."""
        if self.rows != self.cols:
            return 0
        product = 1
        for d in self.diagonal:
            product *= d
        return abs(product)


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def transpose(m: Sequence[Sequence[int]], cols: Optional[int] = None) -> Matrix:
    """Transpose; cols gives the width of an empty matrix."""
    if not m:
        return [[] for _ in range(cols or 0)]
    return [list(row) for row in zip(*m)]


def mat_mul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> Matrix:
    inner = len(b)
    width = len(b[0]) if b else 0
    return [
        [sum(a[i][k] * b[k][j] for k in range(inner)) for j in range(width)]
        for i in range(len(a))
    ]


def vec_mat(v: Sequence[int], m: Sequence[Sequence[int]]) -> List[int]:
    """Row vector times matrix."""
    width = len(m[0]) if m else 0
    return [sum(v[k] * m[k][j] for k in range(len(v))) for j in range(width)]


def determinant(m: Sequence[Sequence[int]]) -> int:
    """Exact determinant by fraction-free Bareiss elimination."""
    n = len(m)
    if n == 0:
        return 1
    a = [list(row) for row in m]
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def _find_pivot(a: Matrix, t: int):
    # Smallest nonzero |entry| in the trailing block, lowest row then column.
    best = None
    for i in range(t, len(a)):
        for j in range(t, len(a[i])):
            v = abs(a[i][j])
            if v and (best is None or v < best[0]):
                best = (v, i, j)
    return best


def smith_normal_form(m: Sequence[Sequence[int]], cols: Optional[int] = None) -> SnfResult:
    """
    Compute the Smith normal form with unimodular transforms.

    Args:
        m: Integer matrix as a list of rows
        cols: Number of columns, needed only when m has no rows

    Returns:
        SnfResult with left * m * right = diag(diagonal)
    """
    rows = len(m)
    ncols = len(m[0]) if rows else (cols or 0)
    a = [list(map(int, row)) for row in m]
    left = identity(rows)
    right = identity(ncols)
    right_inv = identity(ncols)

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        left[i], left[j] = left[j], left[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in right:
            row[i], row[j] = row[j], row[i]
        right_inv[i], right_inv[j] = right_inv[j], right_inv[i]

    def add_row(target, source, q):
        # row_target += q * row_source
        a[target] = [x + q * y for x, y in zip(a[target], a[source])]
        left[target] = [x + q * y for x, y in zip(left[target], left[source])]

    def add_col(target, source, q):
        # col_target += q * col_source
        for row in a:
            row[target] += q * row[source]
        for row in right:
            row[target] += q * row[source]
        # inverse update: row_source -= q * row_target
        right_inv[source] = [x - q * y for x, y in zip(right_inv[source], right_inv[target])]

    t = 0
    while t < min(rows, ncols):
        pivot = _find_pivot(a, t)
        if pivot is None:
            break
        _, pi, pj = pivot
        swap_rows(t, pi)
        swap_cols(t, pj)
        while True:
            dirty = False
            for i in range(t + 1, rows):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // a[t][t]))
                    dirty = dirty or a[i][t] != 0
            for j in range(t + 1, ncols):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // a[t][t]))
                    dirty = dirty or a[t][j] != 0
            if dirty:
                pivot = _find_pivot_cross(a, t)
                swap_rows(t, pivot[0])
                swap_cols(t, pivot[1])
                continue
            offender = next(
                (i for i in range(t + 1, rows) for j in range(t + 1, ncols) if a[i][j] % a[t][t]),
                None,
            )
            if offender is None:
                break
            add_row(t, offender, 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            left[t] = [-x for x in left[t]]
        t += 1

    size = min(rows, ncols)
    diagonal = tuple(a[i][i] for i in range(size))
    logger.debug("SNF of %dx%d matrix: %s", rows, ncols, diagonal)
    return SnfResult(
        diagonal=diagonal,
        left=tuple(tuple(r) for r in left),
        right=tuple(tuple(r) for r in right),
        right_inverse=tuple(tuple(r) for r in right_inv),
        rows=rows,
        cols=ncols,
    )


def _find_pivot_cross(a: Matrix, t: int):
    # Smallest nonzero entry left in row t or column t after a reduction pass.
    best = None
    for i in range(t, len(a)):
        v = abs(a[i][t])
        if v and (best is None or v < best[0]):
            best = (v, i, t)
    for j in range(t + 1, len(a[t])):
        v = abs(a[t][j])
        if v and (best is None or v < best[0]):
            best = (v, t, j)
    return best[1], best[2]


def is_unimodular(m: Sequence[Sequence[int]]) -> bool:
    return len(m) == (len(m[0]) if m else 0) and abs(determinant(m)) == 1
