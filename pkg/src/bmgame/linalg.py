"""Dense exact matrices and Gaussian elimination over the rationals.

Matrices are immutable, row-major grids of exact rationals.  Dimensions are
stored explicitly so zero-row and zero-column matrices (which occur for the
zero-dimensional space) are well defined.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import DimensionMismatchError
from .ratio import ONE, ZERO, Q, qof, qstr, vec_parse

Vector = tuple


def vec_add(a: Sequence, b: Sequence) -> Vector:
    return tuple(x + y for x, y in zip(a, b, strict=True))


def vec_sub(a: Sequence, b: Sequence) -> Vector:
    return tuple(x - y for x, y in zip(a, b, strict=True))


def vec_scale(c, a: Sequence) -> Vector:
    return tuple(c * x for x in a)


def vec_dot(a: Sequence, b: Sequence):
    if len(a) != len(b):
        raise DimensionMismatchError(f"dot of lengths {len(a)} and {len(b)}")
    total = ZERO
    for x, y in zip(a, b):
        total += x * y
    return total


def vec_neg(a: Sequence) -> Vector:
    return tuple(-x for x in a)


def vec_is_zero(a: Sequence) -> bool:
    return all(x == 0 for x in a)


@dataclass(frozen=True)
class Matrix:
    """Immutable rows × cols grid of exact rationals."""

    rows: int
    cols: int
    entries: tuple[tuple, ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise DimensionMismatchError("negative matrix dimension")
        if len(self.entries) != self.rows:
            raise DimensionMismatchError("row count does not match entries")
        for row in self.entries:
            if len(row) != self.cols:
                raise DimensionMismatchError("ragged matrix rows")

    @staticmethod
    def from_rows(rows: Iterable[Sequence], cols: int | None = None) -> "Matrix":
        grid = tuple(tuple(qof(x) for x in row) for row in rows)
        if cols is None:
            if not grid:
                raise DimensionMismatchError("cols required for a 0-row matrix")
            cols = len(grid[0])
        return Matrix(len(grid), cols, grid)

    @staticmethod
    def from_cols(cols: Iterable[Sequence], rows: int | None = None) -> "Matrix":
        col_list = [tuple(qof(x) for x in c) for c in cols]
        if rows is None:
            if not col_list:
                raise DimensionMismatchError("rows required for a 0-col matrix")
            rows = len(col_list[0])
        for c in col_list:
            if len(c) != rows:
                raise DimensionMismatchError("ragged matrix columns")
        grid = tuple(tuple(c[i] for c in col_list) for i in range(rows))
        return Matrix(rows, len(col_list), grid)

    @staticmethod
    def identity(n: int) -> "Matrix":
        return Matrix(n, n, tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n)))

    @staticmethod
    def zero(rows: int, cols: int) -> "Matrix":
        return Matrix(rows, cols, tuple(tuple(ZERO for _ in range(cols)) for _ in range(rows)))

    def mul_vec(self, x: Sequence) -> Vector:
        if len(x) != self.cols:
            raise DimensionMismatchError(f"matrix is {self.rows}x{self.cols}, vector has length {len(x)}")
        return tuple(vec_dot(row, x) for row in self.entries)

    def matmul(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise DimensionMismatchError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        ot = other.transpose()
        grid = tuple(tuple(vec_dot(row, col) for col in ot.entries) for row in self.entries)
        return Matrix(self.rows, other.cols, grid)

    def add(self, other: "Matrix") -> "Matrix":
        self._same_shape(other)
        return Matrix(self.rows, self.cols, tuple(vec_add(a, b) for a, b in zip(self.entries, other.entries)))

    def sub(self, other: "Matrix") -> "Matrix":
        self._same_shape(other)
        return Matrix(self.rows, self.cols, tuple(vec_sub(a, b) for a, b in zip(self.entries, other.entries)))

    def scale(self, c) -> "Matrix":
        c = qof(c)
        return Matrix(self.rows, self.cols, tuple(vec_scale(c, row) for row in self.entries))

    def transpose(self) -> "Matrix":
        grid = tuple(tuple(self.entries[i][j] for i in range(self.rows)) for j in range(self.cols))
        return Matrix(self.cols, self.rows, grid)

    def column(self, j: int) -> Vector:
        return tuple(row[j] for row in self.entries)

    def columns(self) -> list[Vector]:
        return [self.column(j) for j in range(self.cols)]

    def _same_shape(self, other: "Matrix"):
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionMismatchError(f"{self.rows}x{self.cols} vs {other.rows}x{other.cols}")

    def to_json(self) -> list[list[str]]:
        return [[qstr(x) for x in row] for row in self.entries]

    @staticmethod
    def from_json(data: list[list[str]], rows: int | None = None, cols: int | None = None) -> "Matrix":
        grid = tuple(vec_parse(row) for row in data)
        if rows is None:
            rows = len(grid)
        if cols is None:
            cols = len(grid[0]) if grid else 0
        if len(grid) != rows:
            raise DimensionMismatchError("serialized matrix row count mismatch")
        return Matrix(rows, cols, grid)


def rref(matrix: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form with leftmost (lexicographic) pivoting.

    Returns the RREF and the pivot column indices, in order.
    """
    grid = [list(row) for row in matrix.entries]
    pivots: list[int] = []
    r = 0
    for c in range(matrix.cols):
        if r == matrix.rows:
            break
        pivot_row = None
        for i in range(r, matrix.rows):
            if grid[i][c] != 0:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        grid[r], grid[pivot_row] = grid[pivot_row], grid[r]
        inv = ONE / grid[r][c]
        grid[r] = [inv * x for x in grid[r]]
        for i in range(matrix.rows):
            if i != r and grid[i][c] != 0:
                factor = grid[i][c]
                grid[i] = [a - factor * b for a, b in zip(grid[i], grid[r])]
        pivots.append(c)
        r += 1
    return Matrix(matrix.rows, matrix.cols, tuple(tuple(row) for row in grid)), pivots


def rank(matrix: Matrix) -> int:
    return len(rref(matrix)[1])


def solve(matrix: Matrix, rhs: Sequence) -> Vector | None:
    """Solve M x = rhs for square invertible M; None when singular."""
    if matrix.rows != matrix.cols:
        raise DimensionMismatchError("solve requires a square matrix")
    if len(rhs) != matrix.rows:
        raise DimensionMismatchError("rhs length mismatch")
    n = matrix.rows
    augmented = Matrix.from_rows(
        [tuple(matrix.entries[i]) + (qof(rhs[i]),) for i in range(n)], cols=n + 1
    ) if n else Matrix(0, 1, ())
    reduced, pivots = rref(augmented)
    if pivots != list(range(n)):
        return None
    return tuple(reduced.entries[i][n] for i in range(n))


def invert(matrix: Matrix) -> Matrix | None:
    """Exact inverse of a square matrix; None when singular."""
    n = matrix.rows
    if n != matrix.cols:
        raise DimensionMismatchError("invert requires a square matrix")
    augmented = Matrix.from_rows(
        [tuple(matrix.entries[i]) + tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n)],
        cols=2 * n,
    ) if n else Matrix(0, 0, ())
    if n == 0:
        return Matrix(0, 0, ())
    reduced, pivots = rref(augmented)
    if pivots != list(range(n)):
        return None
    return Matrix(n, n, tuple(tuple(row[n:]) for row in reduced.entries))


def null_space(matrix: Matrix) -> list[Vector]:
    """Basis of {x : M x = 0}, via the RREF free-column parametrization."""
    reduced, pivots = rref(matrix)
    free = [c for c in range(matrix.cols) if c not in pivots]
    basis = []
    for f in free:
        v = [ZERO] * matrix.cols
        v[f] = ONE
        for r, p in enumerate(pivots):
            v[p] = -reduced.entries[r][f]
        basis.append(tuple(v))
    return basis
