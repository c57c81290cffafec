"""
Exact matrices with PolyZ entries.

MatrixPoly is immutable; every row/column operation returns a new matrix.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from core.polynomial import ExactArithmeticError, PolyZ, Scalar


@dataclass(frozen=True, slots=True)
class MatrixPoly:
    """Row-major rows x cols matrix over Z[P]."""
    rows: int
    cols: int
    entries: tuple[PolyZ, ...]

    def __post_init__(self) -> None:
        if self.rows < 0 or self.cols < 0:
            raise ExactArithmeticError(f"negative shape {self.rows}x{self.cols}")
        if len(self.entries) != self.rows * self.cols:
            raise ExactArithmeticError(
                f"{len(self.entries)} entries for a {self.rows}x{self.cols} matrix"
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Scalar]]) -> MatrixPoly:
        n = len(rows)
        m = len(rows[0]) if n else 0
        flat: list[PolyZ] = []
        for i, row in enumerate(rows):
            if len(row) != m:
                raise ExactArithmeticError(f"row {i} has {len(row)} entries, expected {m}")
            flat.extend(PolyZ.coerce(x) for x in row)
        return cls(n, m, tuple(flat))

    @classmethod
    def identity(cls, n: int) -> MatrixPoly:
        return cls.from_rows([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, n: int, m: int | None = None) -> MatrixPoly:
        m = n if m is None else m
        return cls(n, m, (PolyZ.zero(),) * (n * m))

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, index: tuple[int, int]) -> PolyZ:
        i, j = index
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(f"entry ({i}, {j}) outside {self.rows}x{self.cols}")
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> list[PolyZ]:
        return list(self.entries[i * self.cols:(i + 1) * self.cols])

    def column(self, j: int) -> list[PolyZ]:
        return [self.entries[i * self.cols + j] for i in range(self.rows)]

    def to_rows(self) -> list[list[PolyZ]]:
        return [self.row(i) for i in range(self.rows)]

    def with_row(self, i: int, values: Iterable[Scalar]) -> MatrixPoly:
        rows = self.to_rows()
        rows[i] = [PolyZ.coerce(v) for v in values]
        return MatrixPoly.from_rows(rows) if self.rows else self

    def with_entry(self, i: int, j: int, value: Scalar) -> MatrixPoly:
        flat = list(self.entries)
        flat[i * self.cols + j] = PolyZ.coerce(value)
        return MatrixPoly(self.rows, self.cols, tuple(flat))

    def add_column_multiple(self, target: int, source: int, factor: Scalar) -> MatrixPoly:
        """Column target += factor * column source."""
        factor = PolyZ.coerce(factor)
        flat = list(self.entries)
        for i in range(self.rows):
            flat[i * self.cols + target] = (
                flat[i * self.cols + target] + factor * flat[i * self.cols + source]
            )
        return MatrixPoly(self.rows, self.cols, tuple(flat))

    def delete(self, row: int | None = None, col: int | None = None) -> MatrixPoly:
        """Minor obtained by deleting one row and/or one column."""
        rows = [
            [x for j, x in enumerate(r) if j != col]
            for i, r in enumerate(self.to_rows()) if i != row
        ]
        n = self.rows - (row is not None)
        m = self.cols - (col is not None)
        flat = tuple(x for r in rows for x in r)
        return MatrixPoly(n, m, flat)

    def permute_rows(self, order: Sequence[int]) -> MatrixPoly:
        """New matrix whose row k is the old row order[k]."""
        if sorted(order) != list(range(self.rows)):
            raise ExactArithmeticError(f"{list(order)} is not a permutation of the rows")
        return MatrixPoly.from_rows([self.row(i) for i in order]) if self.rows else self

    def transpose(self) -> MatrixPoly:
        flat = tuple(self.entries[i * self.cols + j] for j in range(self.cols) for i in range(self.rows))
        return MatrixPoly(self.cols, self.rows, flat)

    def map(self, fn: Callable[[PolyZ], PolyZ]) -> MatrixPoly:
        return MatrixPoly(self.rows, self.cols, tuple(fn(x) for x in self.entries))

    def evaluate(self, x: int) -> list[list[int]]:
        return [[e.evaluate(x) for e in self.row(i)] for i in range(self.rows)]

    def residues(self) -> list[list[int]]:
        """Integer matrix of constant terms (the image under P -> 0)."""
        return [[e.residue() for e in self.row(i)] for i in range(self.rows)]

    def leading_block(self, k: int) -> MatrixPoly:
        return MatrixPoly.from_rows([self.row(i)[:k] for i in range(k)]) if k else MatrixPoly(0, 0, ())

    def __str__(self) -> str:
        return "\n".join("[" + ", ".join(str(x) for x in self.row(i)) + "]" for i in range(self.rows))
