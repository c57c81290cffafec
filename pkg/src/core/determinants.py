"""
Determinant engines over Z[P].

Two independent engines:

- ``bareiss_det``: fraction-free elimination. Every division it performs is
  exact in Z[P]; an inexact one raises ExactArithmeticError.
- ``hessenberg_det``: the leading-principal-minor recursion for lower
  Hessenberg matrices (zero strictly above the superdiagonal):

      det M(n) = m[n,n] det M(n-1)
                 + sum_{i=1}^{n-1} (-1)^(n-i) m[n,i] prod_{j=i}^{n-1} m[j,j+1] det M(i-1)

  with det M(0) = 1.
"""

from __future__ import annotations

import logging

from core.matrix import MatrixPoly
from core.polynomial import ExactArithmeticError, PolyZ

logger = logging.getLogger(__name__)


class HessenbergShapeError(ExactArithmeticError):
    """Raised when a matrix handed to the Hessenberg engine has a nonzero above the superdiagonal."""

    def __init__(self, row: int, col: int, value: PolyZ):
        self.row = row
        self.col = col
        self.value = value
        super().__init__(
            f"not lower Hessenberg: entry ({row}, {col}) = {value} lies above the superdiagonal"
        )


def _require_square(M: MatrixPoly, what: str) -> None:
    if not M.is_square:
        raise ExactArithmeticError(f"{what} needs a square matrix, got {M.rows}x{M.cols}")


def bareiss_det(M: MatrixPoly) -> PolyZ:
    """
    Determinant by fraction-free (Bareiss) elimination.

    Args:
        M: square matrix over Z[P]

    Returns:
        det(M) as a PolyZ

    Raises:
        ExactArithmeticError: non-square input, or an inexact division
    """
    _require_square(M, "bareiss_det")
    n = M.rows
    if n == 0:
        return PolyZ.one()
    a = M.to_rows()
    sign = 1
    prev = PolyZ.one()
    for k in range(n - 1):
        if a[k][k].is_zero:
            pivot = next((i for i in range(k + 1, n) if not a[i][k].is_zero), None)
            if pivot is None:
                return PolyZ.zero()
            a[k], a[pivot] = a[pivot], a[k]
            sign = -sign
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i = a[i]
            row_k = a[k]
            for j in range(k + 1, n):
                aij = row_i[j]
                if aik.is_zero:
                    if aij.is_zero:
                        continue
                    num = akk * aij
                else:
                    num = akk * aij - aik * row_k[j]
                row_i[j] = num if k == 0 else num.exquo(prev)
            row_i[k] = PolyZ.zero()
        prev = akk
    det = a[n - 1][n - 1]
    return -det if sign < 0 else det


def integer_bareiss_det(rows: list[list[int]]) -> int:
    """Bareiss over Z; used for evaluations and constant-term residues."""
    n = len(rows)
    if n == 0:
        return 1
    a = [list(r) for r in rows]
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            pivot = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if pivot is None:
                return 0
            a[k], a[pivot] = a[pivot], a[k]
            sign = -sign
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            for j in range(k + 1, n):
                num = akk * a[i][j] - aik * a[k][j]
                q, m = divmod(num, prev)
                if m:
                    raise ExactArithmeticError(f"inexact integer Bareiss step at k={k}")
                a[i][j] = q
            a[i][k] = 0
        prev = akk
    return sign * a[n - 1][n - 1]


def check_hessenberg(M: MatrixPoly) -> None:
    """Raise HessenbergShapeError naming the first entry with j > i + 1 that is nonzero."""
    _require_square(M, "hessenberg_det")
    for i in range(M.rows):
        for j in range(i + 2, M.cols):
            if not M[i, j].is_zero:
                raise HessenbergShapeError(i, j, M[i, j])


def hessenberg_minors(M: MatrixPoly) -> list[PolyZ]:
    """det M(0), det M(1), ..., det M(n) for a lower Hessenberg M."""
    check_hessenberg(M)
    n = M.rows
    dets = [PolyZ.one()]
    for m in range(1, n + 1):
        # 1-based m; entry m[a,b] is M[a-1, b-1]
        total = M[m - 1, m - 1] * dets[m - 1]
        chain = PolyZ.one()
        for i in range(m - 1, 0, -1):
            chain = chain * M[i - 1, i]
            if chain.is_zero:
                break
            lower = M[m - 1, i - 1]
            if lower.is_zero:
                continue
            term = lower * chain * dets[i - 1]
            total = total + term if (m - i) % 2 == 0 else total - term
        dets.append(total)
    return dets


def hessenberg_det(M: MatrixPoly) -> PolyZ:
    """
    Determinant of a lower Hessenberg matrix by the leading-minor recursion.

    Raises:
        HessenbergShapeError: if some entry above the superdiagonal is nonzero
    """
    return hessenberg_minors(M)[-1]


def leading_principal_minors(M: MatrixPoly) -> list[PolyZ]:
    """
    det M(1), ..., det M(n).

    Lower Hessenberg input uses the recursion. Anything else falls back to
    one Bareiss determinant per leading block, logged at info level.
    """
    _require_square(M, "leading_principal_minors")
    try:
        return hessenberg_minors(M)[1:]
    except HessenbergShapeError as e:
        logger.info(f"leading minors: {e}; computing them blockwise with Bareiss")
        return [bareiss_det(M.leading_block(k)) for k in range(1, M.rows + 1)]


def transpose(M: MatrixPoly) -> MatrixPoly:
    """Turns an upper Hessenberg matrix into the lower shape hessenberg_det accepts."""
    return M.transpose()
