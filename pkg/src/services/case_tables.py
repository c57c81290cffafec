"""
Printed sigma(r-1) tables, kept as published and audited against the pipeline.

The nine tables are transcribed literally (including entries that do not
match the computed values) so that the audit can point at them.
"""

import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, List

import sympy
from sympy import Rational

from core.polynomial import PolyZ
from services.cusp_service import FieldParams
from services.injectivity_service import sigma_r_minus_1, table_case

logger = logging.getLogger(__name__)

X = sympy.Symbol("P")
HALF = Rational(1, 2)


class CaseTableError(Exception):
    """Raised when a table is requested for an r it does not cover."""
    pass


def _small_case(rows: List[sympy.Expr]) -> Callable[[int, int], sympy.Expr]:
    return lambda r, k: rows[k]


_CASE1 = _small_case([X - 1, X])
_CASE2 = _small_case([
    -2 * X**3 + 3 * X**2 + X - 2,
    -2 * X**3 + 2 * X**2 + X - 1,
    -X**3 + X**2 + X,
])
_CASE3 = _small_case([
    -2 * X**3 + 3 * X - 3,
    -2 * X**3 + X**2 + 3 * X - 2,
    -2 + 2 * X + X**2 - X**3,
    -X * (X**2 - 2),
])
_CASE4 = _small_case([
    -3 * X**3 + 4 * X**2 + 2 * X - 3,
    -3 * X**3 + 3 * X**2 + 2 * X - 2,
    -2 * X**3 + 3 * X**2 + X - 2,
    -2 * X**3 + X**2 + X * (X**2 - 2),
    X**2,
])
_CASE5 = _small_case([
    -3 * X**3 + 3 * X**2 + 4 * X - 4,
    -3 * X**3 + 2 * X**2 + 4 * X - 3,
    -2 * X**3 + 2 * X**2 + 3 * X - 3,
    X**2 + 3 * X - 2 * X - 2,
    -X**3 + 2 * X - 1,
    X,
])


def _case6(r: int, k: int) -> sympy.Expr:
    a, b = X ** ((r - 3) // 2), X ** ((r - 1) // 2)
    c = -(X - 1) * HALF
    if k == 0:
        return c * ((5 - 3 * r) + (r - 1) * X + 2 * (r - 1) * X**2 + (r - 3) * a - (r + 1) * b)
    if k == 1:
        return c * ((7 - 3 * r) + (r + 1) * X + 2 * (r - 1) * X**2 + (r - 3) * a - (r + 1) * b)
    if k == 2:
        return c * ((7 - 3 * r) + (r - 1) * X + 2 * (r - 2) * X**2 + (r - 3) * a - (r + 1) * b)
    if 2 < k < (r - 1) // 2:
        return (X - 1) * HALF * (
            (-2 * k + 3 * r - 3) - (r - 1) * X + 2 * (k - r) * X**2 - (r - 3) * a + (r + 1) * b
        )
    if k == (r - 1) // 2:
        return c * (-2 * (r - 1) + (r - 1) * X + (r + 1) * X**2 + (r - 3) * a - (r + 1) * b)
    if k == (r + 1) // 2:
        return c * (-2 * (r - 3) + (r - 1) * X + (r - 1) * X**2 + (r - 3) * a - (r - 1) * b)
    if (r + 1) // 2 < k < r - 2:
        return (X - 1) * (
            -2 * (k - r + 1) + (k - r) * X + (k - r) * X**2 + (k - r + 1) * a + (r - k) * b
        )
    if k == r - 2:
        return -2 + 4 * X - 2 * X**3 + a - 3 * b + 2 * X ** ((r + 1) // 2)
    return 2 * X - X**3 - b + X ** ((r + 1) // 2)


def _case7(r: int, k: int) -> sympy.Expr:
    half = r // 2
    a, b = X ** (half - 2), X ** (half - 1)
    c = -(X - 1) * HALF
    if k == 0:
        return c * ((4 - 3 * r) + (r + 2) * X + 2 * (r - 2) * X**2 + (r - 2) * a - (r + 2) * b)
    if k == 1:
        return c * (-3 * (r - 2) + (r + 4) * X + 2 * (r - 2) * X**2 + (r - 2) * a - (r + 2) * b)
    if k == 2:
        return c * (-3 * (r - 2) + (r + 2) * X + 2 * (r - 3) * X**2 + (r - 2) * a - (r + 2) * b)
    if 2 < k < half - 1:
        return (X - 1) * HALF * (
            (-2 * k + 3 * r - 2) - (r + 2) * X + 2 * (k - r + 1) * X**2 - (r - 2) * a + (r + 2) * b
        )
    if k == half - 1:
        return c * (-2 * r + (r + 2) * X + r * X**2 + (r - 2) * a - (r + 2) * b)
    if k == half:
        return c * (-2 * (r - 1) + r * X + (r - 2) * X**2 + (r - 2) * a - r * b)
    if half < k < r - 2:
        if (k - half) % 2 == 0:
            return (X - 1) * (
                -2 * (k - r + 1) + X * (k - r - 2) + X**2 * (k - r) + (k - r + 1) * a + (r - k) * b
            )
        return (X - 1) * (
            (-2 * k + 2 * r - 1) + (k - r) * X + (k - r + 1) * X**2 + (k - r + 1) * a + (r - k) * b
        )
    if k == r - 2:
        return -(X - 1) * (-3 + 2 * X + X**2 + a - 2 * b)
    return 3 * X - X**2 - X**3 - b + X**half


def _case8(r: int, k: int) -> sympy.Expr:
    a, b = X ** ((r - 3) // 2), X ** ((r - 1) // 2)
    c = -(X - 1) * HALF
    if k == 0:
        return (X - 1) * HALF * (
            2 * (r - 2) + (r - 1) * X - 3 * (r - 1) * X**2 - (r - 3) * a + (r + 1) * b
        )
    if k == 1:
        return c * (-2 * (r - 3) - (r - 3) * X + 3 * (r - 1) * X**2 + (r - 3) * a - (r + 1) * b)
    if k == 2:
        return c * (-2 * (r - 3) - (r - 1) * X + (3 * r - 5) * X**2 + (r - 3) * a - (r + 1) * b)
    if 2 < k < (r - 1) // 2:
        return (X - 1) * HALF * (
            -2 * (k - r + 1) + (r - 1) * X + (2 * k - 3 * r + 1) * X**2 - (r - 3) * a + (r + 1) * b
        )
    if k == (r - 1) // 2:
        return c * (-(r - 1) - (r - 1) * X + 2 * r * X**2 + (r - 3) * a - (r + 1) * b)
    if k == (r + 1) // 2:
        return c * (-(r - 5) - (r - 5) * X + 2 * (r - 1) * X**2 + (r - 3) * a - (r - 1) * b)
    if (r + 1) // 2 < k < r - 2:
        if (k - (r + 3) // 2) % 2 == 1:
            return (X - 1) * (
                (-k + r - 2) + (-k + r - 2) * X + 2 * (k - r) * X**2 + (k - r + 1) * a + (r - k) * b
            )
        return (X - 1) * (
            (-k + r - 1) + (r - k) * X + (2 * k - 2 * r + 1) * X**2 + (k - r + 1) * a + (r - k) * b
        )
    if k == r - 2:
        return -(X - 1) * (4 * X**2 + a - 2 * b)
    return 2 * X**2 - X**3 - b + X ** ((r + 1) // 2)


def _case9(r: int, k: int) -> sympy.Expr:
    half = r // 2
    a, b = X ** (half - 2), X ** (half - 1)
    c = (X - 1) * HALF
    if k == 0:
        return c * (2 * (r - 2) + (r - 2) * X + (4 - 3 * r) * X**2 - (r - 2) * a + (r + 2) * b)
    if k == 1:
        return c * (
            2 * (r - 3) + (r - 4) * X - 3 * (r - 2) * X**2 + (4 - 3 * r) * X**2
            - (r - 2) * a + (r + 2) * b
        )
    if k == 2:
        return c * (2 * (r - 3) + (r - 2) * X - (r - 2) * a + (r + 2) * b)
    if 2 < k < half - 1:
        return c * (
            -2 * (k - r + 1) + (r - 2) * X + (2 * k - 3 * r + 2) * X**2 - (r - 2) * a + (r + 2) * b
        )
    if k == half - 1:
        return c * (r + (r - 2) * X - 2 * r * X**2 - (r - 2) * a + (r + 2) * b)
    if k == half:
        return c * ((r - 2) + (r - 4) * X - 2 * (r - 1) * X**2 - (r - 2) * a + r * b)
    if half < k < r - 2:
        return (X - 1) * (
            (-k + r - 1) + (-k + r - 2) * X + (2 * k - 2 * r + 1) * X**2 + (k - r + 1) * a + (r - k) * b
        )
    if k == r - 2:
        return -(X - 1) * (-1 + 3 * X**2 * a - 2 * b)
    return X + X**2 - X**3 - b + X**half


_CASES: Dict[int, Callable[[int, int], sympy.Expr]] = {
    1: _CASE1, 2: _CASE2, 3: _CASE3, 4: _CASE4, 5: _CASE5,
    6: _case6, 7: _case7, 8: _case8, 9: _case9,
}


def printed_sigma_table(r: int) -> List[sympy.Expr]:
    """sigma(r-1)_k, k = 0..r-1, as printed in the table that covers r."""
    if r < 2:
        raise CaseTableError(f"no sigma(r-1) table for r={r}")
    case = _CASES[table_case(r)]
    return [sympy.expand(case(r, k)) for k in range(r)]


def to_sympy(p: PolyZ) -> sympy.Expr:
    return sum((c * X**k for k, c in enumerate(p.coeffs)), sympy.Integer(0))


@dataclass
class TableAudit:
    """Coordinates where the printed table differs from the computed sigma(r-1)."""
    r: int
    case: int
    mismatches: List[dict] = field(default_factory=list)

    @property
    def matches(self) -> bool:
        return not self.mismatches


def audit_printed_table(r: int) -> TableAudit:
    """
    Compare the printed sigma(r-1) table with the symbolic pipeline in Z[P].

    Example:
        >>> audit_printed_table(4).mismatches[0]["k"]
        0
    """
    printed = printed_sigma_table(r)
    # q only enters through the tensor factor, not the sigma entries
    computed = sigma_r_minus_1(FieldParams(q=2, deg_p=1, r=r)).entries
    audit = TableAudit(r, table_case(r))
    for k, (lhs, rhs) in enumerate(zip(printed, computed)):
        actual = to_sympy(rhs)
        if sympy.expand(lhs - actual) != 0:
            audit.mismatches.append({
                "k": k,
                "printed": str(lhs),
                "computed": str(sympy.expand(actual)),
            })
    if audit.mismatches:
        logger.info(f"📋 table case {audit.case} (r={r}): {len(audit.mismatches)} entries differ")
    return audit
