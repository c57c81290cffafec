"""Tests for the printed sigma(r-1) tables and their audit."""

import pytest
import sympy

from services.case_tables import (
    X,
    CaseTableError,
    audit_printed_table,
    printed_sigma_table,
)


class TestPrintedTableAudit:
    @pytest.mark.parametrize("r", [2, 3, 7])
    def test_tables_that_match(self, r):
        assert audit_printed_table(r).matches

    def test_r4_differs_only_at_k0(self):
        audit = audit_printed_table(4)
        assert audit.case == 3
        assert [m["k"] for m in audit.mismatches] == [0]
        assert sympy.expand(sympy.sympify(audit.mismatches[0]["computed"], locals={"P": X})) == sympy.expand(
            -2 * X**3 + 2 * X**2 + 3 * X - 3
        )

    @pytest.mark.parametrize("r", [5, 6])
    def test_k3_typo(self, r):
        audit = audit_printed_table(r)
        assert [m["k"] for m in audit.mismatches] == [3]

    def test_table_length(self):
        assert len(printed_sigma_table(9)) == 9

    def test_no_table_below_two(self):
        with pytest.raises(CaseTableError):
            printed_sigma_table(1)
