"""Tests for MatrixPoly."""

import pytest

from core.matrix import MatrixPoly
from core.polynomial import P, ExactArithmeticError, PolyZ


@pytest.fixture
def m3():
    return MatrixPoly.from_rows([
        [1, P, 0],
        [P - 1, 2, P ** 2],
        [0, 1, P + 3],
    ])


class TestMatrixPoly:
    def test_ragged_rows_rejected(self):
        with pytest.raises(ExactArithmeticError):
            MatrixPoly.from_rows([[1, 2], [3]])

    def test_entry_count_checked(self):
        with pytest.raises(ExactArithmeticError):
            MatrixPoly(2, 2, (PolyZ.one(),))

    def test_indexing(self, m3):
        assert m3[1, 2] == P ** 2
        with pytest.raises(IndexError):
            m3[3, 0]

    def test_delete(self, m3):
        minor = m3.delete(row=2, col=0)
        assert minor.to_rows() == [[P, PolyZ.zero()], [PolyZ.constant(2), P ** 2]]

    def test_permute_rows(self, m3):
        moved = m3.permute_rows([1, 2, 0])
        assert moved.row(2) == m3.row(0)
        assert moved.row(0) == m3.row(1)
        with pytest.raises(ExactArithmeticError):
            m3.permute_rows([0, 0, 1])

    def test_add_column_multiple(self, m3):
        out = m3.add_column_multiple(0, 1, -1)
        assert out.column(0) == [1 - P, P - 3, PolyZ.constant(-1)]
        assert out.column(1) == m3.column(1)

    def test_residues_and_evaluate(self, m3):
        assert m3.residues() == [[1, 0, 0], [-1, 2, 0], [0, 1, 3]]
        assert m3.evaluate(2) == [[1, 2, 0], [1, 2, 4], [0, 1, 5]]

    def test_leading_block(self, m3):
        assert m3.leading_block(2).to_rows() == [[PolyZ.one(), P], [P - 1, PolyZ.constant(2)]]
        assert m3.leading_block(0).rows == 0

    def test_transpose(self, m3):
        assert m3.transpose()[2, 1] == m3[1, 2]
