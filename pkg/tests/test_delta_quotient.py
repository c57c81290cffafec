"""Tests for the Upsilon matrix, the g-map and the sigma oracle."""

from fractions import Fraction

import pytest

from services.cusp_service import FieldParams
from services.delta_quotient_service import (
    DeltaQuotientError,
    TensorElement,
    build_upsilon,
    c_image,
    g_map,
    generator_elements,
    generator_orders,
    integer_exponents,
    oracle_element,
    sigma_functional,
    sigma_oracle,
    symbolic_exponents,
    tensor_normalize,
)
from services.divisor_service import CuspidalDivisor, build_C, build_D0, build_Dr1, dr1_weights


@pytest.fixture
def small():
    return FieldParams(q=3, deg_p=1, r=2)


class TestUpsilon:
    def test_entries_r2(self, small):
        U = build_upsilon(small)
        assert U.entries == (
            (6, -3, 0),
            (-2, 10, -2),
            (0, -3, 6),
        )

    @pytest.mark.parametrize("r", range(2, 13))
    def test_tridiagonal(self, r):
        assert build_upsilon(FieldParams(q=4, deg_p=2, r=r)).is_tridiagonal()

    def test_apply_checks_length(self, small):
        with pytest.raises(DeltaQuotientError):
            build_upsilon(small).apply([1, 2])


class TestGMap:
    def test_C1_r2(self, small):
        dq = g_map(build_C(1, small), small)
        assert dq.r_exps == (Fraction(-1, 16), Fraction(1, 4), Fraction(-3, 16))
        assert dq.total == 0

    def test_rejects_nonzero_degree(self, small):
        with pytest.raises(DeltaQuotientError):
            g_map(CuspidalDivisor((1, 0, 0)), small)

    def test_D0_exponents_sum_to_zero(self):
        params = FieldParams(q=3, deg_p=2, r=5)
        assert g_map(build_D0(params), params).total == 0

    def test_integer_exponents(self, small):
        assert integer_exponents(build_C(1, small), 1, small) == (-1, 4, -3)
        assert integer_exponents(build_C(1, small), 3, small) == (-3, 12, -9)

    def test_order_must_be_positive(self, small):
        with pytest.raises(DeltaQuotientError):
            integer_exponents(build_C(1, small), 0, small)

    @pytest.mark.parametrize("q,deg_p", [(2, 1), (3, 1), (4, 2), (5, 2)])
    @pytest.mark.parametrize("r", [7, 12])
    def test_generator_exponents_are_integral(self, q, deg_p, r):
        params = FieldParams(q=q, deg_p=deg_p, r=r)
        for gen, element in generator_elements(params):
            assert element.denom > 0
            assert all(0 <= c < element.denom for c in element.coords)


class TestSigma:
    def test_functional(self):
        assert sigma_functional([-1, 4, -3]) == [2, 3]
        assert sigma_oracle((-3, 12, -9), FieldParams(q=3, deg_p=1, r=2)) == (6, 9)

    def test_oracle_length_checked(self, small):
        with pytest.raises(DeltaQuotientError):
            sigma_oracle((1, 2), small)

    def test_normalize(self):
        assert tensor_normalize(TensorElement((3, 9), 6)) == TensorElement((1, 1), 2)
        assert tensor_normalize(TensorElement((-6, -9), 6)) == TensorElement((0, 1), 2)
        assert tensor_normalize(TensorElement((4, 8), 4)) == TensorElement((0, 0), 1)

    def test_denominator_must_be_positive(self):
        with pytest.raises(DeltaQuotientError):
            TensorElement((1,), 0)

    def test_oracle_element_C1(self, small):
        expected = TensorElement((0, 1), 2)
        assert oracle_element(build_C(1, small), 1, small) == expected
        assert oracle_element(build_C(1, small), 3, small) == expected


class TestSymbolicSide:
    def test_c_image_range(self):
        with pytest.raises(DeltaQuotientError):
            c_image(0, 5)

    @pytest.mark.parametrize("q,deg_p", [(3, 1), (4, 1), (2, 2), (3, 2)])
    @pytest.mark.parametrize("r", [2, 3, 4, 7, 8, 11, 12])
    def test_symbolic_matches_numeric_at_order_M(self, q, deg_p, r):
        params = FieldParams(q=q, deg_p=deg_p, r=r)
        symbolic = symbolic_exponents(dr1_weights(r), r)
        numeric = integer_exponents(build_Dr1(params), params.m_order, params)
        assert tuple(x(params.abs_p) for x in symbolic) == numeric


class TestGeneratorOrders:
    def test_r1_is_cyclic(self):
        gens = generator_orders(FieldParams(q=3, deg_p=3, r=1))
        assert len(gens) == 1
        assert gens[0].kind == "cyclic"
        assert gens[0].order == 13

    def test_r7_rows(self):
        params = FieldParams(q=3, deg_p=1, r=7)
        gens = generator_orders(params)
        assert [g.row for g in gens] == list(range(7))
        assert [g.kind for g in gens] == ["d0", "small", "small", "small", "big", "big", "dr1"]
        assert [g.order for g in gens] == [1, 3 ** 6, 3 ** 5, 3 ** 4, 3 ** 4, 3 ** 5, 1]
