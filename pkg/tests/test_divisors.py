"""Tests for the cuspidal divisors C_i, D_0 and D_{r-1}."""

import pytest

from core.polynomial import P
from services.cusp_service import FieldParams
from services.divisor_service import (
    CuspidalDivisor,
    DivisorServiceError,
    build_big,
    build_C,
    build_D0,
    build_Dr1,
    combine,
    d0_weights,
    dr1_case,
    dr1_terms,
    dr1_weights,
    weighted_degree,
)

GRID = [
    FieldParams(q=q, deg_p=d, r=r)
    for q in (2, 3, 4, 5)
    for d in (1, 2)
    for r in range(2, 13)
]


class TestBasicDivisors:
    def test_build_C(self):
        params = FieldParams(q=3, deg_p=1, r=4)
        assert build_C(2, params).coeffs == (0, 0, 1, 0, -3)
        assert build_C(0, params).coeffs == (1, 0, 0, 0, -1)

    def test_build_big(self):
        params = FieldParams(q=3, deg_p=1, r=4)
        assert build_big(2, params).coeffs == (0, 0, 1, -3, 0)

    def test_index_out_of_range(self):
        params = FieldParams(q=3, deg_p=1, r=4)
        with pytest.raises(DivisorServiceError):
            build_C(4, params)
        with pytest.raises(DivisorServiceError):
            build_C(0, FieldParams(q=3, deg_p=1, r=1))

    def test_divisor_arithmetic(self):
        a = CuspidalDivisor((1, 0, -1))
        assert (a + a.scale(-1)).is_zero
        assert CuspidalDivisor.zero(2).coeffs == (0, 0, 0)
        with pytest.raises(DivisorServiceError):
            a + CuspidalDivisor((1, -1))

    def test_combine(self):
        params = FieldParams(q=3, deg_p=1, r=4)
        assert combine({1: 2, 3: -1}, params).coeffs == (0, 2, 0, -1, -1)


class TestD0:
    def test_weights_r4(self):
        assert d0_weights(FieldParams(q=3, deg_p=1, r=4)) == {0: 1, 1: 2, 2: 2, 3: 18}

    def test_weights_r5(self):
        assert d0_weights(FieldParams(q=3, deg_p=1, r=5)) == {0: 1, 1: 2, 2: 2, 3: 6, 4: 54}


class TestDr1:
    def test_case_selection(self):
        assert [dr1_case(r) for r in range(2, 11)] == [1, 2, 3, 4, 5, 2, 3, 4, 5]
        with pytest.raises(DivisorServiceError):
            dr1_case(1)

    def test_r2_is_C1(self):
        params = FieldParams(q=3, deg_p=1, r=2)
        assert build_Dr1(params) == build_C(1, params)

    def test_terms_r4(self):
        small, big = dr1_terms(4)
        assert small == {3: P ** 0, 1: -(P ** 4 - P ** 2)}
        assert big == {2: P ** 3 - P ** 2 - P + 1}

    def test_terms_r5(self):
        small, big = dr1_terms(5)
        assert small[1] == -(P ** 5 - P ** 3)
        assert small[2] == P ** 4 - P ** 3 - P ** 2 + P
        assert big == {3: -(2 * P ** 4 - P ** 3 - P ** 2 + P - 1)}

    def test_terms_r6(self):
        small, big = dr1_terms(6)
        assert small[2] == P ** 5 - P ** 4 - P ** 3 + P ** 2
        assert big[3] == -(P ** 4 - P ** 3 + P - 1)
        assert big[4] == -(P ** 5 - P ** 3 + P ** 2 - 1)

    def test_weights_expand_big_terms(self):
        weights = dr1_weights(4)
        b = P ** 3 - P ** 2 - P + 1
        assert weights[2] == b
        assert weights[3] == 1 - P * b
        assert weights[1] == -(P ** 4 - P ** 2)


class TestWeightedDegree:
    @pytest.mark.parametrize("params", GRID, ids=lambda p: p.label())
    def test_generators_have_degree_zero(self, params):
        divisors = [build_C(i, params) for i in range(params.r)]
        divisors += [build_big(i, params) for i in range(params.g, params.r - 1)]
        divisors += [build_D0(params), build_Dr1(params)]
        assert all(weighted_degree(D, params) == 0 for D in divisors)
