"""Tests for PolyZ."""

import random

import pytest

from core.polynomial import P, ExactArithmeticError, PolyZ, poly_eval


class TestPolyZArithmetic:
    def test_trailing_zeros_are_trimmed(self):
        assert PolyZ((1, 2, 0, 0)).coeffs == (1, 2)
        assert PolyZ((0, 0)).is_zero

    def test_product_and_sum(self):
        assert (P - 1) * (P + 1) == P ** 2 - 1
        assert (P - 1) ** 2 + (P - 1) == P ** 2 - P

    def test_int_coercion_on_both_sides(self):
        assert 1 - P == -(P - 1)
        assert 3 * P == P + P + P
        assert (P * 0).is_zero

    def test_degree_and_residue(self):
        f = 4 * P ** 4 - 12 * P ** 3 + 5 * P ** 2 + 11 * P - 8
        assert f.degree == 4
        assert f.residue() == -8
        assert PolyZ.zero().degree == -1

    def test_evaluate(self):
        f = P ** 4 - 2 * P ** 3 + 2 * P
        assert f(2) == 4
        assert poly_eval(f, 3) == 33


class TestPolyZDivision:
    def test_shift_up_and_down(self):
        f = P ** 2 - 1
        assert f.shift(3) == P ** 5 - P ** 3
        assert f.shift(3).shift(-3) == f

    def test_shift_down_requires_divisibility(self):
        with pytest.raises(ExactArithmeticError):
            (P ** 2 - 1).shift(-1)

    def test_exquo(self):
        assert (P ** 3 - 1).exquo(P - 1) == P ** 2 + P + 1

    def test_exquo_with_remainder_fails(self):
        with pytest.raises(ExactArithmeticError):
            (P ** 2 + 1).exquo(P - 1)

    def test_non_integral_quotient_fails(self):
        with pytest.raises(ExactArithmeticError):
            (P + 1).divmod(2 * P + 1)

    def test_division_by_zero(self):
        with pytest.raises(ZeroDivisionError):
            P.divmod(0)

    def test_negative_monomial(self):
        with pytest.raises(ExactArithmeticError):
            PolyZ.monomial(-1)
        with pytest.raises(ExactArithmeticError):
            P ** -1


class TestPolyZPresentation:
    def test_str(self):
        assert str(P ** 4 - 2 * P ** 3 + 2 * P) == "P^4 - 2P^3 + 2P"
        assert str(-P + 1) == "-P + 1"
        assert str(PolyZ.zero()) == "0"

    def test_to_list_is_ascending(self):
        assert (-1 - P ** 2 + P ** 3).to_list() == [-1, 0, -1, 1]
        assert PolyZ.zero().to_list() == []


class TestPolyZEvaluation:
    @pytest.mark.parametrize("seed", range(8))
    def test_evaluation_is_a_ring_map(self, seed):
        rng = random.Random(seed)
        a = PolyZ(tuple(rng.randint(-9, 9) for _ in range(rng.randint(0, 6))))
        b = PolyZ(tuple(rng.randint(-9, 9) for _ in range(rng.randint(0, 6))))
        for x in (-3, 0, 1, 2, 7):
            assert poly_eval(a + b, x) == poly_eval(a, x) + poly_eval(b, x)
            assert poly_eval(a * b, x) == poly_eval(a, x) * poly_eval(b, x)
            assert poly_eval(a - b, x) == poly_eval(a, x) - poly_eval(b, x)
