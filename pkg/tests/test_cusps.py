"""Tests for finite fields and the cusp geometry of X_0(p^r)."""

import pytest
from pydantic import ValidationError

from core.finite_field import (
    FiniteField,
    fq_is_irreducible,
    fq_mod,
    fq_mul,
    least_irreducible,
    prime_power,
)
from services.cusp_service import (
    CuspRep,
    CuspServiceError,
    FieldParams,
    cusp_equiv,
    derived_scalars,
    enumerate_closed_points,
    enumerate_cusp_classes,
    point_degree,
)


class TestFiniteField:
    def test_prime_power(self):
        assert prime_power(8) == (2, 3)
        assert prime_power(5) == (5, 1)
        with pytest.raises(ValueError):
            prime_power(6)

    @pytest.mark.parametrize("q", [2, 3, 4, 5, 8, 9])
    def test_every_unit_is_invertible(self, q):
        F = FiniteField(q)
        for a in F.units():
            assert F.mul(a, F.inv(a)) == 1
            assert F.add(a, F.neg(a)) == 0

    def test_f4_has_no_zero_divisors(self):
        F = FiniteField(4)
        assert all(F.mul(a, b) != 0 for a in F.units() for b in F.units())

    def test_least_irreducible(self):
        assert least_irreducible(3, 1) == (0, 1)
        assert least_irreducible(2, 2) == (1, 1, 1)
        assert fq_is_irreducible(FiniteField(4), least_irreducible(4, 2))

    def test_polynomial_remainder(self):
        F = FiniteField(3)
        f = fq_mul(F, (1, 1), (2, 0, 1))
        assert fq_mod(F, f, (1, 1)) == ()


class TestFieldParams:
    def test_derived_scalars(self):
        params = FieldParams(q=3, deg_p=2, r=3)
        assert params.abs_p == 9
        assert derived_scalars(params) == (10, 1)
        assert FieldParams(q=3, deg_p=1, r=2).n_order == 1
        assert FieldParams(q=2, deg_p=3, r=2).n_order == 7

    def test_h_and_g(self):
        params = FieldParams(q=3, deg_p=1, r=7)
        assert (params.h, params.g) == (3, 4)
        params = FieldParams(q=3, deg_p=1, r=8)
        assert (params.h, params.g) == (3, 4)

    def test_rejects_non_prime_power(self):
        with pytest.raises(ValidationError):
            FieldParams(q=6, deg_p=1, r=2)

    def test_rejects_bad_ranges(self):
        with pytest.raises(ValidationError):
            FieldParams(q=3, deg_p=0, r=2)
        with pytest.raises(ValidationError):
            FieldParams(q=3, deg_p=1, r=0)

    def test_is_frozen(self):
        params = FieldParams(q=3, deg_p=1, r=2)
        with pytest.raises(ValidationError):
            params.r = 3


class TestClosedPoints:
    def test_degrees_r4(self):
        points = enumerate_closed_points(FieldParams(q=3, deg_p=1, r=4))
        assert [p.degree for p in points] == [1, 1, 3, 1, 1]
        assert points[0].name == "omega_0"
        assert points[-1].name == "omega_inf"

    def test_residue_fields(self):
        points = enumerate_closed_points(FieldParams(q=3, deg_p=1, r=4))
        assert [p.residue_field.tag for p in points] == ["K", "K(p)+", "K(p^2)+", "K(p)+", "K"]

    def test_point_degree_out_of_range(self):
        with pytest.raises(CuspServiceError):
            point_degree(5, FieldParams(q=3, deg_p=1, r=4))


class TestCuspClasses:
    def test_equivalence_up_to_units(self):
        params = FieldParams(q=3, deg_p=1, r=2)
        assert cusp_equiv(CuspRep(1, (1,)), CuspRep(1, (2,)), params)
        assert not cusp_equiv(CuspRep(0, (1,)), CuspRep(1, (1,)), params)

    def test_inequivalent_residues(self):
        params = FieldParams(q=3, deg_p=1, r=4)
        # mod T^2: 1 and 1 + T are not unit multiples of each other
        assert not cusp_equiv(CuspRep(2, (1,)), CuspRep(2, (1, 1)), params)
        assert cusp_equiv(CuspRep(2, (1, 1)), CuspRep(2, (2, 2)), params)

    @pytest.mark.parametrize("q", [2, 3, 4])
    @pytest.mark.parametrize("deg_p", [1, 2])
    @pytest.mark.parametrize("r", [1, 2, 3, 4, 5])
    def test_enumeration_matches_orbit_sizes(self, q, deg_p, r):
        params = FieldParams(q=q, deg_p=deg_p, r=r)
        classes = enumerate_cusp_classes(params)
        points = enumerate_closed_points(params)
        assert [len(classes[p.index]) for p in points] == [p.degree for p in points]

    def test_enumeration_cap(self):
        with pytest.raises(CuspServiceError):
            enumerate_cusp_classes(FieldParams(q=9, deg_p=3, r=6))
