"""
Cusp geometry of X_0(p^r).

Arithmetic context (FieldParams), cusp representatives [a; p^j] and their
equivalence, and the closed cuspidal points P_0..P_r with degrees and
residue fields.
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator

from core.finite_field import (
    FqPoly,
    fq_mod,
    fq_pow,
    fq_scale,
    fq_trim,
    get_field,
    least_irreducible,
    prime_power,
    residues,
)

logger = logging.getLogger(__name__)

# residues mod d beyond this are not enumerated exhaustively
MAX_ENUMERATED_RESIDUES = 200_000


class CuspServiceError(Exception):
    """Base exception for cusp geometry errors."""
    pass


class FieldParams(BaseModel):
    """
    Arithmetic context: F_q, a prime p of degree deg_p, and the level p^r.

    Example:
        >>> params = FieldParams(q=3, deg_p=2, r=3)
        >>> params.abs_p, params.m_order, params.n_order
        (9, 10, 1)
    """
    model_config = ConfigDict(frozen=True)

    q: int = Field(ge=2, description="size of the constant field, a prime power")
    deg_p: int = Field(ge=1, description="degree of the monic irreducible p")
    r: int = Field(ge=1, description="exponent of the level p^r")

    @field_validator("q")
    @classmethod
    def _q_is_prime_power(cls, v: int) -> int:
        prime_power(v)
        return v

    @property
    def abs_p(self) -> int:
        """|p| = q^deg_p."""
        return self.q ** self.deg_p

    @property
    def m_order(self) -> int:
        return derived_scalars(self)[0]

    @property
    def n_order(self) -> int:
        return derived_scalars(self)[1]

    @property
    def h(self) -> int:
        """Last index of the small generators C_1..C_h, h = floor((r-1)/2)."""
        return (self.r - 1) // 2

    @property
    def g(self) -> int:
        """First index of the big generators C_i - |p|C_{i+1}, g = floor((r+1)/2)."""
        return (self.r + 1) // 2

    @property
    def abs_p_is_two(self) -> bool:
        return self.abs_p == 2

    def label(self) -> str:
        return f"q={self.q}, deg_p={self.deg_p}, r={self.r}"


def derived_scalars(params: FieldParams) -> Tuple[int, int]:
    """
    The order constants (M(p), N(p)).

    M = (|p|^2 - 1)/(q^2 - 1); N = (|p| - 1)/(q^2 - 1) for even deg_p and
    (|p| - 1)/(q - 1) otherwise.

    Raises:
        CuspServiceError: if a quotient is not integral
    """
    P, q = params.abs_p, params.q
    n_den = q * q - 1 if params.deg_p % 2 == 0 else q - 1
    M, m_rem = divmod(P * P - 1, q * q - 1)
    N, n_rem = divmod(P - 1, n_den)
    if m_rem or n_rem:
        raise CuspServiceError(f"non-integral order constants for {params.label()}")
    return M, N


def point_degree(i: int, params: FieldParams) -> int:
    """Degree of the closed point P_i: 1 if min(i, r-i) = 0, else (|p|^e - |p|^(e-1))/(q-1)."""
    if not 0 <= i <= params.r:
        raise CuspServiceError(f"closed point index {i} outside 0..{params.r}")
    e = min(i, params.r - i)
    if e == 0:
        return 1
    P = params.abs_p
    degree, rem = divmod(P ** e - P ** (e - 1), params.q - 1)
    if rem:
        raise CuspServiceError(f"non-integral degree for P_{i} at {params.label()}")
    return degree


@dataclass(frozen=True)
class ResidueField:
    """Descriptor of K(P_i): the base field K, or the maximal real subfield K(p^e)+."""
    conductor_exp: int
    degree: int

    @property
    def tag(self) -> str:
        if self.conductor_exp == 0:
            return "K"
        if self.conductor_exp == 1:
            return "K(p)+"
        return f"K(p^{self.conductor_exp})+"


@dataclass(frozen=True)
class ClosedPoint:
    """Galois orbit P_i of the cusps of height p^i."""
    index: int
    d_exp: int
    degree: int
    residue_field: ResidueField
    name: str


@dataclass(frozen=True)
class CuspRep:
    """
    Cusp [a; p^j] with a a residue modulo d = p^min(j, r-j).

    The numerator is an ascending coefficient tuple over F_q; it is (1,)
    whenever d = 1.
    """
    height_exp: int
    numerator: FqPoly


def residue_field(point: ClosedPoint, params: FieldParams) -> ResidueField:
    """Residue field of a cuspidal closed point; its degree over K equals point.degree."""
    return ResidueField(conductor_exp=point.d_exp, degree=point_degree(point.index, params))


def enumerate_closed_points(params: FieldParams) -> List[ClosedPoint]:
    """The r+1 closed cuspidal points P_0..P_r."""
    points = []
    for i in range(params.r + 1):
        e = min(i, params.r - i)
        degree = point_degree(i, params)
        if i == 0:
            name = "omega_0"
        elif i == params.r:
            name = "omega_inf"
        else:
            name = f"P_{i}"
        points.append(ClosedPoint(i, e, degree, ResidueField(e, degree), name))
    logger.debug(f"Closed points for {params.label()}: {[p.degree for p in points]}")
    return points


def prime_polynomial(params: FieldParams) -> FqPoly:
    """The lexicographically least monic irreducible of degree deg_p over F_q."""
    return least_irreducible(params.q, params.deg_p)


def _modulus(height_exp: int, params: FieldParams) -> Tuple[int, FqPoly]:
    if not 0 <= height_exp <= params.r:
        raise CuspServiceError(f"height p^{height_exp} does not divide p^{params.r}")
    e = min(height_exp, params.r - height_exp)
    F = get_field(params.q)
    return e, fq_pow(F, prime_polynomial(params), e)


def cusp_equiv(c1: CuspRep, c2: CuspRep, params: FieldParams) -> bool:
    """
    True iff the cusps have the same height and k*a = a' mod d for some k in F_q^x.

    Example:
        >>> params = FieldParams(q=3, deg_p=1, r=2)
        >>> cusp_equiv(CuspRep(1, (1,)), CuspRep(1, (2,)), params)
        True
    """
    if c1.height_exp != c2.height_exp:
        return False
    e, d = _modulus(c1.height_exp, params)
    if e == 0:
        return True
    F = get_field(params.q)
    a = fq_mod(F, c1.numerator, d)
    b = fq_mod(F, c2.numerator, d)
    return any(fq_scale(F, k, a) == b for k in F.units())


def _canonical(numerator: FqPoly, params: FieldParams) -> FqPoly:
    F = get_field(params.q)
    # tuples compare in ascending-coefficient order; any fixed total order works
    return min(fq_scale(F, k, numerator) for k in F.units())


def enumerate_cusp_classes(params: FieldParams) -> Dict[int, List[CuspRep]]:
    """
    Exhaustive list of cusp classes per height, one canonical representative each.

    Only meant for small parameters; residues mod d are listed one by one.

    Raises:
        CuspServiceError: if some modulus has too many residues to enumerate
    """
    F = get_field(params.q)
    p = prime_polynomial(params)
    classes: Dict[int, List[CuspRep]] = {}
    for j in range(params.r + 1):
        e, _ = _modulus(j, params)
        if e == 0:
            classes[j] = [CuspRep(j, (1,))]
            continue
        width = e * params.deg_p
        if params.q ** width > MAX_ENUMERATED_RESIDUES:
            raise CuspServiceError(
                f"{params.q ** width} residues mod p^{e} is too many to enumerate"
            )
        seen = set()
        for a in residues(F, width):
            if not fq_mod(F, a, p):
                continue
            seen.add(_canonical(fq_trim(a), params))
        classes[j] = [CuspRep(j, a) for a in sorted(seen)]
        logger.debug(f"height p^{j}: {len(seen)} classes")
    total = sum(len(v) for v in classes.values())
    logger.info(f"🔎 Enumerated {total} cusps for {params.label()}")
    return classes
