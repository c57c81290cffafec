"""
Delta-quotient exponents of cuspidal divisors.

The Upsilon matrix sends a divisor (a_0, ..., a_r) to the exponents of the
Delta-quotient attached to it; clearing denominators at the order of the
divisor class gives an integer vector E, and the exponent of p at the k-th
cusp coordinate is

    sigma_k = sum_j E_j (min(k, j) - j).

Torsion-unit factors are ignored throughout; only the p-part is tracked.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import List, Optional, Sequence, Tuple, TypeVar

from core.polynomial import P, PolyZ
from services.cusp_service import FieldParams
from services.divisor_service import (
    CBasis,
    CuspidalDivisor,
    build_big,
    build_C,
    build_D0,
    build_Dr1,
    weighted_degree,
)

logger = logging.getLogger(__name__)

T = TypeVar("T", int, PolyZ)


class DeltaQuotientError(Exception):
    """Raised when a divisor or order does not produce a valid Delta-quotient."""
    pass


@dataclass(frozen=True)
class UpsilonMatrix:
    """Tridiagonal (r+1) x (r+1) integer matrix of the g-map."""
    size: int
    entries: Tuple[Tuple[int, ...], ...]

    def __getitem__(self, index: Tuple[int, int]) -> int:
        i, j = index
        return self.entries[i][j]

    def apply(self, a: Sequence[int]) -> List[int]:
        if len(a) != self.size:
            raise DeltaQuotientError(f"vector of length {len(a)} for Upsilon of size {self.size}")
        out = []
        for i, row in enumerate(self.entries):
            lo, hi = max(0, i - 1), min(self.size, i + 2)
            out.append(sum(row[j] * a[j] for j in range(lo, hi)))
        return out

    def is_tridiagonal(self) -> bool:
        return all(
            self.entries[i][j] == 0
            for i in range(self.size)
            for j in range(self.size)
            if abs(i - j) >= 2
        )


@dataclass(frozen=True)
class DeltaQuotient:
    """Rational exponents r_m of Delta_m for m = p^0..p^r, optionally with the cleared form."""
    r_exps: Tuple[Fraction, ...]
    cleared: Optional[Tuple[int, ...]] = None

    @property
    def total(self) -> Fraction:
        return sum(self.r_exps, Fraction(0))


@dataclass(frozen=True)
class TensorElement:
    """The element sum_k p^(coords[k]) (x) 1/denom, coordinates taken mod denom."""
    coords: Tuple[int, ...]
    denom: int

    def __post_init__(self) -> None:
        if self.denom <= 0:
            raise DeltaQuotientError(f"tensor denominator must be positive, got {self.denom}")


@dataclass(frozen=True)
class Generator:
    """One generator of the cuspidal class group with its order."""
    tag: str
    kind: str
    index: int
    order: int
    row: int


def _m(j: int, r: int) -> int:
    return min(j, r - j)


def upsilon_entry(i: int, j: int, r: int, q: int, abs_p: int) -> int:
    if (i, j) in ((0, 0), (r, r)):
        return (q - 1) * abs_p
    if (i, j) in ((1, 0), (r - 1, r)):
        return 1 - q
    if i == j:
        return (abs_p * abs_p + 1) * abs_p ** (_m(j, r) - 1)
    if abs(i - j) == 1 and j not in (0, r):
        return -abs_p ** _m(j, r)
    return 0


def build_upsilon(params: FieldParams) -> UpsilonMatrix:
    """Upsilon(p^r) at P = |p|, with m(j) = min(j, r - j)."""
    r = params.r
    entries = tuple(
        tuple(upsilon_entry(i, j, r, params.q, params.abs_p) for j in range(r + 1))
        for i in range(r + 1)
    )
    return UpsilonMatrix(r + 1, entries)


def _check_divisor(D: CuspidalDivisor, params: FieldParams) -> None:
    if len(D.coeffs) != params.r + 1:
        raise DeltaQuotientError(f"divisor has {len(D.coeffs)} coefficients, expected {params.r + 1}")
    deg = weighted_degree(D, params)
    if deg != 0:
        raise DeltaQuotientError(f"divisor {D.coeffs} has weighted degree {deg}, not 0")


def g_map(D: CuspidalDivisor, params: FieldParams) -> DeltaQuotient:
    """
    Exponent vector Upsilon a / ((q-1) |p|^(r-1) (|p|^2-1)).

    Raises:
        DeltaQuotientError: if D is not of degree zero
    """
    _check_divisor(D, params)
    Pv = params.abs_p
    den = (params.q - 1) * Pv ** (params.r - 1) * (Pv * Pv - 1)
    image = build_upsilon(params).apply(D.coeffs)
    dq = DeltaQuotient(tuple(Fraction(x, den) for x in image))
    if dq.total != 0:
        raise DeltaQuotientError(f"exponents of {D.coeffs} do not sum to zero")
    return dq


def integer_exponents(D: CuspidalDivisor, ord: int, params: FieldParams) -> Tuple[int, ...]:
    """
    E = ord (q^2-1) Upsilon a / (|p|^(r-1) (|p|^2-1)), which must be integral.

    Raises:
        DeltaQuotientError: if ord < 1, D has nonzero degree, or E is not integral
    """
    if ord < 1:
        raise DeltaQuotientError(f"order must be positive, got {ord}")
    _check_divisor(D, params)
    Pv = params.abs_p
    den = Pv ** (params.r - 1) * (Pv * Pv - 1)
    scale = ord * (params.q * params.q - 1)
    E = []
    for j, x in enumerate(build_upsilon(params).apply(D.coeffs)):
        value, rem = divmod(scale * x, den)
        if rem:
            raise DeltaQuotientError(
                f"exponent {j} of {D.coeffs} is not integral at order {ord} ({params.label()})"
            )
        E.append(value)
    return tuple(E)


def sigma_functional(E: Sequence[T]) -> List[T]:
    """sigma_k = sum_j E_j (min(k, j) - j) for k = 0..len(E)-2; works over Z and Z[P]."""
    n = len(E) - 1
    out: List[T] = []
    for k in range(n):
        acc = 0
        for j in range(k + 1, n + 1):
            acc = acc + E[j] * (k - j)
        out.append(acc)
    return out


def sigma_oracle(E: Sequence[int], params: FieldParams) -> Tuple[int, ...]:
    """Exponent of p at each coordinate k = 0..r-1 of the class with cleared exponents E."""
    if len(E) != params.r + 1:
        raise DeltaQuotientError(f"E has length {len(E)}, expected {params.r + 1}")
    return tuple(sigma_functional(list(E)))


def tensor_normalize(raw: TensorElement) -> TensorElement:
    """
    Canonical form in (Q/Z)^n: coordinates reduced mod denom, common factors removed.

    Example:
        >>> tensor_normalize(TensorElement((3, 9), 6))
        TensorElement(coords=(1, 1), denom=2)
    """
    c = raw.denom
    u = [x % c for x in raw.coords]
    g = gcd(c, *u)
    return TensorElement(tuple(x // g for x in u), c // g)


def oracle_element(D: CuspidalDivisor, ord: int, params: FieldParams) -> TensorElement:
    """delta-bar of the class of D as p^(-sigma) (x) 1/((q-1) ord), normalized."""
    E = integer_exponents(D, ord, params)
    sigma = sigma_oracle(E, params)
    return tensor_normalize(TensorElement(tuple(-s for s in sigma), (params.q - 1) * ord))


# -- symbolic side (no dependence on q) ---------------------------------------


def c_image(j: int, r: int) -> List[PolyZ]:
    """
    Upsilon applied to C_j for 1 <= j <= r-1, as polynomials in P.

    Equal to P^(t-1) V_j with t = min(j, r-j), where V_j has -P at j-1,
    P^2+1 at j, -P at j+1, P-1 at r-1 and P-P^2 at r (overlaps add).
    """
    if not 1 <= j <= r - 1:
        raise DeltaQuotientError(f"symbolic image of C_{j} needs 1 <= j <= {r - 1}")
    u = P - 1
    v = [PolyZ.zero()] * (r + 1)
    v[j - 1] = v[j - 1] - P
    v[j] = v[j] + P * P + 1
    v[j + 1] = v[j + 1] - P
    v[r - 1] = v[r - 1] + u
    v[r] = v[r] - u * P
    return [x.shift(_m(j, r) - 1) for x in v]


def symbolic_exponents(weights: CBasis, r: int) -> List[PolyZ]:
    """
    Cleared exponents E at order M(p) of sum_j w_j C_j, as polynomials in P.

    At that order E = Upsilon a / P^(r-1); the division must be exact.
    """
    total = [PolyZ.zero()] * (r + 1)
    for j, w in weights.items():
        for k, x in enumerate(c_image(j, r)):
            if not x.is_zero:
                total[k] = total[k] + w * x
    return [x.shift(-(r - 1)) for x in total]


# -- generators and their orders ----------------------------------------------


def generator_orders(params: FieldParams) -> List[Generator]:
    """
    Generators of the cuspidal class group with their orders, in matrix row order.

    Row 0 is D_0 (order N), rows 1..h are C_i (order |p|^(r-i) M), rows g..r-2
    are C_i - |p|C_{i+1} (order |p|^i M) and row r-1 is D_{r-1} (order M).
    For r = 1 the group is cyclic of order N, generated by P_0 - P_1.
    """
    M, N, Pv, r = params.m_order, params.n_order, params.abs_p, params.r
    if r == 1:
        return [Generator("P_0-P_1", "cyclic", 0, N, 0)]
    gens = [Generator("D_0", "d0", 0, N, 0)]
    for i in range(1, params.h + 1):
        gens.append(Generator(f"C_{i}", "small", i, Pv ** (r - i) * M, i))
    for i in range(params.g, r - 1):
        gens.append(Generator(f"C_{i}-|p|C_{i + 1}", "big", i, Pv ** i * M, i))
    gens.append(Generator(f"D_{r - 1}", "dr1", r - 1, M, r - 1))
    return gens


def generator_divisor(gen: Generator, params: FieldParams) -> CuspidalDivisor:
    if gen.kind == "d0":
        return build_D0(params)
    if gen.kind == "small":
        return build_C(gen.index, params)
    if gen.kind == "big":
        return build_big(gen.index, params)
    if gen.kind == "dr1":
        return build_Dr1(params)
    raise DeltaQuotientError(f"no divisor builder for generator {gen.tag}")


def generator_elements(params: FieldParams) -> List[Tuple[Generator, TensorElement]]:
    """Oracle image of every generator, in row order."""
    out = []
    for gen in generator_orders(params):
        element = oracle_element(generator_divisor(gen, params), gen.order, params)
        out.append((gen, element))
    logger.debug(f"Oracle images for {params.label()}: {len(out)} generators")
    return out
