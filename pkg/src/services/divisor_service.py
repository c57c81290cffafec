"""
Rational cuspidal divisors C_i, D_0 and D_{r-1}.

Divisors are integer vectors over the closed points P_0..P_r, with P_r
playing the role of [infinity]. D_{r-1} is also available symbolically, as
a combination of the C_i with weights in Z[P].
"""

import logging
from dataclasses import dataclass
from typing import Dict, Tuple

from core.polynomial import P, PolyZ
from services.cusp_service import FieldParams, point_degree

logger = logging.getLogger(__name__)

CBasis = Dict[int, PolyZ]


class DivisorServiceError(Exception):
    """Raised for divisor requests outside the generator family."""
    pass


@dataclass(frozen=True)
class CuspidalDivisor:
    """Coefficients (a_0, ..., a_r) on the closed points P_0..P_r."""
    coeffs: Tuple[int, ...]

    def __add__(self, other: "CuspidalDivisor") -> "CuspidalDivisor":
        if len(self.coeffs) != len(other.coeffs):
            raise DivisorServiceError("divisors on different curves")
        return CuspidalDivisor(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def scale(self, k: int) -> "CuspidalDivisor":
        return CuspidalDivisor(tuple(k * a for a in self.coeffs))

    @classmethod
    def zero(cls, r: int) -> "CuspidalDivisor":
        return cls((0,) * (r + 1))

    @property
    def is_zero(self) -> bool:
        return not any(self.coeffs)


def _require_r(params: FieldParams, what: str) -> None:
    if params.r < 2:
        raise DivisorServiceError(f"{what} needs r >= 2, got r={params.r}")


def weighted_degree(D: CuspidalDivisor, params: FieldParams) -> int:
    """Sum of a_i * deg(P_i)."""
    return sum(a * point_degree(i, params) for i, a in enumerate(D.coeffs))


def build_C(i: int, params: FieldParams) -> CuspidalDivisor:
    """
    C_i = P_i - deg(P_i) P_r.

    Args:
        i: index in 0..r-1
        params: arithmetic context with r >= 2

    Returns:
        The degree-zero divisor C_i

    Raises:
        DivisorServiceError: if i is out of range
    """
    _require_r(params, "C_i")
    if not 0 <= i <= params.r - 1:
        raise DivisorServiceError(f"C_{i} is defined for 0 <= i <= {params.r - 1}")
    coeffs = [0] * (params.r + 1)
    coeffs[i] += 1
    coeffs[params.r] -= point_degree(i, params)
    return CuspidalDivisor(tuple(coeffs))


def build_big(i: int, params: FieldParams) -> CuspidalDivisor:
    """C_i - |p| C_{i+1}."""
    return build_C(i, params) + build_C(i + 1, params).scale(-params.abs_p)


def combine(weights: Dict[int, int], params: FieldParams) -> CuspidalDivisor:
    """Integer combination sum_j w_j C_j."""
    D = CuspidalDivisor.zero(params.r)
    for j, w in sorted(weights.items()):
        if w:
            D = D + build_C(j, params).scale(w)
    return D


def d0_weights(params: FieldParams) -> Dict[int, int]:
    """C-basis weights of D_0 = C_0 + (q-1)(sum C_i + sum |p|^(2i-r) C_i)."""
    _require_r(params, "D_0")
    r, half = params.r, params.r // 2
    weights = {0: 1}
    for i in range(1, half + 1):
        weights[i] = params.q - 1
    # for even r the boundary i = r/2 sits in the first sum; |p|^0 = 1 either way
    for i in range(half + 1, r):
        weights[i] = (params.q - 1) * params.abs_p ** (2 * i - r)
    return weights


def build_D0(params: FieldParams) -> CuspidalDivisor:
    """D_0 expanded to closed-point coordinates."""
    return combine(d0_weights(params), params)


def _small_weight(i: int, r: int) -> PolyZ:
    return P ** (r - 1) - P ** (r - 2) - P ** (r - 2 * i + 1) + P ** (r - 2 * i)


def dr1_case(r: int) -> int:
    """Which of the five D_{r-1} definitions applies: 1 for r = 2, else 2..5 by r mod 4."""
    if r < 2:
        raise DivisorServiceError(f"D_(r-1) needs r >= 2, got r={r}")
    if r == 2:
        return 1
    return {3: 2, 0: 3, 1: 4, 2: 5}[r % 4]


def dr1_terms(r: int) -> Tuple[CBasis, CBasis]:
    """
    D_{r-1} as (weights on C_i, weights on C_i - |p| C_{i+1}), both in Z[P].

    Example:
        >>> small, big = dr1_terms(4)
        >>> str(small[1]), str(big[2])
        ('-P^4 + P^2', 'P^3 - P^2 - P + 1')
    """
    case = dr1_case(r)
    if case == 1:
        return {1: PolyZ.one()}, {}
    h, g = (r - 1) // 2, (r + 1) // 2
    small: CBasis = {r - 1: PolyZ.one(), 1: -(P ** r - P ** (r - 2))}
    for i in range(2, h + 1):
        small[i] = small.get(i, PolyZ.zero()) + _small_weight(i, r)
    big: CBasis = {}
    if case == 2:
        c = (r - 1) // 2
        for i in range(g, r - 1):
            big[i] = -(P ** i - P ** c + P ** (i - c) - 1)
    elif case == 3:
        c = r // 2
        for i in range(g, r - 1):
            if i % 2 == 0:
                big[i] = P ** (i + 1) - 2 * P ** i + P ** c - P ** (i - c + 1) + 1
            else:
                big[i] = -(P ** (i + 1) - P ** c + P ** (i - c + 1) - 1)
    elif case == 4:
        c = (r - 1) // 2
        for i in range(g, r - 1):
            if i % 2 == 1:
                big[i] = -(2 * P ** (i + 1) - P ** i - P ** c + P ** (i - c) - 1)
            else:
                big[i] = -(P ** i - P ** c + P ** (i - c) - 1)
    else:
        c = r // 2
        for i in range(g, r - 1):
            big[i] = -(P ** (i + 1) - P ** c + P ** (i - c + 1) - 1)
    return small, big


def dr1_weights(r: int) -> CBasis:
    """D_{r-1} with the big combinations expanded, as Z[P] weights on C_1..C_{r-1}."""
    small, big = dr1_terms(r)
    weights = dict(small)
    for i, w in big.items():
        weights[i] = weights.get(i, PolyZ.zero()) + w
        weights[i + 1] = weights.get(i + 1, PolyZ.zero()) - P * w
    return {j: w for j, w in sorted(weights.items()) if not w.is_zero}


def build_Dr1(params: FieldParams) -> CuspidalDivisor:
    """
    D_{r-1} expanded to closed-point coordinates at P = |p|.

    Raises:
        DivisorServiceError: if r < 2
    """
    _require_r(params, "D_(r-1)")
    weights = {j: w.evaluate(params.abs_p) for j, w in dr1_weights(params.r).items()}
    D = combine(weights, params)
    logger.debug(f"D_(r-1) (case {dr1_case(params.r)}) for {params.label()}: {D.coeffs}")
    return D
