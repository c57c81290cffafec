"""
Small finite fields F_q and residues in F_q[T].

Only what exhaustive cusp enumeration needs: table arithmetic in F_q
(q a prime power, elements encoded as 0..q-1), and F_q[T] polynomials as
ascending coefficient tuples.

sympy's galoistools handles the prime subfield (the F_q tables are built
from it) but only works over Z/pZ, so F_q[T] arithmetic for q = p^k, k > 1,
runs through fq_mul, fq_mod and fq_is_irreducible below.
"""

from __future__ import annotations

import logging
from functools import lru_cache
from itertools import product
from typing import Iterator

from sympy import factorint
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_add, gf_irreducible_p, gf_mul, gf_rem

from core.polynomial import ExactArithmeticError

logger = logging.getLogger(__name__)

FqPoly = tuple[int, ...]


def prime_power(q: int) -> tuple[int, int]:
    """Return (p, n) with q = p^n, or raise ValueError."""
    if q < 2:
        raise ValueError(f"q={q} is not a prime power")
    factors = factorint(q)
    if len(factors) != 1:
        raise ValueError(f"q={q} is not a prime power (factors {dict(factors)})")
    (p, n), = factors.items()
    return int(p), int(n)


class FiniteField:
    """
    F_q with q = p^n, realised as F_p[x]/(f) for the least monic irreducible f.

    Element k in 0..q-1 encodes the polynomial whose base-p digits are its
    coefficients (least significant digit = constant term).
    """

    def __init__(self, q: int):
        self.q = q
        self.p, self.n = prime_power(q)
        self.modulus = self._least_irreducible_modulus() if self.n > 1 else None
        self._add = [[0] * q for _ in range(q)]
        self._mul = [[0] * q for _ in range(q)]
        for a in range(q):
            for b in range(q):
                self._add[a][b] = self._encode(gf_add(self._decode(a), self._decode(b), self.p, ZZ))
                self._mul[a][b] = self._encode(self._reduce(gf_mul(self._decode(a), self._decode(b), self.p, ZZ)))
        self._neg = [next(b for b in range(q) if self._add[a][b] == 0) for a in range(q)]
        self._inv = [0] + [next(b for b in range(1, q) if self._mul[a][b] == 1) for a in range(1, q)]
        logger.debug(f"Built F_{q} (p={self.p}, n={self.n}, modulus={self.modulus})")

    def _least_irreducible_modulus(self) -> list[int]:
        for tail in product(range(self.p), repeat=self.n):
            f = [1, *tail]
            if gf_irreducible_p(f, self.p, ZZ):
                return f
        raise ExactArithmeticError(f"no irreducible of degree {self.n} over F_{self.p}")

    def _decode(self, a: int) -> list[int]:
        digits = []
        while a:
            a, d = divmod(a, self.p)
            digits.append(d)
        return digits[::-1]  # galoistools wants highest degree first

    def _encode(self, f: list[int]) -> int:
        out = 0
        for c in f:
            out = out * self.p + int(c) % self.p
        return out

    def _reduce(self, f: list[int]) -> list[int]:
        return gf_rem(f, self.modulus, self.p, ZZ) if self.modulus else f

    def add(self, a: int, b: int) -> int:
        return self._add[a][b]

    def sub(self, a: int, b: int) -> int:
        return self._add[a][self._neg[b]]

    def mul(self, a: int, b: int) -> int:
        return self._mul[a][b]

    def neg(self, a: int) -> int:
        return self._neg[a]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return self._inv[a]

    def units(self) -> range:
        return range(1, self.q)


@lru_cache(maxsize=None)
def get_field(q: int) -> FiniteField:
    return FiniteField(q)


def fq_trim(f: FqPoly) -> FqPoly:
    f = list(f)
    while f and f[-1] == 0:
        f.pop()
    return tuple(f)


def fq_scale(F: FiniteField, k: int, f: FqPoly) -> FqPoly:
    return fq_trim(tuple(F.mul(k, c) for c in f))


def fq_mul(F: FiniteField, f: FqPoly, g: FqPoly) -> FqPoly:
    """Product in F_q[T]; galoistools gf_mul covers prime q only."""
    if not f or not g:
        return ()
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        for j, b in enumerate(g):
            out[i + j] = F.add(out[i + j], F.mul(a, b))
    return fq_trim(tuple(out))


def fq_mod(F: FiniteField, f: FqPoly, m: FqPoly) -> FqPoly:
    """Remainder of f modulo the nonzero polynomial m, over F_q for any prime power q."""
    m = fq_trim(m)
    if not m:
        raise ZeroDivisionError("reduction modulo the zero polynomial")
    rem = list(fq_trim(f))
    inv_lead = F.inv(m[-1])
    while len(rem) >= len(m):
        c = F.mul(rem[-1], inv_lead)
        shift = len(rem) - len(m)
        for j, d in enumerate(m):
            rem[shift + j] = F.sub(rem[shift + j], F.mul(c, d))
        rem = list(fq_trim(tuple(rem)))
    return tuple(rem)


def fq_pow(F: FiniteField, f: FqPoly, e: int) -> FqPoly:
    out: FqPoly = (1,)
    for _ in range(e):
        out = fq_mul(F, out, f)
    return out


def monic_polys(F: FiniteField, degree: int) -> Iterator[FqPoly]:
    """Monic polynomials of the given degree in lexicographic order of (c_{d-1}, ..., c_0)."""
    for head in product(range(F.q), repeat=degree):
        yield tuple(reversed(head)) + (1,)


def fq_is_irreducible(F: FiniteField, f: FqPoly) -> bool:
    """Trial division by monic factors of degree <= d/2; works for any q, unlike gf_irreducible_p."""
    d = len(f) - 1
    if d < 1:
        return False
    for e in range(1, d // 2 + 1):
        for g in monic_polys(F, e):
            if not fq_mod(F, f, g):
                return False
    return True


@lru_cache(maxsize=None)
def least_irreducible(q: int, degree: int) -> FqPoly:
    """The lexicographically least monic irreducible of the given degree over F_q."""
    F = get_field(q)
    for f in monic_polys(F, degree):
        if fq_is_irreducible(F, f):
            return f
    raise ExactArithmeticError(f"no monic irreducible of degree {degree} over F_{q}")


def residues(F: FiniteField, degree: int) -> Iterator[FqPoly]:
    """All polynomials of degree < degree, i.e. representatives of F_q[T]/(m) for deg m = degree."""
    for coeffs in product(range(F.q), repeat=degree):
        yield fq_trim(coeffs)
