"""
Dense univariate polynomials over the integers.

The indeterminate is written ``P`` and stands for the norm |p| = q^deg(p)
of the prime. Coefficients are plain Python ints, so every operation is
exact at any size.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterable, Union

logger = logging.getLogger(__name__)


class ExactArithmeticError(ArithmeticError):
    """Raised when an operation that must be exact is not (inexact division, bad shape)."""
    pass


Scalar = Union[int, "PolyZ"]


def _trim(coeffs: Iterable[int]) -> tuple[int, ...]:
    out = list(coeffs)
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


@dataclass(frozen=True, slots=True)
class PolyZ:
    """
    Polynomial in P with integer coefficients, stored in ascending degree.

    The zero polynomial has an empty coefficient tuple; otherwise the
    leading coefficient is nonzero.

    Example:
        >>> p = PolyZ.var() ** 2 - 1
        >>> p(3)
        8
        >>> str(p)
        'P^2 - 1'
    """
    coeffs: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "coeffs", _trim(int(c) for c in self.coeffs))

    # -- constructors ----------------------------------------------------

    @classmethod
    def zero(cls) -> PolyZ:
        return cls(())

    @classmethod
    def one(cls) -> PolyZ:
        return cls((1,))

    @classmethod
    def constant(cls, c: int) -> PolyZ:
        return cls((c,))

    @classmethod
    def var(cls) -> PolyZ:
        """The indeterminate P."""
        return cls((0, 1))

    @classmethod
    def monomial(cls, exponent: int, coeff: int = 1) -> PolyZ:
        """coeff * P^exponent; a negative exponent is not a polynomial."""
        if exponent < 0:
            raise ExactArithmeticError(
                f"P^{exponent} is not a polynomial (negative exponent)"
            )
        return cls((0,) * exponent + (coeff,))

    @classmethod
    def coerce(cls, value: Scalar) -> PolyZ:
        if isinstance(value, PolyZ):
            return value
        if isinstance(value, int):
            return cls((value,))
        raise TypeError(f"cannot interpret {type(value).__name__} as PolyZ")

    # -- queries ---------------------------------------------------------

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def coeff(self, k: int) -> int:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else 0

    def residue(self) -> int:
        """Constant term, i.e. the image under P -> 0."""
        return self.coeff(0)

    def evaluate(self, x: int) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    __call__ = evaluate

    # -- arithmetic ------------------------------------------------------

    def __add__(self, other: Scalar) -> PolyZ:
        other = PolyZ.coerce(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for k, c in enumerate(b):
            out[k] += c
        return PolyZ(tuple(out))

    __radd__ = __add__

    def __neg__(self) -> PolyZ:
        return PolyZ(tuple(-c for c in self.coeffs))

    def __sub__(self, other: Scalar) -> PolyZ:
        return self + (-PolyZ.coerce(other))

    def __rsub__(self, other: Scalar) -> PolyZ:
        return PolyZ.coerce(other) - self

    def __mul__(self, other: Scalar) -> PolyZ:
        if isinstance(other, int):
            if other == 0:
                return PolyZ.zero()
            return PolyZ(tuple(c * other for c in self.coeffs))
        other = PolyZ.coerce(other)
        if self.is_zero or other.is_zero:
            return PolyZ.zero()
        a, b = self.coeffs, other.coeffs
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x == 0:
                continue
            for j, y in enumerate(b):
                if y:
                    out[i + j] += x * y
        return PolyZ(tuple(out))

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> PolyZ:
        if exponent < 0:
            raise ExactArithmeticError("negative powers are not polynomials")
        result, base = PolyZ.one(), self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def shift(self, k: int) -> PolyZ:
        """Multiply by P^k (k >= 0) or divide exactly by P^-k (k < 0)."""
        if k >= 0:
            return PolyZ((0,) * k + self.coeffs) if self.coeffs else self
        k = -k
        if any(self.coeffs[:k]):
            raise ExactArithmeticError(f"{self} is not divisible by P^{k}")
        return PolyZ(self.coeffs[k:])

    def divmod(self, divisor: Scalar) -> tuple[PolyZ, PolyZ]:
        """
        Long division over Z.

        Only defined when every quotient coefficient is an integer, which
        always holds when the division is exact in Z[P]. A non-integral step
        raises ExactArithmeticError.
        """
        divisor = PolyZ.coerce(divisor)
        if divisor.is_zero:
            raise ZeroDivisionError("division by the zero polynomial")
        rem = list(self.coeffs)
        dlen = len(divisor.coeffs)
        lead = divisor.leading
        if len(rem) < dlen:
            return PolyZ.zero(), self
        quot = [0] * (len(rem) - dlen + 1)
        for k in range(len(quot) - 1, -1, -1):
            top = rem[k + dlen - 1]
            if top == 0:
                continue
            c, m = divmod(top, lead)
            if m:
                raise ExactArithmeticError(
                    f"non-integral quotient coefficient dividing {self} by {divisor}"
                )
            quot[k] = c
            for j, d in enumerate(divisor.coeffs):
                rem[k + j] -= c * d
        return PolyZ(tuple(quot)), PolyZ(tuple(rem))

    def exquo(self, divisor: Scalar) -> PolyZ:
        """Exact quotient; any remainder is an arithmetic bug and aborts."""
        quot, rem = self.divmod(divisor)
        if not rem.is_zero:
            raise ExactArithmeticError(f"{divisor} does not divide {self} (remainder {rem})")
        return quot

    # -- presentation ----------------------------------------------------

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        terms: list[str] = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            mag = abs(c)
            if k == 0:
                body = str(mag)
            else:
                mono = "P" if k == 1 else f"P^{k}"
                body = mono if mag == 1 else f"{mag}{mono}"
            if not terms:
                terms.append(body if c > 0 else f"-{body}")
            else:
                terms.append(f"+ {body}" if c > 0 else f"- {body}")
        return " ".join(terms)

    def __repr__(self) -> str:
        return f"PolyZ({list(self.coeffs)})"

    def to_list(self) -> list[int]:
        return list(self.coeffs)


P = PolyZ.var()


def poly_eval(p: PolyZ, x: int) -> int:
    """Exact value of p at the integer x."""
    return p.evaluate(x)
