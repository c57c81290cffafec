"""Exact arithmetic core: polynomials in P, matrices over Z[P] and finite fields."""

from core.polynomial import P, ExactArithmeticError, PolyZ, poly_eval
from core.matrix import MatrixPoly
from core.determinants import (
    HessenbergShapeError,
    bareiss_det,
    hessenberg_det,
    integer_bareiss_det,
    leading_principal_minors,
)

__all__ = [
    "P",
    "PolyZ",
    "ExactArithmeticError",
    "poly_eval",
    "MatrixPoly",
    "HessenbergShapeError",
    "bareiss_det",
    "hessenberg_det",
    "integer_bareiss_det",
    "leading_principal_minors",
]
