"""Exact arithmetic substrate: rationals, sparse polynomials, determinants, elimination."""

from .elim import (
    discriminant,
    factor_list,
    gcd,
    multiplicity,
    normalize,
    resultant,
    squarefree_part,
    sylvester_matrix,
)
from .matrix import DEFAULT_CAP, PolyMatrix, det, det_field
from .parse import parse_poly, to_text
from .poly import MultiPoly, divides, exact_div, pseudo_divmod, rational, reduce_mod

__all__ = [
    "DEFAULT_CAP",
    "MultiPoly",
    "PolyMatrix",
    "det",
    "det_field",
    "discriminant",
    "divides",
    "exact_div",
    "factor_list",
    "gcd",
    "multiplicity",
    "normalize",
    "parse_poly",
    "pseudo_divmod",
    "rational",
    "reduce_mod",
    "resultant",
    "squarefree_part",
    "sylvester_matrix",
    "to_text",
]
