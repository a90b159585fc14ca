"""Exact polynomial algebra: rationals, polynomials, Groebner bases, ideals."""

from .groebner import Reducer, buchberger, normal_form, s_polynomial
from .ideal import (HomogIdeal, NotHomogeneous, SingularMatrix, affine_dim, cramer_image_test,
                    eliminate, hilbert_function, proj_dim_degree, quotient, quotient_space_basis,
                    saturate, saturate_linear)
from .linalg import linear_solve, rank, rref
from .orders import MonomialOrder
from .poly import ArenaMismatch, MPoly, NotDivisible, parse_poly

__all__ = [
    "ArenaMismatch", "HomogIdeal", "MPoly", "MonomialOrder", "NotDivisible", "NotHomogeneous",
    "Reducer", "SingularMatrix", "affine_dim", "buchberger", "cramer_image_test", "eliminate",
    "hilbert_function", "linear_solve", "normal_form", "parse_poly", "proj_dim_degree", "quotient",
    "quotient_space_basis", "rank", "rref", "s_polynomial", "saturate", "saturate_linear",
]
