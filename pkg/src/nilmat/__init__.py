"""Exact computations with infinitesimal (nilpotent) matrices.

The main entry points are re-exported here; see the submodules for details.
"""

from nilmat.errors import (
    CapExceededError,
    EvenModulusError,
    IndexOutOfRangeError,
    NilmatError,
    NotANilpotentRingError,
    ParseError,
    RingMismatchError,
    ShapeMismatchError,
)
from nilmat.matrices import (
    Matrix,
    PolyMap,
    apply_polymap_columns,
    are_neighbors,
    beta,
    det,
    is_in_D,
    is_in_dtilde,
    is_infinitesimal_simplex,
    is_special,
    mat_mul,
    mult_trace,
)
from nilmat.poly import Polynomial, parse_polynomial
from nilmat.quotient import (
    IdealSpec,
    algebra_basis,
    algebra_dimension,
    dimension_formula,
    generic_matrix,
    membership_oracle,
    normal_form,
    oracle_quotient_dimension,
)
from nilmat.rings import RingSpec, parse_ring_spec, ring_make

__version__ = "0.1.0"

__all__ = [
    "CapExceededError",
    "EvenModulusError",
    "IdealSpec",
    "IndexOutOfRangeError",
    "Matrix",
    "NilmatError",
    "NotANilpotentRingError",
    "ParseError",
    "PolyMap",
    "Polynomial",
    "RingMismatchError",
    "RingSpec",
    "ShapeMismatchError",
    "algebra_basis",
    "algebra_dimension",
    "apply_polymap_columns",
    "are_neighbors",
    "beta",
    "det",
    "dimension_formula",
    "generic_matrix",
    "is_in_D",
    "is_in_dtilde",
    "is_infinitesimal_simplex",
    "is_special",
    "mat_mul",
    "membership_oracle",
    "mult_trace",
    "normal_form",
    "oracle_quotient_dimension",
    "parse_polynomial",
    "parse_ring_spec",
    "ring_make",
]
