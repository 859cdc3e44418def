from .linalg import (
    MAX_DIM,
    DimensionMismatchError,
    LoewnerResult,
    NotSPDError,
    SPDMatrix,
    format_matrix,
    jacobi_eig,
    lambda_min,
    loewner_leq,
    mat_fn,
    mat_pow,
    parse_matrices,
    read_matrix,
    sym_eig,
    symmetrize,
    write_matrix,
)
from .maps import PositiveLinearMap, phi_apply
from .means import (
    SandwichBounds,
    congruence_parts,
    mean_bang,
    mean_heinz,
    mean_heron_op,
    mean_nabla,
    mean_natural,
    mean_sharp,
    sandwich_extract,
    spd_inverse,
)

__all__ = [
    "MAX_DIM",
    "DimensionMismatchError",
    "LoewnerResult",
    "NotSPDError",
    "PositiveLinearMap",
    "SPDMatrix",
    "SandwichBounds",
    "congruence_parts",
    "format_matrix",
    "jacobi_eig",
    "lambda_min",
    "loewner_leq",
    "mat_fn",
    "mat_pow",
    "mean_bang",
    "mean_heinz",
    "mean_heron_op",
    "mean_nabla",
    "mean_natural",
    "mean_sharp",
    "parse_matrices",
    "phi_apply",
    "read_matrix",
    "sandwich_extract",
    "spd_inverse",
    "sym_eig",
    "symmetrize",
    "write_matrix",
]
