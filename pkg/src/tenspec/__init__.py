"""Spectral radii of nonnegative tensors and extremal {0,1}-tensors."""

from .bounds import (
    ExtremalSpec,
    StabilityError,
    StabilityReport,
    build_extremal,
    f_func,
    lower_bound_g,
    stability_extract,
    upper_bound,
    young_deficit,
)
from .eigen import (
    CertificateError,
    EigenResult,
    SolverOptions,
    certify_lower_bound,
    positivize_certificate,
    residual,
    spectral_radius,
)
from .graph import BlockDecomposition, block_decompose, build_digraph, is_irreducible, is_weakly_irreducible
from .search import (
    BudgetExceeded,
    SearchReport,
    Verdict,
    canonicalize,
    check_structure,
    disorder_normalize,
    search,
    search_downset,
    search_exhaustive,
    search_fstar,
)
from .tensor import DenseTensor, Tensor, ZeroOneTensor, all_ones, apply, permute_vertices, transpose
from .tnsio import TnsFormatError, read_tns, write_tns

__version__ = "0.1.0"

__all__ = [
    "BlockDecomposition",
    "BudgetExceeded",
    "CertificateError",
    "DenseTensor",
    "EigenResult",
    "ExtremalSpec",
    "SearchReport",
    "SolverOptions",
    "StabilityError",
    "StabilityReport",
    "Tensor",
    "TnsFormatError",
    "Verdict",
    "ZeroOneTensor",
    "all_ones",
    "apply",
    "block_decompose",
    "build_digraph",
    "build_extremal",
    "canonicalize",
    "certify_lower_bound",
    "check_structure",
    "disorder_normalize",
    "f_func",
    "is_irreducible",
    "is_weakly_irreducible",
    "lower_bound_g",
    "permute_vertices",
    "positivize_certificate",
    "read_tns",
    "residual",
    "search",
    "search_downset",
    "search_exhaustive",
    "search_fstar",
    "spectral_radius",
    "stability_extract",
    "transpose",
    "upper_bound",
    "write_tns",
    "young_deficit",
]
