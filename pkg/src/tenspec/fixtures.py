"""Small named tensors with known spectral radii."""

from __future__ import annotations

from .tensor import DenseTensor, transpose

__all__ = ["COUNTEREXAMPLE_SLICES", "counterexample_pair"]

# slices A_1, A_2 of a 2-dimensional order-3 tensor with rho = 7
COUNTEREXAMPLE_SLICES = (
    ((1.0, 2.0), (2.0, 2.0)),
    ((2.0, 1.0), (3.0, 1.0)),
)


def counterexample_pair(slices=COUNTEREXAMPLE_SLICES) -> tuple[DenseTensor, DenseTensor]:
    """``(A, M)`` where ``M`` reverses the index order of ``A``.

    The radii differ (7 versus about 6.91618), so transposes of a
    nonsymmetric tensor need not share the spectral radius.
    """
    A = DenseTensor.from_slices(slices)
    return A, transpose(A, (3, 2, 1))
