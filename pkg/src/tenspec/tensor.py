"""Nonnegative tensor storage and the basic multilinear operations.

Two storage kinds are provided:

* :class:`ZeroOneTensor` keeps the set of positions holding a one.
* :class:`DenseTensor` keeps the full ``n**r`` array of nonnegative reals.

All public indices are 1-based; numpy arrays used internally are 0-based.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence, Union

import numpy as np

__all__ = [
    "ZeroOneTensor",
    "DenseTensor",
    "Tensor",
    "all_ones",
    "apply",
    "coo",
    "from_counts",
    "is_symmetric",
    "permute_vertices",
    "poly_eval",
    "principal_subtensor",
    "remove_isolated",
    "slice_counts",
    "transpose",
]


@dataclass(frozen=True)
class ZeroOneTensor:
    """A {0,1}-tensor of order ``order`` and dimension ``dim``.

    ``ones`` holds the 1-based index tuples of the one-entries. It is
    normalised to a strictly increasing tuple in dictionary order.
    """

    order: int
    dim: int
    ones: tuple[tuple[int, ...], ...] = ()

    def __post_init__(self):
        if self.order < 2:
            raise ValueError(f"order must be >= 2, got {self.order}")
        if self.dim < 0:
            raise ValueError(f"dimension must be >= 0, got {self.dim}")
        raw = [tuple(int(v) for v in t) for t in self.ones]
        ones = sorted(set(raw))
        if len(ones) != len(raw):
            raise ValueError("duplicate index tuples in ones")
        for t in ones:
            if len(t) != self.order:
                raise ValueError(f"tuple {t} has length {len(t)}, expected {self.order}")
            if any(v < 1 or v > self.dim for v in t):
                raise ValueError(f"tuple {t} out of range 1..{self.dim}")
        object.__setattr__(self, "ones", tuple(ones))

    @property
    def nnz(self) -> int:
        """Number of ones, ``e``."""
        return len(self.ones)

    @cached_property
    def index(self) -> np.ndarray:
        """0-based ``(e, r)`` integer array of the one positions."""
        if not self.ones:
            return np.zeros((0, self.order), dtype=np.intp)
        return np.asarray(self.ones, dtype=np.intp) - 1

    def entry(self, *idx: int) -> int:
        return int(tuple(idx) in self._ones_set)

    @cached_property
    def _ones_set(self) -> frozenset:
        return frozenset(self.ones)

    def to_dense(self) -> DenseTensor:
        data = np.zeros((self.dim,) * self.order)
        if self.ones:
            data[tuple(self.index.T)] = 1.0
        return DenseTensor(data)

    def __repr__(self):
        return f"ZeroOneTensor(order={self.order}, dim={self.dim}, e={self.nnz})"


@dataclass(frozen=True, eq=False)
class DenseTensor:
    """A general nonnegative tensor stored as an ``(n,)*r`` array."""

    data: np.ndarray = field(repr=False)

    def __post_init__(self):
        data = np.array(self.data, dtype=float)
        if data.ndim < 2:
            raise ValueError("a tensor needs order >= 2")
        if len(set(data.shape)) > 1:
            raise ValueError(f"all modes must have equal size, got shape {data.shape}")
        if np.any(data < 0) or not np.all(np.isfinite(data)):
            raise ValueError("entries must be finite and nonnegative")
        data.setflags(write=False)
        object.__setattr__(self, "data", data)

    @classmethod
    def from_slices(cls, slices) -> DenseTensor:
        """Build a tensor from its slices ``A_1, ..., A_n`` (first index fixed)."""
        return cls(np.asarray(slices, dtype=float))

    @property
    def order(self) -> int:
        return self.data.ndim

    @property
    def dim(self) -> int:
        return self.data.shape[0]

    def entry(self, *idx: int) -> float:
        return float(self.data[tuple(i - 1 for i in idx)])

    def __eq__(self, other):
        if not isinstance(other, DenseTensor):
            return NotImplemented
        return self.data.shape == other.data.shape and bool(np.array_equal(self.data, other.data))

    __hash__ = None

    def __repr__(self):
        return f"DenseTensor(order={self.order}, dim={self.dim})"


Tensor = Union[ZeroOneTensor, DenseTensor]


def coo(A: Tensor) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(index, values)`` for the positive entries of ``A`` (0-based)."""
    if isinstance(A, ZeroOneTensor):
        return A.index, np.ones(A.nnz)
    nz = np.nonzero(A.data)
    idx = np.stack(nz, axis=1).astype(np.intp) if A.data.size else np.zeros((0, A.order), np.intp)
    return idx, A.data[nz]


def _check_vector(A: Tensor, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape != (A.dim,):
        raise ValueError(f"vector of length {x.shape} does not match dimension {A.dim}")
    return x


def apply(A: Tensor, x) -> np.ndarray:
    """Compute ``A x^{r-1}``.

    Component ``i`` is the sum over ``i_2..i_r`` of
    ``a[i, i_2, ..., i_r] * x[i_2] * ... * x[i_r]``.
    """
    x = _check_vector(A, x)
    idx, vals = coo(A)
    if idx.shape[0] == 0:
        return np.zeros(A.dim)
    prod = vals * np.prod(x[idx[:, 1:]], axis=1)
    return np.bincount(idx[:, 0], weights=prod, minlength=A.dim)


def poly_eval(A: Tensor, x) -> float:
    """Evaluate the degree-r form ``sum a[i_1..i_r] x[i_1]...x[i_r]``."""
    x = _check_vector(A, x)
    idx, vals = coo(A)
    if idx.shape[0] == 0:
        return 0.0
    return float(np.sum(vals * np.prod(x[idx], axis=1)))


def _check_perm(perm: Sequence[int], size: int, what: str) -> np.ndarray:
    p = np.asarray(list(perm), dtype=np.intp)
    if p.shape != (size,) or sorted(p.tolist()) != list(range(1, size + 1)):
        raise ValueError(f"{what} must be a permutation of 1..{size}, got {list(perm)}")
    return p - 1


def transpose(A: Tensor, tau: Sequence[int]) -> Tensor:
    """Index transpose: the result at ``(i_1..i_r)`` is ``A`` at ``(i_tau(1)..i_tau(r))``.

    ``tau`` is given 1-based as ``(tau(1), ..., tau(r))``.
    """
    t = _check_perm(tau, A.order, "tau")
    if isinstance(A, DenseTensor):
        # out[i] = A[i[t[0]], ..., i[t[r-1]]] is numpy's transpose by the inverse of t
        return DenseTensor(np.transpose(A.data, np.argsort(t)))
    new = np.empty_like(A.index)
    new[:, t] = A.index
    return ZeroOneTensor(A.order, A.dim, [tuple(row + 1) for row in new])


def permute_vertices(A: Tensor, phi: Sequence[int]) -> Tensor:
    """Relabel vertices: the result at ``(i_1..i_r)`` is ``A`` at ``(phi(i_1)..phi(i_r))``."""
    p = _check_perm(phi, A.dim, "phi")
    if isinstance(A, DenseTensor):
        return DenseTensor(A.data[np.ix_(*([p] * A.order))])
    inv = np.argsort(p)
    return ZeroOneTensor(A.order, A.dim, [tuple(row + 1) for row in inv[A.index]])


def used_vertices(A: Tensor) -> list[int]:
    """1-based vertices appearing in at least one positive entry."""
    idx, _ = coo(A)
    return (np.unique(idx) + 1).tolist()


def principal_subtensor(A: Tensor, vertices: Iterable[int]) -> Tensor:
    """Restrict every index to ``vertices`` (1-based), relabelled ``1..m`` in the given order."""
    verts = [int(v) for v in vertices]
    if isinstance(A, DenseTensor):
        sel = np.asarray(verts, dtype=np.intp) - 1
        if sel.size == 0:
            return DenseTensor(np.zeros((0,) * A.order))
        return DenseTensor(A.data[np.ix_(*([sel] * A.order))])
    pos = {v: i + 1 for i, v in enumerate(verts)}
    ones = [tuple(pos[v] for v in t) for t in A.ones if all(v in pos for v in t)]
    return ZeroOneTensor(A.order, len(verts), ones)


def remove_isolated(A: Tensor) -> Tensor:
    """Delete every vertex that appears in no positive entry.

    The remaining vertices keep their relative order. A tensor without
    positive entries maps to the dimension-0 tensor.
    """
    return principal_subtensor(A, used_vertices(A))


def all_ones(k: int, r: int) -> ZeroOneTensor:
    """The all-ones tensor ``J_k^r``."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return ZeroOneTensor(r, k, itertools.product(range(1, k + 1), repeat=r))


def from_counts(counts: Sequence[int], r: int) -> ZeroOneTensor:
    """Tensor whose slice ``i`` has ones at its first ``counts[i]`` trailing tuples.

    Trailing tuples ``(i_2, ..., i_r)`` are taken in dictionary order.
    """
    counts = [int(c) for c in counts]
    n = len(counts)
    cap = n ** (r - 1)
    for i, c in enumerate(counts, start=1):
        if c < 0 or c > cap:
            raise ValueError(f"count c_{i}={c} outside 0..{cap}")
    ones = []
    for i, c in enumerate(counts, start=1):
        if c:
            tails = np.stack(np.unravel_index(np.arange(c), (n,) * (r - 1)), axis=1) + 1
            ones.extend((i, *row) for row in tails.tolist())
    return ZeroOneTensor(r, n, ones)


def slice_counts(A: ZeroOneTensor) -> tuple[int, ...]:
    """Number of ones in each slice."""
    if A.nnz == 0:
        return (0,) * A.dim
    return tuple(np.bincount(A.index[:, 0], minlength=A.dim).tolist())


def is_symmetric(A: Tensor) -> bool:
    """True iff every entry is invariant under all permutations of its indices."""
    if isinstance(A, DenseTensor):
        return all(
            np.array_equal(A.data, np.transpose(A.data, p))
            for p in itertools.permutations(range(A.order))
        )
    s = A._ones_set
    return all(p in s for t in A.ones for p in itertools.permutations(t))
