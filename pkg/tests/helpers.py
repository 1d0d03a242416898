"""Seeded generators and hypothesis strategies shared by the test modules."""

from __future__ import annotations

import itertools

import numpy as np
from hypothesis import strategies as st

from tenspec import DenseTensor, ZeroOneTensor, is_weakly_irreducible


def random01(rng: np.random.Generator, r: int, n: int, p: float | None = None) -> ZeroOneTensor:
    p = rng.uniform(0.1, 0.8) if p is None else p
    mask = rng.random((n,) * r) < p
    return ZeroOneTensor(r, n, [tuple(int(v) + 1 for v in t) for t in np.argwhere(mask)])


def random_dense(rng: np.random.Generator, r: int, n: int, p: float = 0.6) -> DenseTensor:
    data = rng.uniform(0.0, 3.0, (n,) * r) * (rng.random((n,) * r) < p)
    return DenseTensor(data)


def weakly_irreducible01(rng: np.random.Generator, r: int, dims) -> ZeroOneTensor:
    while True:
        A = random01(rng, r, int(rng.choice(dims)))
        if A.nnz and is_weakly_irreducible(A):
            return A


def reducible01(rng: np.random.Generator, r: int, dims) -> ZeroOneTensor:
    while True:
        n = int(rng.choice(dims))
        A = random01(rng, r, n, rng.uniform(0.05, 0.35))
        if n > 1 and A.nnz and not is_weakly_irreducible(A):
            return A


def near_all_ones(rng: np.random.Generator, r: int = 3) -> ZeroOneTensor:
    """``J_k^r`` on ``k+1`` vertices with a few ones added and removed."""
    k = int(rng.integers(2, 4))
    n = k + 1
    ones = set(itertools.product(range(1, k + 1), repeat=r))
    spots = list(itertools.product(range(1, n + 1), repeat=r))
    for i in rng.choice(len(spots), size=int(rng.integers(1, 4)), replace=False):
        ones.add(spots[i])
    inner = sorted(ones)
    for i in rng.choice(len(inner), size=int(rng.integers(0, 3)), replace=False):
        ones.discard(inner[i])
    return ZeroOneTensor(r, n, ones)


@st.composite
def tensors01(draw, orders=(2, 3, 4), max_dim=4, nonempty=True):
    r = draw(st.sampled_from(orders))
    n = draw(st.integers(1, max_dim if r < 4 else min(max_dim, 3)))
    spots = list(itertools.product(range(1, n + 1), repeat=r))
    chosen = draw(st.sets(st.sampled_from(spots), min_size=1 if nonempty else 0, max_size=len(spots)))
    return ZeroOneTensor(r, n, chosen)


@st.composite
def dense_tensors(draw, orders=(2, 3), max_dim=4):
    r = draw(st.sampled_from(orders))
    n = draw(st.integers(1, max_dim))
    vals = draw(
        st.lists(
            st.one_of(st.just(0.0), st.floats(0.01, 5.0)),
            min_size=n**r,
            max_size=n**r,
        )
    )
    return DenseTensor(np.array(vals).reshape((n,) * r))


@st.composite
def permutations(draw, n: int):
    return tuple(draw(st.permutations(range(1, n + 1))))
