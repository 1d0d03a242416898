"""Representation digraph, (weak) irreducibility and block decomposition."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .tensor import DenseTensor, Tensor, ZeroOneTensor, coo, permute_vertices, principal_subtensor

__all__ = [
    "BlockDecomposition",
    "RepresentationDigraph",
    "block_decompose",
    "build_digraph",
    "is_irreducible",
    "is_weakly_irreducible",
    "strongly_connected_components",
]

IRREDUCIBLE_DIM_CAP = 20


@dataclass(frozen=True)
class RepresentationDigraph:
    """Arc ``(i, j)`` whenever ``j`` occurs among the trailing indices of a
    positive entry of slice ``i``. Vertices and arcs are 1-based."""

    n: int
    arcs: frozenset

    def successors(self) -> list[list[int]]:
        """0-based adjacency lists, successors sorted."""
        adj = [[] for _ in range(self.n)]
        for i, j in sorted(self.arcs):
            adj[i - 1].append(j - 1)
        return adj


def build_digraph(A: Tensor) -> RepresentationDigraph:
    idx, _ = coo(A)
    arcs = set()
    if idx.shape[0]:
        r = idx.shape[1]
        heads = np.repeat(idx[:, 0], r - 1)
        tails = idx[:, 1:].reshape(-1)
        pairs = np.unique(np.stack([heads, tails], axis=1), axis=0)
        arcs = {(int(a) + 1, int(b) + 1) for a, b in pairs}
    return RepresentationDigraph(A.dim, frozenset(arcs))


def strongly_connected_components(adj: list[list[int]]) -> list[list[int]]:
    """Tarjan's algorithm, iterative.

    Components come out sinks first: every arc leaving a component points
    into one emitted before it.
    """
    n = len(adj)
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    sccs: list[list[int]] = []
    counter = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, pos = work[-1]
            if pos < len(adj[v]):
                work[-1] = (v, pos + 1)
                w = adj[v][pos]
                if index[w] == -1:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, 0))
                elif on_stack[w]:
                    low[v] = min(low[v], index[w])
                continue
            work.pop()
            if work:
                u = work[-1][0]
                low[u] = min(low[u], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                sccs.append(sorted(comp))
    return sccs


def is_weakly_irreducible(A: Tensor) -> bool:
    """True iff the representation digraph is strongly connected."""
    if A.dim == 0:
        raise ValueError("weak irreducibility is undefined for dimension 0")
    if A.dim == 1:
        return True
    return len(strongly_connected_components(build_digraph(A).successors())) == 1


def is_irreducible(A: Tensor, max_dim: int = IRREDUCIBLE_DIM_CAP) -> bool:
    """Exhaustive check over every nonempty proper vertex subset ``I``.

    ``A`` is reducible when some ``I`` has no positive entry whose first
    index lies in ``I`` and all other indices lie outside ``I``.
    """
    n = A.dim
    if n == 0:
        raise ValueError("irreducibility is undefined for dimension 0")
    if n > max_dim:
        raise ValueError(f"dimension {n} exceeds the subset-enumeration cap {max_dim}")
    if n == 1:
        return True
    idx, _ = coo(A)
    heads = [int(v) for v in idx[:, 0]]
    tails = [int(np.bitwise_or.reduce(1 << row[1:])) for row in idx.astype(np.int64)]
    # witness pairs: distinct (first-index bit, trailing mask)
    pairs = sorted(set(zip(heads, tails)))
    chunk = 1 << 16
    total = (1 << n) - 1
    for start in range(1, total, chunk):
        subsets = np.arange(start, min(start + chunk, total), dtype=np.int64)
        witnessed = np.zeros(subsets.size, dtype=bool)
        for h, t in pairs:
            witnessed |= ((subsets >> h) & 1).astype(bool) & ((subsets & t) == 0)
        if not witnessed.all():
            return False
    return True


@dataclass(frozen=True)
class BlockDecomposition:
    """Vertex permutation making ``A`` lower-triangular-block.

    ``perm`` lists original vertices (1-based) in their new order, so
    ``permute_vertices(A, perm)`` is the permuted tensor. Block ``s`` is
    ``blocks[s]`` in original labels; its positive entries only reference
    vertices of blocks ``0..s``.
    """

    perm: tuple[int, ...]
    blocks: tuple[tuple[int, ...], ...]
    diagonal: tuple[Tensor, ...]
    permuted: Tensor

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(len(b) for b in self.blocks)

    def ranges(self) -> list[range]:
        out, start = [], 0
        for size in self.sizes:
            out.append(range(start, start + size))
            start += size
        return out

    def is_lower_triangular(self) -> bool:
        """No positive entry has its first index in a block earlier than
        the block of some other index."""
        idx, _ = coo(self.permuted)
        if idx.shape[0] == 0:
            return True
        block_of = np.concatenate([np.full(s, b) for b, s in enumerate(self.sizes)]).astype(int)
        bl = block_of[idx]
        return bool(np.all(bl[:, 1:].max(axis=1) <= bl[:, 0]))

    def reassemble(self) -> Tensor:
        """Permuted tensor rebuilt from the diagonal blocks plus the
        entries lying outside them."""
        P = self.permuted
        if isinstance(P, DenseTensor):
            data = np.array(P.data)
            for rg, blk in zip(self.ranges(), self.diagonal):
                sel = np.ix_(*([np.arange(rg.start, rg.stop)] * P.order))
                data[sel] = blk.data
            return DenseTensor(data)
        inside = set()
        for rg in self.ranges():
            inside |= {t for t in P.ones if all(rg.start < v <= rg.stop for v in t)}
        ones = [t for t in P.ones if t not in inside]
        for rg, blk in zip(self.ranges(), self.diagonal):
            ones += [tuple(v + rg.start for v in t) for t in blk.ones]
        return ZeroOneTensor(P.order, P.dim, ones)


def _ordered_components(A: Tensor) -> list[list[int]]:
    adj = build_digraph(A).successors()
    sccs = strongly_connected_components(adj)
    comp_of = {}
    for c, comp in enumerate(sccs):
        for v in comp:
            comp_of[v] = c
    out_comps = [set() for _ in sccs]
    for v, succ in enumerate(adj):
        for w in succ:
            if comp_of[v] != comp_of[w]:
                out_comps[comp_of[v]].add(comp_of[w])
    # among components whose successors are all emitted, take the smallest min vertex
    emitted: set[int] = set()
    order = []
    while len(order) < len(sccs):
        ready = [c for c in range(len(sccs)) if c not in emitted and out_comps[c] <= emitted]
        c = min(ready, key=lambda c: sccs[c][0])
        emitted.add(c)
        order.append(sccs[c])
    return order


def block_decompose(A: Tensor) -> BlockDecomposition:
    """Lower-triangular block form of ``A``.

    Blocks are the strongly connected components of the representation
    digraph, emitted so that each block only points to earlier ones; ties
    are broken by the smallest original vertex id. For ``r >= 3`` a
    diagonal block need not be weakly irreducible as a tensor of its own,
    since the arcs holding a component together can come from entries
    that also touch earlier blocks.
    """
    comps = _ordered_components(A) if A.dim else []
    blocks = tuple(tuple(v + 1 for v in comp) for comp in comps)
    perm = tuple(v for b in blocks for v in b)
    diagonal = tuple(principal_subtensor(A, b) for b in blocks)
    permuted = permute_vertices(A, perm) if A.dim else A
    return BlockDecomposition(perm, blocks, diagonal, permuted)
