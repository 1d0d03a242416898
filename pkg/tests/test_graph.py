import itertools

import networkx as nx
import numpy as np
import pytest
from hypothesis import given

from helpers import dense_tensors, tensors01
from tenspec import ZeroOneTensor, all_ones, block_decompose, build_digraph, is_irreducible, is_weakly_irreducible
from tenspec.graph import strongly_connected_components
from tenspec.tensor import coo


def brute_irreducible(A):
    idx, _ = coo(A)
    n = A.dim
    for size in range(1, n):
        for I in itertools.combinations(range(n), size):
            I = set(I)
            if not any(row[0] in I and all(v not in I for v in row[1:]) for row in idx.tolist()):
                return False
    return True


def test_digraph_arcs():
    G = build_digraph(ZeroOneTensor(3, 3, [(1, 2, 3), (3, 3, 1)]))
    assert G.arcs == {(1, 2), (1, 3), (3, 3), (3, 1)}
    assert G.successors() == [[1, 2], [], [0, 2]]


@given(tensors01(max_dim=5))
def test_scc_matches_networkx(T):
    adj = build_digraph(T).successors()
    ours = {frozenset(c) for c in strongly_connected_components(adj)}
    g = nx.DiGraph()
    g.add_nodes_from(range(T.dim))
    g.add_edges_from((i, j) for i, succ in enumerate(adj) for j in succ)
    assert ours == {frozenset(c) for c in nx.strongly_connected_components(g)}


@given(tensors01(max_dim=4))
def test_irreducible_matches_definition(T):
    assert is_irreducible(T) == brute_irreducible(T)
    if is_irreducible(T):
        assert is_weakly_irreducible(T)


def test_weak_but_not_strong_irreducibility():
    # every vertex reaches the other, but {1,2} -> {3} needs an entry with both tails outside
    T = ZeroOneTensor(3, 3, [(1, 2, 3), (2, 3, 1), (3, 1, 2)])
    assert is_weakly_irreducible(T)
    assert not is_irreducible(T)


def test_irreducibility_edge_cases():
    with pytest.raises(ValueError):
        is_weakly_irreducible(ZeroOneTensor(3, 0, []))
    assert is_weakly_irreducible(ZeroOneTensor(3, 1, []))
    with pytest.raises(ValueError):
        is_irreducible(all_ones(21, 2))


def check_decomposition(A):
    dec = block_decompose(A)
    assert sorted(v for b in dec.blocks for v in b) == list(range(1, A.dim + 1))
    assert dec.is_lower_triangular()
    assert dec.reassemble() == dec.permuted
    n_scc = len(strongly_connected_components(build_digraph(A).successors()))
    assert len(dec.blocks) == n_scc
    return dec


@given(tensors01(max_dim=5))
def test_block_decomposition_invariants(T):
    check_decomposition(T)


@given(dense_tensors())
def test_block_decomposition_invariants_dense(A):
    check_decomposition(A)


@given(tensors01(orders=(2,), max_dim=6))
def test_matrix_blocks_are_irreducible(T):
    dec = check_decomposition(T)
    assert all(is_weakly_irreducible(B) for B in dec.diagonal)


def test_ordering_is_deterministic():
    T = ZeroOneTensor(3, 4, [(2, 2, 2), (4, 4, 4), (1, 2, 4), (3, 1, 1)])
    dec = check_decomposition(T)
    assert dec.blocks == ((2,), (4,), (1,), (3,))


def test_scc_block_need_not_be_weakly_irreducible():
    # arcs 2->3 and 3->2 come from entries that also touch vertex 1
    T = ZeroOneTensor(3, 3, [(1, 1, 1), (2, 2, 2), (2, 3, 1), (3, 1, 2)])
    dec = check_decomposition(T)
    assert dec.blocks == ((1,), (2, 3))
    assert not is_weakly_irreducible(dec.diagonal[1])
    # no ordering of the singletons {2}, {3} is lower triangular
    for order in ((1, 2, 3), (1, 3, 2)):
        idx = np.array([[order.index(v) for v in t] for t in T.ones])
        assert not np.all(idx[:, 1:].max(axis=1) <= idx[:, 0])
