import itertools
import json
from concurrent.futures import ProcessPoolExecutor

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from helpers import near_all_ones, tensors01, weakly_irreducible01
from tenspec import (
    BudgetExceeded,
    SearchReport,
    Verdict,
    ZeroOneTensor,
    all_ones,
    build_extremal,
    canonicalize,
    check_structure,
    disorder_normalize,
    is_weakly_irreducible,
    permute_vertices,
    search,
    search_downset,
    search_exhaustive,
    search_fstar,
    spectral_radius,
    transpose,
    upper_bound,
)
from tenspec.search import default_n_range, downsets, nearest_extremal_params, product_normalize
from tenspec.tensor import DenseTensor, from_counts

# brute force over all placements of two ones in [2]^3
G3_OF_2 = 1.0
# maximum of (x1+x2)^3 - x2^3 on x1^3 + x2^3 = 1, grid plus golden-section refinement
J2_MINUS_CORNER = 3.5464554446849954


def sorted_by_perron(A):
    res = spectral_radius(A)
    order = np.argsort(-res.x, kind="stable")
    return permute_vertices(A, [int(i) + 1 for i in order]), res.x[order], res.lam


# ---------------------------------------------------------------- canonical forms


@given(tensors01(orders=(2, 3), max_dim=4))
def test_canonicalize_idempotent(T):
    C = canonicalize(T).tensor
    assert canonicalize(C).tensor == C
    assert C.nnz == T.nnz


@given(tensors01(orders=(2, 3, 4), max_dim=3), st.data())
def test_canonicalize_constant_on_orbits(T, data):
    phi = data.draw(st.permutations(range(1, T.dim + 1)))
    tail = data.draw(st.permutations(range(2, T.order + 1)))
    moved = transpose(permute_vertices(T, phi), (1, *tail))
    padded = ZeroOneTensor(T.order, T.dim + 1, moved.ones)
    assert canonicalize(padded) == canonicalize(T)


def test_canonical_examples():
    J = all_ones(2, 3)
    relabelled = ZeroOneTensor(3, 3, [tuple(3 if v == 1 else v for v in t) for t in J.ones])
    assert canonicalize(relabelled).tensor == J
    single = canonicalize(ZeroOneTensor(3, 2, [(2, 1, 1)])).tensor
    assert single.dim == 2 and single.ones == ((1, 2, 2),)
    assert canonicalize(ZeroOneTensor(3, 2, [(1, 1, 1)])).tensor.dim == 1


def test_transpose_moving_position_one_can_change_class():
    T = ZeroOneTensor(3, 2, [(1, 1, 2)])
    assert canonicalize(transpose(T, (3, 2, 1))) != canonicalize(T)


def test_canonicalize_caps():
    with pytest.raises(ValueError):
        canonicalize(all_ones(9, 2))
    with pytest.raises(TypeError):
        canonicalize(DenseTensor(np.ones((2, 2))))


# ---------------------------------------------------------------- slice switching


def test_disorder_examples():
    F = from_counts((4, 2), 3)
    assert disorder_normalize(F, [1.0, 0.5]) == F
    T = ZeroOneTensor(3, 2, [(1, 2, 1), (1, 2, 2)])
    assert disorder_normalize(T, [1.0, 1.0]).ones == ((1, 1, 1), (1, 1, 2))
    J = all_ones(2, 3)
    A = ZeroOneTensor(3, 2, [t for t in J.ones if t != (2, 1, 1)] + [])
    expected = ZeroOneTensor(3, 2, [t for t in J.ones if t != (2, 2, 2)])
    assert disorder_normalize(A, [0.9, 0.8]) == expected


def test_disorder_rejects_unsorted_vector():
    with pytest.raises(ValueError):
        disorder_normalize(all_ones(2, 3), [0.5, 1.0])
    with pytest.raises(ValueError):
        disorder_normalize(all_ones(2, 3), [1.0])


def test_disorder_dense_sorts_slices():
    A = DenseTensor(np.array([[[0.0, 2.0], [1.0, 3.0]], [[1.0, 0.0], [0.0, 0.0]]]))
    B = disorder_normalize(A, [1.0, 1.0])
    assert B.data[0].ravel().tolist() == [3.0, 2.0, 1.0, 0.0]


def test_disorder_switching_can_lower_radius():
    # a weakly irreducible tensor whose front-packed form loses radius
    T = ZeroOneTensor(3, 3, [(1, 1, 1), (1, 1, 2), (1, 1, 3), (1, 2, 1), (1, 2, 2), (2, 1, 1), (2, 1, 2), (2, 2, 1), (2, 2, 2), (3, 1, 1)])
    assert is_weakly_irreducible(T)
    B, x, lam = sorted_by_perron(T)
    assert lam == pytest.approx(4.253434672369454, abs=1e-9)
    assert spectral_radius(disorder_normalize(B, x)).lam < lam - 0.1
    assert spectral_radius(product_normalize(B, x)).lam >= lam - 1e-9


@settings(max_examples=40)
@given(st.integers(0, 10**6))
def test_product_normalize_never_lowers_radius(seed):
    rng = np.random.default_rng(seed)
    A = near_all_ones(rng) if seed % 2 else weakly_irreducible01(rng, 3, (2, 3, 4))
    B, x, lam = sorted_by_perron(A)
    assert spectral_radius(product_normalize(B, x)).lam >= lam - 1e-8


# ---------------------------------------------------------------- searches


@pytest.mark.parametrize("e", range(1, 9))
def test_modes_agree_at_dimension_two(e):
    ex = search_exhaustive(3, e, 2).best_lambda
    assert search_fstar(3, e, range(1, 3)).best_lambda == pytest.approx(ex, abs=1e-8)
    assert search_downset(3, e, range(1, 3)).best_lambda == pytest.approx(ex, abs=1e-8)


@pytest.mark.parametrize("e", [3, 4])
def test_modes_agree_at_dimension_three(e):
    ex = search_exhaustive(3, e, 3).best_lambda
    assert search_fstar(3, e, range(1, 4)).best_lambda == pytest.approx(ex, abs=1e-8)
    assert search_downset(3, e, range(1, 4)).best_lambda == pytest.approx(ex, abs=1e-8)


@pytest.mark.parametrize("e", range(1, 7))
def test_modes_agree_for_matrices(e):
    ex = search_exhaustive(2, e, 3).best_lambda
    assert search_fstar(2, e, range(1, 4)).best_lambda == pytest.approx(ex, abs=1e-8)
    assert search_downset(2, e, range(1, 4)).best_lambda == pytest.approx(ex, abs=1e-8)


def test_exhaustive_small_values():
    assert search_exhaustive(3, 2, 2).best_lambda == pytest.approx(G3_OF_2, abs=1e-12)
    rep = search_exhaustive(3, 7, 2)
    assert rep.best_lambda == pytest.approx(J2_MINUS_CORNER, abs=1e-9)
    assert rep.maximizers == (canonicalize(build_extremal(3, 2, -1).tensor).tensor,)
    rep = search_exhaustive(3, 8, 2)
    assert rep.maximizers == (all_ones(2, 3),) and rep.structure_match is Verdict.MATCHED


def test_fstar_misses_the_maximum_at_e9():
    better = ZeroOneTensor(3, 3, list(all_ones(2, 3).ones) + [(3, 1, 1)])
    assert spectral_radius(better).lam == pytest.approx(4.0, abs=1e-9)
    assert search_fstar(3, 9, range(1, 5)).best_lambda < 4.0 - 0.2
    assert search_downset(3, 9, range(1, 5)).best_lambda == pytest.approx(4.0, abs=1e-8)


def test_downset_values_and_invariants():
    prev = 0.0
    for e in range(1, 11):
        rep = search_downset(3, e)
        ub = upper_bound(e, 3)
        assert rep.best_lambda <= ub + 1e-8
        assert (abs(rep.best_lambda - ub) <= 1e-8) == (e in (1, 8))
        assert rep.best_lambda >= prev - 1e-9
        prev = rep.best_lambda
        for T in rep.maximizers:
            assert T.nnz == e
            assert spectral_radius(T).lam == pytest.approx(rep.best_lambda, abs=1e-8)
        assert rep.warnings


def test_downsets_are_closed():
    for level in downsets(3, 2, 5):
        for D in level:
            for t in D:
                for j in range(2):
                    if t[j]:
                        assert t[:j] + (t[j] - 1,) + t[j + 1 :] in D
    assert [len(level) for level in downsets(2, 2, 4)] == [1, 1, 2, 1, 1]


def test_fstar_strict_covers_monotone():
    a = search_fstar(3, 6, range(2, 4))
    b = search(3, 6, "fstar-strict", range(2, 4))
    assert b.best_lambda >= a.best_lambda - 1e-12 and b.candidates > a.candidates


def test_search_errors():
    with pytest.raises(ValueError):
        search_fstar(3, 0)
    with pytest.raises(ValueError):
        search_fstar(3, 5, range(0))
    with pytest.raises(BudgetExceeded):
        search_exhaustive(3, 9, 4)
    with pytest.raises(ValueError):
        search_exhaustive(3, 9, 2)
    with pytest.raises(ValueError):
        search(3, 5, "nope")
    with pytest.raises(ValueError):
        search(3, 5, "exhaustive")


def test_default_range():
    assert default_n_range(8, 3) == range(2, 7)
    assert default_n_range(9, 3) == range(3, 8)


def test_parallel_matches_serial():
    with ProcessPoolExecutor(max_workers=2) as pool:
        par = search_downset(3, 9, executor=pool)
        par_ex = search_exhaustive(3, 4, 3, executor=pool)
    assert par.to_json() == search_downset(3, 9).to_json()
    assert par_ex.to_json() == search_exhaustive(3, 4, 3).to_json()


def test_report_json_round_trip():
    rep = search_downset(3, 9)
    text = rep.to_json()
    back = SearchReport.from_json(text)
    assert back == rep
    assert back.to_json() == text
    assert json.dumps(json.loads(text), indent=2, sort_keys=True) + "\n" == text


# ---------------------------------------------------------------- structure


def test_nearest_params():
    assert nearest_extremal_params(8, 3) == (2, 0)
    assert nearest_extremal_params(9, 3) == (2, 1)
    assert nearest_extremal_params(27 - 3, 3) == (3, -3)
    assert nearest_extremal_params(15, 3) is None


@pytest.mark.parametrize("k", [2, 3])
def test_structure_examples(k):
    assert check_structure(build_extremal(3, k, 2).tensor, 3, k, 2) is Verdict.MATCHED
    J = all_ones(k, 3)
    two = ZeroOneTensor(3, k + 2, list(J.ones) + [(k + 1, 1, 1), (k + 2, 1, 1)])
    assert check_structure(two, 3, k, 2) is Verdict.NOT_MATCHED


@pytest.mark.parametrize("k", [2, 3])
def test_missing_corner_is_relabelling_of_extremal(k):
    # swapping vertices 1 and k maps the zero at (1,1,1) to (k,k,k)
    J = all_ones(k, 3)
    corner = ZeroOneTensor(3, k, [t for t in J.ones if t != (1, 1, 1)])
    assert check_structure(corner, 3, k, -1) is Verdict.MATCHED


def test_missing_middle_entry_does_not_match():
    J = all_ones(3, 3)
    middle = ZeroOneTensor(3, 3, [t for t in J.ones if t != (1, 2, 2)])
    assert check_structure(middle, 3, 3, -1) is Verdict.NOT_MATCHED


def test_structure_family_for_l1():
    J = all_ones(2, 3)
    for extra in [(3, 1, 1), (1, 3, 2), (2, 2, 3), (3, 3, 3)]:
        T = ZeroOneTensor(3, 3, list(J.ones) + [extra])
        assert check_structure(T, 3, 2, 1) is Verdict.MATCHED


def test_structure_errors():
    with pytest.raises(ValueError):
        check_structure(all_ones(2, 3), 3, 2, 1)
    with pytest.raises(ValueError):
        check_structure(all_ones(2, 3), 4, 2, 0)
    with pytest.raises(ValueError):
        check_structure(all_ones(2, 3), 3, 2, 9)
