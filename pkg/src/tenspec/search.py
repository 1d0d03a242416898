"""Exact maximisation of the spectral radius over {0,1}-tensors with ``e`` ones.

Three enumeration strategies are provided:

``fstar``
    Per-slice counts with each slice packed to the front in dictionary
    order (:func:`tenspec.tensor.from_counts`).
``downset``
    Each slice is a down-set of trailing tuples under the componentwise
    order, with nonempty slices forming a prefix. Switching a one to a
    componentwise-smaller position never lowers ``A x^{r-1}`` for a sorted
    Perron vector ``x``, so some maximiser always has this form.
``exhaustive``
    Every ``e``-subset of ``[n]^r``, deduplicated by canonical form.
"""

from __future__ import annotations

import enum
import itertools
import json
import math
from concurrent.futures import Executor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .bounds import build_extremal, upper_bound
from .eigen import SolverOptions, spectral_radius
from .tensor import (
    DenseTensor,
    Tensor,
    ZeroOneTensor,
    from_counts,
    remove_isolated,
    slice_counts,
)

__all__ = [
    "BudgetExceeded",
    "CanonicalForm",
    "SearchReport",
    "TIE_TOL",
    "Verdict",
    "canonicalize",
    "check_structure",
    "default_n_range",
    "disorder_normalize",
    "downsets",
    "integer_root_ceil",
    "nearest_extremal_params",
    "product_normalize",
    "search",
    "search_downset",
    "search_exhaustive",
    "search_fstar",
]

TIE_TOL = 1e-8
CANON_MAX_DIM = 8
CANON_MAX_ORDER = 4
EXHAUSTIVE_BUDGET = 10**8


class BudgetExceeded(ValueError):
    pass


class Verdict(str, enum.Enum):
    MATCHED = "matched"
    NOT_MATCHED = "not-matched"
    NOT_APPLICABLE = "not-applicable"


# ---------------------------------------------------------------- canonical form


@lru_cache(maxsize=None)
def _vertex_perms(n: int) -> np.ndarray:
    return np.array(list(itertools.permutations(range(n))), dtype=np.intp).reshape(-1, n)


@dataclass(frozen=True)
class CanonicalForm:
    """Smallest ones-list over the equivalence orbit of a {0,1}-tensor.

    The orbit is generated by vertex relabelling, permutations of index
    positions ``2..r`` and deletion of isolated vertices.
    """

    tensor: ZeroOneTensor

    @property
    def ones(self):
        return self.tensor.ones


def _canonical_codes(index: np.ndarray, n: int, r: int) -> tuple[int, ...]:
    weights = n ** np.arange(r - 1, -1, -1, dtype=np.int64)
    perms = _vertex_perms(n)
    best = None
    chunk = max(1, 2_000_000 // max(1, index.size))
    for tail in itertools.permutations(range(1, r)):
        cols = index[:, (0,) + tail]
        for start in range(0, len(perms), chunk):
            codes = perms[start : start + chunk][:, cols] @ weights
            codes.sort(axis=1)
            cand = tuple(codes[np.lexsort(codes.T[::-1])[0]].tolist())
            if best is None or cand < best:
                best = cand
    return best


def canonicalize(
    A: ZeroOneTensor, max_dim: int = CANON_MAX_DIM, max_order: int = CANON_MAX_ORDER
) -> CanonicalForm:
    if isinstance(A, DenseTensor):
        raise TypeError("canonical forms are defined for {0,1}-tensors")
    B = remove_isolated(A)
    n, r = B.dim, B.order
    if n > max_dim or r > max_order:
        raise ValueError(f"canonicalize caps exceeded (n={n} > {max_dim} or r={r} > {max_order})")
    if B.nnz == 0:
        return CanonicalForm(B)
    codes = _canonical_codes(B.index, n, r)
    ones = [tuple(int(v) + 1 for v in np.unravel_index(c, (n,) * r)) for c in codes]
    return CanonicalForm(ZeroOneTensor(r, n, ones))


# ---------------------------------------------------------------- slice reordering


def _check_sorted(A: Tensor, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape != (A.dim,):
        raise ValueError(f"vector length {x.shape} does not match dimension {A.dim}")
    if np.any(np.diff(x) > 1e-12 * max(1.0, float(np.max(x, initial=0.0)))):
        raise ValueError("x must be sorted non-increasingly")
    return x


def disorder_normalize(A: Tensor, x) -> Tensor:
    """Switch disordered pairs inside each slice until none is left.

    A disordered pair is a smaller value at an earlier dictionary position
    than a larger value in the same slice. The fixed point of the switching
    is the slice sorted non-increasingly along dictionary order, which is
    what is returned; for {0,1}-tensors that is :func:`from_counts` of the
    slice counts.
    """
    _check_sorted(A, x)
    if isinstance(A, ZeroOneTensor):
        return from_counts(slice_counts(A), A.order)
    flat = A.data.reshape(A.dim, -1)
    return DenseTensor(-np.sort(-flat, axis=1).reshape(A.data.shape))


def product_normalize(A: Tensor, x) -> Tensor:
    """Reorder each slice so larger values sit where ``x_{i_2}...x_{i_r}`` is larger.

    Ties in the product keep dictionary order. By the rearrangement
    inequality the result ``B`` satisfies ``B x^{r-1} >= A x^{r-1}``.
    """
    x = _check_sorted(A, x)
    n, r = A.dim, A.order
    tails = np.array(list(itertools.product(range(n), repeat=r - 1)), dtype=np.intp).reshape(-1, r - 1)
    prods = np.prod(x[tails], axis=1)
    rank = np.lexsort((np.arange(len(tails)), -prods))
    dense = A.to_dense().data if isinstance(A, ZeroOneTensor) else A.data
    flat = dense.reshape(n, -1)
    out = np.zeros_like(flat)
    out[:, rank] = -np.sort(-flat, axis=1)
    B = DenseTensor(out.reshape(dense.shape))
    if isinstance(A, ZeroOneTensor):
        idx = np.argwhere(B.data > 0.5) + 1
        return ZeroOneTensor(r, n, [tuple(row) for row in idx.tolist()])
    return B


# ---------------------------------------------------------------- structure check


def nearest_extremal_params(e: int, r: int) -> tuple[int, int] | None:
    """``(k, l)`` with ``k >= 2``, ``e = k^r + l`` and ``-r-1 <= l <= r``, smallest ``|l|``."""
    best = None
    k = 2
    while k**r - r - 1 <= e:
        l = e - k**r
        if -r - 1 <= l <= r and (best is None or abs(l) < abs(best[1])):
            best = (k, l)
        k += 1
    return best


def _is_all_ones(B: ZeroOneTensor, k: int) -> bool:
    B = remove_isolated(B)
    return B.dim == k and B.nnz == k**B.order


def check_structure(A: ZeroOneTensor, r: int, k: int, l: int) -> Verdict:
    """Compare ``A`` with the extremal construction for ``e = k^r + l``.

    For ``l = 1`` any ``J_k^r`` plus one extra one matches.
    """
    if A.order != r:
        raise ValueError(f"tensor order {A.order} differs from r={r}")
    if not -r - 1 <= l <= r:
        raise ValueError(f"l={l} outside {-r - 1}..{r}")
    if A.nnz != k**r + l:
        raise ValueError(f"tensor has {A.nnz} ones, expected {k ** r + l}")
    if l == 1:
        for t in A.ones:
            rest = ZeroOneTensor(r, A.dim, [u for u in A.ones if u != t])
            if _is_all_ones(rest, k):
                return Verdict.MATCHED
        return Verdict.NOT_MATCHED
    target = canonicalize(build_extremal(r, k, l).tensor)
    return Verdict.MATCHED if canonicalize(A) == target else Verdict.NOT_MATCHED


# ---------------------------------------------------------------- reports


@dataclass(frozen=True)
class SearchReport:
    r: int
    e: int
    n_range: tuple[int, ...]
    best_lambda: float
    maximizers: tuple[ZeroOneTensor, ...]
    theoretical_upper: float
    structure_match: Verdict
    mode: str
    candidates: int = 0
    warnings: tuple[str, ...] = field(default=())

    def to_dict(self) -> dict:
        return {
            "r": self.r,
            "e": self.e,
            "mode": self.mode,
            "n_range": list(self.n_range),
            "best_lambda": repr(float(self.best_lambda)),
            "theoretical_upper": repr(float(self.theoretical_upper)),
            "structure_match": self.structure_match.value,
            "candidates": self.candidates,
            "maximizers": [
                {"dim": T.dim, "ones": [list(t) for t in T.ones]} for T in self.maximizers
            ],
            "warnings": list(self.warnings),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_dict(cls, d: dict) -> SearchReport:
        return cls(
            r=d["r"],
            e=d["e"],
            n_range=tuple(d["n_range"]),
            best_lambda=float(d["best_lambda"]),
            maximizers=tuple(ZeroOneTensor(d["r"], m["dim"], [tuple(t) for t in m["ones"]]) for m in d["maximizers"]),
            theoretical_upper=float(d["theoretical_upper"]),
            structure_match=Verdict(d["structure_match"]),
            mode=d["mode"],
            candidates=d["candidates"],
            warnings=tuple(d["warnings"]),
        )

    @classmethod
    def from_json(cls, text: str) -> SearchReport:
        return cls.from_dict(json.loads(text))


# ---------------------------------------------------------------- enumeration helpers


def integer_root_ceil(e: int, r: int) -> int:
    """Smallest integer ``k`` with ``k**r >= e``."""
    k = max(1, int(round(e ** (1.0 / r))))
    while k**r < e:
        k += 1
    while k > 1 and (k - 1) ** r >= e:
        k -= 1
    return k


def default_n_range(e: int, r: int) -> range:
    k = integer_root_ceil(e, r)
    return range(k, k + r + 2)


def _radius(T: ZeroOneTensor, opts: SolverOptions) -> float:
    return spectral_radius(T, opts).lam


def _radii(tensors: list[ZeroOneTensor], opts: SolverOptions, executor: Executor | None) -> list[float]:
    if executor is None or len(tensors) < 64:
        return [_radius(T, opts) for T in tensors]
    # map keeps input order, so the reduction does not depend on scheduling
    chunk = max(1, len(tensors) // 256)
    return list(executor.map(_radius, tensors, itertools.repeat(opts), chunksize=chunk))


def _class_key(T: ZeroOneTensor) -> ZeroOneTensor:
    B = remove_isolated(T)
    if B.dim <= CANON_MAX_DIM and B.order <= CANON_MAX_ORDER:
        return canonicalize(B).tensor
    return B


def _reduce(tensors: list[ZeroOneTensor], lams: list[float]):
    if not tensors:
        raise ValueError("no candidates to reduce")
    best = max(lams)
    classes = {_class_key(T) for T, lam in zip(tensors, lams) if lam >= best - TIE_TOL}
    return best, tuple(sorted(classes, key=lambda T: (T.dim, T.ones)))


def _structure(r: int, e: int, maximizers: Sequence[ZeroOneTensor]) -> Verdict:
    params = nearest_extremal_params(e, r)
    if params is None or not maximizers:
        return Verdict.NOT_APPLICABLE
    k, l = params
    try:
        if l == 1:
            ok = all(check_structure(M, r, k, l) is Verdict.MATCHED for M in maximizers)
        else:
            ok = len(maximizers) == 1 and check_structure(maximizers[0], r, k, l) is Verdict.MATCHED
    except ValueError:
        return Verdict.NOT_APPLICABLE
    return Verdict.MATCHED if ok else Verdict.NOT_MATCHED


def _resolve_range(e: int, r: int, n_range, mode: str) -> tuple[tuple[int, ...], list[str]]:
    notes = []
    if n_range is None:
        n_range = default_n_range(e, r)
        notes.append(
            f"{mode} mode searched the heuristic dimension window {n_range.start}..{n_range.stop - 1}"
        )
    dims = tuple(sorted({int(n) for n in n_range}))
    if not dims:
        raise ValueError("empty n_range")
    if dims[0] < 1:
        raise ValueError("dimensions must be >= 1")
    if e > max(n**r for n in dims):
        raise ValueError(f"e={e} exceeds the capacity {max(dims) ** r} of every dimension in n_range")
    return dims, notes


def _nonincreasing_parts(total: int, parts: int, cap: int, upper: int) -> Iterable[tuple[int, ...]]:
    if parts == 0:
        if total == 0:
            yield ()
        return
    lo = math.ceil(total / parts)
    for first in range(min(upper, cap, total - (parts - 1)), lo - 1, -1):
        for rest in _nonincreasing_parts(total - first, parts - 1, cap, first):
            yield (first,) + rest


def _bounded_compositions(total: int, parts: int, cap: int) -> Iterable[tuple[int, ...]]:
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(max(0, total - cap * (parts - 1)), min(cap, total) + 1):
        for rest in _bounded_compositions(total - first, parts - 1, cap):
            yield (first,) + rest


# ---------------------------------------------------------------- searches


def search_fstar(
    r: int,
    e: int,
    n_range: Iterable[int] | None = None,
    *,
    strict: bool = False,
    opts: SolverOptions | None = None,
    executor: Executor | None = None,
) -> SearchReport:
    """Maximise over tensors given by per-slice counts (front-packed slices).

    By default only count vectors ``c_1 >= ... >= c_n >= 1`` are tried;
    ``strict=True`` drops that restriction (every ``0 <= c_i <= n^{r-1}``).
    """
    if r < 2 or e < 1:
        raise ValueError("need r >= 2 and e >= 1")
    opts = opts or SolverOptions()
    dims, notes = _resolve_range(e, r, n_range, "fstar")
    tensors = []
    for n in dims:
        cap = n ** (r - 1)
        if e > n * cap:
            continue
        vectors = _bounded_compositions(e, n, cap) if strict else _nonincreasing_parts(e, n, cap, cap)
        tensors += [from_counts(c, r) for c in vectors]
    lams = _radii(tensors, opts, executor)
    best, maxi = _reduce(tensors, lams)
    return SearchReport(
        r, e, dims, best, maxi, upper_bound(e, r), _structure(r, e, maxi),
        "fstar-strict" if strict else "fstar", len(tensors), tuple(notes),
    )


@lru_cache(maxsize=None)
def downsets(n: int, d: int, max_size: int) -> tuple[tuple[frozenset, ...], ...]:
    """Down-sets of ``[n]^d`` (0-based, componentwise order) grouped by size ``0..max_size``."""
    levels = [{frozenset()}]
    for _ in range(max_size):
        nxt = set()
        for D in levels[-1]:
            for t in _addable(D, n, d):
                nxt.add(D | {t})
        levels.append(nxt)
        if not nxt:
            break
    return tuple(tuple(sorted(level, key=sorted)) for level in levels)


def _addable(D: frozenset, n: int, d: int):
    if not D:
        return [(0,) * d]
    out = set()
    for t in D:
        for j in range(d):
            if t[j] + 1 < n:
                u = t[:j] + (t[j] + 1,) + t[j + 1 :]
                if u not in D and all(
                    u[:m] + (u[m] - 1,) + u[m + 1 :] in D for m in range(d) if u[m] > 0
                ):
                    out.add(u)
    return sorted(out)


def _downset_tensors(r: int, e: int, n: int) -> list[ZeroOneTensor]:
    levels = downsets(n, r - 1, e)
    sizes = [s for s in range(1, len(levels)) if levels[s]]
    out = []

    def rec(chosen: list, left: int):
        if left == 0:
            used = set(range(len(chosen))) | {v for D in chosen for t in D for v in t}
            if len(used) == n:
                ones = [(i + 1,) + tuple(v + 1 for v in t) for i, D in enumerate(chosen) for t in D]
                out.append(ZeroOneTensor(r, n, ones))
            return
        if len(chosen) == n:
            return
        for s in sizes:
            if s > left:
                break
            for D in levels[s]:
                chosen.append(D)
                rec(chosen, left - s)
                chosen.pop()

    rec([], e)
    return out


def search_downset(
    r: int,
    e: int,
    n_range: Iterable[int] | None = None,
    *,
    opts: SolverOptions | None = None,
    executor: Executor | None = None,
) -> SearchReport:
    """Maximise over tensors whose slices are componentwise down-sets.

    Within each dimension every vertex must be used, so a tensor is only
    visited at its own dimension.
    """
    if r < 2 or e < 1:
        raise ValueError("need r >= 2 and e >= 1")
    opts = opts or SolverOptions()
    dims, notes = _resolve_range(e, r, n_range, "downset")
    tensors = []
    for n in dims:
        tensors += _downset_tensors(r, e, n)
    if not tensors:
        raise ValueError(f"no down-set tensor with e={e} uses every vertex for n in {dims}")
    lams = _radii(tensors, opts, executor)
    best, maxi = _reduce(tensors, lams)
    return SearchReport(
        r, e, dims, best, maxi, upper_bound(e, r), _structure(r, e, maxi),
        "downset", len(tensors), tuple(notes),
    )


def _shard_exhaustive(args):
    r, n, e, first, opts = args
    positions = list(itertools.product(range(1, n + 1), repeat=r))
    seen = {}
    for rest in itertools.combinations(range(first + 1, len(positions)), e - 1):
        T = ZeroOneTensor(r, n, [positions[first]] + [positions[i] for i in rest])
        key = canonicalize(T).tensor
        if key not in seen:
            seen[key] = T
    return seen


def search_exhaustive(
    r: int,
    e: int,
    n: int,
    *,
    budget: int = EXHAUSTIVE_BUDGET,
    opts: SolverOptions | None = None,
    executor: Executor | None = None,
) -> SearchReport:
    """Every ``e``-subset of positions in ``[n]^r``, one solve per equivalence class.

    Tensors of smaller dimension appear with isolated vertices and are
    covered too. Work is sharded by the first chosen position.
    """
    if r < 2 or e < 1 or n < 1:
        raise ValueError("need r >= 2, e >= 1 and n >= 1")
    N = n**r
    if e > N:
        raise ValueError(f"e={e} exceeds n^r={N}")
    if n > CANON_MAX_DIM or r > CANON_MAX_ORDER:
        raise BudgetExceeded(
            f"n={n}, r={r} exceed the canonical-form caps ({CANON_MAX_DIM}, {CANON_MAX_ORDER}); "
            "use fstar or downset mode"
        )
    # every subset is visited and deduplicated afterwards, so the raw count is the work
    candidates = math.comb(N, e)
    if candidates > budget:
        raise BudgetExceeded(
            f"{candidates:.3g} placements exceed the budget {budget:.3g}; use fstar or downset mode"
        )
    opts = opts or SolverOptions()
    shards = [(r, n, e, first, opts) for first in range(N - e + 1)]
    if executor is not None:
        parts = list(executor.map(_shard_exhaustive, shards))
    else:
        parts = [_shard_exhaustive(s) for s in shards]
    classes = {}
    for part in parts:
        for key, T in part.items():
            classes.setdefault(key, T)
    keys = sorted(classes, key=lambda T: (T.dim, T.ones))
    lams = _radii(keys, opts, executor)
    best, maxi = _reduce(keys, lams)
    return SearchReport(
        r, e, (n,), best, maxi, upper_bound(e, r), _structure(r, e, maxi),
        "exhaustive", len(keys),
    )


def search(r: int, e: int, mode: str = "fstar", n_range=None, **kw) -> SearchReport:
    """Dispatch on ``mode``: ``fstar``, ``fstar-strict``, ``downset`` or ``exhaustive``."""
    if mode == "fstar":
        return search_fstar(r, e, n_range, **kw)
    if mode == "fstar-strict":
        return search_fstar(r, e, n_range, strict=True, **kw)
    if mode == "downset":
        return search_downset(r, e, n_range, **kw)
    if mode == "exhaustive":
        if n_range is None:
            raise ValueError("exhaustive mode needs an explicit dimension")
        return search_exhaustive(r, e, max(n_range), **kw)
    raise ValueError(f"unknown search mode {mode!r}")
