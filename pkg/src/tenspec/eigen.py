"""Spectral radius and Perron vector of nonnegative tensors.

Weakly irreducible tensors are handled by shifted power iteration
(Ng-Qi-Zhou style): iterate on ``B = A + shift * I`` and keep the
two-sided bounds ``min_i (B x^{r-1})_i / x_i^{r-1}`` and ``max_i ...``,
which enclose ``rho(B)``. Other tensors are split along the strongly
connected components of their representation digraph, recursively.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .graph import block_decompose, is_weakly_irreducible
from .tensor import Tensor, ZeroOneTensor, apply, coo, is_symmetric, poly_eval

__all__ = [
    "CertificateError",
    "EigenResult",
    "SolverOptions",
    "certify_lower_bound",
    "lambda_bar_lower",
    "lambda_bar_symmetric",
    "ladder",
    "positivize_certificate",
    "residual",
    "spectral_radius",
]

_TINY = 1e-300


class CertificateError(ValueError):
    """A certificate precondition or postcondition failed."""


@dataclass(frozen=True)
class SolverOptions:
    tolerance: float = 1e-10
    max_iterations: int = 1_000_000
    shift: float = 1.0

    def __post_init__(self):
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")
        if self.shift < 0:
            raise ValueError("shift must be nonnegative")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")


@dataclass(frozen=True, eq=False)
class EigenResult:
    """Perron pair estimate.

    ``x`` has unit r-norm; ``residual`` is ``max |A x^{r-1} - lam x^{[r-1]}|``.
    """

    lam: float
    x: np.ndarray = field(repr=False)
    residual: float
    iterations: int
    converged: bool
    weakly_irreducible: bool = True
    n_blocks: int = 1

    def as_dict(self) -> dict:
        return {
            "lambda": self.lam,
            "x": self.x.tolist(),
            "residual": self.residual,
            "iterations": self.iterations,
            "converged": self.converged,
            "weakly_irreducible": self.weakly_irreducible,
            "blocks": self.n_blocks,
        }


def _rnorm(x: np.ndarray, r: int) -> float:
    return float(np.sum(x**r) ** (1.0 / r))


def residual(A: Tensor, x, lam: float) -> float:
    x = np.asarray(x, dtype=float)
    if A.dim == 0:
        return 0.0
    return float(np.max(np.abs(apply(A, x) - lam * x ** (A.order - 1))))


def _power_iteration(A: Tensor, opts: SolverOptions):
    """Shifted power iteration; assumes ``A`` weakly irreducible.

    Returns ``(lam, x, iterations, converged)``.
    """
    n, r = A.dim, A.order
    idx, vals = coo(A)
    heads, tails = idx[:, 0], idx[:, 1:]
    x = np.full(n, n ** (-1.0 / r))
    lo = hi = 0.0
    for it in range(1, opts.max_iterations + 1):
        xr1 = x ** (r - 1)
        y = opts.shift * xr1
        if heads.size:
            y = y + np.bincount(heads, weights=vals * np.prod(x[tails], axis=1), minlength=n)
        ratio = y / np.maximum(xr1, _TINY)
        lo, hi = float(ratio.min()), float(ratio.max())
        if hi - lo <= opts.tolerance:
            return 0.5 * (lo + hi) - opts.shift, x, it, True
        x = y ** (1.0 / (r - 1))
        x = x / _rnorm(x, r)
    return 0.5 * (lo + hi) - opts.shift, x, opts.max_iterations, False


def _extend_upstream(A, x, lam, blocks, win, opts):
    """Fill the Perron vector on the blocks after the winning one.

    Rows of block ``t`` must satisfy ``lam x_i^{r-1} = (A x)_i``. Iterating
    from zero is monotone and converges because every block that reaches
    the winner has radius below ``lam``; blocks that do not reach it stay 0.
    """
    r = A.order
    ok = True
    iterations = 0
    for t in range(win + 1, len(blocks)):
        verts = np.array([v - 1 for v in blocks[t]])
        for _ in range(opts.max_iterations):
            iterations += 1
            new = (apply(A, x)[verts] / lam) ** (1.0 / (r - 1))
            delta = float(np.max(np.abs(new - x[verts])))
            x[verts] = new
            if delta <= 1e-16 * max(1.0, float(np.max(x))):
                break
        else:
            ok = False
    return x, iterations, ok


def _zero_radius_vector(A: Tensor) -> np.ndarray:
    """Nonnegative null vector for a tensor whose spectral radius is 0.

    A vertex ``v`` such that no entry has all trailing indices equal to
    ``v`` gives ``A e_v^{r-1} = 0``.
    """
    idx, _ = coo(A)
    hit = set()
    for row in idx:
        if np.all(row[1:] == row[1]):
            hit.add(int(row[1]))
    free = [v for v in range(A.dim) if v not in hit]
    x = np.zeros(A.dim)
    x[free[0] if free else 0] = 1.0
    return x


def _solve(A: Tensor, opts: SolverOptions):
    """``(lam, x, iterations, converged, n_blocks)`` for ``A`` of dimension >= 1.

    A diagonal block of the strongly-connected-component split need not be
    weakly irreducible itself when ``r >= 3`` (the arcs joining it may come
    from entries that also touch earlier blocks), so blocks are solved
    recursively.
    """
    if is_weakly_irreducible(A):
        lam, x, its, conv = _power_iteration(A, opts)
        return lam, x, its, conv, 1
    dec = block_decompose(A)
    results = [_solve(blk, opts) for blk in dec.diagonal]
    lams = [res[0] for res in results]
    iterations = sum(res[2] for res in results)
    converged = all(res[3] for res in results)
    best = max(lams)
    if best <= 0.0:
        return 0.0, _zero_radius_vector(A), iterations, converged, len(dec.blocks)
    # among (near) ties take the most upstream block, so every block that
    # reaches it has a strictly smaller radius
    win = max(s for s, lam in enumerate(lams) if lam >= best - 10 * opts.tolerance)
    x = np.zeros(A.dim)
    x[[v - 1 for v in dec.blocks[win]]] = results[win][1]
    x, extra, ok = _extend_upstream(A, x, best, dec.blocks, win, opts)
    return best, x / _rnorm(x, A.order), iterations + extra, converged and ok, len(dec.blocks)


def spectral_radius(A: Tensor, opts: SolverOptions | None = None) -> EigenResult:
    """Spectral radius ``rho(A)`` and a nonnegative Perron vector.

    For a weakly irreducible ``A`` the returned ``lam`` is the midpoint of
    the final enclosure ``[lam_min, lam_max]``. Otherwise ``rho(A)`` is the
    largest radius among the diagonal blocks of :func:`block_decompose`;
    the vector is supported on the winning block and the blocks upstream
    of it.
    """
    opts = opts or SolverOptions()
    if A.dim == 0:
        return EigenResult(0.0, np.zeros(0), 0.0, 0, True, True, 0)
    lam, x, its, conv, nb = _solve(A, opts)
    return EigenResult(lam, x, residual(A, x, lam), its, conv, nb == 1, nb)


def _check_certificate_vector(A: Tensor, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape != (A.dim,):
        raise ValueError(f"vector length {x.shape} does not match dimension {A.dim}")
    if np.any(x < 0):
        raise ValueError("certificate vector must be nonnegative")
    if not np.any(x > 0):
        raise ValueError("certificate vector must be nonzero")
    return x


def certify_lower_bound(A: Tensor, x, lam: float, slack: float = 0.0) -> bool:
    """True iff ``A x^{r-1} >= lam x^{[r-1]} - slack`` componentwise.

    A true result proves ``rho(A) >= lam``.
    """
    x = _check_certificate_vector(A, x)
    return bool(np.all(apply(A, x) >= lam * x ** (A.order - 1) - slack))


def ladder(A: Tensor, zero_set) -> list[frozenset]:
    """Shrinking sets ``J_0 = zero_set, J_1, ...`` ending at a fixed point.

    ``J_i`` keeps the vertices of ``J_{i-1}`` all of whose positive entries
    have every trailing index inside ``J_{i-1}``. Vertices are 0-based.
    """
    idx, _ = coo(A)
    rows = [(int(row[0]), set(row[1:].tolist())) for row in idx]
    sets = [frozenset(zero_set)]
    while True:
        cur = sets[-1]
        nxt = frozenset(j for j in cur if all(tail <= cur for head, tail in rows if head == j))
        if nxt == cur:
            return sets
        sets.append(nxt)


def positivize_certificate(A: Tensor, x, lam: float, epsilon: float | None = None) -> np.ndarray:
    """Turn a nonnegative certificate ``A x^{r-1} >= lam x^{[r-1]}`` into a
    strictly positive one for a weakly irreducible ``A``.

    Zero components are lifted in layers: vertices leaving the zero set at
    ladder step ``i`` get ``eps / log(1/eps)**a_i`` with
    ``a_i = sum_{j<=i} (r-1)**(s-j)``. When ``epsilon`` is omitted the
    largest of ``1e-2, 1e-3, ...`` that passes the re-check is used.
    """
    x = _check_certificate_vector(A, x)
    if not lam > 0:
        raise CertificateError("lambda must be positive")
    if A.dim == 0 or not is_weakly_irreducible(A):
        raise CertificateError("tensor must be weakly irreducible")
    if not certify_lower_bound(A, x, lam):
        raise CertificateError("input does not satisfy the certificate inequality")
    zero = {j for j in range(A.dim) if x[j] == 0}
    if not zero:
        return x.copy()
    sets = ladder(A, zero)
    if sets[-1]:
        raise CertificateError("ladder stalled on a nonempty set")
    s = len(sets) - 1
    r = A.order

    def lift(eps: float) -> np.ndarray:
        logv = math.log(1.0 / eps)
        y = x.copy()
        for i in range(1, s + 1):
            a_i = sum((r - 1) ** (s - j) for j in range(1, i + 1))
            for j in sets[i - 1] - sets[i]:
                y[j] = eps / logv**a_i
        return y

    if epsilon is not None:
        if not 0 < epsilon < 1:
            raise CertificateError("epsilon must lie in (0, 1)")
        y = lift(epsilon)
        if np.all(y > 0) and certify_lower_bound(A, y, lam):
            return y
        raise CertificateError(f"epsilon={epsilon} too large; retry with a smaller value")
    for p in range(2, 300):
        y = lift(10.0**-p)
        if not np.all(y > 0):
            break
        if certify_lower_bound(A, y, lam):
            return y
    raise CertificateError("no epsilon in 1e-2 .. 1e-299 passed the certificate check")


def lambda_bar_lower(A: Tensor) -> float:
    """Value of the form ``p_A`` at the uniform unit-r-norm vector (``e/n`` for 0/1 tensors)."""
    if A.dim == 0:
        raise ValueError("dimension 0 has no uniform vector")
    if isinstance(A, ZeroOneTensor):
        return A.nnz / A.dim
    return poly_eval(A, np.full(A.dim, A.dim ** (-1.0 / A.order)))


def lambda_bar_symmetric(A: Tensor, opts: SolverOptions | None = None) -> float:
    """Maximum of ``p_A`` over the unit r-norm sphere, for symmetric ``A``.

    For symmetric tensors this equals the spectral radius.
    """
    if not is_symmetric(A):
        raise ValueError("lambda_bar_symmetric needs a symmetric tensor")
    return spectral_radius(A, opts).lam
