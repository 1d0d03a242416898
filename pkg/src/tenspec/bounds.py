"""Closed-form bounds on the maximum spectral radius, the Young-deficit
function ``f``, the stability extractor and the extremal constructions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .eigen import SolverOptions, spectral_radius
from .tensor import ZeroOneTensor, all_ones

__all__ = [
    "DeficitReport",
    "ExtremalSpec",
    "StabilityError",
    "StabilityReport",
    "build_extremal",
    "extremal_insert_positions",
    "extremal_zero_positions",
    "f_func",
    "f_quadratic_bound_check",
    "f_quadratic_lower",
    "lower_bound_g",
    "lower_bound_g_slack",
    "stability_epsilon",
    "stability_extract",
    "upper_bound",
    "young_deficit",
]


def upper_bound(e: float, r: int) -> float:
    """``e**((r-1)/r)``, the maximum possible spectral radius with ``e`` ones."""
    if e < 0 or r < 2:
        raise ValueError("need e >= 0 and r >= 2")
    root = round(float(e) ** (1.0 / r))
    if root**r == e:
        # exact on perfect powers, where equality with rho(J_k^r) is checked
        return float(root ** (r - 1))
    return float(e) ** ((r - 1) / r)


def lower_bound_g(e: int, r: int, k: int) -> float:
    """``e / k``: the uniform-vector value on a ``k``-dimensional host."""
    if e > k**r:
        raise ValueError(f"e={e} does not fit in dimension k={k} (k^r={k ** r})")
    return e / k


def lower_bound_g_slack(l: int, r: int, k: int) -> float:
    """``k^{r-1} - (l + r!)/k``, the bound for ``e = k^r - l`` that only
    assumes a symmetric host with ``e - r!`` ones."""
    return k ** (r - 1) - (l + math.factorial(r)) / k


def f_func(x, e: float, r: int):
    """``x^r/r - x/e^{(r-1)/r} + (r-1)/(r e)``.

    Evaluated through ``u = x e^{1/r}`` as
    ``(u-1)^2/(r e) * sum_{m=0}^{r-2} (r-1-m) u^m``, which is the same
    polynomial but free of cancellation near the zero ``x = e^{-1/r}``.
    """
    x = np.asarray(x, dtype=float)
    u = x * e ** (1.0 / r)
    poly = sum((r - 1 - m) * u**m for m in range(r - 1))
    out = (u - 1.0) ** 2 * poly / (r * e)
    return float(out) if out.ndim == 0 else out


def f_quadratic_lower(x, e: float, r: int):
    """``((r-1)/2) e^{-1+2/r} (x - e^{-1/r})^2``."""
    x = np.asarray(x, dtype=float)
    out = 0.5 * (r - 1) * e ** (-1.0 + 2.0 / r) * (x - e ** (-1.0 / r)) ** 2
    return float(out) if out.ndim == 0 else out


def f_quadratic_bound_check(x: float, e: float, r: int, slack: float = 0.0) -> bool:
    if not x > e ** (-1.0 / r):
        raise ValueError("the quadratic lower bound is only claimed for x > e^{-1/r}")
    return bool(f_func(x, e, r) >= f_quadratic_lower(x, e, r) - slack)


def stability_epsilon(l: int) -> int:
    # the o_k(1) correction for l < 0 is dropped at finite k
    return 0 if l >= 0 else 1


class StabilityError(ValueError):
    """The spectral-radius hypothesis of the stability extractor fails."""

    def __init__(self, message: str, rho: float):
        super().__init__(message)
        self.rho = rho


@dataclass(frozen=True)
class StabilityReport:
    k: int
    l: int
    epsilon: int
    c2: float
    c1: float
    threshold: float
    large_set: tuple[int, ...]
    zeros_inside: int
    ones_outside: int
    rho: float
    required_rho: float
    diagonal_at_max: bool
    xr_sorted: tuple[float, ...]

    @property
    def large_dim(self) -> int:
        return len(self.large_set)

    @property
    def slack(self) -> float:
        return self.rho - self.required_rho

    def as_dict(self) -> dict:
        return {
            "k": self.k,
            "l": self.l,
            "epsilon": self.epsilon,
            "c2": self.c2,
            "c1": self.c1,
            "threshold": self.threshold,
            "large_set": list(self.large_set),
            "large_dim": self.large_dim,
            "zeros_inside": self.zeros_inside,
            "ones_outside": self.ones_outside,
            "rho": self.rho,
            "required_rho": self.required_rho,
            "slack": self.slack,
            "diagonal_at_max": self.diagonal_at_max,
            "xr_sorted": list(self.xr_sorted),
        }


def stability_extract(
    A: ZeroOneTensor, k: int, l: int, opts: SolverOptions | None = None
) -> StabilityReport:
    """Locate the near-``J_k^r`` principal sub-tensor of ``A``.

    ``A`` must have ``k^r + l`` ones and ``rho(A) >= k^{r-1} + eps*l/k``.
    Vertices with ``x_i^r >= c1/k`` form the large set ``L``; the report
    counts the zeros inside ``A_L`` and the ones outside it.
    """
    r = A.order
    if A.nnz != k**r + l:
        raise ValueError(f"tensor has {A.nnz} ones, expected k^r + l = {k ** r + l}")
    eps = stability_epsilon(l)
    res = spectral_radius(A, opts)
    required = k ** (r - 1) + eps * l / k
    tol = (opts or SolverOptions()).tolerance
    if res.lam < required - tol:
        raise StabilityError(
            f"rho(A)={res.lam:.12g} is below the required {required:.12g}", res.lam
        )
    radicand = (2.0 / r - 2.0 * eps / (r - 1)) * l
    c2 = math.sqrt(max(radicand, 0.0))
    c1 = 1.0 / (2.0 * (c2 + 1.0) ** (r - 1))
    threshold = c1 / k
    xr = res.x**r
    large = tuple(int(i) + 1 for i in np.flatnonzero(xr >= threshold))
    large_set = set(large)
    inside = sum(1 for t in A.ones if all(v in large_set for v in t))
    v = int(np.argmax(res.x)) + 1
    return StabilityReport(
        k=k,
        l=l,
        epsilon=eps,
        c2=c2,
        c1=c1,
        threshold=threshold,
        large_set=large,
        zeros_inside=len(large) ** r - inside,
        ones_outside=A.nnz - inside,
        rho=res.lam,
        required_rho=required,
        diagonal_at_max=A.entry(*([v] * r)) == 1,
        xr_sorted=tuple(sorted(xr.tolist(), reverse=True)),
    )


@dataclass(frozen=True)
class DeficitReport:
    """Sum of ``f`` over the one-positions at the normalised products.

    ``leading`` is ``((r-1)/r - eps) l / k^r``; ``constant`` is the ``C``
    making ``total = leading + C l^2 / k^{2r}`` (None when ``l = 0``).
    ``identity`` is ``1 - rho / (e^{(r-1)/r} S^{1/r})`` which ``total``
    must reproduce.
    """

    total: float
    leading: float
    constant: float | None
    identity: float


def young_deficit(A: ZeroOneTensor, k: int, l: int, opts: SolverOptions | None = None) -> DeficitReport:
    r, e = A.order, A.nnz
    res = spectral_radius(A, opts)
    prods = np.prod(res.x[A.index], axis=1)
    S = float(np.sum(prods**r))
    normalised = prods / S ** (1.0 / r)
    total = float(np.sum(f_func(normalised, e, r)))
    eps = stability_epsilon(l)
    leading = ((r - 1) / r - eps) * l / k**r
    constant = None if l == 0 else (total - leading) * k ** (2 * r) / l**2
    identity = 1.0 - res.lam / (e ** ((r - 1) / r) * S ** (1.0 / r))
    return DeficitReport(total, leading, constant, identity)


def extremal_insert_positions(r: int, k: int) -> list[tuple[int, ...]]:
    """``(k+1,1,..,1), (1,k+1,1,..,1), ..., (1,..,1,k+1)``."""
    return [tuple(k + 1 if j == p else 1 for j in range(r)) for p in range(r)]


def extremal_zero_positions(r: int, k: int) -> list[tuple[int, ...]]:
    """``(k,..,k)``, then ``k-1`` in positions 2..r, then ``(k-1,k,..,k)``."""
    out = [(k,) * r]
    out += [tuple(k - 1 if j == p else k for j in range(r)) for p in range(1, r)]
    out.append((k - 1,) + (k,) * (r - 1))
    return out


@dataclass(frozen=True)
class ExtremalSpec:
    r: int
    k: int
    l: int
    tensor: ZeroOneTensor
    non_unique: bool = False


def build_extremal(r: int, k: int, l: int) -> ExtremalSpec:
    """The conjectured maximiser with ``k^r + l`` ones, ``-r-1 <= l <= r``.

    ``l = 1`` has a whole family of maximisers (one extra one anywhere);
    the representative ``J_k^r + (k+1,1,..,1)`` is returned and flagged.
    """
    if k < 2:
        raise ValueError("k must be >= 2")
    if not -r - 1 <= l <= r:
        raise ValueError(f"l={l} outside {-r - 1}..{r}")
    J = all_ones(k, r)
    if l == 0:
        return ExtremalSpec(r, k, l, J)
    if l > 0:
        extra = extremal_insert_positions(r, k)[:l]
        return ExtremalSpec(r, k, l, ZeroOneTensor(r, k + 1, J.ones + tuple(extra)), non_unique=l == 1)
    holes = set(extremal_zero_positions(r, k)[:-l])
    return ExtremalSpec(r, k, l, ZeroOneTensor(r, k, [t for t in J.ones if t not in holes]))

