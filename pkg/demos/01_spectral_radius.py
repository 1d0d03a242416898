"""Spectral radii of a few small tensors.

Run with ``python demos/01_spectral_radius.py``.
"""

import numpy as np

from tenspec import ZeroOneTensor, all_ones, block_decompose, spectral_radius
from tenspec.fixtures import counterexample_pair

print("All-ones tensors: rho(J_k^r) = k^(r-1)")
for r in (3, 4):
    for k in (2, 3):
        res = spectral_radius(all_ones(k, r))
        print(f"  r={r} k={k}: rho = {res.lam:.12g} after {res.iterations} iterations")

print()
print("Reversing the index order of a nonsymmetric tensor changes rho")
A, M = counterexample_pair()
print(f"  rho(A) = {spectral_radius(A).lam:.12g}")
print(f"  rho(M) = {spectral_radius(M).lam:.12g}")

print()
print("A reducible tensor: J_2^3 plus a one at (3,1,1)")
T = ZeroOneTensor(3, 3, list(all_ones(2, 3).ones) + [(3, 1, 1)])
dec = block_decompose(T)
for verts, blk in zip(dec.blocks, dec.diagonal):
    print(f"  block {verts}: rho = {spectral_radius(blk).lam:.12g}")
res = spectral_radius(T)
print(f"  rho(T) = {res.lam:.12g}, Perron vector {np.round(res.x, 6)}, residual {res.residual:.1e}")
print("  vertex 3 only feeds into the block {1, 2}, so it gets a smaller positive weight")
