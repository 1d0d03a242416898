"""Locating the near-all-ones block of an extremal tensor.

For each constructed tensor with k^3 + l ones the extractor thresholds
the Perron vector and reports the large set L, the zeros inside it (N)
and the ones outside it (M).
"""

from tenspec import build_extremal, stability_extract, young_deficit

print(f"{'k':>2} {'l':>3} {'|L|':>4} {'N':>3} {'M':>3} {'rho':>12} {'deficit':>10}")
for k in (3, 4):
    for l in range(-4, 4):
        T = build_extremal(3, k, l).tensor
        rep = stability_extract(T, k, l)
        deficit = young_deficit(T, k, l).total
        print(f"{k:>2} {l:>3} {rep.large_dim:>4} {rep.zeros_inside:>3} {rep.ones_outside:>3} {rep.rho:>12.6f} {deficit:>10.2e}")
