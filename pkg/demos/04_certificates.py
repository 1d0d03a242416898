"""Lower bounds on rho from a single vector.

If A x^{r-1} >= lam x^{[r-1]} for a nonnegative nonzero x then rho(A) >= lam.
A certificate with zeros can be made strictly positive when A is weakly
irreducible; the lifted entries shrink layer by layer.
"""

import numpy as np

from tenspec import ZeroOneTensor, certify_lower_bound, positivize_certificate, spectral_radius

T = ZeroOneTensor(3, 4, [(1, 1, 1), (1, 2, 2), (2, 3, 3), (3, 4, 4), (4, 1, 1), (1, 1, 2)])
x = np.array([1.0, 0.0, 0.0, 0.0])
lam = 1.0
print("certificate holds:", certify_lower_bound(T, x, lam))
print("rho(T) =", spectral_radius(T).lam)
y = positivize_certificate(T, x, lam)
print("positive certificate:", y)
print("still holds:", certify_lower_bound(T, y, lam))
