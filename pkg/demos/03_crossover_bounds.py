"""The two-regime concentration bound and its crossover scale.

For a Bernoulli law the crossover equation M(tau0) = 1/L^2 has the closed
form tau0 = L sqrt(2 p (1-p)), and the optimal-window bound reduces to the
min-form envelope min{(eps + 1/D*)/sqrt(p(1-p)), 1}, matched from below by
the exact binomial computation: the bound has the right order everywhere.
"""

import math

import numpy as np

from lofo import (
    FiniteDist,
    WeightVector,
    q_exact,
    shape_bernoulli_min,
    shape_crossover,
    solve_tau0,
    symmetrize,
    weighted_sum_dist,
)
from lofo.lcd import lcd

p, s, L = 0.5, 16, 2.0
f = FiniteDist.bernoulli(p)
g = symmetrize(f)
root = solve_tau0(g, L)
print(f"Bernoulli({p}), L = {L}: tau0 = {root.tau0:.6f} "
      f"(closed form L sqrt(2p(1-p)) = {L * math.sqrt(2 * p * (1 - p)):.6f})")

a = WeightVector(np.full(s, s**-0.5))
dstar = lcd(a, L, "d_star", tol=1e-8).value
eps0 = root.tau0 / dstar
print(f"s = {s} equal weights: D* = {dstar:.4f}, crossover window eps0 = {eps0:.4f}")

fa = weighted_sum_dist(f, a)
print(f"\n{'eps':>8} {'exact Q':>10} {'crossover bound':>16} {'min-form':>10} {'branch':>10}")
for eps in (0.0, 0.05, 1 / dstar, 0.3, eps0, 0.8, 1.5):
    q = q_exact(fa, eps).value
    shape = shape_crossover(a, g, L, eps, dstar, root=root)
    env = shape_bernoulli_min(eps, dstar, p)
    print(f"{eps:8.4f} {q:10.6f} {shape.value:16.6f} {env:10.6f} {shape.params['branch']:>10}")

print("\nBelow eps0 the bound follows 1/(D* sqrt(M(eps D*))); above it grows")
print("linearly in eps.  The exact Q tracks the same two regimes, so the")
print("envelope is tight up to a bounded ratio on both sides.")
