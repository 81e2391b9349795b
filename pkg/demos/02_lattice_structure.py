"""Arithmetic structure of weight vectors: lattice distance and certified
least common denominators.

The LCD is the first scale t at which t*a sneaks closer to the integer
lattice than a growth threshold allows.  Structured (near-rational) vectors
have small LCDs; unstructured ones stay clear for a long range of scales,
which is exactly what strengthens their anti-concentration bounds.
"""

import math

import numpy as np

from lofo import WeightVector, dist_to_lattice, f_threshold, lcd, verify_lattice_clearance

a = WeightVector([1.0])
print("Scalar vector a = (1), L = 1: dist(t, Z) = |t - round(t)| vs t/6")
for t in (0.5, 0.7, 6 / 7, 0.9):
    d = dist_to_lattice(t, a)
    thr = f_threshold(t, 1.0)
    mark = "<-- condition holds" if d < thr else ""
    print(f"  t = {t:.4f}: dist = {d:.4f}, threshold = {thr:.4f} {mark}")

res = lcd(a, 1.0, "d_star", tol=1e-8)
print(f"\nCertified LCD: {res.value:.9f} (exact value 6/7 = {6 / 7:.9f})")
print(f"  bracket width {res.error_radius:.2e}, witness at {res.witness_t:.9f},")
print(f"  {res.n_evals} distance evaluations over [{res.t_start:.3f}, {res.t_max:.3g}]")

print("\nScaling covariance: lcd(c * a) = lcd(a) / c")
for c in (0.5, 2.0, 10.0):
    scaled = lcd(WeightVector([c]), 1.0, "d_star", tol=1e-8)
    print(f"  c = {c:4.1f}: {scaled.value:.8f} vs {res.value / c:.8f}")

print("\nSparse equal-weight vectors (s nonzero coords of s^-1/2), L = 2:")
for s in (4, 16, 64, 256, 1024):
    v = WeightVector(np.full(s, s**-0.5))
    r = lcd(v, 2.0, "d_star", tol=1e-8)
    print(f"  s = {s:5d}: D* = {r.value:9.4f}, D*/sqrt(s) = {r.value / math.sqrt(s):.4f}")
print("The ratio D*/sqrt(s) stays inside a fixed bracket: D* grows like sqrt(s).")

unit = WeightVector([1.0])
print("\nClearance sweep (does dist stay above the threshold up to D?):")
for D in (0.8, 0.95):
    rep = verify_lattice_clearance(unit, 1.0, D)
    where = f", violated at t = {rep.violation_t:.6f}" if not rep.passed else ""
    print(f"  D = {D}: {'clear' if rep.passed else 'violated'}{where}")
