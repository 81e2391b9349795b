"""Frozen calibration constants for the verification harness.

Each constant was computed by the corresponding harness run on its declared
corpus and frozen with headroom; the acceptance suite re-derives the
empirical values and checks them against these.  An upper-bound fixture is
the allowed supremum of Q/shape; a bracket fixture must contain every
observed ratio for the declared seed, and a disjoint-seed rerun must stay
inside the bracket inflated by STABILITY_FACTOR.

Provenance (all derived, none prescribed):
  RATIO_SUP["crossover"]        sparse Bernoulli family, s in {4..256}
                                doubling grid x p in {0.05..0.5}, L = 2,
                                40-point eps grids: observed sup 0.944.
  RATIO_SUP["kolmogorov_rogozin"] / ["esseen"]
                                dense equal-weight family, n in {4..256},
                                tau in [0.25, 4]: observed 0.564 / 1.125.
  ESSEEN_TWO_SIDED_BRACKET      50 symmetrized 5-atom laws (seed 0),
                                lambda in {0.1, 1, 10}: observed
                                [0.468, 1.225]; reseeded runs stay within
                                the 10%-inflated bracket.
  BINOMIAL_LOWER_C              exact binomial Q vs min-form over the same
                                sparse grid: observed min ratio 0.198.
  SPARSE_LCD_BRACKET            lcd(a_s)/sqrt(s) for s in {4,16,64,256},
                                L = 2: observed [0.7396, 0.8572].
  GAUSSIAN_SPREAD_BRACKET       1/sqrt(M(tau))/(1 + tau/sigma) over
                                tau/sigma in [0.01, 100]: observed
                                [0.5421, 0.9920] (scale-invariant).
  GAUSSIAN_WINDOW_Q_SUP         Q * sigma/eps on eps in [sigma/D*, sigma]:
                                observed sup 0.3987 (= 1/sqrt(2 pi) limit).
  GAUSSIAN_WINDOW_SHAPE_BRACKET crossover shape * sigma/eps on the same
                                range: observed [0.707, 1.249].
"""

RATIO_SUP = {
    "crossover": 1.10,
    "kolmogorov_rogozin": 0.75,
    "esseen": 1.35,
}

# sup of Q(F_a, lambda) / esseen_integral over a mixed corpus (arbitrary
# finite laws and weights, lambda in {0.1, 0.5, 2}): observed 1.033.
ESSEEN_UPPER_C = 1.20

STABILITY_FACTOR = 1.10

ESSEEN_TWO_SIDED_BRACKET = (0.44, 1.25)
BINOMIAL_LOWER_C = 0.19
SPARSE_LCD_BRACKET = (0.73, 0.87)
GAUSSIAN_SPREAD_BRACKET = (0.53, 1.00)
GAUSSIAN_WINDOW_Q_SUP = 0.42
GAUSSIAN_WINDOW_SHAPE_BRACKET = (0.60, 1.40)
