"""Numerical laboratory for Levy concentration functions of weighted i.i.d.
sums and the arithmetic structure (least common denominators) of their
coefficient vectors."""

from .bounds import (
    BoundShape,
    GadgetReport,
    RootSolution,
    check_cf_exponential_bound,
    check_smoothing_gaussian_branch,
    check_smoothing_identities,
    check_smoothing_lattice_bound,
    shape_bernoulli_min,
    shape_crossover,
    shape_esseen,
    shape_kolmogorov_rogozin,
    shape_lcd,
    shape_lcd_unit,
    shape_no_arithmetic,
    shape_vershynin,
    smoothing_cf,
    solve_d0,
    solve_tau0,
)
from .concentration import (
    QEstimate,
    WeightVector,
    esseen_integral,
    q_closed_form_gaussian,
    q_exact,
    q_monte_carlo,
    q_regularity_check,
    weighted_sum_dist,
)
from .distributions import (
    AnalyticDist,
    FiniteDist,
    MixtureDecomposition,
    atom_survival,
    cf_eval,
    m_functional,
    m_functional_with_error,
    mixture_decompose,
    symmetrize,
    weighted_cf,
)
from .exceptions import CapacityError, PreconditionError, QuadratureError
from .lcd import (
    ClearanceReport,
    LcdResult,
    dist_to_lattice,
    f_threshold,
    lcd,
    log_plus_threshold,
    verify_lattice_clearance,
)

__version__ = "0.1.0"

__all__ = [
    "AnalyticDist",
    "BoundShape",
    "CapacityError",
    "ClearanceReport",
    "FiniteDist",
    "GadgetReport",
    "LcdResult",
    "MixtureDecomposition",
    "PreconditionError",
    "QEstimate",
    "QuadratureError",
    "RootSolution",
    "WeightVector",
    "atom_survival",
    "cf_eval",
    "check_cf_exponential_bound",
    "check_smoothing_gaussian_branch",
    "check_smoothing_identities",
    "check_smoothing_lattice_bound",
    "dist_to_lattice",
    "esseen_integral",
    "f_threshold",
    "lcd",
    "log_plus_threshold",
    "m_functional",
    "m_functional_with_error",
    "mixture_decompose",
    "q_closed_form_gaussian",
    "q_exact",
    "q_monte_carlo",
    "q_regularity_check",
    "shape_bernoulli_min",
    "shape_crossover",
    "shape_esseen",
    "shape_kolmogorov_rogozin",
    "shape_lcd",
    "shape_lcd_unit",
    "shape_no_arithmetic",
    "shape_vershynin",
    "smoothing_cf",
    "solve_d0",
    "solve_tau0",
    "symmetrize",
    "verify_lattice_clearance",
    "weighted_cf",
    "weighted_sum_dist",
]
