"""Concentration functions Q(F, lambda) of weighted i.i.d. sums.

Q(F, lambda) = sup_x F{[x, x + lambda]} over closed windows.  For a finite
law the supremum is attained with the window's left edge at an atom, so a
two-pointer sweep over the sorted support is exact.  The same sweep kernel,
applied to a sorted sample with uniform weights, is the Monte Carlo
estimator; a DKW-style bound supplies its certified error radius.

Also here: the exact law of S_a = sum_k a_k X_k by iterated convolution
with coalescing (with a binomial shortcut for two-valued laws and equal
weights), the Gaussian closed form, and the characteristic-function
integral lambda * int_0^{1/lambda} |CF_{S_a}(t)| dt that upper-bounds Q up
to an absolute constant (and matches it two-sidedly for symmetric laws
with nonnegative CF).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy import stats

from .distributions import Dist, FiniteDist, weighted_cf
from .exceptions import CapacityError
from .quadrature import adaptive_simpson

DEFAULT_BUDGET = 2**22          # coalesced support-size budget for exact paths
_RAW_PRODUCT_CAP = 2**24        # hard cap on a single outer-sum allocation
MC_MIN_SAMPLES = 10_000
MC_CONFIDENCE = 0.99


class WeightVector:
    """Coefficient vector a != 0 with cached Euclidean and sup norms."""

    __slots__ = ("coords", "norm2", "norm_inf", "n")

    def __init__(self, coords: Sequence[float]):
        c = np.asarray(coords, dtype=float).ravel()
        if c.size == 0 or not np.all(np.isfinite(c)):
            raise ValueError("weight vector must be nonempty and finite")
        if not np.any(c != 0.0):
            raise ValueError("weight vector must be nonzero")
        c = c.copy()
        c.flags.writeable = False
        self.coords = c
        self.norm2 = float(np.sqrt(np.dot(c, c)))
        self.norm_inf = float(np.max(np.abs(c)))
        self.n = int(c.size)

    def scaled(self, lam: float) -> "WeightVector":
        if lam == 0.0:
            raise ValueError("scaling by zero produces the zero vector")
        return WeightVector(lam * self.coords)

    def normalized(self) -> "WeightVector":
        return WeightVector(self.coords / self.norm2)

    def __repr__(self) -> str:
        return f"WeightVector(n={self.n}, norm={self.norm2:.6g}, sup={self.norm_inf:.6g})"


@dataclass(frozen=True)
class QEstimate:
    """One concentration-function value with its provenance.

    For the monte_carlo method the contract is
    value - error_radius <= Q <= value + error_radius at 99% confidence;
    exact and closed_form carry error_radius 0.
    """

    value: float
    method: str                      # "exact" | "closed_form" | "monte_carlo"
    error_radius: float = 0.0
    sample_size: Optional[int] = None
    seed: Optional[int] = None

    def to_json(self) -> dict:
        return {
            "value": self.value,
            "method": self.method,
            "error_radius": self.error_radius,
            "sample_size": self.sample_size,
            "seed": self.seed,
        }


def _window_sup(points: np.ndarray, cum: np.ndarray, lam: float) -> tuple[float, int]:
    """Max total weight of a closed window [x_i, x_i + lam] over left edges.

    ``cum`` is the length n+1 prefix-sum array of the point weights.  Ties
    resolve to the smallest left edge (first argmax).
    """
    hi = np.searchsorted(points, points + lam, side="right")
    vals = cum[hi] - cum[: points.size]
    k = int(np.argmax(vals))
    return float(vals[k]), k


def q_exact(f: FiniteDist, lam: float) -> QEstimate:
    """Exact Q(F, lambda) for a finite law; lambda = 0 gives the largest mass."""
    if lam < 0:
        raise ValueError("window length lambda must be nonnegative")
    cum = np.concatenate(([0.0], np.cumsum(f.masses)))
    value, _ = _window_sup(f.atoms, cum, lam)
    return QEstimate(value=min(value, 1.0), method="exact")


def q_closed_form_gaussian(sigma_total: float, lam: float) -> QEstimate:
    """Q for a centered Gaussian sum with total scale sigma_total.

    The optimal window is centered at the mean: Q = 2 Phi(lam/(2 sigma)) - 1.
    """
    if not sigma_total > 0:
        raise ValueError("sigma_total must be positive")
    if lam < 0:
        raise ValueError("window length lambda must be nonnegative")
    value = math.erf(lam / (2.0 * sigma_total * math.sqrt(2.0)))
    return QEstimate(value=value, method="closed_form")


def weighted_sum_dist(
    f: FiniteDist,
    a: WeightVector,
    budget: int = DEFAULT_BUDGET,
) -> FiniteDist:
    """Exact law of S_a = sum_k a_k X_k for i.i.d. X_k ~ f.

    Iterated convolution with coalescing, folding weights in descending |a_k|
    to keep intermediate supports dense.  Two-valued f with all (nonzero)
    weights equal takes the binomial shortcut.  Raises CapacityError instead
    of truncating when a support would exceed the budget.
    """
    if not budget > 0:
        raise ValueError("budget must be positive")
    weights = a.coords[a.coords != 0.0]
    if weights.size == 0:
        return FiniteDist.point_mass(0.0)
    if weights.size == 1:
        return f.scaled(float(weights[0]))

    if f.n_atoms == 2 and np.all(weights == weights[0]):
        return _binomial_shortcut(f, float(weights[0]), int(weights.size))

    order = np.argsort(-np.abs(weights), kind="stable")
    current: FiniteDist | None = None
    for w in weights[order]:
        factor_atoms = w * f.atoms
        if current is None:
            current = FiniteDist(factor_atoms, f.masses)
            continue
        raw = current.n_atoms * f.n_atoms
        if raw > _RAW_PRODUCT_CAP:
            raise CapacityError(raw, budget)
        atoms = np.add.outer(current.atoms, factor_atoms).ravel()
        masses = np.outer(current.masses, f.masses).ravel()
        current = FiniteDist(atoms, masses)
        if current.n_atoms > budget:
            raise CapacityError(current.n_atoms, budget)
    return current


def _binomial_shortcut(f: FiniteDist, w: float, s: int) -> FiniteDist:
    x0, x1 = f.atoms
    p1 = float(f.masses[1])
    k = np.arange(s + 1)
    pmf = stats.binom.pmf(k, s, p1)
    atoms = w * (x0 * (s - k) + x1 * k)
    if w < 0:
        atoms, pmf = atoms[::-1], pmf[::-1]
    return FiniteDist(atoms, pmf)


def sample_weighted_sum(
    dist: Dist, a: WeightVector, n_samples: int, rng: np.random.Generator
) -> np.ndarray:
    """n_samples draws of S_a; zero weights contribute nothing and are skipped."""
    total = np.zeros(n_samples)
    if isinstance(dist, FiniteDist):
        cum = np.cumsum(dist.masses)
        cum[-1] = 1.0
        for w in a.coords:
            if w == 0.0:
                continue
            idx = np.searchsorted(cum, rng.random(n_samples), side="right")
            total += w * dist.atoms[idx]
    else:
        for w in a.coords:
            if w == 0.0:
                continue
            total += w * dist.sample(n_samples, rng)
    return total


def q_monte_carlo(
    dist: Dist,
    a: WeightVector,
    lam: float,
    n_samples: int = 100_000,
    seed: int = 0,
) -> QEstimate:
    """Monte Carlo Q(F_a, lambda) via the sliding-window sweep on a sorted sample.

    The error radius is the two-sided DKW band at 99% confidence, doubled
    because a window mass is a difference of two CDF values.
    """
    if lam < 0:
        raise ValueError("window length lambda must be nonnegative")
    if n_samples < MC_MIN_SAMPLES:
        raise ValueError(f"n_samples must be at least {MC_MIN_SAMPLES}")
    rng = np.random.default_rng(seed)
    sample = np.sort(sample_weighted_sum(dist, a, n_samples, rng))
    cum = np.arange(n_samples + 1) / n_samples
    value, _ = _window_sup(sample, cum, lam)
    eps = math.sqrt(math.log(2.0 / (1.0 - MC_CONFIDENCE)) / (2.0 * n_samples))
    return QEstimate(
        value=value,
        method="monte_carlo",
        error_radius=2.0 * eps,
        sample_size=n_samples,
        seed=seed,
    )


def esseen_integral(
    dist: Dist,
    a: WeightVector,
    lam: float,
    tol: float = 1e-8,
) -> float:
    """lambda * int_0^{1/lambda} |CF_{S_a}(t)| dt to absolute tolerance tol.

    Upper-bounds Q(F_a, lambda) up to an absolute constant; for symmetric
    laws with nonnegative CF it is two-sided.
    """
    if not lam > 0:
        raise ValueError("lambda must be positive")
    if not tol > 0:
        raise ValueError("tol must be positive")
    integrand = lambda t: abs(weighted_cf(dist, a, t))
    return lam * adaptive_simpson(integrand, 0.0, 1.0 / lam, tol=tol / lam)


@dataclass(frozen=True)
class RegularityReport:
    """Window-growth check Q(F, mu) <= (1 + floor(mu/lambda)) Q(F, lambda)."""

    lam: float
    mu: float
    q_lam: float
    q_mu: float
    factor: int
    holds: bool


def q_regularity_check(f: FiniteDist, lam: float, mu: float) -> RegularityReport:
    """Evaluate both exact Q values and the covering inequality between them."""
    if not (lam > 0 and mu > 0):
        raise ValueError("lambda and mu must be positive")
    q_lam = q_exact(f, lam).value
    q_mu = q_exact(f, mu).value
    factor = 1 + int(math.floor(mu / lam))
    holds = q_mu <= factor * q_lam * (1.0 + 1e-12) + 1e-15
    return RegularityReport(lam=lam, mu=mu, q_lam=q_lam, q_mu=q_mu, factor=factor, holds=holds)
