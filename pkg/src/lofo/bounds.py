"""Right-hand-side shapes of the concentration bounds, the crossover-scale
equation M(tau0) = 1/L^2, and pointwise gadget inequalities.

Every bound in this area holds up to an unspecified absolute constant, so
the shapes below are evaluated with constant 1; empirical calibration of the
constants lives in the harness.  Implemented shapes:

* Kolmogorov-Rogozin:   lambda (sum lambda_k^2 (1 - Q_k))^(-1/2)
* Esseen refinement:    lambda (sum lambda_k^2 M_k(lambda_k))^(-1/2)
* Baseline L/D comparison (Vershynin-style least-common-denominator bound)
* LCD-spread bound:      1 / (||a|| D sqrt(M(tau)))   (unit-norm special case
  provided separately), and its D = 1/(2 ||a||_inf) "no arithmetic" form
* Two-regime crossover bound around eps0 = tau0 / D*(a)
* Bernoulli min-form:    min{(eps + 1/D*) / sqrt(p(1-p)), 1}

The crossover scale tau0 solves L^2 = 1/M(tau0); M is continuous and
nonincreasing with limit P = P(X~ != 0) at 0, so a root exists exactly when
L^2 > 1/P.  For finite laws M is piecewise A + B/tau^2 between consecutive
distinct |atoms| and the root is closed-form on its piece; the Gaussian path
bisects the quadrature-backed M, and heavy-tailed laws bisect an empirical M
built from one seeded sample (common random numbers keep it monotone).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .concentration import WeightVector
from .distributions import (
    Dist,
    FiniteDist,
    atom_survival,
    m_functional,
    symmetrize,
)
from .exceptions import PreconditionError
from .lcd import dist_to_lattice


@dataclass(frozen=True)
class BoundShape:
    """One evaluated right-hand side: shape id, its inputs, and the value."""

    id: str
    params: dict
    value: float

    def to_json(self) -> dict:
        return {"id": self.id, "params": self.params, "value": self.value}


# ---------------------------------------------------------------------------
# Classical shapes
# ---------------------------------------------------------------------------


def shape_kolmogorov_rogozin(
    lam: float, lam_k: Sequence[float], q_k: Sequence[float]
) -> float:
    """lambda * (sum lambda_k^2 (1 - Q_k))^(-1/2) for independent summands."""
    lk = np.asarray(lam_k, dtype=float)
    qk = np.asarray(q_k, dtype=float)
    if lk.size == 0 or lk.size != qk.size:
        raise ValueError("lambda_k and Q_k must be nonempty and aligned")
    if np.any(lk <= 0) or np.any(lk > lam * (1 + 1e-12)):
        raise ValueError("each lambda_k must lie in (0, lambda]")
    denom = float(np.dot(lk * lk, 1.0 - qk))
    if denom <= 0.0:
        raise PreconditionError(
            "all component concentrations equal 1: the shape diverges"
        )
    return lam / math.sqrt(denom)


def shape_esseen(lam: float, lam_k: Sequence[float], m_k: Sequence[float]) -> float:
    """lambda * (sum lambda_k^2 M_k(lambda_k))^(-1/2); refines Kolmogorov-Rogozin."""
    lk = np.asarray(lam_k, dtype=float)
    mk = np.asarray(m_k, dtype=float)
    if lk.size == 0 or lk.size != mk.size:
        raise ValueError("lambda_k and M_k must be nonempty and aligned")
    if np.any(lk <= 0) or np.any(lk > lam * (1 + 1e-12)):
        raise ValueError("each lambda_k must lie in (0, lambda]")
    denom = float(np.dot(lk * lk, mk))
    if denom <= 0.0:
        raise PreconditionError("all spread functionals vanish: the shape diverges")
    return lam / math.sqrt(denom)


def shape_vershynin(L: float, D: float) -> float:
    """Baseline comparison shape L/D (constant set to 1)."""
    if not (L > 0 and D > 0):
        raise ValueError("L and D must be positive")
    return L / D


def shape_lcd(D: float, norm_a: float, m_tau: float) -> float:
    """1 / (||a|| D sqrt(M(tau))): LCD-spread bound at window tau/D."""
    if not (D > 0 and norm_a > 0):
        raise ValueError("D and ||a|| must be positive")
    if not 0.0 < m_tau <= 1.0 + 1e-12:
        raise PreconditionError("spread functional must lie in (0, 1]")
    return 1.0 / (norm_a * D * math.sqrt(m_tau))


def shape_lcd_unit(D: float, m1: float) -> float:
    """Unit-norm LCD-spread bound 1 / (D sqrt(M(1)))."""
    return shape_lcd(D, 1.0, m1)


def shape_no_arithmetic(norm_inf: float, norm: float, m_tau: float) -> float:
    """||a||_inf / (||a|| sqrt(M(tau))): window ||a||_inf tau, no structure used."""
    if not (norm_inf > 0 and norm > 0):
        raise ValueError("norms must be positive")
    if not 0.0 < m_tau <= 1.0 + 1e-12:
        raise PreconditionError("spread functional must lie in (0, 1]")
    return norm_inf / (norm * math.sqrt(m_tau))


def shape_bernoulli_min(eps: float, dstar: float, p: float) -> float:
    """min{(eps + 1/D*) / sqrt(p(1-p)), 1}: two-regime Bernoulli envelope."""
    if eps < 0 or not dstar > 0 or not 0 < p < 1:
        raise ValueError("need eps >= 0, dstar > 0, p in (0, 1)")
    return min((eps + 1.0 / dstar) / math.sqrt(p * (1.0 - p)), 1.0)


# ---------------------------------------------------------------------------
# Crossover scale: M(tau0) = 1/L^2
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RootSolution:
    """Solution of M(tau0) = 1/L^2 (and eps0 = tau0/D* when D* is supplied)."""

    tau0: float
    residual: float
    iterations: int
    method: str
    eps0: Optional[float] = None

    def to_json(self) -> dict:
        return {
            "tau0": self.tau0,
            "residual": self.residual,
            "iterations": self.iterations,
            "method": self.method,
            "eps0": self.eps0,
        }


def _piecewise_tau0(u: np.ndarray, w: np.ndarray, m_star: float) -> float:
    """Root of sum_i w_i min(u_i^2/tau^2, 1) = m_star on sorted positive u.

    Between consecutive support points M(tau) = A/tau^2 + B with A the
    within-radius second moment and B the outside mass, so the root is exact
    on its piece.
    """
    a_prefix = np.cumsum(w * u * u)
    b_suffix = np.concatenate((np.cumsum(w[::-1])[::-1][1:], [0.0]))
    knot_m = a_prefix / (u * u) + b_suffix
    # knot_m is nonincreasing; find the piece [u_k, u_{k+1}) containing the root.
    k = int(np.searchsorted(-knot_m, -m_star, side="left"))
    if k == 0:
        raise PreconditionError("target spread above M at the smallest support point")
    idx = k - 1
    while idx < u.size:
        a_i, b_i = a_prefix[idx], b_suffix[idx]
        if m_star > b_i:
            tau = math.sqrt(a_i / (m_star - b_i))
            hi = u[idx + 1] if idx + 1 < u.size else math.inf
            if u[idx] <= tau * (1 + 1e-12) and tau <= hi * (1 + 1e-12):
                return tau
        idx += 1
    raise RuntimeError("piecewise root not bracketed; inconsistent inputs")


def _bisect_tau0(m_of, m_star: float, tol: float) -> tuple[float, int]:
    lo = hi = 1.0
    it = 0
    while m_of(lo) < m_star:
        lo *= 0.5
        it += 1
        if it > 600:
            raise RuntimeError("bracket expansion failed toward 0")
    while m_of(hi) > m_star:
        hi *= 2.0
        it += 1
        if it > 1200:
            raise RuntimeError("bracket expansion failed toward infinity")
    mid = 0.5 * (lo + hi)
    while it < 2000:
        mid = 0.5 * (lo + hi)
        val = m_of(mid)
        it += 1
        if abs(val - m_star) <= tol or (hi - lo) <= 1e-15 * mid:
            break
        if val > m_star:
            lo = mid
        else:
            hi = mid
    return mid, it


def solve_tau0(
    g: Dist,
    L: float,
    tol: Optional[float] = None,
    *,
    dstar: Optional[float] = None,
    n_samples: int = 1_000_000,
    seed: int = 0,
) -> RootSolution:
    """Solve M(tau0) = 1/L^2 for a symmetric law g.

    Requires L^2 > 1/P with P = P(X~ != 0); otherwise no root exists and a
    PreconditionError is raised.  Default residual tolerance is 1e-10 on the
    exact finite path and 1e-6 on quadrature/Monte-Carlo backed paths.
    """
    if not L > 0:
        raise ValueError("L must be positive")
    p_surv = atom_survival(g)
    m_star = 1.0 / (L * L)
    if p_surv <= 0.0 or m_star >= p_surv:
        raise PreconditionError(
            f"L^2 <= 1/P (L^2 = {L * L:.6g}, 1/P = "
            f"{math.inf if p_surv == 0 else 1.0 / p_surv:.6g}): "
            "no crossover scale exists"
        )
    if isinstance(g, FiniteDist):
        tol = 1e-10 if tol is None else tol
        pos = g.atoms > 0
        u = g.atoms[pos]
        w = 2.0 * g.masses[pos]
        tau0 = _piecewise_tau0(u, w, m_star)
        residual = abs(m_functional(g, tau0) - m_star)
        method, iters = "piecewise_exact", 0
    elif g.kind == "gaussian":
        tol = 1e-6 if tol is None else tol
        tau0, iters = _bisect_tau0(lambda t: m_functional(g, t), m_star, tol)
        residual = abs(m_functional(g, tau0) - m_star)
        method = "bisection_quadrature"
    else:
        tol = 1e-6 if tol is None else tol
        draws = np.abs(g.sample(n_samples, np.random.default_rng(seed)))
        draws = np.sort(draws[draws > 0])
        if draws.size == 0:
            raise PreconditionError("sample has no nonzero draws")
        w = np.full(draws.size, 1.0 / n_samples)
        tau0 = _piecewise_tau0(draws, w, m_star)
        clipped = np.minimum((draws / tau0) ** 2, 1.0)
        residual = abs(float(np.sum(w * clipped)) - m_star)
        method, iters = "empirical_sample", 0
    if residual > tol:
        raise RuntimeError(f"crossover residual {residual:g} above tolerance {tol:g}")
    eps0 = tau0 / dstar if dstar is not None else None
    return RootSolution(tau0=tau0, residual=residual, iterations=iters, method=method, eps0=eps0)


def solve_d0(
    g: Dist,
    L: float,
    eps: float,
    tol: Optional[float] = None,
    **kwargs,
) -> float:
    """Solution D0(eps) of L^2 = 1/M(eps D): equals tau0/eps since the
    product eps * D0(eps) is pinned to the crossover scale."""
    if not eps > 0:
        raise ValueError("eps must be positive")
    return solve_tau0(g, L, tol, **kwargs).tau0 / eps


def shape_crossover(
    a: WeightVector,
    g: Dist,
    L: float,
    eps: float,
    dstar: float,
    *,
    root: Optional[RootSolution] = None,
    n_samples: int = 1_000_000,
    seed: int = 0,
) -> BoundShape:
    """Two-regime bound at window eps, optimal at D = D*(a).

    For eps <= eps0 = tau0/D*: 1 / (||a|| D* sqrt(M(eps D*))) (with the
    eps -> 0 limit 1 / (||a|| D* sqrt(P))); for eps >= eps0 the linear
    continuation eps L / (eps0 ||a|| D*).  The branches agree at eps0.
    """
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    if not dstar > 0:
        raise ValueError("dstar must be positive")
    if root is None:
        root = solve_tau0(g, L, n_samples=n_samples, seed=seed)
    eps0 = root.tau0 / dstar
    if eps == 0.0:
        value = 1.0 / (a.norm2 * dstar * math.sqrt(atom_survival(g)))
        branch = "zero"
    elif eps <= eps0:
        m_val = m_functional(g, eps * dstar, n_samples=n_samples, seed=seed)
        value = 1.0 / (a.norm2 * dstar * math.sqrt(m_val))
        branch = "small_eps"
    else:
        value = eps * L / (eps0 * a.norm2 * dstar)
        branch = "large_eps"
    return BoundShape(
        id="crossover",
        params={
            "eps": eps,
            "eps0": eps0,
            "tau0": root.tau0,
            "L": L,
            "dstar": dstar,
            "norm_a": a.norm2,
            "branch": branch,
        },
        value=value,
    )


# ---------------------------------------------------------------------------
# Pointwise gadget inequalities
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GadgetReport:
    """Worst margin of a pointwise inequality over a probe grid.

    margin >= 0 everywhere means the inequality held (up to 1e-12 slack);
    worst_t localizes the tightest or violating point.
    """

    passed: bool
    worst_t: float
    worst_margin: float
    n_points: int


def check_cf_exponential_bound(f: FiniteDist, t_grid: Sequence[float]) -> GadgetReport:
    """|CF(t)| <= exp(-0.5 E(1 - cos(t X~))) at every grid point, exact sums."""
    ts = np.asarray(t_grid, dtype=float)
    g = symmetrize(f)
    cf_abs = np.abs(np.exp(1j * np.outer(ts, f.atoms)) @ f.masses)
    expo = (1.0 - np.cos(np.outer(ts, g.atoms))) @ g.masses
    margins = np.exp(-0.5 * expo) - cf_abs
    k = int(np.argmin(margins))
    return GadgetReport(
        passed=bool(margins[k] >= -1e-12),
        worst_t=float(ts[k]),
        worst_margin=float(margins[k]),
        n_points=int(ts.size),
    )


def smoothing_cf(a: WeightVector, z: float, gamma: float, t) -> float | np.ndarray:
    """CF exp(-gamma/2 sum_k (1 - cos(2 a_k z t))) of the symmetric smoothing law."""
    if not gamma > 0:
        raise ValueError("gamma must be positive")
    ts = np.atleast_1d(np.asarray(t, dtype=float))
    expo = np.sum(1.0 - np.cos(2.0 * z * np.outer(ts, a.coords)), axis=1)
    vals = np.exp(-0.5 * gamma * expo)
    return float(vals[0]) if np.isscalar(t) else vals


def check_smoothing_identities(
    a: WeightVector,
    z: float,
    y: float,
    gamma: float,
    t_grid: Sequence[float],
    rtol: float = 1e-11,
) -> GadgetReport:
    """Scale identity H_{z,gamma}(t) = H_{y,gamma}(z t / y) and power identity
    H_{z,gamma} = H_{z,1}^gamma, checked to floating-point accuracy."""
    ts = np.asarray(t_grid, dtype=float)
    base = smoothing_cf(a, z, gamma, ts)
    rescaled = smoothing_cf(a, y, gamma, z * ts / y)
    powered = smoothing_cf(a, z, 1.0, ts) ** gamma
    err = np.maximum(np.abs(base - rescaled), np.abs(base - powered))
    scale = np.maximum(np.abs(base), 1e-300)
    rel = err / scale
    k = int(np.argmax(rel))
    return GadgetReport(
        passed=bool(rel[k] <= rtol),
        worst_t=float(ts[k]),
        worst_margin=float(-rel[k]),
        n_points=int(ts.size),
    )


def check_smoothing_lattice_bound(
    a: WeightVector, t_grid: Sequence[float]
) -> GadgetReport:
    """H_{pi,1}(t) <= exp(-4 dist(t a, Z^n)^2): cosine-vs-quadratic domination."""
    ts = np.asarray(t_grid, dtype=float)
    h = smoothing_cf(a, math.pi, 1.0, ts)
    bound = np.array([math.exp(-4.0 * dist_to_lattice(t, a) ** 2) for t in ts])
    margins = bound - h
    k = int(np.argmin(margins))
    return GadgetReport(
        passed=bool(margins[k] >= -1e-12),
        worst_t=float(ts[k]),
        worst_margin=float(margins[k]),
        n_points=int(ts.size),
    )


def check_smoothing_gaussian_branch(
    a: WeightVector, t_grid: Sequence[float]
) -> GadgetReport:
    """H_{pi,1}(t) <= exp(-4 t^2 ||a||^2) on |t| <= 1/(2 ||a||_inf), where the
    lattice distance is exactly t ||a||."""
    ts = np.asarray(t_grid, dtype=float)
    ts = ts[np.abs(ts) <= 0.5 / a.norm_inf]
    if ts.size == 0:
        return GadgetReport(passed=True, worst_t=0.0, worst_margin=0.0, n_points=0)
    h = smoothing_cf(a, math.pi, 1.0, ts)
    bound = np.exp(-4.0 * (ts * a.norm2) ** 2)
    margins = bound - h
    k = int(np.argmin(margins))
    return GadgetReport(
        passed=bool(margins[k] >= -1e-12),
        worst_t=float(ts[k]),
        worst_margin=float(margins[k]),
        n_points=int(ts.size),
    )
