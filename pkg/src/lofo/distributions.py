"""Distribution representations and the spread functional M.

Two carriers are supported:

* ``FiniteDist`` -- a finite discrete law (sorted atoms + masses), the
  exact-computation workhorse.  All arithmetic on finite laws (symmetrization,
  convolution) coalesces atoms that floating point splits apart.
* ``AnalyticDist`` -- a law given in closed form through its characteristic
  function (centered Gaussian, symmetric stable, or a user-supplied CF), with
  a seeded sampler for Monte Carlo paths.

On top of these live the symmetrization map X -> X1 - X2, characteristic
function evaluation, the spread functional

    M(tau) = E min(X~^2 / tau^2, 1),

its tau -> 0 limit P = P(X~ != 0), and the annulus mixture decomposition of a
symmetric finite law used by the smoothing argument (q at zero, masses p_j on
annuli A_0 = {|x| > 1}, A_j = (r^-j, r^-(j-1)], and beta = sum r^-2j p_j with
the certified lower bound beta >= M(1)/r^2 >= M(1)/2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence, Union

import numpy as np

from .quadrature import adaptive_simpson

# Atoms closer than this merge during construction.  Exact rational supports
# pushed through float arithmetic must not split their masses.
ATOM_REL_TOL = 1e-9
ATOM_ABS_TOL = 1e-12
MASS_TOL = 1e-12

_SQRT2 = math.sqrt(2.0)


def _coalesce(atoms: np.ndarray, masses: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Merge near-duplicate sorted atoms; masses add, positions mass-average.

    Ungrouped atoms pass through bitwise so exact (e.g. dyadic) supports stay
    exact; only genuinely merged groups are repositioned.
    """
    if atoms.size <= 1:
        return atoms, masses
    gaps = np.diff(atoms)
    scale = np.maximum(np.abs(atoms[1:]), np.abs(atoms[:-1]))
    starts = gaps > np.maximum(ATOM_ABS_TOL, ATOM_REL_TOL * scale)
    if np.all(starts):
        return atoms, masses
    group = np.concatenate(([0], np.cumsum(starts)))
    sizes = np.bincount(group)
    merged_mass = np.bincount(group, weights=masses)
    first_member = np.concatenate(([0], np.cumsum(sizes)[:-1]))
    out_atoms = atoms[first_member]
    multi = sizes > 1
    if np.any(multi):
        merged_first_moment = np.bincount(group, weights=masses * atoms)
        out_atoms = np.where(multi, merged_first_moment / merged_mass, out_atoms)
    return out_atoms, merged_mass


class FiniteDist:
    """Finite discrete probability law with strictly increasing atoms.

    Construction sorts, coalesces near-duplicate atoms, drops zero masses,
    and validates that masses are positive and sum to 1 within 1e-12.
    The arrays are frozen; instances are immutable and shareable.
    """

    __slots__ = ("atoms", "masses")

    def __init__(self, atoms: Sequence[float], masses: Sequence[float]):
        a = np.asarray(atoms, dtype=float).ravel()
        p = np.asarray(masses, dtype=float).ravel()
        if a.size == 0 or a.size != p.size:
            raise ValueError("atoms and masses must be nonempty and aligned")
        if not np.all(np.isfinite(a)):
            raise ValueError("atoms must be finite")
        if np.any(p < -MASS_TOL):
            raise ValueError("masses must be nonnegative")
        # Zero masses (e.g. pmf underflow) carry no information; drop before
        # coalescing so they cannot form empty groups.
        nonzero = p > 0.0
        a, p = a[nonzero], p[nonzero]
        if a.size == 0:
            raise ValueError("distribution has no mass")
        order = np.argsort(a, kind="stable")
        a, p = _coalesce(a[order], p[order])
        total = float(np.sum(p))
        if abs(total - 1.0) > MASS_TOL:
            raise ValueError(f"masses sum to {total!r}, not 1 within {MASS_TOL:g}")
        a.flags.writeable = False
        p.flags.writeable = False
        self.atoms = a
        self.masses = p

    # -- constructors -------------------------------------------------------

    @classmethod
    def point_mass(cls, x: float) -> "FiniteDist":
        return cls([x], [1.0])

    @classmethod
    def bernoulli(cls, p: float) -> "FiniteDist":
        if not 0.0 < p < 1.0:
            raise ValueError("bernoulli parameter must lie in (0, 1)")
        return cls([0.0, 1.0], [1.0 - p, p])

    @classmethod
    def uniform_on(cls, atoms: Sequence[float]) -> "FiniteDist":
        a = np.asarray(atoms, dtype=float)
        return cls(a, np.full(a.size, 1.0 / a.size))

    # -- basic queries -------------------------------------------------------

    @property
    def n_atoms(self) -> int:
        return int(self.atoms.size)

    def mass_at(self, x: float) -> float:
        """Mass of the atom coalescing with x (0.0 if none)."""
        i = int(np.searchsorted(self.atoms, x))
        for j in (i - 1, i):
            if 0 <= j < self.atoms.size:
                ref = max(abs(x), abs(self.atoms[j]))
                if abs(self.atoms[j] - x) <= max(ATOM_ABS_TOL, ATOM_REL_TOL * ref):
                    return float(self.masses[j])
        return 0.0

    def is_symmetric(self, tol: float = MASS_TOL) -> bool:
        """True when mass(x) == mass(-x) for every atom (about 0)."""
        a, p = self.atoms, self.masses
        mirrored = -a[::-1]
        scale = np.maximum(np.abs(a), np.abs(mirrored))
        if np.any(np.abs(a - mirrored) > np.maximum(ATOM_ABS_TOL, ATOM_REL_TOL * scale)):
            return False
        return bool(np.all(np.abs(p - p[::-1]) <= tol))

    def scaled(self, c: float) -> "FiniteDist":
        """Law of c*X."""
        if c == 0.0:
            return FiniteDist.point_mass(0.0)
        return FiniteDist(c * self.atoms, self.masses)

    def __repr__(self) -> str:
        return f"FiniteDist({self.n_atoms} atoms on [{self.atoms[0]:g}, {self.atoms[-1]:g}])"


class AnalyticDist:
    """Law given by a closed-form characteristic function plus a sampler.

    Kinds:
      * ``gaussian``: centered with scale sigma, CF exp(-sigma^2 t^2 / 2);
      * ``stable``: symmetric stable, CF exp(-scale * |t|^alpha), alpha in (0, 2];
      * ``user_cf``: arbitrary evaluable CF, optional sampler.

    At construction the CF is probed on a coarse grid: CF(0) must be 1 and
    |CF| <= 1 everywhere (within 1e-12).
    """

    __slots__ = ("kind", "sigma", "alpha", "scale", "_cf", "_sampler")

    def __init__(self, kind, sigma=None, alpha=None, scale=None, cf=None, sampler=None):
        self.kind = kind
        self.sigma = sigma
        self.alpha = alpha
        self.scale = scale
        self._cf = cf
        self._sampler = sampler
        self._validate()

    @classmethod
    def gaussian(cls, sigma: float) -> "AnalyticDist":
        if not sigma > 0:
            raise ValueError("gaussian scale must be positive")
        return cls("gaussian", sigma=float(sigma))

    @classmethod
    def stable(cls, alpha: float, scale: float = 1.0) -> "AnalyticDist":
        if not 0.0 < alpha <= 2.0:
            raise ValueError("stable exponent must lie in (0, 2]")
        if not scale > 0:
            raise ValueError("stable scale must be positive")
        return cls("stable", alpha=float(alpha), scale=float(scale))

    @classmethod
    def from_cf(
        cls,
        cf: Callable[[np.ndarray], np.ndarray],
        sampler: Callable[[int, np.random.Generator], np.ndarray] | None = None,
    ) -> "AnalyticDist":
        return cls("user_cf", cf=cf, sampler=sampler)

    def _validate(self) -> None:
        probe = np.linspace(-8.0, 8.0, 33)
        vals = self.cf(probe)
        if abs(complex(self.cf(np.array([0.0]))[0]) - 1.0) > 1e-12:
            raise ValueError("characteristic function must equal 1 at t = 0")
        if np.any(np.abs(vals) > 1.0 + 1e-12):
            raise ValueError("characteristic function exceeds modulus 1 on probe grid")

    def cf(self, t: np.ndarray) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        if self.kind == "gaussian":
            return np.exp(-0.5 * (self.sigma * t) ** 2) + 0.0j
        if self.kind == "stable":
            return np.exp(-self.scale * np.abs(t) ** self.alpha) + 0.0j
        return np.asarray(self._cf(t), dtype=complex)

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        if self.kind == "gaussian":
            return rng.normal(0.0, self.sigma, n)
        if self.kind == "stable":
            return sample_symmetric_stable(self.alpha, self.scale, n, rng)
        if self._sampler is None:
            raise ValueError("user_cf distribution has no sampler")
        return np.asarray(self._sampler(n, rng), dtype=float)

    def __repr__(self) -> str:
        if self.kind == "gaussian":
            return f"AnalyticDist.gaussian(sigma={self.sigma:g})"
        if self.kind == "stable":
            return f"AnalyticDist.stable(alpha={self.alpha:g}, scale={self.scale:g})"
        return "AnalyticDist.user_cf(...)"


Dist = Union[FiniteDist, AnalyticDist]


def sample_symmetric_stable(
    alpha: float, scale: float, n: int, rng: np.random.Generator
) -> np.ndarray:
    """Draw n variates with CF exp(-scale * |t|^alpha) (Chambers-Mallows-Stuck)."""
    u = math.pi * (rng.random(n) - 0.5)
    w = rng.exponential(1.0, n)
    if alpha == 1.0:
        z = np.tan(u)
    else:
        z = (
            np.sin(alpha * u)
            / np.cos(u) ** (1.0 / alpha)
            * (np.cos((1.0 - alpha) * u) / w) ** ((1.0 - alpha) / alpha)
        )
    return scale ** (1.0 / alpha) * z


# ---------------------------------------------------------------------------
# Symmetrization
# ---------------------------------------------------------------------------


def symmetrize(dist: Dist) -> Dist:
    """Law of X~ = X1 - X2 for independent copies X1, X2 ~ dist.

    For a finite law the result is built on the nonnegative half and mirrored,
    so mass(x) == mass(-x) holds bitwise.  For analytic laws: a Gaussian with
    scale sigma maps to scale sigma*sqrt(2); a stable law keeps alpha and
    doubles the scale; a user CF maps to |CF|^2 with a difference sampler.
    """
    if isinstance(dist, AnalyticDist):
        if dist.kind == "gaussian":
            return AnalyticDist.gaussian(dist.sigma * _SQRT2)
        if dist.kind == "stable":
            return AnalyticDist.stable(dist.alpha, 2.0 * dist.scale)
        base_cf = dist._cf
        base_sampler = dist._sampler
        sym_sampler = None
        if base_sampler is not None:
            def sym_sampler(n, rng, _s=base_sampler):
                return np.asarray(_s(n, rng), dtype=float) - np.asarray(
                    _s(n, rng), dtype=float
                )
        return AnalyticDist.from_cf(
            lambda t, _f=base_cf: np.abs(np.asarray(_f(t), dtype=complex)) ** 2 + 0.0j,
            sampler=sym_sampler,
        )

    x, p = dist.atoms, dist.masses
    mass_zero = float(np.dot(p, p))
    if x.size == 1:
        return FiniteDist.point_mass(0.0)
    i, j = np.tril_indices(x.size, k=-1)
    diffs = x[i] - x[j]          # strictly positive: atoms sorted, i > j
    weights = p[i] * p[j]
    order = np.argsort(diffs, kind="stable")
    d, w = _coalesce(diffs[order], weights[order])
    # A positive difference below the absolute tolerance belongs to the zero atom.
    near_zero = d <= ATOM_ABS_TOL
    if np.any(near_zero):
        mass_zero += 2.0 * float(np.sum(w[near_zero]))
        d, w = d[~near_zero], w[~near_zero]
    atoms = np.concatenate((-d[::-1], [0.0], d))
    masses = np.concatenate((w[::-1], [mass_zero], w))
    return FiniteDist(atoms, masses)


# ---------------------------------------------------------------------------
# Characteristic functions
# ---------------------------------------------------------------------------


def cf_eval(dist: Dist, t) -> complex | np.ndarray:
    """Characteristic function E exp(itX); vectorized over t.

    Exact finite sum for FiniteDist, closed form for the analytic kinds.
    Raises if a user CF returns modulus above 1 + 1e-12.
    """
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    if isinstance(dist, FiniteDist):
        vals = np.exp(1j * np.outer(t_arr, dist.atoms)) @ dist.masses
    else:
        vals = dist.cf(t_arr)
    if np.any(np.abs(vals) > 1.0 + 1e-12):
        raise ValueError("characteristic function exceeds modulus 1")
    return complex(vals[0]) if np.isscalar(t) or np.asarray(t).ndim == 0 else vals


def weighted_cf(dist: Dist, coords, t) -> complex | np.ndarray:
    """CF of sum_k a_k X_k for i.i.d. X_k ~ dist: prod_k CF(a_k t).

    ``coords`` may be a weight vector object (anything with .coords) or a
    plain sequence.  Vectorized over t.
    """
    a = np.asarray(getattr(coords, "coords", coords), dtype=float).ravel()
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    # (n_t, n_coords) grid of scaled arguments; product over coordinates.
    args = np.outer(t_arr, a)
    if isinstance(dist, FiniteDist):
        flat = np.exp(1j * np.multiply.outer(args, dist.atoms)) @ dist.masses
    else:
        flat = dist.cf(args.ravel()).reshape(args.shape)
    vals = np.prod(flat, axis=-1)
    return complex(vals[0]) if np.isscalar(t) or np.asarray(t).ndim == 0 else vals


# ---------------------------------------------------------------------------
# The spread functional M(tau) and its tau -> 0 limit
# ---------------------------------------------------------------------------


def _require_symmetric(g: Dist) -> None:
    if isinstance(g, FiniteDist):
        if not g.is_symmetric():
            raise ValueError("expected a symmetric (symmetrized) distribution")
    elif g.kind == "user_cf":
        probe = np.linspace(0.0, 5.0, 11)
        if np.any(np.abs(np.imag(g.cf(probe))) > 1e-9):
            raise ValueError("user CF is not real: law is not symmetric")


def m_functional(
    g: Dist,
    tau: float,
    *,
    n_samples: int = 1_000_000,
    seed: int = 0,
) -> float:
    """Spread functional M(tau) = E min(X~^2/tau^2, 1) of a symmetric law g.

    Exact sum for finite laws; adaptive quadrature against the density for
    Gaussian laws (absolute tolerance 1e-10); seeded Monte Carlo for stable
    and user-CF laws.  Nonincreasing in tau, with M(tau) <= P(X~ != 0).
    """
    value, _ = m_functional_with_error(g, tau, n_samples=n_samples, seed=seed)
    return value


def m_functional_with_error(
    g: Dist,
    tau: float,
    *,
    n_samples: int = 1_000_000,
    seed: int = 0,
) -> tuple[float, float]:
    """Like m_functional, also returning the Monte Carlo standard error
    (0.0 on the exact and quadrature paths)."""
    if not tau > 0:
        raise ValueError("tau must be positive")
    _require_symmetric(g)
    if isinstance(g, FiniteDist):
        ratio = g.atoms / tau
        return float(np.dot(g.masses, np.minimum(ratio * ratio, 1.0))), 0.0
    if g.kind == "gaussian":
        return _m_gaussian(g.sigma, tau), 0.0
    draws = g.sample(n_samples, np.random.default_rng(seed))
    clipped = np.minimum((draws / tau) ** 2, 1.0)
    value = float(np.mean(clipped))
    stderr = float(np.std(clipped) / math.sqrt(n_samples))
    return value, stderr


def _m_gaussian(sigma: float, tau: float) -> float:
    """M(tau) for a centered Gaussian with scale sigma (the symmetric law itself)."""
    density = lambda x: math.exp(-0.5 * (x / sigma) ** 2) / (sigma * math.sqrt(2.0 * math.pi))
    # Truncated second moment by quadrature in panels no wider than 2 sigma
    # (an adaptive pass over one wide interval would miss the localized
    # density), tail mass exactly via erfc.  Mass beyond 12 sigma contributes
    # below e^-36 relative and is dropped.
    cut = min(tau, 12.0 * sigma)
    edges = np.linspace(0.0, cut, max(2, int(math.ceil(cut / (2.0 * sigma))) + 1))
    panel_tol = 0.5e-10 * tau * tau / (edges.size - 1)
    body = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        body += adaptive_simpson(lambda x: (x * x) * density(x), lo, hi, tol=panel_tol)
    body *= 2.0 / (tau * tau)
    tail = math.erfc(tau / (sigma * _SQRT2))
    return body + tail


def atom_survival(g: Dist) -> float:
    """P = P(X~ != 0), the tau -> 0 limit of M(tau).

    1 - (mass at 0) for finite laws; 1.0 for the continuous analytic kinds.
    """
    if isinstance(g, FiniteDist):
        return 1.0 - g.mass_at(0.0)
    return 1.0


# ---------------------------------------------------------------------------
# Annulus mixture decomposition of a symmetric finite law
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MixtureDecomposition:
    """Mixture of a symmetric finite law over the zero atom and annuli.

    q is the mass at 0; p[j] is the mass of annulus A_j where A_0 = {|x| > 1}
    and A_j = (r^-j, r^-(j-1)] for j >= 1; beta_j = r^(-2j) p_j; beta is their
    sum and mu_j = beta_j / beta.  ``beta_bound`` is M(1)/r^2, which beta is
    certified to dominate (hence beta >= M(1)/2 for r <= sqrt(2)).
    """

    r: float
    q: float
    p: tuple[float, ...]
    annuli: tuple[tuple[float, float], ...]
    beta_j: tuple[float, ...]
    beta: float
    mu: tuple[float, ...]
    m1: float
    beta_bound: float
    certified: bool


def mixture_decompose(g: FiniteDist, r: float = _SQRT2) -> MixtureDecomposition:
    """Decompose a symmetric finite law into zero mass plus annulus masses.

    Annuli stop at the smallest nonzero |atom|; all deeper annuli are empty.
    The returned certificate checks beta >= M(1)/r^2 (within 1e-12).
    """
    if not 1.0 < r <= _SQRT2:
        raise ValueError("annulus ratio r must lie in (1, sqrt(2)]")
    if not isinstance(g, FiniteDist) or not g.is_symmetric():
        raise ValueError("mixture decomposition needs a symmetric finite law")
    q = g.mass_at(0.0)
    abs_atoms = np.abs(g.atoms)
    nonzero = abs_atoms > ATOM_ABS_TOL
    if not np.any(nonzero):
        return MixtureDecomposition(
            r=r, q=q, p=(), annuli=(), beta_j=(), beta=0.0, mu=(),
            m1=0.0, beta_bound=0.0, certified=True,
        )
    u = abs_atoms[nonzero]
    w = g.masses[nonzero]
    log_r = math.log(r)
    idx = np.zeros(u.size, dtype=int)
    inner = u <= 1.0
    idx[inner] = np.floor(-np.log(u[inner]) / log_r).astype(int) + 1
    # Boundary fixups: enforce r^-j < |x| <= r^-(j-1) under float log error.
    for k in np.nonzero(inner)[0]:
        j = idx[k]
        while j > 1 and u[k] > r ** (-(j - 1)):
            j -= 1
        while u[k] <= r ** (-j):
            j += 1
        idx[k] = j
    n_annuli = int(idx.max()) + 1
    p = np.zeros(n_annuli)
    np.add.at(p, idx, w)
    j_arr = np.arange(n_annuli)
    beta_j = r ** (-2.0 * j_arr) * p
    beta = float(np.sum(beta_j))
    mu = beta_j / beta if beta > 0 else np.zeros_like(beta_j)
    annuli = [(1.0, math.inf)] + [
        (r ** (-j), r ** (-(j - 1))) for j in range(1, n_annuli)
    ]
    m1 = m_functional(g, 1.0)
    bound = m1 / (r * r)
    return MixtureDecomposition(
        r=r,
        q=q,
        p=tuple(float(v) for v in p),
        annuli=tuple(annuli),
        beta_j=tuple(float(v) for v in beta_j),
        beta=beta,
        mu=tuple(float(v) for v in mu),
        m1=m1,
        beta_bound=bound,
        certified=beta >= bound - 1e-12,
    )
