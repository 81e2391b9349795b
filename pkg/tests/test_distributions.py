"""Distribution carriers, symmetrization, M(tau), CFs, mixture decomposition."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lofo.distributions import (
    AnalyticDist,
    FiniteDist,
    atom_survival,
    cf_eval,
    m_functional,
    m_functional_with_error,
    mixture_decompose,
    symmetrize,
    weighted_cf,
)


def random_finite(rng, n_atoms=5, span=4.0):
    atoms = np.sort(rng.uniform(-span, span, n_atoms))
    masses = rng.random(n_atoms) + 0.05
    return FiniteDist(atoms, masses / masses.sum())


# ---------------------------------------------------------------------------
# FiniteDist construction
# ---------------------------------------------------------------------------


def test_construction_sorts_and_coalesces():
    d = FiniteDist([1.0, -1.0, 1.0 + 1e-13], [0.25, 0.5, 0.25])
    assert d.n_atoms == 2
    assert d.atoms[0] == -1.0
    assert d.mass_at(1.0) == 0.5


def test_construction_rejects_bad_mass():
    with pytest.raises(ValueError):
        FiniteDist([0.0, 1.0], [0.6, 0.6])
    with pytest.raises(ValueError):
        FiniteDist([0.0, 1.0], [1.2, -0.2])


def test_atoms_strictly_increasing_random():
    rng = np.random.default_rng(7)
    for _ in range(50):
        d = random_finite(rng, n_atoms=12)
        assert np.all(np.diff(d.atoms) > 0)
        assert np.all(d.masses > 0)
        assert abs(d.masses.sum() - 1.0) <= 1e-12


# ---------------------------------------------------------------------------
# Symmetrization
# ---------------------------------------------------------------------------


def test_symmetrize_point_mass():
    g = symmetrize(FiniteDist.point_mass(5.0))
    assert g.n_atoms == 1
    assert g.atoms[0] == 0.0


@pytest.mark.parametrize("p", [0.05, 0.3, 0.5, 0.9])
def test_symmetrize_bernoulli(p):
    g = symmetrize(FiniteDist.bernoulli(p))
    q = p * (1.0 - p)
    assert np.allclose(g.atoms, [-1.0, 0.0, 1.0])
    assert g.mass_at(1.0) == pytest.approx(q, abs=1e-15)
    assert g.mass_at(-1.0) == pytest.approx(q, abs=1e-15)
    assert g.mass_at(0.0) == pytest.approx(1.0 - 2.0 * q, abs=1e-15)


def test_symmetrize_uniform_three_atoms_brute_force():
    f = FiniteDist.uniform_on([0.0, 1.0, 2.0])
    g = symmetrize(f)
    # Independent oracle: enumerate all 9 ordered pairs.
    expected = {}
    for x, px in zip(f.atoms, f.masses):
        for y, py in zip(f.atoms, f.masses):
            expected[x - y] = expected.get(x - y, 0.0) + px * py
    assert g.n_atoms == 5
    for atom, mass in expected.items():
        assert g.mass_at(atom) == pytest.approx(mass, abs=1e-15)


def test_symmetrize_exactly_symmetric_random():
    rng = np.random.default_rng(11)
    for _ in range(60):
        g = symmetrize(random_finite(rng, n_atoms=rng.integers(2, 9)))
        # Bitwise mirror symmetry, not just approximate.
        assert np.all(g.atoms == -g.atoms[::-1])
        assert np.all(g.masses == g.masses[::-1])


def test_symmetrize_analytic_kinds():
    g = symmetrize(AnalyticDist.gaussian(1.5))
    assert g.kind == "gaussian" and g.sigma == pytest.approx(1.5 * math.sqrt(2))
    s = symmetrize(AnalyticDist.stable(1.0, 1.0))
    assert s.kind == "stable" and s.scale == 2.0
    u = symmetrize(AnalyticDist.from_cf(lambda t: np.exp(1j * t - t * t)))
    assert np.allclose(u.cf(np.array([0.7])), np.exp(-2 * 0.49))


# ---------------------------------------------------------------------------
# M(tau)
# ---------------------------------------------------------------------------


def test_m_bernoulli_closed_form_branches():
    g = symmetrize(FiniteDist.bernoulli(0.5))
    assert m_functional(g, 0.5) == pytest.approx(0.5, abs=1e-15)
    assert m_functional(g, 2.0) == pytest.approx(0.125, abs=1e-15)


def test_m_point_mass_zero():
    g = symmetrize(FiniteDist.point_mass(3.0))
    assert m_functional(g, 0.7) == 0.0


def test_m_rejects_asymmetric():
    with pytest.raises(ValueError):
        m_functional(FiniteDist.bernoulli(0.3), 1.0)


def test_m_monotone_and_bounded_random():
    rng = np.random.default_rng(3)
    taus = np.geomspace(0.01, 100.0, 41)
    for _ in range(25):
        g = symmetrize(random_finite(rng))
        p_surv = atom_survival(g)
        vals = [m_functional(g, t) for t in taus]
        assert all(v1 >= v2 - 1e-14 for v1, v2 in zip(vals, vals[1:]))
        assert all(v <= p_surv + 1e-14 for v in vals)
        # tau^2 M(tau) = E min(X~^2, tau^2) is nondecreasing in tau.
        scaled = [t * t * v for t, v in zip(taus, vals)]
        assert all(s1 <= s2 + 1e-12 for s1, s2 in zip(scaled, scaled[1:]))


def test_m_gaussian_quadrature_matches_closed_form():
    # Oracle: E min(Z^2/tau^2, 1) for Z ~ N(0, s^2) in closed form via Phi/phi.
    def oracle(s, tau):
        t = tau / s
        phi = math.exp(-0.5 * t * t) / math.sqrt(2 * math.pi)
        cdf = 0.5 * (1 + math.erf(t / math.sqrt(2)))
        return (s / tau) ** 2 * (2 * cdf - 1 - 2 * t * phi) + 2 * (1 - cdf)

    g = AnalyticDist.gaussian(math.sqrt(2.0))  # symmetrization of sigma = 1
    for tau in [0.05, 0.3, 1.0, 4.0, 25.0]:
        assert m_functional(g, tau) == pytest.approx(oracle(math.sqrt(2), tau), abs=1e-9)


def test_m_stable_monte_carlo_vs_cauchy_closed_form():
    # X~ Cauchy with scale gamma: M(tau) has an elementary closed form.
    gamma = 2.0
    def oracle(tau):
        at = math.atan(tau / gamma)
        return (2 * gamma / (math.pi * tau * tau)) * (tau - gamma * at) + 1 - 2 * at / math.pi

    g = AnalyticDist.stable(1.0, gamma)
    for tau in [0.5, 2.0, 10.0]:
        val, err = m_functional_with_error(g, tau, n_samples=400_000, seed=42)
        assert err > 0
        assert abs(val - oracle(tau)) < 6 * err + 1e-3


def test_m_seeded_reproducible():
    g = AnalyticDist.stable(0.7, 1.0)
    a = m_functional(g, 1.0, n_samples=50_000, seed=5)
    b = m_functional(g, 1.0, n_samples=50_000, seed=5)
    assert a == b


# ---------------------------------------------------------------------------
# atom_survival
# ---------------------------------------------------------------------------


def test_atom_survival_examples():
    assert atom_survival(symmetrize(FiniteDist.bernoulli(0.3))) == pytest.approx(0.42, abs=1e-15)
    assert atom_survival(symmetrize(FiniteDist.point_mass(0.0))) == 0.0
    assert atom_survival(AnalyticDist.gaussian(2.0)) == 1.0


def test_atom_survival_is_m_limit():
    rng = np.random.default_rng(17)
    for _ in range(10):
        g = symmetrize(random_finite(rng))
        assert m_functional(g, 1e-9) == pytest.approx(atom_survival(g), abs=1e-12)


# ---------------------------------------------------------------------------
# Characteristic functions
# ---------------------------------------------------------------------------


def test_cf_point_mass_and_closed_forms():
    assert cf_eval(FiniteDist.point_mass(0.0), 3.7) == pytest.approx(1.0)
    val = cf_eval(FiniteDist.bernoulli(0.5), math.pi)
    assert abs(val) < 1e-12  # (1 + e^{i pi}) / 2
    assert cf_eval(AnalyticDist.stable(2.0, 1.0), 1.0) == pytest.approx(math.exp(-1.0))
    assert cf_eval(AnalyticDist.gaussian(1.0), 2.0) == pytest.approx(math.exp(-2.0))


def test_cf_conjugate_symmetry_and_modulus():
    rng = np.random.default_rng(23)
    ts = rng.uniform(-30, 30, 50)
    for _ in range(20):
        f = random_finite(rng)
        vals_pos = cf_eval(f, ts)
        vals_neg = cf_eval(f, -ts)
        assert np.allclose(vals_neg, np.conj(vals_pos), atol=1e-14)
        assert np.all(np.abs(vals_pos) <= 1.0 + 1e-12)
        g = symmetrize(f)
        assert np.max(np.abs(np.imag(cf_eval(g, ts)))) < 1e-12


def test_weighted_cf_product_structure():
    f = FiniteDist.bernoulli(0.35)
    t = 1.3
    assert weighted_cf(f, [1.0], t) == pytest.approx(cf_eval(f, t))
    n = 6
    assert weighted_cf(f, np.ones(n), t) == pytest.approx(cf_eval(f, t) ** n)
    # Both factors vanish at t = pi * sqrt(2) for weights (1/sqrt2, 1/sqrt2).
    w = np.array([1.0, 1.0]) / math.sqrt(2)
    assert abs(weighted_cf(FiniteDist.bernoulli(0.5), w, math.pi * math.sqrt(2))) < 1e-12


@settings(max_examples=40, deadline=None)
@given(
    p=st.floats(0.01, 0.99),
    t=st.floats(-50, 50, allow_nan=False),
)
def test_cf_exponential_domination(p, t):
    # |CF(t)| <= exp(-0.5 E(1 - cos(t X~))) pointwise, exact sums on both sides.
    f = FiniteDist.bernoulli(p)
    g = symmetrize(f)
    lhs = abs(cf_eval(f, t))
    expo = float(np.dot(g.masses, 1.0 - np.cos(t * g.atoms)))
    assert lhs <= math.exp(-0.5 * expo) + 1e-12


# ---------------------------------------------------------------------------
# Mixture decomposition
# ---------------------------------------------------------------------------


def test_mixture_bernoulli_boundary_annulus():
    g = symmetrize(FiniteDist.bernoulli(0.5))
    mix = mixture_decompose(g, r=math.sqrt(2))
    assert mix.q == pytest.approx(0.5)
    # Atoms at |x| = 1 sit in A_1 = (1/sqrt2, 1]: the closed right end.
    assert mix.p[0] == 0.0
    assert mix.p[1] == pytest.approx(0.5)
    assert mix.beta == pytest.approx(0.25)
    assert mix.m1 == pytest.approx(0.5)
    assert mix.certified  # equality case beta = M(1)/r^2
    assert mix.mu[1] == pytest.approx(1.0)


def test_mixture_point_mass():
    mix = mixture_decompose(symmetrize(FiniteDist.point_mass(2.0)))
    assert mix.q == 1.0
    assert mix.beta == 0.0
    assert mix.p == ()


def test_mixture_five_atom_uniform():
    g = symmetrize(FiniteDist.uniform_on([0.0, 1.0, 2.0]))
    mix = mixture_decompose(g)
    assert mix.certified
    assert mix.beta >= mix.m1 / 2.0 - 1e-12
    assert mix.q + sum(mix.p) == pytest.approx(1.0, abs=1e-12)


def test_mixture_invariants_random_r():
    rng = np.random.default_rng(31)
    for _ in range(40):
        g = symmetrize(random_finite(rng, n_atoms=rng.integers(2, 8)))
        r = float(rng.uniform(1.0001, math.sqrt(2)))
        mix = mixture_decompose(g, r=r)
        assert mix.q + sum(mix.p) == pytest.approx(1.0, abs=1e-12)
        if mix.beta > 0:
            assert sum(mix.mu) == pytest.approx(1.0, abs=1e-12)
        assert mix.beta >= mix.m1 / (r * r) - 1e-12
        assert mix.beta >= mix.m1 / 2.0 - 1e-12
        # Annulus membership recheck, straight from the definition.
        for atom, mass in zip(g.atoms, g.masses):
            if abs(atom) <= 1e-12:
                continue
            lo, hi = None, None
            for (a_lo, a_hi), pj in zip(mix.annuli, mix.p):
                if a_lo < abs(atom) <= a_hi:
                    lo, hi = a_lo, a_hi
            assert lo is not None


def test_mixture_rejects_bad_r():
    g = symmetrize(FiniteDist.bernoulli(0.4))
    with pytest.raises(ValueError):
        mixture_decompose(g, r=1.0)
    with pytest.raises(ValueError):
        mixture_decompose(g, r=1.5)
