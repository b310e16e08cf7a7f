import math

import numpy as np
import pytest
import sympy as sp

from conftest import mesh, profile
from glvortex.energy import (
    SectorPerturbation,
    bump,
    compute_c_N,
    energy_first_variation,
    energy_gap,
    hardy_integral,
    make_perturbation,
    quad_form_F,
    quartic_remainder,
    radial_energy,
    random_coefficient,
    sector_eigenvalue,
    step1_linear_term,
    verify_step2_identity,
    zonal_harmonic,
)
from glvortex.exceptions import InputError
from glvortex.radial import ball_volume, sphere_area

E_7_05 = 16.888434364359107
GAP_SA3 = 2.7157149974472765
F_SA3 = 5.416746317443692


def test_c_N_formula():
    assert [compute_c_N(N) for N in (2, 3, 6, 7, 8, 10)] == [-1.0, -1.75, -1.0, 0.25, 2.0, 7.0]
    assert sector_eigenvalue(2, 7) == 14
    with pytest.raises(InputError):
        compute_c_N(1)


def test_c_N_sign_change_symbolic():
    N = sp.symbols("N", positive=True)
    roots = sp.solve(sp.Eq((N - 2) ** 2 / 4 - (N - 1), 0), N)
    assert sorted(float(x) for x in roots) == pytest.approx([4 - 2 * math.sqrt(2), 4 + 2 * math.sqrt(2)])
    # the larger root lies in (6, 7): first positive integer dimension is 7
    assert 6 < float(max(roots)) < 7


@pytest.mark.parametrize("N", [3, 7])
def test_harmonic_energy(N):
    prof = profile(N, math.inf)
    assert radial_energy(prof) == pytest.approx(N / 2 * ball_volume(N), rel=1e-13)


def test_harmonic_energy_closed_forms():
    assert radial_energy(profile(3, math.inf)) == pytest.approx(2 * math.pi, rel=1e-13)
    assert radial_energy(profile(7, math.inf)) == pytest.approx(8 * math.pi**3 / 15, rel=1e-13)


def test_frozen_energy(prof7):
    assert radial_energy(prof7) == pytest.approx(E_7_05, rel=1e-12)
    from glvortex.energy import _energy_of

    # the minimizer beats the competitor f = r, whose energy adds a potential term
    trial = _energy_of(prof7.mesh, 7, prof7.inv_eps2, prof7.potential, prof7.mesh.nodes)
    assert 8 * math.pi**3 / 15 < radial_energy(prof7) < trial


def test_F_closed_form_N3():
    # F(sin(pi r)) at eps = inf, ell = 0: 4 pi int pi^2 cos^2(pi r) r^2 dr
    prof = profile(3, math.inf)
    a = np.sin(math.pi * prof.mesh.nodes)
    a[-1] = 0.0
    F = quad_form_F(prof, SectorPerturbation(prof.mesh, a, 0))
    assert F == pytest.approx(4 * math.pi * (math.pi**2 / 6 + 0.25), rel=1e-5)


def test_F_quadratic_scaling(prof7):
    v = make_perturbation(prof7.mesh, "Scalar", 5, 7, ell=2)
    F = quad_form_F(prof7, v)
    for s in (0.1, 3.0, -2.0):
        assert quad_form_F(prof7, v.scaled(s)) == pytest.approx(s * s * F, rel=1e-13)


def test_F_component_independence_and_sum(prof7):
    m = prof7.mesh
    a = random_coefficient(m, 0, 1)
    b = random_coefficient(m, 0, 2)
    va = SectorPerturbation(m, a, 0, "OrthogonalComponent", M=9, component=8)
    vb = SectorPerturbation(m, b, 0, "OrthogonalComponent", M=9, component=9)
    vb8 = SectorPerturbation(m, b, 0, "OrthogonalComponent", M=9, component=8)
    assert quad_form_F(prof7, vb) == quad_form_F(prof7, vb8)
    assert quad_form_F(prof7, [va, vb]) == pytest.approx(quad_form_F(prof7, va) + quad_form_F(prof7, vb), rel=1e-14)
    with pytest.raises(InputError):
        quad_form_F(prof7, [va, vb8])


def test_F_polarization_is_bilinear(prof7):
    m = prof7.mesh
    a, b = random_coefficient(m, 2, 7), random_coefficient(m, 2, 8)
    Fab = quad_form_F(prof7, SectorPerturbation(m, a + b, 2))
    Fa = quad_form_F(prof7, SectorPerturbation(m, a, 2))
    Fb = quad_form_F(prof7, SectorPerturbation(m, b, 2))
    Famb = quad_form_F(prof7, SectorPerturbation(m, a - b, 2))
    assert Fab + Famb == pytest.approx(2 * (Fa + Fb), rel=1e-12)


def test_perturbation_validation(mesh2000):
    a = random_coefficient(mesh2000, 1, 0)
    with pytest.raises(InputError):
        SectorPerturbation(mesh2000, a, 0, "RadialAligned")
    with pytest.raises(InputError):
        SectorPerturbation(mesh2000, a, 1, "OrthogonalComponent")
    bad = a.copy()
    bad[-1] = 1.0
    with pytest.raises(InputError):
        SectorPerturbation(mesh2000, bad, 1)
    bad = a.copy()
    bad[0] = 1.0
    with pytest.raises(InputError):
        SectorPerturbation(mesh2000, bad, 1)
    with pytest.raises(InputError):
        SectorPerturbation(mesh2000, a, 1, "Nope")
    with pytest.raises(InputError):
        SectorPerturbation(mesh2000, a[:-1], 1)
    v = SectorPerturbation(mesh2000, a, 1, "SingleAngle", M=7, component=7)
    with pytest.raises(InputError):
        energy_gap(profile(7, 0.5), v)


def test_mesh_mismatch(prof7):
    other = mesh(1000)
    with pytest.raises(InputError):
        quad_form_F(prof7, SectorPerturbation(other, random_coefficient(other, 1, 0), 1))


def test_zonal_harmonics_orthonormal():
    from glvortex.energy import _normalized_harmonic

    for N in (3, 7):
        _, w, Y1 = _normalized_harmonic(1, N)
        _, _, Y2 = _normalized_harmonic(2, N)
        S = sphere_area(N)
        assert np.sum(w * Y1 * Y1) / S == pytest.approx(1.0, rel=1e-13)
        assert abs(np.sum(w * Y1 * Y2)) / S < 1e-13
        assert abs(np.sum(w * Y1)) / S < 1e-13
    assert zonal_harmonic(3, 2, 0.4) == pytest.approx(math.cos(1.2))


def test_first_variation_matches_finite_difference(prof7):
    from glvortex.energy import _energy_of

    m = prof7.mesh
    a = random_coefficient(m, 1, 11)
    f = np.asarray(prof7.f)

    def E(t):
        return _energy_of(m, 7, prof7.inv_eps2, prof7.potential, f + t * a)

    h = 1e-4
    fd = (E(h) - E(-h)) / (2 * h)
    # fd is O(h^2) accurate; the exact derivative at a critical point is tiny
    assert abs(fd - energy_first_variation(prof7, a)) < 1e-6


def test_profile_is_discrete_critical_point(prof7):
    for seed in range(5):
        a = random_coefficient(prof7.mesh, 1, seed)
        dE = energy_first_variation(prof7, a)
        assert dE == pytest.approx(step1_linear_term(prof7, a), abs=1e-12)
        assert abs(dE) < 1e-8


def test_gap_expansion_symbolic():
    # W(t) = t^2/2: W(t0 - a^2) - W(t0) = -t0 a^2 + a^4/2 exactly
    t0, a, k = sp.symbols("t0 a k")
    W = lambda t: t**2 / 2
    zeroth_gap = sp.expand(k / 2 * (W(t0 - a**2) - W(t0)))
    half_F = sp.expand(-k / 2 * sp.diff(W(sp.Symbol("t")), sp.Symbol("t")).subs(sp.Symbol("t"), t0) * a**2)
    assert sp.simplify(zeroth_gap - half_F - k * a**4 / 4) == 0


@pytest.mark.parametrize("N", [7, 8])
@pytest.mark.parametrize("eps", [0.3, 1.0])
def test_quadratic_exactness(N, eps):
    prof = profile(N, eps)
    for seed in range(5):
        v = make_perturbation(prof.mesh, "OrthogonalComponent", seed, N)
        rep = energy_gap(prof, v)
        rhs = 0.5 * rep.F_value + quartic_remainder(prof, v.a)
        assert abs(rep.gap - rhs) <= 1e-9 * max(abs(rep.gap), 1e-300)


def test_frozen_single_angle_gap(prof7):
    rep = energy_gap(prof7, make_perturbation(prof7.mesh, "SingleAngle", 3, 7))
    assert rep.gap == pytest.approx(GAP_SA3, rel=1e-11)
    assert rep.F_value == pytest.approx(F_SA3, rel=1e-11)
    assert rep.E_perturbed == pytest.approx(rep.E_base + rep.gap, rel=1e-15)
    assert rep.as_dict()["family"] == "SingleAngle"


def test_gap_inf_eps_orthogonal_is_half_F(prof7_inf):
    # without a potential the orthogonal gap is exactly the Dirichlet half
    v = make_perturbation(prof7_inf.mesh, "OrthogonalComponent", 4, 7)
    rep = energy_gap(prof7_inf, v)
    assert rep.gap == pytest.approx(0.5 * rep.F_value, rel=1e-12)


@pytest.mark.parametrize("pot", ["quadratic", "huber:0.1"])
@pytest.mark.parametrize("family", ["RadialAligned", "OrthogonalComponent", "SingleAngle"])
def test_step1_gap_dominates_half_F(pot, family):
    prof = profile(7, 0.3, pot)
    for seed in range(10):
        rep = energy_gap(prof, make_perturbation(prof.mesh, family, seed, 7))
        assert rep.slack_step1 >= -1e-7 * (1 + abs(rep.gap))


@pytest.mark.parametrize("N", [7, 8])
def test_step2_identity(N):
    prof = profile(N, 0.3)
    for seed in range(20):
        ell = seed % 4
        w = SectorPerturbation(prof.mesh, random_coefficient(prof.mesh, ell, seed), ell)
        assert verify_step2_identity(prof, w) <= 1e-8


def test_step2_requires_support(prof7):
    a = np.cos(prof7.mesh.nodes)
    a[-1] = 0.0
    with pytest.raises(InputError):
        verify_step2_identity(prof7, SectorPerturbation(prof7.mesh, a, 0))


def test_step2_fails_for_non_solution(prof7):
    from glvortex.radial import RadialProfile

    fake = RadialProfile(prof7.mesh, prof7.mesh.nodes ** 2, 7, 0.5, prof7.potential, residual_sup=math.nan)
    w = SectorPerturbation(prof7.mesh, random_coefficient(prof7.mesh, 1, 0), 1)
    assert verify_step2_identity(fake, w) > 1e-4


def test_step4_hardy_bound_holds(prof7):
    for seed in range(10):
        rep = energy_gap(prof7, make_perturbation(prof7.mesh, "OrthogonalComponent", seed, 7))
        assert rep.slack_step4 >= 0
        assert rep.hardy_integral > 0


def test_hardy_integral_of_bump(mesh2000):
    b = bump(mesh2000, 0.3, 0.6)
    assert b.max() == pytest.approx(1.0, abs=1e-5)
    assert np.all(b[(mesh2000.nodes <= 0.3) | (mesh2000.nodes >= 0.6)] == 0)
    # away from the origin the Hardy weights reduce to m / r^2
    r = mesh2000.nodes
    from glvortex.radial import node_weights

    ref = sphere_area(7) * np.sum(node_weights(mesh2000, 7)[1:] * b[1:] ** 2 / r[1:] ** 2)
    assert hardy_integral(mesh2000, 7, b) == pytest.approx(ref, rel=1e-5)


def test_step2_identity_harmonic_bump(prof7_inf):
    w = SectorPerturbation(prof7_inf.mesh, bump(prof7_inf.mesh), 1)
    assert verify_step2_identity(prof7_inf, w) <= 1e-10
