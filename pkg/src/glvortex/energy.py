"""Energies, the quadratic form F_eps and structured perturbation families.

All integrals over the ball carry the |S^(N-1)| factor.  Gradient terms use
the cell weights and zeroth-order terms the node weights of
:mod:`glvortex.radial`, so the discrete energy is exactly the functional
whose Euler-Lagrange system the profile solver satisfies.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.special import eval_gegenbauer

from .exceptions import InputError, NumericError
from .potential import eval_dW, eval_W
from .radial import RadialMesh, RadialProfile, cell_weights, hardy_weights, node_weights, residual_vector, sphere_area

__all__ = [
    "FAMILIES",
    "SectorPerturbation",
    "EnergyReport",
    "compute_c_N",
    "sector_eigenvalue",
    "random_coefficient",
    "bump",
    "make_perturbation",
    "radial_energy",
    "energy_first_variation",
    "quad_form_F",
    "hardy_integral",
    "energy_gap",
    "verify_step2_identity",
    "step1_linear_term",
    "quartic_remainder",
    "zonal_harmonic",
]

FAMILIES = ("RadialAligned", "OrthogonalComponent", "SingleAngle", "Scalar")
ANGLE_NODES = 64


def compute_c_N(N: int) -> float:
    """(N-2)^2/4 - (N-1): the Hardy constant minus the degree-one weight."""
    if N < 2:
        raise InputError("compute_c_N needs N >= 2")
    return (N - 2) ** 2 / 4 - (N - 1)


def sector_eigenvalue(ell: int, N: int) -> int:
    """Laplace-Beltrami eigenvalue ell (ell + N - 2) on S^(N-1)."""
    return ell * (ell + N - 2)


@dataclass(eq=False)
class SectorPerturbation:
    """Perturbation v encoded by an angular index and a radial coefficient a(r).

    Families
    --------
    RadialAligned
        v = a(r) x/|x|, parallel to the vortex (ell = 1).
    OrthogonalComponent
        v = a(r) e_M with M > N, pointwise orthogonal to the vortex (ell = 0).
    SingleAngle
        v = a(r) Y_ell(theta_1) e_M with a zonal harmonic Y_ell.
    Scalar
        a generic scalar sector function a(r) Y_ell; used by the identity
        checks, which never need the target geometry.
    """

    mesh: RadialMesh
    a: np.ndarray = field(repr=False)
    ell: int = 0
    family: str = "Scalar"
    M: int | None = None
    component: int | None = None
    seed: int | None = None

    def __post_init__(self):
        self.a = np.asarray(self.a, dtype=float)
        if self.family not in FAMILIES:
            raise InputError(f"unknown perturbation family {self.family!r}")
        if self.a.shape != self.mesh.nodes.shape:
            raise InputError("radial coefficient does not match the mesh")
        if self.ell < 0:
            raise InputError("angular index must be >= 0")
        if self.family == "RadialAligned" and self.ell != 1:
            raise InputError("RadialAligned perturbations live in the ell = 1 sector")
        if self.family == "OrthogonalComponent" and self.ell != 0:
            raise InputError("OrthogonalComponent perturbations live in the ell = 0 sector")
        if self.a[-1] != 0.0:
            raise InputError("perturbation must vanish at r = 1")
        if self.ell >= 1 and self.a[0] != 0.0:
            raise InputError("sector ell >= 1 needs a(0) = 0")
        if not np.all(np.isfinite(self.a)):
            raise NumericError("non-finite perturbation samples")
        if self.component is not None and self.M is not None and not 1 <= self.component <= self.M:
            raise InputError("component index outside [1, M]")

    def scaled(self, s: float) -> "SectorPerturbation":
        return SectorPerturbation(
            self.mesh, s * self.a, self.ell, self.family, self.M, self.component, self.seed
        )

    def check_target(self, N: int):
        if self.family in ("OrthogonalComponent", "SingleAngle"):
            if self.M is None or self.M <= N:
                raise InputError(f"{self.family} perturbations need M > N (got M={self.M}, N={N})")


@dataclass
class EnergyReport:
    """Energies and the two inequality slacks for one perturbation."""

    family: str
    ell: int
    seed: int | None
    E_base: float
    E_perturbed: float
    gap: float
    F_value: float
    hardy_integral: float
    c_N: float
    slack_step1: float
    slack_step4: float

    def as_dict(self) -> dict:
        return asdict(self)


def random_coefficient(mesh: RadialMesh, ell: int, seed: int, degree: int = 6, scale: float = 1.0):
    """(1-r) r^max(ell,1) p(r) with p of the given degree and U[-1,1] coefficients."""
    rng = np.random.default_rng(seed)
    coef = rng.uniform(-1.0, 1.0, size=degree + 1)
    r = mesh.nodes
    a = scale * (1.0 - r) * r ** max(ell, 1) * np.polynomial.polynomial.polyval(r, coef)
    a[-1] = 0.0
    return a


def bump(mesh: RadialMesh, lo: float = 0.2, hi: float = 0.8):
    """Smooth bump exp(1 - 1/(1 - x^2)) supported in (lo, hi), peak 1."""
    r = mesh.nodes
    x = (2.0 * r - lo - hi) / (hi - lo)
    out = np.zeros_like(r)
    inside = np.abs(x) < 1.0
    out[inside] = np.exp(1.0 - 1.0 / (1.0 - x[inside] ** 2))
    return out


def make_perturbation(mesh, family, seed, N, ell=None, M=None, scale=1.0) -> SectorPerturbation:
    """Seeded random perturbation of a given family for batch checks."""
    if family == "RadialAligned":
        ell = 1
    elif family == "OrthogonalComponent":
        ell = 0
    elif ell is None:
        ell = 1 + seed % 3
    M = M if M is not None else N + 1
    comp = None if family == "RadialAligned" else M
    a = random_coefficient(mesh, ell, seed, scale=scale)
    return SectorPerturbation(mesh, a, ell, family, M=M, component=comp, seed=seed)


def _require_mesh(prof: RadialProfile, v: SectorPerturbation):
    if not prof.mesh.same_as(v.mesh):
        raise InputError("perturbation mesh does not match the profile mesh")


def _over_r2(values, r):
    """values / r**2 with the r = 0 entry set to zero (its weight vanishes)."""
    out = np.zeros_like(values)
    out[1:] = values[1:] / (r[1:] * r[1:])
    return out


def _gradient_sum(mesh, N, a, b=None):
    w = cell_weights(mesh, N)
    da = np.diff(a)
    db = da if b is None else np.diff(b)
    return float(np.sum(w * da * db / mesh.h))


def _energy_of(mesh, N, inv_eps2, potential, f):
    """Discrete E_eps of the vortex-aligned map f(r) x/|x|."""
    m = node_weights(mesh, N)
    r = mesh.nodes
    zeroth = 0.5 * (N - 1) * _over_r2(f * f, r)
    if inv_eps2:
        zeroth = zeroth + 0.5 * inv_eps2 * eval_W(potential, 1.0 - f * f)
    return sphere_area(N) * (0.5 * _gradient_sum(mesh, N, f) + float(np.sum(m * zeroth)))


def radial_energy(prof: RadialProfile) -> float:
    """E_eps(u_eps) for u_eps = f(|x|) x/|x|.

    Equal to N/2 vol(B^N) exactly (up to rounding) for f = r, eps = inf.
    """
    E = _energy_of(prof.mesh, prof.N, prof.inv_eps2, prof.potential, np.asarray(prof.f))
    if not math.isfinite(E):
        raise NumericError("non-finite energy")
    return E


def energy_first_variation(prof: RadialProfile, a) -> float:
    """d/dt E_eps((f + t a) x/|x|) at t = 0."""
    a = np.asarray(a, dtype=float)
    mesh, N, f = prof.mesh, prof.N, np.asarray(prof.f)
    m = node_weights(mesh, N)
    zeroth = (N - 1) * _over_r2(f * a, mesh.nodes)
    if prof.inv_eps2:
        zeroth = zeroth - prof.inv_eps2 * f * a * eval_dW(prof.potential, 1.0 - f * f)
    return sphere_area(N) * (_gradient_sum(mesh, N, f, a) + float(np.sum(m * zeroth)))


def _sector_potential(prof: RadialProfile, ell: int) -> np.ndarray:
    r = prof.mesh.nodes
    f = np.asarray(prof.f)
    lam = sector_eigenvalue(ell, prof.N)
    c = np.zeros_like(r)
    c[1:] = lam / (r[1:] * r[1:])
    if prof.inv_eps2:
        c = c - prof.inv_eps2 * eval_dW(prof.potential, 1.0 - f * f)
    return c


def quad_form_F(prof: RadialProfile, v) -> float:
    """F_eps(v) = int |grad v|^2 - W'(1 - f^2) |v|^2 / eps^2 dx.

    This is twice the quadratic integral that bounds the excess energy from
    below.  Only the sector index and radial coefficient of ``v`` enter, so
    the value is the same for every target component.  A sequence of
    perturbations in distinct components is a multi-component v; the
    operator acts diagonally, so its form is the sum over components.
    """
    if isinstance(v, (list, tuple)):
        comps = [p.component for p in v]
        if None in comps or len(set(comps)) != len(comps):
            raise InputError("multi-component v needs distinct component indices")
        return float(sum(quad_form_F(prof, p) for p in v))
    _require_mesh(prof, v)
    m = node_weights(prof.mesh, prof.N)
    c = _sector_potential(prof, v.ell)
    a = v.a
    return sphere_area(prof.N) * (_gradient_sum(prof.mesh, prof.N, a) + float(np.sum(m * c * a * a)))


def hardy_integral(mesh: RadialMesh, N: int, a) -> float:
    """int v^2 / |x|^2 dx with the Hardy-consistent node weights."""
    a = np.asarray(a, dtype=float)
    return sphere_area(N) * float(np.sum(hardy_weights(mesh, N) * a * a))


def zonal_harmonic(ell: int, N: int, theta):
    """Zonal spherical harmonic of degree ell on S^(N-1), unnormalized."""
    x = np.cos(theta)
    if N == 2:
        return np.cos(ell * np.asarray(theta))
    return eval_gegenbauer(ell, (N - 2) / 2.0, x)


def _angle_rule(N: int):
    """64-point Gauss-Legendre on [0, pi] with |S^(N-2)| sin^(N-2) folded in."""
    x, wq = leggauss(ANGLE_NODES)
    theta = 0.5 * math.pi * (x + 1.0)
    weights = 0.5 * math.pi * wq * np.sin(theta) ** (N - 2) * sphere_area(N - 1)
    return theta, weights


def _normalized_harmonic(ell: int, N: int):
    theta, weights = _angle_rule(N)
    Y = zonal_harmonic(ell, N, theta)
    mean_sq = float(np.sum(weights * Y * Y)) / sphere_area(N)
    return theta, weights, Y / math.sqrt(mean_sq)


def energy_gap(prof: RadialProfile, v: SectorPerturbation) -> EnergyReport:
    """E_eps(u_eps + v) - E_eps(u_eps) assembled directly from u_eps + v.

    Energy densities of u_eps + v and u_eps are evaluated per cell and per
    node and subtracted before summation, so the large vortex energy cancels
    without losing the small excess.  The perturbed energy never goes
    through ``quad_form_F``; the two inequality slacks compare the
    independently assembled quantities.
    """
    _require_mesh(prof, v)
    v.check_target(prof.N)
    mesh, N, k, p = prof.mesh, prof.N, prof.inv_eps2, prof.potential
    f = np.asarray(prof.f)
    a = v.a
    r = mesh.nodes
    S = sphere_area(N)
    m = node_weights(mesh, N)
    wc = cell_weights(mesh, N)
    E0 = radial_energy(prof)
    t0 = 1.0 - f * f

    if v.family == "RadialAligned":
        g = f + a
        dgrad = (np.diff(g) ** 2 - np.diff(f) ** 2) / mesh.h
        dzero = 0.5 * (N - 1) * (_over_r2(g * g, r) - _over_r2(f * f, r))
        if k:
            dzero = dzero + 0.5 * k * (eval_W(p, 1.0 - g * g) - eval_W(p, t0))
    elif v.family == "OrthogonalComponent":
        dgrad = np.diff(a) ** 2 / mesh.h
        dzero = np.zeros_like(r)
        if k:
            dzero = 0.5 * k * (eval_W(p, t0 - a * a) - eval_W(p, t0))
    elif v.family == "SingleAngle":
        lam = sector_eigenvalue(v.ell, N)
        dgrad = np.diff(a) ** 2 / mesh.h
        dzero = 0.5 * lam * _over_r2(a * a, r)
        if k:
            _, weights, Y = _normalized_harmonic(v.ell, N)
            t = t0[:, None] - (a * a)[:, None] * (Y * Y)[None, :]
            sphere_avg = (eval_W(p, t) - eval_W(p, t0)[:, None]) @ weights / sphere_area(N)
            dzero = dzero + 0.5 * k * sphere_avg
    else:
        raise InputError(f"energy_gap does not support family {v.family!r}")

    gap = S * (0.5 * float(np.sum(wc * dgrad)) + float(np.sum(m * dzero)))
    E1 = E0 + gap
    F = quad_form_F(prof, v)
    H = hardy_integral(mesh, N, a)
    cN = compute_c_N(N)
    return EnergyReport(
        family=v.family,
        ell=v.ell,
        seed=v.seed,
        E_base=E0,
        E_perturbed=E1,
        gap=gap,
        F_value=F,
        hardy_integral=H,
        c_N=cN,
        slack_step1=gap - 0.5 * F,
        slack_step4=F - cN * H,
    )


def verify_step2_identity(prof: RadialProfile, w: SectorPerturbation, support_tol: float = 1e-12) -> float:
    """Relative discrepancy between F_eps(f w) and its factorized form.

    The factorized side is

        int f^2 (|w'|^2 + (ell(ell+N-2) - (N-1)) w^2 / r^2) dx

    with f^2 on a cell taken as the product of its end values.  It uses
    neither the potential nor the product f w, so it agrees with F_eps(f w)
    only because f solves the profile equation.
    """
    _require_mesh(prof, w)
    scale = max(1.0, float(np.max(np.abs(w.a))))
    if abs(w.a[0]) > support_tol * scale or abs(w.a[-1]) > support_tol * scale:
        raise InputError("w must vanish at r = 0 and r = 1")
    mesh, N = prof.mesh, prof.N
    f = np.asarray(prof.f)
    v = SectorPerturbation(mesh, f * w.a, w.ell, "Scalar")
    lhs = quad_form_F(prof, v)

    wc = cell_weights(mesh, N)
    m = node_weights(mesh, N)
    grad = float(np.sum(wc * f[:-1] * f[1:] * np.diff(w.a) ** 2 / mesh.h))
    coeff = sector_eigenvalue(w.ell, N) - (N - 1)
    zeroth = float(np.sum(m * coeff * _over_r2((f * w.a) ** 2, mesh.nodes)))
    rhs = sphere_area(N) * (grad + zeroth)
    return abs(lhs - rhs) / (1.0 + abs(lhs))


def step1_linear_term(prof: RadialProfile, a) -> float:
    """sum m_i R_i a_i |S|: the discrete remainder of the Euler-Lagrange term."""
    m = node_weights(prof.mesh, prof.N)
    R = residual_vector(prof.mesh, prof.f, prof.N, prof.eps, prof.potential)
    return sphere_area(prof.N) * float(np.sum(m[1:-1] * R * np.asarray(a)[1:-1]))


def quartic_remainder(prof: RadialProfile, a) -> float:
    """(1/(4 eps^2)) int a^4 dx: gap - F/2 for W(t) = t^2/2 and v = a e_M."""
    m = node_weights(prof.mesh, prof.N)
    a = np.asarray(a, dtype=float)
    return 0.25 * prof.inv_eps2 * sphere_area(prof.N) * float(np.sum(m * a**4))
