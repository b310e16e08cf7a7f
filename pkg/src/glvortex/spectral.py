"""Sector spectra of the linearized operator and the Hardy factorization chain.

Within the angular sector ell, the operator -Laplace - W'(1 - f^2)/eps^2
reduces to the radial form

    Q(a) = int (a'^2 + [ell(ell+N-2)/r^2 - W'(1-f^2)/eps^2] a^2) r^(N-1) dr,

discretized with the same cell and node weights as the energy.  Lowest
eigenvalues are taken against one of two diagonal weights:

* ``identity``: the node weights m_i (the L^2 mass);
* ``hardy``: weights for int a^2 / r^2 under which the discrete Hardy
  inequality is sharp (see :func:`glvortex.radial.hardy_weights`).

The generalized problem is symmetric-definite with a diagonal mass, so it is
reduced to a symmetric tridiagonal matrix whose lowest eigenvalue is
isolated with Sturm-sequence multisection and refined by shifted inverse
iteration.
"""

from __future__ import annotations

import logging
import math
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.linalg import solveh_banded

from .energy import (
    SectorPerturbation,
    compute_c_N,
    hardy_integral,
    quad_form_F,
    sector_eigenvalue,
)
from .exceptions import AdmissibilityError, InputError, SolverError
from .potential import eval_dW, parse_potential
from .radial import (
    RadialMesh,
    RadialProfile,
    build_mesh,
    cell_weights,
    hardy_weights,
    node_weights,
    residual_vector,
    solve_profile,
    sphere_area,
)

logger = logging.getLogger(__name__)

__all__ = [
    "WEIGHTS",
    "SectorOperator",
    "SpectralResult",
    "HardyScan",
    "Step3Report",
    "HarmonicMapReport",
    "build_sector_operator",
    "lowest_eigen",
    "sturm_count",
    "hardy_gap",
    "verify_step3_chain",
    "harmonic_map_gap",
    "convexity_threshold",
    "critical_dimension",
    "cross_term_density",
]

WEIGHTS = ("identity", "hardy")


@dataclass(eq=False)
class SectorOperator:
    """Tridiagonal stiffness and diagonal masses on the interior nodes 1..n-1.

    ``diag`` carries the Dirichlet condition at r = 0.  ``origin_coupling``
    is the stiffness of the first cell; removing it from ``diag[0]`` gives
    the free (natural) condition a(0) = a(r_1) used for ell = 0.
    """

    N: int
    eps: float
    ell: int
    mesh: RadialMesh
    diag: np.ndarray = field(repr=False)
    offdiag: np.ndarray = field(repr=False)
    mass_diag: np.ndarray = field(repr=False)
    hardy_diag: np.ndarray = field(repr=False)
    origin_coupling: float = 0.0

    def stiffness_form(self, a_int, natural_origin: bool = False) -> float:
        a = np.asarray(a_int, dtype=float)
        d = self.diag.copy()
        if natural_origin:
            d[0] -= self.origin_coupling
        return float(a @ (d * a) + 2.0 * np.sum(self.offdiag * a[:-1] * a[1:]))


@dataclass(eq=False)
class SpectralResult:
    """Lowest generalized eigenpair of one sector."""

    ell: int
    weight: str
    mu: float
    eigvec: np.ndarray = field(repr=False)
    iterations: int
    residual: float
    bracket: tuple[float, float] = (math.nan, math.nan)


def build_sector_operator(prof: RadialProfile, ell: int) -> SectorOperator:
    """Assemble the sector-ell form around a converged profile."""
    if ell < 0 or int(ell) != ell:
        raise InputError("ell must be a non-negative integer")
    mesh, N = prof.mesh, prof.N
    r = mesh.nodes
    h = mesh.h
    w = cell_weights(mesh, N)
    m = node_weights(mesh, N)
    f = np.asarray(prof.f)

    ri = r[1:-1]
    pot = sector_eigenvalue(int(ell), N) / (ri * ri)
    if prof.inv_eps2:
        pot = pot - prof.inv_eps2 * eval_dW(prof.potential, 1.0 - f[1:-1] ** 2)
    k = w / h
    diag = k[:-1] + k[1:] + m[1:-1] * pot
    offdiag = -k[1:-1]
    hardy = hardy_weights(mesh, N)[1:-1]
    return SectorOperator(
        N=N,
        eps=prof.eps,
        ell=int(ell),
        mesh=mesh,
        diag=diag,
        offdiag=offdiag,
        mass_diag=m[1:-1].copy(),
        hardy_diag=hardy,
        origin_coupling=float(k[0]),
    )


def sturm_count(d, e, shifts) -> np.ndarray:
    """Number of eigenvalues below each shift for the tridiagonal (d, e).

    Counts negative pivots of the LDL^T factorization of T - shift, vectorized
    over the shifts.
    """
    shifts = np.atleast_1d(np.asarray(shifts, dtype=float))
    tiny = np.finfo(float).tiny
    count = np.zeros(shifts.shape, dtype=int)
    q = d[0] - shifts
    q = np.where(q == 0.0, -tiny, q)
    count += q < 0.0
    e2 = e * e
    for i in range(1, d.size):
        q = d[i] - shifts - e2[i - 1] / q
        q = np.where(q == 0.0, -tiny, q)
        count += q < 0.0
    return count


def _reduced(op: SectorOperator, weight: str, natural_origin: bool):
    if weight not in WEIGHTS:
        raise InputError(f"weight must be one of {WEIGHTS}")
    mass = op.mass_diag if weight == "identity" else op.hardy_diag
    d = op.diag.copy()
    if natural_origin:
        d[0] -= op.origin_coupling
    s = 1.0 / np.sqrt(mass)
    return d * s * s, op.offdiag * s[:-1] * s[1:], s


def lowest_eigen(
    op: SectorOperator,
    weight: str = "hardy",
    tol: float = 1e-10,
    max_iter: int = 50,
    natural_origin: bool | None = None,
) -> SpectralResult:
    """Smallest mu with K a = mu B a for the chosen weight B.

    ``natural_origin`` defaults to True only for ell = 0 with the identity
    weight; every other combination keeps a(0) = 0.

    Raises
    ------
    SolverError
        If mu does not settle to relative ``tol`` between iterations with a
        backward error ``|T x - mu x| / |T|`` below ``tol``; carries the
        residual history.
    """
    if natural_origin is None:
        natural_origin = op.ell == 0 and weight == "identity"
    d, e, s = _reduced(op, weight, natural_origin)
    n = d.size

    # upper bound: Rayleigh quotient of a smooth sector-shaped trial vector
    r = op.mesh.nodes[1:-1]
    trial = r ** max(op.ell, 1) * (1.0 - r)
    x = trial / s
    x /= np.linalg.norm(x)
    hi = float(x @ (d * x) + 2.0 * np.sum(e * x[:-1] * x[1:]))
    gersh = np.abs(np.concatenate([[0.0], e])) + np.abs(np.concatenate([e, [0.0]]))
    glo = float(np.min(d - gersh))
    if glo >= hi:
        glo = hi - 1.0

    # bracket the lowest eigenvalue: geometric probe downward, then multisection
    span = max(abs(hi), 1.0)
    probes = hi - span * 2.0 ** np.arange(-30, 64)
    probes = probes[probes > glo - span]
    probes = np.append(probes, glo)
    counts = sturm_count(d, e, probes)
    lo = float(probes[np.argmax(counts == 0)])
    hi_b = hi * (1 + 1e-14) + 1e-300
    while hi_b - lo > 1e-4 * max(abs(hi_b), 1e-8):
        grid = np.linspace(lo, hi_b, 34)[1:-1]
        c = sturm_count(d, e, grid)
        below = grid[c == 0]
        above = grid[c >= 1]
        if below.size:
            lo = float(below.max())
        if above.size:
            hi_b = float(above.min())
    tnorm = max(float(np.max(np.abs(d) + gersh)), 1.0)
    shift = lo - 1e-3 * (hi_b - lo) - 1e-12 * max(abs(lo), 1.0)

    ab = np.zeros((2, n))
    ab[0, 1:] = e
    ab[1] = d - shift
    x = np.ones(n) / math.sqrt(n)
    history = []
    mu = mu_prev = math.nan
    residual = math.inf
    it = 0
    for it in range(1, max_iter + 1):
        try:
            y = solveh_banded(ab, x)
        except np.linalg.LinAlgError as exc:
            raise SolverError(f"shifted factorization failed: {exc}", history=history) from exc
        x = y / np.linalg.norm(y)
        Tx = d * x
        Tx[:-1] += e * x[1:]
        Tx[1:] += e * x[:-1]
        mu = float(x @ Tx)
        # backward error: residual relative to the matrix norm bound
        residual = float(np.linalg.norm(Tx - mu * x)) / tnorm
        history.append(residual)
        settled = it > 1 and abs(mu - mu_prev) <= tol * max(abs(mu), 1.0)
        if settled and residual <= tol:
            break
        mu_prev = mu
    else:
        raise SolverError(
            f"inverse iteration did not converge, residual {residual:.3e} (ell={op.ell}, {weight})",
            last_iterate=x,
            history=history,
        )
    if x[np.argmax(np.abs(x))] < 0:
        x = -x
    a = np.zeros(op.mesh.n + 1)
    a[1:-1] = x * s
    if natural_origin:
        a[0] = a[1]
    return SpectralResult(
        ell=op.ell,
        weight=weight,
        mu=mu,
        eigvec=a,
        iterations=it,
        residual=residual,
        bracket=(lo, hi_b),
    )


@dataclass
class HardyScan:
    """Hardy-weight sector eigenvalues for ell = 0..ell_max."""

    N: int
    eps: float
    c_N: float
    results: list = field(repr=False)
    mu_min: float
    ell_argmin: int
    margin: float
    certified: bool | None
    tolerance: float

    @property
    def mu(self) -> list[float]:
        return [res.mu for res in self.results]

    @property
    def monotone(self) -> bool:
        mu = self.mu
        return all(b >= a - 1e-9 * max(1.0, abs(a)) for a, b in zip(mu, mu[1:]))


def hardy_gap(prof: RadialProfile, ell_max: int = 10, tol: float = 5e-3) -> HardyScan:
    """Lowest Hardy-weight eigenvalue per sector and its minimum over ell.

    Sector forms grow with ell(ell+N-2), so the minimum over ell <= ell_max
    bounds every higher sector as well.  ``certified`` is ``None`` for
    N <= 6, where the values are reported without any sign claim.
    """
    if ell_max < 2:
        raise InputError("ell_max must be >= 2")
    results = [lowest_eigen(build_sector_operator(prof, ell), "hardy") for ell in range(ell_max + 1)]
    mus = np.array([res.mu for res in results])
    k = int(np.argmin(mus))
    cN = compute_c_N(prof.N)
    margin = float(mus[k] - cN)
    certified = bool(margin >= -tol) if prof.N >= 7 else None
    return HardyScan(
        N=prof.N,
        eps=prof.eps,
        c_N=cN,
        results=results,
        mu_min=float(mus[k]),
        ell_argmin=results[k].ell,
        margin=margin,
        certified=certified,
        tolerance=tol,
    )


def _hardy_phi(r: np.ndarray, N: int) -> np.ndarray:
    """r^(-(N-2)/2) at r > 0; the r = 0 entry is a placeholder 0."""
    phi = np.zeros_like(r)
    phi[1:] = r[1:] ** (-(N - 2) / 2.0)
    return phi


def cross_term_density(prof: RadialProfile) -> np.ndarray:
    """Discrete -2 phi phi' f f' r^(N-1) at nodes 2..n-1 (nonnegative when f' > 0)."""
    mesh, N = prof.mesh, prof.N
    r, h = mesh.nodes, mesh.h
    f = np.asarray(prof.f)
    w = cell_weights(mesh, N)
    phi = _hardy_phi(r, N)
    df = np.diff(f) / h
    dphi = np.diff(phi) / h
    i = np.arange(2, mesh.n)
    X = -f[i] * (w[i] * h[i] * df[i] * dphi[i] + w[i - 1] * h[i - 1] * df[i - 1] * dphi[i - 1])
    return X * phi[i]


@dataclass
class Step3Report:
    """Pieces of the Hardy factorization chain for v = f phi g."""

    rewritten_form: float
    cross_term: float
    cross_term_min_node: float
    F_value: float
    hardy_integral: float
    c_N: float
    bound_slack: float
    reconstruction_discrepancy: float
    hardy_term: float
    hardy_term_slack: float
    residual_term: float

    def as_dict(self) -> dict:
        return asdict(self)


def verify_step3_chain(prof: RadialProfile, g: SectorPerturbation, support_tol: float = 0.0) -> Step3Report:
    """Evaluate each piece of the chain F(v) >= c_N int v^2/r^2 separately.

    With w = phi g and phi = r^(-(N-2)/2), the form splits exactly (on the
    mesh) into

    * the rewritten form ``int f^2 phi^2 |g'|^2 + hardy_term
      + (ell(ell+N-2) - (N-1)) int v^2/r^2``,
    * the cross term ``-1/2 int grad(phi^2) . grad(f^2) g^2``, a sum of
      per-node contributions each >= 0 when f is increasing,
    * a remainder proportional to the profile residual.

    ``hardy_term`` is the discrete counterpart of (N-2)^2/4 int v^2/r^2 and
    ``hardy_term_slack`` their difference.  g must vanish on the first two
    nodes and at r = 1.
    """
    mesh, N = prof.mesh, prof.N
    if not prof.mesh.same_as(g.mesh):
        raise InputError("g does not live on the profile mesh")
    gg = g.a
    scale = max(1.0, float(np.max(np.abs(gg))))
    if max(abs(gg[0]), abs(gg[1]), abs(gg[-1])) > support_tol * scale:
        raise InputError("g must be supported away from r = 0 and r = 1")
    r, h = mesh.nodes, mesh.h
    f = np.asarray(prof.f)
    w = cell_weights(mesh, N)
    m = node_weights(mesh, N)
    S = sphere_area(N)
    phi = _hardy_phi(r, N)
    ww = phi * gg
    v = f * ww
    lam = sector_eigenvalue(g.ell, N)

    K = w * f[:-1] * f[1:]
    grad = float(np.sum(K * phi[:-1] * phi[1:] * np.diff(gg) ** 2 / h))

    df = np.diff(f) / h
    dphi = np.diff(phi) / h
    i = np.arange(2, mesh.n)
    flux = w[i] * dphi[i] - w[i - 1] * dphi[i - 1]
    hardy_nodes = -phi[i] * gg[i] ** 2 * f[i] ** 2 * flux
    X = -f[i] * (w[i] * h[i] * df[i] * dphi[i] + w[i - 1] * h[i - 1] * df[i - 1] * dphi[i - 1])
    cross_nodes = S * phi[i] * gg[i] ** 2 * X

    v2_r2 = np.zeros_like(r)
    v2_r2[1:] = v[1:] ** 2 / r[1:] ** 2
    sum_v2 = float(np.sum(m * v2_r2))
    hardy_term = float(np.sum(hardy_nodes))
    rewritten = S * (grad + hardy_term + (lam - (N - 1)) * sum_v2)
    cross = float(np.sum(cross_nodes))

    R = residual_vector(mesh, f, N, prof.eps, prof.potential)
    residual_term = S * float(np.sum(m[1:-1] * f[1:-1] * ww[1:-1] ** 2 * R))

    F = quad_form_F(prof, SectorPerturbation(mesh, v, g.ell, "Scalar"))
    H = hardy_integral(mesh, N, v)
    cN = compute_c_N(N)
    diff = abs(rewritten + cross - F)
    return Step3Report(
        rewritten_form=rewritten,
        cross_term=cross,
        cross_term_min_node=float(cross_nodes.min()) if cross_nodes.size else 0.0,
        F_value=F,
        hardy_integral=H,
        c_N=cN,
        bound_slack=F - cN * H,
        reconstruction_discrepancy=diff / abs(F) if F else diff,
        hardy_term=S * hardy_term,
        hardy_term_slack=S * hardy_term - (N - 2) ** 2 / 4 * H,
        residual_term=residual_term,
    )


@dataclass
class HarmonicMapReport:
    """Energy change of the equator map under a sphere-valued perturbation."""

    N: int
    M: int
    energy_change: float
    linearized: float
    identity_discrepancy: float
    hardy_integral: float
    c_N: float
    bound_margin: float

    def as_dict(self) -> dict:
        return asdict(self)


def harmonic_map_gap(N: int, M: int, w: SectorPerturbation, mesh: RadialMesh | None = None) -> HarmonicMapReport:
    """Check the equator-map identity for U = (x/|x| + a e_M) / |x/|x| + a e_M|.

    With v = U - x/|x|, compares int |grad U|^2 - |grad x/|x||^2 against
    int |grad v|^2 - (N-1)|v|^2/|x|^2 and evaluates the Hardy lower bound.
    """
    if M <= N:
        raise InputError("harmonic_map_gap needs M > N")
    mesh = mesh if mesh is not None else w.mesh
    if not mesh.same_as(w.mesh):
        raise InputError("perturbation mesh mismatch")
    a = w.a
    norm = np.sqrt(1.0 + a * a)
    if np.any(norm == 0.0) or not np.all(np.isfinite(norm)):
        raise InputError("|u_* + a e_M| vanishes or is not finite")
    c = 1.0 / norm  # radial component of U
    beta = a / norm  # e_M component of U
    alpha = c - 1.0  # radial component of v

    r, h = mesh.nodes, mesh.h
    wc = cell_weights(mesh, N)
    m = node_weights(mesh, N)
    S = sphere_area(N)

    def grad2(y):
        return float(np.sum(wc * np.diff(y) ** 2 / h))

    def over_r2(y):
        out = np.zeros_like(y)
        out[1:] = y[1:] / r[1:] ** 2
        return float(np.sum(m * out))

    lhs = S * (grad2(c) + grad2(beta) + (N - 1) * over_r2(c * c - 1.0))
    v2 = alpha * alpha + beta * beta
    rhs = S * (grad2(alpha) + grad2(beta) + (N - 1) * over_r2(alpha * alpha) - (N - 1) * over_r2(v2))
    H = hardy_integral(mesh, N, np.sqrt(v2))
    cN = compute_c_N(N)
    diff = abs(lhs - rhs)
    return HarmonicMapReport(
        N=N,
        M=M,
        energy_change=lhs,
        linearized=rhs,
        identity_discrepancy=diff / abs(lhs) if lhs else diff,
        hardy_integral=H,
        c_N=cN,
        bound_margin=lhs - cN * H,
    )


def convexity_threshold(N: int, potential="quadratic", mesh: RadialMesh | None = None) -> float:
    """eps* = (W'(1) / lambda_1(B^N))^(1/2); E_eps is strictly convex above it."""
    potential = parse_potential(potential)
    slope = float(eval_dW(potential, 1.0))
    if not slope > 0:
        raise AdmissibilityError(f"W'(1) = {slope} must be positive")
    mesh = mesh if mesh is not None else build_mesh()
    harmonic = solve_profile(N, math.inf, potential, mesh)
    lam1 = lowest_eigen(build_sector_operator(harmonic, 0), "identity").mu
    return math.sqrt(slope / lam1)


def critical_dimension() -> int:
    """Smallest N with (N-2)^2/4 - (N-1) >= 0."""
    N = 2
    while compute_c_N(N) < 0:
        N += 1
    return N
