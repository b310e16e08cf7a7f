"""Radial meshes, quadrature on the unit ball and the vortex profile solver.

The profile f solves

    -f'' - (N-1)/r f' + (N-1)/r**2 f = f W'(1 - f**2) / eps**2,  f(0)=0, f(1)=1.

The discretization is the Euler-Lagrange system of a discrete energy built
from two sets of weights on the mesh:

* cell weights ``w[c]``: the exact mean of r**(N-1) over cell c, used for
  gradient terms;
* node weights ``m[i] = r_i (w[i+1/2] - w[i-1/2]) / (N-1)``, used for
  zeroth-order terms.  They sum to exactly 1/N and make f(r) = r an exact
  discrete solution of the harmonic (eps = inf) problem.

The resulting three-point stencil is second order on smoothly graded meshes
and every converged profile is a critical point of
:func:`glvortex.energy.radial_energy` up to the Newton tolerance.
"""

from __future__ import annotations

import json
import logging
import math
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.linalg import solve_banded

from .exceptions import (
    ConfigurationError,
    InputError,
    NumericError,
    PostconditionError,
    SolverError,
)
from .potential import PotentialSpec, dW_slope, eval_dW, parse_potential

logger = logging.getLogger(__name__)

__all__ = [
    "RadialMesh",
    "RadialProfile",
    "SolveOptions",
    "build_mesh",
    "sphere_area",
    "ball_volume",
    "integrate_radial",
    "cell_weights",
    "node_weights",
    "hardy_weights",
    "residual_vector",
    "solve_profile",
    "profile_residual",
    "continuation_solve",
    "continuation_ladder",
    "save_profile",
    "load_profile",
]

MIN_NODES = 16


@dataclass(frozen=True, eq=False)
class RadialMesh:
    """Graded grid r_i = (i/n)**grading on [0, 1]."""

    nodes: np.ndarray = field(repr=False)
    grading: float
    n: int

    @property
    def h(self) -> np.ndarray:
        """Cell widths, length n."""
        return np.diff(self.nodes)

    def same_as(self, other: "RadialMesh") -> bool:
        return (
            self is other
            or (self.n == other.n and np.array_equal(self.nodes, other.nodes))
        )


def build_mesh(n: int = 2000, grading: float = 2.0) -> RadialMesh:
    """Return the graded mesh with n cells; n >= 16 and grading >= 1."""
    if int(n) != n or n < MIN_NODES:
        raise ConfigurationError(f"mesh needs n >= {MIN_NODES} cells, got {n}")
    if not grading >= 1.0:
        raise ConfigurationError(f"grading exponent must be >= 1, got {grading}")
    n = int(n)
    nodes = (np.arange(n + 1, dtype=float) / n) ** float(grading)
    nodes[0], nodes[-1] = 0.0, 1.0
    nodes.setflags(write=False)
    return RadialMesh(nodes=nodes, grading=float(grading), n=n)


def _gamma_half(k2: int) -> float:
    """Gamma(k2 / 2) for positive integer k2 by the half-integer recursion."""
    if k2 % 2 == 0:
        g, x = 1.0, 1.0
    else:
        g, x = math.sqrt(math.pi), 0.5
    while x < k2 / 2:
        g *= x
        x += 1.0
    return g


def sphere_area(N: int) -> float:
    """Surface measure |S^(N-1)| = 2 pi^(N/2) / Gamma(N/2)."""
    if N < 1:
        raise InputError("sphere_area needs N >= 1")
    return 2.0 * math.pi ** (N / 2) / _gamma_half(N)


def ball_volume(N: int) -> float:
    return sphere_area(N) / N


def integrate_radial(mesh: RadialMesh, samples, N: int) -> float:
    """|S^(N-1)| * int_0^1 g(r) r^(N-1) dr by the composite trapezoid rule.

    ``samples`` holds g at every node, or at nodes 1..n only when g r^(N-1)
    extends continuously by zero to r = 0.
    """
    g = np.asarray(samples, dtype=float)
    r = mesh.nodes
    if g.shape == (mesh.n,):
        g = np.concatenate([[0.0], g])
        integrand = g * r ** (N - 1)
        integrand[0] = 0.0
    elif g.shape == (mesh.n + 1,):
        integrand = g * r ** (N - 1)
    else:
        raise InputError(f"expected {mesh.n + 1} (or {mesh.n}) samples, got {g.shape}")
    if not np.all(np.isfinite(integrand)):
        raise NumericError("non-finite integrand in integrate_radial")
    return sphere_area(N) * float(np.sum(0.5 * (integrand[1:] + integrand[:-1]) * mesh.h))


def cell_weights(mesh: RadialMesh, N: int) -> np.ndarray:
    """Mean of r^(N-1) over each cell, (b^N - a^N) / (N (b - a)), summed stably."""
    a, b = mesh.nodes[:-1], mesh.nodes[1:]
    acc = np.zeros_like(a)
    for k in range(N):
        acc += a**k * b ** (N - 1 - k)
    return acc / N


def _weight_jumps(mesh: RadialMesh, N: int) -> np.ndarray:
    """w[i+1/2] - w[i-1/2] for i = 0..n, with w[-1/2] = 0 and w[n+1/2] = 1."""
    w = cell_weights(mesh, N)
    return np.diff(np.concatenate([[0.0], w, [1.0]]))


def node_weights(mesh: RadialMesh, N: int) -> np.ndarray:
    """Lumped r^(N-1) node weights; ``sum(node_weights) == 1/N`` up to rounding."""
    if N < 2:
        raise InputError("node weights need N >= 2")
    return mesh.nodes * _weight_jumps(mesh, N) / (N - 1)


def hardy_weights(mesh: RadialMesh, N: int) -> np.ndarray:
    """Node weights for int v^2 / r^2, consistent with r^(N-3) dr.

    With phi = r^(-(N-2)/2) (and phi = 0 at the origin), the weight at node i
    is the discrete -(r^(N-1) phi')' divided by (N-2)^2/4 phi_i.  For these
    weights the discrete Hardy inequality holds with the sharp constant
    (N-2)^2/4 for every vector vanishing at r = 0.  For N = 2 the lumped
    m_i / r_i^2 is used.  The r = 0 entry is 0.
    """
    r = mesh.nodes
    out = np.zeros_like(r)
    if N == 2:
        m = node_weights(mesh, N)
        out[1:] = m[1:] / r[1:] ** 2
        return out
    phi = np.zeros_like(r)
    phi[1:] = r[1:] ** (-(N - 2) / 2.0)
    flux = cell_weights(mesh, N) * np.diff(phi) / mesh.h
    out[1:-1] = -(flux[1:] - flux[:-1]) / ((N - 2) ** 2 / 4.0 * phi[1:-1])
    # last node: one-sided, same consistent value as the lumped weight
    m = node_weights(mesh, N)
    out[-1] = m[-1] / r[-1] ** 2
    return out


@dataclass
class SolveOptions:
    """Newton-relaxation controls for :func:`solve_profile`."""

    tolerance: float = 1e-7
    max_newton: int = 200
    polish_steps: int = 2
    max_halvings: int = 30
    armijo: float = 1e-4
    fd_step: float = 1e-6
    check_invariants: bool = True


@dataclass(eq=False)
class RadialProfile:
    """Converged vortex profile f on a mesh."""

    mesh: RadialMesh
    f: np.ndarray = field(repr=False)
    N: int
    eps: float
    potential: PotentialSpec
    residual_sup: float
    iterations: int = 0
    history: list = field(default_factory=list, repr=False)

    @property
    def r(self) -> np.ndarray:
        return self.mesh.nodes

    @property
    def inv_eps2(self) -> float:
        return _inv_eps2(self.eps)

    def __call__(self, r):
        """Piecewise-linear interpolant of the profile."""
        return np.interp(r, self.mesh.nodes, self.f)

    def metadata(self) -> dict:
        return {
            "N": self.N,
            "eps": _eps_to_json(self.eps),
            "potential": self.potential.label,
            "n": self.mesh.n,
            "grading": self.mesh.grading,
            "residual_sup": self.residual_sup,
        }


def _inv_eps2(eps: float) -> float:
    if not eps > 0:
        raise InputError(f"eps must be positive, got {eps}")
    return 0.0 if math.isinf(eps) else 1.0 / (eps * eps)


def _stencil(mesh: RadialMesh, N: int):
    w = cell_weights(mesh, N)
    dw = _weight_jumps(mesh, N)[1:-1]
    return w, dw


def residual_vector(mesh: RadialMesh, f, N: int, eps: float, potential: PotentialSpec) -> np.ndarray:
    """Discrete ODE residual at interior nodes 1..n-1.

    The linear part is evaluated as (N-1)/r * (f/r - D) with D a weighted
    difference quotient, which vanishes to the last bit for f = r.
    """
    f = np.asarray(f, dtype=float)
    r = mesh.nodes
    h = mesh.h
    w, dw = _stencil(mesh, N)
    d = np.diff(f) / h
    D = (w[1:] * d[1:] - w[:-1] * d[:-1]) / dw
    ri = r[1:-1]
    fi = f[1:-1]
    res = (N - 1) / ri * (fi / ri - D)
    k = _inv_eps2(eps)
    if k:
        res = res - k * fi * eval_dW(potential, 1.0 - fi * fi)
    return res


def _jacobian_bands(mesh, f, N, eps, potential, fd_step):
    """Tridiagonal Jacobian of the interior residual, rows scaled by r_i**2."""
    r = mesh.nodes
    h = mesh.h
    w, dw = _stencil(mesh, N)
    ri = r[1:-1]
    fi = f[1:-1]
    up = w[1:] / (h[1:] * dw)
    lo = w[:-1] / (h[:-1] * dw)
    c = (N - 1) / ri
    diag = c * (1.0 / ri + up + lo)
    k = _inv_eps2(eps)
    if k:
        t = 1.0 - fi * fi
        diag = diag - k * (eval_dW(potential, t) - 2.0 * fi * fi * dW_slope(potential, t, fd_step))
    sup = -c * up
    sub = -c * lo
    s = ri * ri
    m = ri.size
    ab = np.zeros((3, m))
    ab[0, 1:] = (sup * s)[:-1]
    ab[1] = diag * s
    ab[2, :-1] = (sub * s)[1:]
    return ab, s


def _check_profile_invariants(f: np.ndarray) -> str | None:
    if f[0] != 0.0 or f[-1] != 1.0:
        return "boundary values f(0)=0, f(1)=1 not held exactly"
    if np.any(f < 0.0) or np.any(f > 1.0):
        return f"profile leaves [0, 1] (min {f.min():.3e}, max {f.max():.17g})"
    if np.any(np.diff(f) <= 0.0):
        i = int(np.argmin(np.diff(f)))
        return f"profile not strictly increasing near node {i}"
    return None


def solve_profile(
    N: int,
    eps: float,
    potential=None,
    mesh: RadialMesh | None = None,
    opts: SolveOptions | None = None,
    initial=None,
) -> RadialProfile:
    """Damped Newton solve of the radial profile equation.

    Parameters
    ----------
    N : int
        Ambient dimension, N >= 2.
    eps : float
        Coherence length; ``math.inf`` drops the reaction term.
    potential : PotentialSpec or str, optional
        Defaults to the quadratic potential.
    mesh : RadialMesh, optional
        Defaults to ``build_mesh(2000, 2.0)``.
    opts : SolveOptions, optional
    initial : array_like, optional
        Starting iterate with the boundary values; defaults to f(r) = r.

    Raises
    ------
    SolverError
        Newton or its line search failed; carries the last iterate and the
        residual history.
    PostconditionError
        The converged iterate is not monotone or leaves [0, 1].
    """
    if int(N) != N or N < 2:
        raise InputError(f"dimension N must be an integer >= 2, got {N}")
    N = int(N)
    eps = float(eps)
    _inv_eps2(eps)
    potential = parse_potential(potential if potential is not None else "quadratic")
    mesh = mesh if mesh is not None else build_mesh()
    opts = opts or SolveOptions()

    f = mesh.nodes.copy() if initial is None else np.array(initial, dtype=float)
    if f.shape != mesh.nodes.shape:
        raise InputError("initial guess does not match the mesh")
    f[0], f[-1] = 0.0, 1.0

    res = residual_vector(mesh, f, N, eps, potential)
    norm = float(np.linalg.norm(res))
    sup = float(np.max(np.abs(res)))
    history = [sup]
    it = 0
    while sup > opts.tolerance:
        if it >= opts.max_newton:
            raise SolverError(
                f"Newton did not converge in {opts.max_newton} steps (residual {sup:.3e})",
                last_iterate=f,
                history=history,
            )
        it += 1
        ab, s = _jacobian_bands(mesh, f, N, eps, potential, opts.fd_step)
        step = solve_banded((1, 1), ab, -res * s)
        if not np.all(np.isfinite(step)):
            raise SolverError("non-finite Newton step", last_iterate=f, history=history)
        alpha = 1.0
        for _ in range(opts.max_halvings + 1):
            trial = f.copy()
            trial[1:-1] += alpha * step
            trial_res = residual_vector(mesh, trial, N, eps, potential)
            trial_norm = float(np.linalg.norm(trial_res))
            if np.isfinite(trial_norm) and trial_norm <= (1.0 - opts.armijo * alpha) * norm:
                break
            alpha *= 0.5
        else:
            raise SolverError(
                f"line search failed at Newton step {it} (residual {sup:.3e})",
                last_iterate=f,
                history=history,
            )
        f, res, norm = trial, trial_res, trial_norm
        sup = float(np.max(np.abs(res)))
        history.append(sup)
        logger.debug("newton %d: alpha=%.3g residual_sup=%.3e", it, alpha, sup)

    # full steps toward the rounding floor; kept only while they help
    for _ in range(opts.polish_steps if it else 0):
        ab, s = _jacobian_bands(mesh, f, N, eps, potential, opts.fd_step)
        trial = f.copy()
        trial[1:-1] += solve_banded((1, 1), ab, -res * s)
        trial_res = residual_vector(mesh, trial, N, eps, potential)
        trial_sup = float(np.max(np.abs(trial_res)))
        if not trial_sup < sup:
            break
        f, res, sup = trial, trial_res, trial_sup
        history.append(sup)

    if opts.check_invariants:
        problem = _check_profile_invariants(f)
        if problem:
            raise PostconditionError(f"N={N}, eps={eps}: {problem}")
    f.setflags(write=False)
    return RadialProfile(
        mesh=mesh,
        f=f,
        N=N,
        eps=eps,
        potential=potential,
        residual_sup=sup,
        iterations=it,
        history=history,
    )


def profile_residual(prof: RadialProfile) -> float:
    """Sup-norm of the discrete ODE residual of a stored profile."""
    res = residual_vector(prof.mesh, prof.f, prof.N, prof.eps, prof.potential)
    return float(np.max(np.abs(res)))


def continuation_ladder(eps_target: float, ratio: float = 0.5) -> list[float]:
    """Descending eps values ending at eps_target.

    Targets at or above 10 (and eps = inf) are solved directly from f = r;
    smaller targets start from 10 and shrink geometrically by ``ratio``.
    """
    if not eps_target > 0:
        raise InputError("eps_target must be positive")
    start = 10.0
    if eps_target >= start:
        return [float(eps_target)]
    ladder = []
    e = start
    while e > eps_target * (1.0 + 1e-12):
        ladder.append(e)
        e *= ratio
    ladder.append(float(eps_target))
    return ladder


def continuation_solve(
    N: int,
    eps_target: float,
    potential=None,
    mesh: RadialMesh | None = None,
    opts: SolveOptions | None = None,
) -> RadialProfile:
    """Solve along :func:`continuation_ladder`, warm-starting every rung."""
    mesh = mesh if mesh is not None else build_mesh()
    ladder = continuation_ladder(eps_target)
    prof = None
    for pos, e in enumerate(ladder):
        try:
            prof = solve_profile(
                N, e, potential, mesh, opts, initial=None if prof is None else prof.f
            )
        except (SolverError, PostconditionError) as exc:
            raise type(exc)(
                f"continuation failed at rung {pos + 1}/{len(ladder)} (eps={e}): {exc}",
                *((exc.last_iterate, exc.history) if isinstance(exc, SolverError) else ()),
            ) from exc
    return prof


def _eps_to_json(eps: float):
    return "inf" if math.isinf(eps) else eps


def _eps_from_json(value) -> float:
    return math.inf if value in ("inf", "Infinity") else float(value)


def save_profile(prof: RadialProfile, stem, extra: dict | None = None) -> tuple[Path, Path]:
    """Write ``<stem>.csv`` (header ``r,f``) and the ``<stem>.json`` sidecar."""
    stem = Path(stem)
    # append rather than replace: stems such as "eps0.3" contain dots
    csv_path = stem.with_name(stem.name + ".csv")
    json_path = stem.with_name(stem.name + ".json")
    lines = ["r,f"]
    lines += [f"{r:.17g},{v:.17g}" for r, v in zip(prof.mesh.nodes, prof.f)]
    csv_path.write_text("\n".join(lines) + "\n")
    meta = prof.metadata()
    if extra:
        meta.update(extra)
    json_path.write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")
    return csv_path, json_path


def load_profile(csv_path) -> RadialProfile:
    """Read a profile written by :func:`save_profile`.

    The stored residual is returned as-is; callers re-check it with
    :func:`profile_residual`.
    """
    csv_path = Path(csv_path)
    try:
        meta = json.loads(csv_path.with_suffix(".json").read_text())
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", UserWarning)  # empty file is reported below
            data = np.loadtxt(csv_path, delimiter=",", skiprows=1, ndmin=2)
    except (OSError, ValueError) as exc:
        raise InputError(f"{csv_path}: unreadable profile ({exc})") from exc
    if data.ndim != 2 or data.shape[1] != 2:
        raise InputError(f"{csv_path}: expected two columns r,f")
    r, f = data[:, 0], data[:, 1]
    mesh = build_mesh(int(meta["n"]), float(meta["grading"]))
    if r.shape != mesh.nodes.shape or not np.allclose(r, mesh.nodes, rtol=0, atol=1e-15):
        raise InputError(f"{csv_path}: nodes do not match the declared mesh")
    return RadialProfile(
        mesh=mesh,
        f=f,
        N=int(meta["N"]),
        eps=_eps_from_json(meta["eps"]),
        potential=parse_potential(meta["potential"]),
        residual_sup=float(meta["residual_sup"]),
    )
