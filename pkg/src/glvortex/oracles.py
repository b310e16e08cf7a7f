"""Independent reference computations used to validate the main solvers.

Nothing here shares code with the relaxation solver or the eigen solver:
the profile oracle integrates the initial value problem from near the origin
and shoots on the initial slope, and the Bessel oracle sums the power series
of J_nu and bisects for its first zero.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.integrate import solve_ivp

from .potential import eval_dW, parse_potential

__all__ = ["ShootingResult", "shoot_profile", "bessel_j", "bessel_first_zero", "dirichlet_lambda1"]


class ShootingResult:
    """Slope a = f'(0) found by bisection and a dense interpolant of f."""

    def __init__(self, slope, r0, sol, bisections):
        self.slope = slope
        self.r0 = r0
        self._sol = sol
        self.bisections = bisections

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        inner = r < self.r0
        out = np.empty_like(r)
        out[inner] = self.slope * r[inner]
        if np.any(~inner):
            out[~inner] = self._sol(r[~inner])[0]
        return out


def _integrate(N, inv_eps2, potential, a, r0, rtol):
    def rhs(r, y):
        f, fp = y
        react = inv_eps2 * f * eval_dW(potential, min(1.0 - f * f, 1.0)) if inv_eps2 else 0.0
        return [fp, -(N - 1) / r * fp + (N - 1) / (r * r) * f - react]

    def overshoot(r, y):
        return y[0] - 2.0

    overshoot.terminal = True

    def undershoot(r, y):
        return y[0] + 1.0

    undershoot.terminal = True
    return solve_ivp(
        rhs,
        (r0, 1.0),
        [a * r0, a],
        method="DOP853",
        rtol=rtol,
        atol=1e-14,
        dense_output=True,
        events=(overshoot, undershoot),
    )


def shoot_profile(
    N: int,
    eps: float,
    potential="quadratic",
    r0: float = 1e-6,
    rtol: float = 1e-12,
    max_bisections: int = 80,
) -> ShootingResult:
    """Shooting solution of the profile equation.

    Integrates from r0 with f = a r0, f' = a and bisects on a until f(1) = 1.
    A trajectory that leaves [-1, 2] before r = 1 counts as undershooting or
    overshooting accordingly.
    """
    potential = parse_potential(potential)
    inv_eps2 = 0.0 if math.isinf(eps) else 1.0 / (eps * eps)

    def end_value(a):
        sol = _integrate(N, inv_eps2, potential, a, r0, rtol)
        if sol.status == 1:  # terminated by an event
            return (2.0 if sol.y_events[0].size else -1.0), sol
        return float(sol.y[0, -1]), sol

    lo, hi = 0.0, 1.0
    while end_value(hi)[0] < 1.0:
        lo, hi = hi, 2.0 * hi
        if hi > 1e8:
            raise RuntimeError("could not bracket the shooting slope")
    count = 0
    for count in range(1, max_bisections + 1):
        mid = 0.5 * (lo + hi)
        if end_value(mid)[0] < 1.0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 4e-16 * hi:
            break
    a = 0.5 * (lo + hi)
    _, sol = end_value(a)
    return ShootingResult(a, r0, sol.sol, count)


def bessel_j(nu: float, x: float, terms: int = 80) -> float:
    """J_nu(x) from its power series; adequate for 0 <= x <~ 20."""
    half = 0.5 * x
    term = half**nu / math.gamma(nu + 1.0)
    total = term
    q = -half * half
    for k in range(1, terms):
        term *= q / (k * (k + nu))
        total += term
        if abs(term) < 1e-18 * abs(total):
            break
    return total


def bessel_first_zero(nu: float, step: float = 0.01, tol: float = 1e-15) -> float:
    """First positive zero of J_nu by scanning for a sign change and bisecting."""
    x = step
    fx = bessel_j(nu, x)
    while True:
        y = x + step
        fy = bessel_j(nu, y)
        if fx * fy <= 0.0:
            break
        x, fx = y, fy
    lo, hi = x, y
    while hi - lo > tol * hi:
        mid = 0.5 * (lo + hi)
        if bessel_j(nu, mid) * fx > 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def dirichlet_lambda1(N: int) -> float:
    """First Dirichlet eigenvalue of -Laplace on the unit ball B^N."""
    return bessel_first_zero(N / 2.0 - 1.0) ** 2
