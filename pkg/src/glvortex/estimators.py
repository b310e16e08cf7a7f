"""Estimator-style wrappers around the profile solver and the sector spectra.

The functional API in :mod:`glvortex.radial` and :mod:`glvortex.spectral` is
the core; these classes only add the familiar ``fit``/``predict``/
``transform`` shape and ``get_params``/``set_params`` so that parameter grids
can be driven by generic tooling.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .exceptions import InputError
from .radial import RadialProfile, SolveOptions, build_mesh, continuation_solve
from .spectral import WEIGHTS, build_sector_operator, lowest_eigen

__all__ = ["VortexProfileSolver", "SectorSpectrum"]


class VortexProfileSolver(BaseEstimator):
    """Solve for the vortex profile on construction of ``fit``.

    Parameters
    ----------
    N : int
        Space dimension.
    eps : float
        Ginzburg-Landau parameter; ``float("inf")`` gives the harmonic case.
    potential : str
        Potential selector (``"quadratic"``, ``"huber:<delta>"``,
        ``"file:<path>"``).
    n, grading : int, float
        Mesh size and grading exponent.
    tolerance : float
        Sup-norm tolerance on the discrete residual.
    """

    def __init__(self, N=7, eps=1.0, potential="quadratic", n=2000, grading=2.0, tolerance=1e-7):
        self.N = N
        self.eps = eps
        self.potential = potential
        self.n = n
        self.grading = grading
        self.tolerance = tolerance

    def fit(self, X=None, y=None):
        """Run the continuation solve. ``X`` and ``y`` are ignored."""
        mesh = build_mesh(self.n, self.grading)
        prof = continuation_solve(
            self.N, self.eps, self.potential, mesh, SolveOptions(tolerance=self.tolerance)
        )
        self.profile_ = prof
        self.residual_sup_ = prof.residual_sup
        self.n_iter_ = prof.iterations
        return self

    def predict(self, X):
        """Interpolated profile values at the radii in ``X``."""
        check_is_fitted(self, "profile_")
        r = check_array(X, ensure_2d=False, dtype=float).ravel()
        if np.any(r < 0.0) or np.any(r > 1.0):
            raise InputError("radii must lie in [0, 1]")
        return self.profile_(r)


class SectorSpectrum(TransformerMixin, BaseEstimator):
    """Lowest sector eigenvalues of a fitted profile.

    ``fit`` takes a :class:`RadialProfile` (or a fitted
    :class:`VortexProfileSolver`) and stores ``mu_`` for ell = 0..ell_max.
    ``transform`` maps rows of nodal coefficients a(r_i) to their Rayleigh
    quotients in every sector, so each column is bounded below by ``mu_``.
    """

    def __init__(self, ell_max=10, weight="hardy"):
        self.ell_max = ell_max
        self.weight = weight

    def _profile(self, X) -> RadialProfile:
        if isinstance(X, VortexProfileSolver):
            check_is_fitted(X, "profile_")
            return X.profile_
        if isinstance(X, RadialProfile):
            return X
        raise InputError("fit expects a RadialProfile or a fitted VortexProfileSolver")

    def fit(self, X, y=None):
        if self.weight not in WEIGHTS:
            raise InputError(f"weight must be one of {WEIGHTS}")
        if int(self.ell_max) < 0:
            raise InputError("ell_max must be >= 0")
        prof = self._profile(X)
        self.operators_ = [build_sector_operator(prof, ell) for ell in range(int(self.ell_max) + 1)]
        results = [lowest_eigen(op, self.weight) for op in self.operators_]
        self.mu_ = np.array([res.mu for res in results])
        self.eigvecs_ = np.stack([res.eigvec for res in results])
        self.n_nodes_ = prof.mesh.n + 1
        return self

    def transform(self, X):
        """Rayleigh quotients, shape ``(n_rows, ell_max + 1)``.

        Each row holds a(r_0), ..., a(r_n); the first and last entries are
        ignored (both boundary conditions are imposed).
        """
        check_is_fitted(self, "mu_")
        A = check_array(X, dtype=float)
        if A.shape[1] != self.n_nodes_:
            raise InputError(f"rows must have {self.n_nodes_} nodal values, got {A.shape[1]}")
        inner = A[:, 1:-1]
        out = np.empty((A.shape[0], len(self.operators_)))
        for j, op in enumerate(self.operators_):
            mass = op.mass_diag if self.weight == "identity" else op.hardy_diag
            for i, a in enumerate(inner):
                denom = float(np.sum(mass * a * a))
                if denom <= 0.0:
                    raise InputError(f"row {i} vanishes on the interior nodes")
                out[i, j] = op.stiffness_form(a) / denom
        return out
