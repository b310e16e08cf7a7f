"""Exception hierarchy shared by the numerical modules and the CLI."""

from __future__ import annotations


class GLVortexError(Exception):
    """Base class for all package errors."""


class InputError(GLVortexError, ValueError):
    """An argument violates a documented precondition."""


class PotentialDomainError(InputError):
    """A potential was evaluated outside its domain."""


class AdmissibilityError(InputError):
    """A potential fails a hypothesis required by the calling operation."""


class ConfigurationError(InputError):
    """Invalid mesh, solver or scan configuration."""


class NumericError(GLVortexError, ArithmeticError):
    """Non-finite values appeared in a computation."""


class SolverError(GLVortexError, RuntimeError):
    """An iterative solver failed to converge.

    Parameters
    ----------
    message : str
        Human readable description.
    last_iterate : ndarray, optional
        Final iterate when the solver stopped.
    history : list of float, optional
        Residual norm per iteration.
    """

    def __init__(self, message, last_iterate=None, history=None):
        super().__init__(message)
        self.last_iterate = last_iterate
        self.history = list(history) if history is not None else []


class PostconditionError(GLVortexError, RuntimeError):
    """A converged result violates a structural invariant."""
