"""Radial Ginzburg-Landau vortices on the unit ball: profiles, energy gaps and
Hardy-weighted sector spectra."""

from .energy import (
    EnergyReport,
    SectorPerturbation,
    compute_c_N,
    energy_gap,
    hardy_integral,
    make_perturbation,
    quad_form_F,
    radial_energy,
    verify_step2_identity,
)
from .estimators import SectorSpectrum, VortexProfileSolver
from .exceptions import (
    AdmissibilityError,
    ConfigurationError,
    GLVortexError,
    InputError,
    NumericError,
    PostconditionError,
    PotentialDomainError,
    SolverError,
)
from .potential import PotentialSpec, check_admissible, custom, eval_dW, eval_W, huber, parse_potential, quadratic
from .radial import (
    RadialMesh,
    RadialProfile,
    SolveOptions,
    build_mesh,
    continuation_solve,
    integrate_radial,
    solve_profile,
)
from .spectral import (
    build_sector_operator,
    convexity_threshold,
    critical_dimension,
    hardy_gap,
    harmonic_map_gap,
    lowest_eigen,
    verify_step3_chain,
)

__version__ = "0.1.0"
